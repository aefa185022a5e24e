//! Weak-coupling series of the ground-state energy from the Bender-Wu-like
//! recursion for the logarithmic wave-function coefficients `c_m^(k)`.
//!
//! The recursion is written once, generically over a [`CoefficientRing`]:
//! exact polynomials in D, exact rationals at a fixed rational D, extended
//! precision reals at a fixed real D, and the top-coefficient (large-D)
//! truncation used by the 1/D extraction.

use rug::{Assign, Float, Rational};

use crate::dpoly::DPolynomial;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::series::InverseDSeries;

/// Arithmetic the recursion needs from its coefficient type.
pub trait CoefficientRing {
    type Elem: Clone + Send + Sync;

    fn zero(&self) -> Self::Elem;
    /// `(c_1^(1), c_2^(1)) = (-(D+2)/4, -1/4)`.
    fn seed(&self) -> (Self::Elem, Self::Elem);
    /// `acc += weight * a * b`.
    fn add_product(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem, weight: i64);
    /// `acc += weight * (D + shift) * a`.
    fn add_linear(&self, acc: &mut Self::Elem, a: &Self::Elem, shift: i64, weight: i64);
    /// `x /= divisor`.
    fn div_int(&self, x: &mut Self::Elem, divisor: i64);
    /// `epsilon_k = -D c_1^(k)`.
    fn epsilon_from_c1(&self, c1: &Self::Elem) -> Self::Elem;
}

/// D kept as an exact polynomial variable.
#[derive(Debug, Clone, Copy, Default)]
pub struct Symbolic;

impl CoefficientRing for Symbolic {
    type Elem = DPolynomial;

    fn zero(&self) -> DPolynomial {
        DPolynomial::zero()
    }

    fn seed(&self) -> (DPolynomial, DPolynomial) {
        (
            DPolynomial::from_ratios(&[(-1, 2), (-1, 4)]),
            DPolynomial::from_ratios(&[(-1, 4)]),
        )
    }

    fn add_product(&self, acc: &mut DPolynomial, a: &DPolynomial, b: &DPolynomial, weight: i64) {
        let p = (a * b).scale(&Rational::from(weight));
        *acc += &p;
    }

    fn add_linear(&self, acc: &mut DPolynomial, a: &DPolynomial, shift: i64, weight: i64) {
        *acc += &a.mul_linear(shift).scale(&Rational::from(weight));
    }

    fn div_int(&self, x: &mut DPolynomial, divisor: i64) {
        *x = x.scale(&Rational::from((1, divisor)));
    }

    fn epsilon_from_c1(&self, c1: &DPolynomial) -> DPolynomial {
        -&c1.mul_linear(0)
    }
}

/// Exact rational arithmetic at a fixed rational dimension.
#[derive(Debug, Clone)]
pub struct ExactDimension {
    d: Rational,
}

impl ExactDimension {
    pub fn new(d: Rational) -> Result<Self> {
        if d <= 0 {
            return Err(Error::NonPositiveDimension(d.to_string()));
        }
        Ok(Self { d })
    }

    pub fn value(&self) -> &Rational {
        &self.d
    }
}

impl CoefficientRing for ExactDimension {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::new()
    }

    fn seed(&self) -> (Rational, Rational) {
        let c11 = -(Rational::from(&self.d + 2u32)) / 4u32;
        (c11, Rational::from((-1, 4)))
    }

    fn add_product(&self, acc: &mut Rational, a: &Rational, b: &Rational, weight: i64) {
        *acc += Rational::from(a * b) * weight;
    }

    fn add_linear(&self, acc: &mut Rational, a: &Rational, shift: i64, weight: i64) {
        *acc += Rational::from(&self.d + shift) * a * weight;
    }

    fn div_int(&self, x: &mut Rational, divisor: i64) {
        *x /= divisor;
    }

    fn epsilon_from_c1(&self, c1: &Rational) -> Rational {
        -Rational::from(&self.d * c1)
    }
}

/// Extended-precision arithmetic at a fixed real dimension.
#[derive(Debug, Clone)]
pub struct RealDimension {
    d: BigReal,
    prec: Precision,
}

impl RealDimension {
    pub fn new(d: BigReal, prec: Precision) -> Result<Self> {
        if d <= 0 {
            return Err(Error::NonPositiveDimension(d.to_string()));
        }
        let d = prec.float(&d);
        Ok(Self { d, prec })
    }

    pub fn from_f64(d: f64, prec: Precision) -> Result<Self> {
        Self::new(prec.float(d), prec)
    }

    pub fn value(&self) -> &BigReal {
        &self.d
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }
}

impl CoefficientRing for RealDimension {
    type Elem = BigReal;

    fn zero(&self) -> BigReal {
        self.prec.zero()
    }

    fn seed(&self) -> (BigReal, BigReal) {
        let c11 = -Float::with_val(self.prec.bits(), &self.d + 2u32) / 4u32;
        (c11, self.prec.float(-0.25))
    }

    fn add_product(&self, acc: &mut BigReal, a: &BigReal, b: &BigReal, weight: i64) {
        let mut t = Float::with_val(self.prec.bits(), a * b);
        t *= weight;
        *acc += t;
    }

    fn add_linear(&self, acc: &mut BigReal, a: &BigReal, shift: i64, weight: i64) {
        let mut t = Float::with_val(self.prec.bits(), &self.d + shift);
        t *= a;
        t *= weight;
        *acc += t;
    }

    fn div_int(&self, x: &mut BigReal, divisor: i64) {
        *x /= divisor;
    }

    fn epsilon_from_c1(&self, c1: &BigReal) -> BigReal {
        -Float::with_val(self.prec.bits(), &self.d * c1)
    }
}

/// Keeps only the `terms` highest powers of D of every coefficient.
///
/// `c_m^(k)` is a polynomial of degree `k + 1 - m`; an element stores
/// `c_m^(k) / D^(k+1-m)` as a series in `1/D`. Because every term of the
/// recursion is homogeneous in that degree, the retained top coefficients are
/// exact, not asymptotic. The resulting `epsilon_k` element holds
/// `(epsilon_{k+1}^(k), epsilon_k^(k), ...)`.
#[derive(Debug, Clone, Copy)]
pub struct TopCoefficients {
    terms: usize,
    prec: Precision,
}

impl TopCoefficients {
    pub fn new(terms: usize, prec: Precision) -> Self {
        Self {
            terms: terms.max(1),
            prec,
        }
    }

    pub fn terms(&self) -> usize {
        self.terms
    }
}

impl CoefficientRing for TopCoefficients {
    type Elem = InverseDSeries;

    fn zero(&self) -> InverseDSeries {
        InverseDSeries::zero(self.terms, self.prec)
    }

    fn seed(&self) -> (InverseDSeries, InverseDSeries) {
        let c11 = InverseDSeries::from_coeffs(
            vec![self.prec.float(-0.25), self.prec.float(-0.5)],
            self.terms,
            self.prec,
        );
        let c21 = InverseDSeries::constant(self.prec.float(-0.25), self.terms);
        (c11, c21)
    }

    fn add_product(&self, acc: &mut InverseDSeries, a: &InverseDSeries, b: &InverseDSeries, weight: i64) {
        let n = self.terms;
        let bits = self.prec.bits();
        let mut t = Float::new(bits);
        for i in 0..n {
            let ai = a.coeff(i);
            if ai.is_zero() {
                continue;
            }
            for j in 0..n - i {
                t.assign(ai * b.coeff(j));
                t *= weight;
                *acc.coeff_mut(i + j) += &t;
            }
        }
    }

    fn add_linear(&self, acc: &mut InverseDSeries, a: &InverseDSeries, shift: i64, weight: i64) {
        let mut t = a.mul_one_plus(shift);
        t.scale_assign(&self.prec.float(weight));
        *acc += &t;
    }

    fn div_int(&self, x: &mut InverseDSeries, divisor: i64) {
        x.div_int_assign(divisor);
    }

    fn epsilon_from_c1(&self, c1: &InverseDSeries) -> InverseDSeries {
        c1.scale(&self.prec.float(-1))
    }
}

/// Triangular table of `c_m^(k)`, `1 <= k <= N`, `1 <= m <= k + 1`.
#[derive(Debug, Clone)]
pub struct WaveCoefficientTable<E> {
    rows: Vec<Vec<E>>,
    zero: E,
}

impl<E> WaveCoefficientTable<E> {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// `c_m^(k)`; vanishes identically for `m > k + 1`.
    pub fn get(&self, k: usize, m: usize) -> &E {
        if k == 0 || m == 0 || k > self.rows.len() || m > k + 1 {
            return &self.zero;
        }
        &self.rows[k - 1][m - 1]
    }
}

/// Fills the table by ascending k and, within each k, descending m.
pub fn bender_wu_table<R: CoefficientRing>(ring: &R, order: usize) -> Result<WaveCoefficientTable<R::Elem>> {
    if order < 1 {
        return Err(Error::InvalidOrder { got: order, min: 1 });
    }
    let (c11, c21) = ring.seed();
    let mut rows: Vec<Vec<R::Elem>> = Vec::with_capacity(order);
    rows.push(vec![c11, c21]);
    let zero = ring.zero();
    let get = |rows: &Vec<Vec<R::Elem>>, k: usize, m: usize| -> Option<usize> {
        (m >= 1 && m <= k + 1 && k >= 1 && k <= rows.len()).then_some(m - 1)
    };

    for k in 2..=order {
        let mut row = vec![zero.clone(); k + 1];
        for m in (1..=k + 1).rev() {
            let m_i = m as i64;
            // 2m * c_m^(k) = (m+1)(D+2m) c_{m+1}^(k) + 2 sum n(m+1-n) c_n^(l) c_{m+1-n}^(k-l)
            let mut acc = zero.clone();
            if m <= k {
                ring.add_linear(&mut acc, &row[m], 2 * m_i, m_i + 1);
            }
            for l in 1..k {
                let partner = k - l;
                for n in 1..=m.min(l + 1) {
                    let n2 = m + 1 - n;
                    if n2 > partner + 1 {
                        continue;
                    }
                    // Each unordered pair {(l, n), (k-l, n2)} once; mirrored pairs are
                    // counted twice, self-paired terms once.
                    let key = (l, n);
                    let mirror = (partner, n2);
                    let weight = match key.cmp(&mirror) {
                        std::cmp::Ordering::Less => 4,
                        std::cmp::Ordering::Equal => 2,
                        std::cmp::Ordering::Greater => continue,
                    } * (n * n2) as i64;
                    let (Some(ia), Some(ib)) = (get(&rows, l, n), get(&rows, partner, n2)) else {
                        continue;
                    };
                    ring.add_product(&mut acc, &rows[l - 1][ia], &rows[partner - 1][ib], weight);
                }
            }
            ring.div_int(&mut acc, 2 * m_i);
            row[m - 1] = acc;
        }
        rows.push(row);
    }
    Ok(WaveCoefficientTable { rows, zero })
}

/// `epsilon_1 .. epsilon_N` with the zeroth term `D/2` implied.
#[derive(Debug, Clone)]
pub struct WeakSeries<E> {
    epsilon: Vec<E>,
}

impl<E> WeakSeries<E> {
    pub fn order(&self) -> usize {
        self.epsilon.len()
    }

    /// `epsilon_k` for `1 <= k <= N`.
    pub fn epsilon(&self, k: usize) -> &E {
        &self.epsilon[k - 1]
    }

    pub fn coefficients(&self) -> &[E] {
        &self.epsilon
    }
}

pub fn epsilon_from_table<R: CoefficientRing>(ring: &R, table: &WaveCoefficientTable<R::Elem>) -> WeakSeries<R::Elem> {
    let epsilon = (1..=table.order()).map(|k| ring.epsilon_from_c1(table.get(k, 1))).collect();
    WeakSeries { epsilon }
}

/// `epsilon_k = -D c_1^(k)` for `1 <= k <= N`.
pub fn epsilon_coefficients<R: CoefficientRing>(ring: &R, order: usize) -> Result<WeakSeries<R::Elem>> {
    let table = bender_wu_table(ring, order)?;
    Ok(epsilon_from_table(ring, &table))
}

/// `epsilon_j^(k)` for `j = 1 ..= k + 1` from a symbolic series.
pub fn epsilon_d_expansion(series: &WeakSeries<DPolynomial>, k: usize) -> Result<Vec<(usize, Rational)>> {
    if k < 1 || k > series.order() {
        return Err(Error::OrderExceedsSeries {
            requested: k,
            available: series.order(),
        });
    }
    let eps = series.epsilon(k);
    Ok((1..=k + 1).map(|j| (j, eps.coeff(j))).collect())
}

/// Symbolic `epsilon_j^(k)` for a single k.
pub fn symbolic_d_expansion(k: usize) -> Result<Vec<(usize, Rational)>> {
    let series = epsilon_coefficients(&Symbolic, k)?;
    epsilon_d_expansion(&series, k)
}
