//! Effective potential of the D-dimensional quartic oscillator through order
//! `1/D`, as a function of the imaginary background `sigma_0 = -i s`.
//!
//! With `Omega^2 = omega^2 + 4 s` and `Omega_t = 2 sqrt(Omega^2 + g/Omega)`
//! (`g = D * coupling`) the potential reads
//! `D (-s^2/g + Omega/2) + Omega_t/2 - Omega + bracket(Omega, Omega_t, g)/D`.
//! Its stationary point in `s` is the ground-state energy to this order.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::imaginary_time::{i2, i3, i4, i5_configuration, i6_configuration};
use crate::perturbation::{epsilon_coefficients, Symbolic};
use crate::precision::{BigReal, Precision};

/// A point of the background field together with the model parameters.
#[derive(Debug, Clone)]
pub struct BackgroundPoint {
    /// `s` in `sigma_0 = -i s`.
    pub sigma0_im: BigReal,
    /// `g = D * coupling`, held fixed as `D` varies.
    pub gtilde: BigReal,
    pub omega: BigReal,
    pub dimension: BigReal,
}

impl BackgroundPoint {
    pub fn new(sigma0_im: BigReal, gtilde: BigReal, omega: BigReal, dimension: BigReal) -> Result<Self> {
        if gtilde <= 0 {
            return Err(Error::NonPositive {
                what: "modified coupling",
                value: gtilde.to_string(),
            });
        }
        if omega < 0 {
            return Err(Error::InvalidArgument(format!("frequency must be non-negative, got {omega}")));
        }
        if dimension <= 0 {
            return Err(Error::NonPositiveDimension(dimension.to_string()));
        }
        Ok(Self {
            sigma0_im,
            gtilde,
            omega,
            dimension,
        })
    }

    fn with_s(&self, s: BigReal) -> Self {
        Self {
            sigma0_im: s,
            ..self.clone()
        }
    }
}

/// `Omega` and `Omega_t`; `Omega_t >= 2 Omega` whenever `g >= 0`.
#[derive(Debug, Clone)]
pub struct AuxiliaryFrequencies {
    pub omega: BigReal,
    pub omega_tilde: BigReal,
}

/// Frequencies at background `s` for coupling `gtilde` and bare frequency `omega`.
pub fn frequencies(s: &BigReal, gtilde: &BigReal, omega: &BigReal) -> Result<AuxiliaryFrequencies> {
    let bits = s.prec();
    let sq = Float::with_val(bits, omega.square_ref()) + Float::with_val(bits, s * 4u32);
    if sq <= 0 {
        return Err(Error::UndefinedFrequency(sq.to_string()));
    }
    let big = sq.clone().sqrt();
    let inner = sq + Float::with_val(bits, gtilde / &big);
    if inner <= 0 {
        return Err(Error::UndefinedFrequency(format!("Omega^2 + g/Omega = {inner}")));
    }
    Ok(AuxiliaryFrequencies {
        omega: big,
        omega_tilde: inner.sqrt() * 2u32,
    })
}

pub fn auxiliary_frequencies(p: &BackgroundPoint) -> Result<AuxiliaryFrequencies> {
    frequencies(&p.sigma0_im, &p.gtilde, &p.omega)
}

/// `sum_i coeffs[i] t^(5-i) o^i` for the quintic numerators of the bracket.
fn quintic(coeffs: [i64; 6], t: &Float, o: &Float) -> Float {
    let bits = t.prec();
    let mut acc = Float::new(bits);
    for (i, c) in coeffs.iter().enumerate() {
        let term = Float::with_val(bits, t.pow(5 - i as i32)) * Float::with_val(bits, o.pow(i as i32));
        acc += term * *c;
    }
    acc
}

/// The `1/D` bracket, a sum of five rational terms in `g`, `Omega` and `Omega_t`.
pub fn two_loop_bracket(f: &AuxiliaryFrequencies, gtilde: &BigReal) -> BigReal {
    let (o, t, g) = (&f.omega, &f.omega_tilde, gtilde);
    let bits = o.prec();
    let p = |x: &Float, e: i32| Float::with_val(bits, x.pow(e));
    let one = Float::with_val(bits, t + o);
    let two = Float::with_val(bits, t + Float::with_val(bits, o * 2u32));
    let four = Float::with_val(bits, t + Float::with_val(bits, o * 4u32));

    let first = -(p(g, 2) * 5u32) / (p(o, 5) * 4u32);

    let n2 = p(t, 3) + p(t, 2) * o * 4u32 + p(o, 2) * t * 44u32 + p(o, 3) * 128u32;
    let second = p(g, 3) * n2 / (p(o, 8) * 4u32 * t * p(&two, 2));

    let n3 = quintic([3, 33, 150, 392, 656, 480], t, o);
    let third = -(p(g, 4) * n3) / (p(o, 9) * p(t, 2) * &one * p(&two, 3) * &four);

    let n4 = quintic([3, 42, 227, 568, 656, 288], t, o);
    let fourth = p(g, 5) * 4u32 * n4 / (p(o, 10) * p(t, 2) * p(&one, 2) * p(&two, 4) * &four);

    let n5 = quintic([1, 14, 73, 160, 136, 32], t, o);
    let fifth = -(p(g, 6) * 16u32 * n5) / (p(o, 11) * p(t, 4) * p(&one, 2) * p(&two, 4) * &four);

    first + second + third + fourth + fifth
}

/// `D * V^(2,1)` and `D * V^(2,2)` assembled diagram by diagram from the
/// imaginary-time integrals. Their sum equals [`two_loop_bracket`].
#[derive(Debug, Clone)]
pub struct TwoLoopDiagrams {
    pub v21: BigReal,
    pub v22: BigReal,
}

impl TwoLoopDiagrams {
    pub fn total(&self) -> BigReal {
        self.v21.clone() + &self.v22
    }
}

pub fn two_loop_diagrams(f: &AuxiliaryFrequencies, gtilde: &BigReal) -> Result<TwoLoopDiagrams> {
    let (o, t, g) = (&f.omega, &f.omega_tilde, gtilde);
    let bits = o.prec();
    let p = |x: &Float, e: i32| Float::with_val(bits, x.pow(e));
    let k = |c: u32| Float::with_val(bits, o * c);
    let z = Float::new(bits);
    let ot = Float::with_val(bits, o + t);

    let a = i2(&k(2))? * 2u32 + i2(&k(4))?;
    let b = i3(o, o, &ot)? * 2u32 + i3(&k(2), &k(2), t)?;
    let c = i4(&[ot.clone(), z.clone(), o.clone(), o.clone(), z.clone(), ot.clone()])? * 2u32 + i4(&[t.clone(), o.clone(), o.clone(), o.clone(), o.clone(), t.clone()])?;
    let v21 = -(p(g, 2) * a) / (p(o, 4) * 2u32) + p(g, 3) * 2u32 * b / (p(o, 5) * t) - p(g, 4) * 2u32 * c / (p(o, 6) * p(t, 2));

    let d = i3(&k(2), &k(2), &k(2))?;
    let e = i4(&[o.clone(), o.clone(), t.clone(), k(2), o.clone(), o.clone()])?;
    let five = i5_configuration(o, t)?;
    let six = i6_configuration(o, t)?;
    let v22 = p(g, 3) * 2u32 * d / (p(o, 6) * 3u32) - p(g, 4) * 4u32 * e / (p(o, 7) * t) + p(g, 5) * 8u32 * five / (p(o, 8) * p(t, 2))
        - p(g, 6) * 16u32 * six / (p(o, 9) * p(t, 3) * 3u32);
    Ok(TwoLoopDiagrams { v21, v22 })
}

/// Loop-by-loop contributions; `value = tree + one_loop + two_loop_bracket / D`.
#[derive(Debug, Clone)]
pub struct PotentialTerms {
    pub tree: BigReal,
    pub one_loop: BigReal,
    pub two_loop_bracket: BigReal,
    pub value: BigReal,
}

pub fn potential_terms(p: &BackgroundPoint) -> Result<PotentialTerms> {
    let f = auxiliary_frequencies(p)?;
    let bits = p.sigma0_im.prec();
    let s2 = Float::with_val(bits, p.sigma0_im.square_ref());
    let tree = (Float::with_val(bits, &f.omega / 2u32) - s2 / &p.gtilde) * &p.dimension;
    let one_loop = Float::with_val(bits, &f.omega_tilde / 2u32) - &f.omega;
    let two_loop_bracket = two_loop_bracket(&f, &p.gtilde);
    let value = tree.clone() + &one_loop + Float::with_val(bits, &two_loop_bracket / &p.dimension);
    Ok(PotentialTerms {
        tree,
        one_loop,
        two_loop_bracket,
        value,
    })
}

pub fn effective_potential_value(p: &BackgroundPoint) -> Result<BigReal> {
    potential_terms(p).map(|t| t.value)
}

/// Stationary point of the potential in `s`.
#[derive(Debug, Clone)]
pub struct PotentialExtremum {
    pub s: BigReal,
    pub value: BigReal,
    pub frequencies: AuxiliaryFrequencies,
    pub iterations: usize,
}

const MAX_NEWTON: usize = 100;

/// Leading-order saddle: the positive root of `2 s sqrt(omega^2 + 4 s) = g`.
/// The left side is convex and increasing, so Newton from the right converges
/// monotonically.
fn tree_saddle(gtilde: &BigReal, omega: &BigReal) -> BigReal {
    let bits = gtilde.prec();
    let mut s = Float::with_val(bits, gtilde / 4u32).pow(Float::with_val(bits, 2) / 3u32);
    if *omega > 0 {
        let alt = Float::with_val(bits, gtilde / Float::with_val(bits, omega * 2u32));
        s = s.min(&alt);
    }
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    for _ in 0..MAX_NEWTON {
        let q = Float::with_val(bits, omega.square_ref()) + Float::with_val(bits, &s * 4u32);
        let r = q.clone().sqrt();
        let f = Float::with_val(bits, &s * 2u32) * &r - gtilde;
        let df = Float::with_val(bits, &r * 2u32) + Float::with_val(bits, &s * 4u32) / &r;
        let step = f / df;
        s -= &step;
        if Float::with_val(bits, step.abs_ref()) <= Float::with_val(bits, s.abs_ref()) * &tol {
            break;
        }
    }
    s
}

/// Extremizes the potential over `s` by Newton steps on central-difference
/// derivatives, seeded at the tree-level saddle.
pub fn extremize(dimension: &BigReal, gtilde: &BigReal, omega: &BigReal, prec: Precision) -> Result<PotentialExtremum> {
    let bits = prec.bits();
    let lift = |x: &BigReal| Float::with_val(bits, x);
    let template = BackgroundPoint::new(prec.zero(), lift(gtilde), lift(omega), lift(dimension))?;
    let fail = |reason: String| Error::ExtremizationFailed {
        coupling: gtilde.to_string(),
        reason,
    };
    let value_at = |s: &Float| effective_potential_value(&template.with_s(s.clone()));
    let digits = prec.decimal_digits() as i32;
    let ten = Float::with_val(bits, 10);
    let rel_step = Float::with_val(bits, ten.clone().pow(-digits / 3));
    let tol = Float::with_val(bits, ten.clone().pow(-digits / 2));

    let mut s = tree_saddle(&template.gtilde, &template.omega);
    for iter in 1..=MAX_NEWTON {
        let h = Float::with_val(bits, s.abs_ref()) * &rel_step;
        let vm = value_at(&Float::with_val(bits, &s - &h)).map_err(|e| fail(e.to_string()))?;
        let v0 = value_at(&s).map_err(|e| fail(e.to_string()))?;
        let vp = value_at(&Float::with_val(bits, &s + &h)).map_err(|e| fail(e.to_string()))?;
        let d1 = Float::with_val(bits, &vp - &vm) / Float::with_val(bits, &h * 2u32);
        let d2 = (vp - Float::with_val(bits, &v0 * 2u32) + vm) / Float::with_val(bits, h.square_ref());
        if d2.is_zero() || !d2.is_finite() {
            return Err(fail(format!("degenerate curvature at s = {s}")));
        }
        let mut step = d1 / d2;
        let mut next = Float::with_val(bits, &s - &step);
        let mut halvings = 0;
        while frequencies(&next, &template.gtilde, &template.omega).is_err() {
            halvings += 1;
            if halvings > 60 {
                return Err(fail(format!("Newton step leaves the domain at s = {s}")));
            }
            step /= 2u32;
            next = Float::with_val(bits, &s - &step);
        }
        s = next;
        if Float::with_val(bits, step.abs_ref()) <= Float::with_val(bits, s.abs_ref()) * &tol {
            let f = frequencies(&s, &template.gtilde, &template.omega)?;
            let value = value_at(&s)?;
            return Ok(PotentialExtremum {
                s,
                value,
                frequencies: f,
                iterations: iter,
            });
        }
    }
    Err(fail(format!("no convergence after {MAX_NEWTON} Newton steps")))
}

/// Rational coefficients of `s_k` in powers of `1/D`, `k = 1 ..= 5`;
/// `s_k` carries the overall factor `omega^(2 - 3k)`.
pub const WEAK_COUPLING_SADDLE: [&[(i64, i64)]; 5] = [
    &[(1, 2)],
    &[(-1, 2), (-1, 1)],
    &[(5, 4), (45, 8), (25, 4)],
    &[(-4, 1), (-59, 2), (-73, 1)],
    &[(231, 16), (19503, 128), (9823, 16), (275, 2)],
];

/// Closed form of the weak-coupling saddle coefficient `s_k`.
pub fn weak_coupling_closed_form(k: usize, dimension: &BigReal, omega: &BigReal) -> Result<BigReal> {
    if !(1..=WEAK_COUPLING_SADDLE.len()).contains(&k) {
        return Err(Error::InvalidOrder { got: k, min: 1 });
    }
    let bits = dimension.prec();
    let inv_d = Float::with_val(bits, dimension.recip_ref());
    let mut acc = Float::new(bits);
    let mut power = Float::with_val(bits, 1);
    for &(num, den) in WEAK_COUPLING_SADDLE[k - 1] {
        acc += Float::with_val(bits, &power * &Rational::from((num, den)));
        power *= &inv_d;
    }
    Ok(acc * Float::with_val(bits, omega.pow(2 - 3 * k as i32)))
}

/// Coefficients `c_0 .. c_{K-1}` of the interpolating polynomial through
/// `(x_j, y_j)`.
fn interpolate(x: &[Float], y: &[Float]) -> Vec<Float> {
    let n = x.len();
    let bits = y[0].prec();
    let mut m: Vec<Vec<Float>> = x
        .iter()
        .map(|xi| {
            let mut row = Vec::with_capacity(n);
            let mut p = Float::with_val(bits, 1);
            for _ in 0..n {
                row.push(p.clone());
                p *= xi;
            }
            row
        })
        .collect();
    let mut rhs: Vec<Float> = y.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].cmp_abs(&m[b][col]).unwrap_or(std::cmp::Ordering::Equal)).expect("non-empty");
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = Float::with_val(bits, &m[row][col] / &m[col][col]);
            for k in col..n {
                let d = Float::with_val(bits, &f * &m[col][k]);
                m[row][k] -= d;
            }
            let d = Float::with_val(bits, &f * &rhs[col]);
            rhs[row] -= d;
        }
    }
    let mut c = vec![Float::new(bits); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..n {
            acc -= Float::with_val(bits, &m[row][k] * &c[k]);
        }
        c[row] = acc / &m[row][row];
    }
    c
}

/// Number of ladder points used to extract small-coupling Taylor coefficients.
pub const LADDER_POINTS: usize = 16;

/// Taylor coefficients of the saddle `s(g) = sum s_k g^k` and of the
/// stationary value `V = D omega/2 + sum e_k g^k`, read off by interpolating
/// exact extremizations on the ladder `g_j = j h`, `h = 10^-4 omega^3`.
fn weak_coupling_series(dimension: &BigReal, omega: &BigReal, prec: Precision) -> Result<(Vec<BigReal>, Vec<BigReal>)> {
    let bits = prec.bits();
    if *omega <= 0 {
        return Err(Error::InvalidArgument("weak-coupling ladder needs omega > 0".into()));
    }
    let h = Float::with_val(bits, omega.pow(3u32)) / 10_000u32;
    let free = Float::with_val(bits, dimension * omega) / 2u32;
    let mut xs = Vec::with_capacity(LADDER_POINTS);
    let mut saddle = Vec::with_capacity(LADDER_POINTS);
    let mut energy = Vec::with_capacity(LADDER_POINTS);
    for j in 1..=LADDER_POINTS {
        let g = Float::with_val(bits, &h * j as u32);
        let ext = extremize(dimension, &g, omega, prec)?;
        xs.push(Float::with_val(bits, j as u32));
        saddle.push(Float::with_val(bits, &ext.s / &g));
        energy.push((ext.value - &free) / &g);
    }
    let rescale = |c: Vec<Float>| -> Vec<Float> {
        let mut hp = Float::with_val(bits, 1);
        c.into_iter()
            .map(|ci| {
                let v = ci / &hp;
                hp *= &h;
                v
            })
            .collect()
    };
    Ok((rescale(interpolate(&xs, &saddle)), rescale(interpolate(&xs, &energy))))
}

/// Fitted weak-coupling saddle coefficients against their closed forms.
#[derive(Debug, Clone)]
pub struct WeakCouplingCheck {
    pub dimension: BigReal,
    pub omega: BigReal,
    /// `s_1 ..` from the ladder fit.
    pub fitted: Vec<BigReal>,
    pub closed_form: Vec<BigReal>,
    /// `fitted - closed_form`.
    pub residuals: Vec<BigReal>,
    /// `e_1 ..` of the stationary value `D omega/2 + sum e_k g^k`.
    pub energy_coefficients: Vec<BigReal>,
}

pub fn weak_coupling_check(dimension: &BigReal, omega: &BigReal, orders: usize, prec: Precision) -> Result<WeakCouplingCheck> {
    if *dimension < 2 {
        return Err(Error::InvalidArgument(format!("weak-coupling check needs D >= 2, got {dimension}")));
    }
    if !(1..=WEAK_COUPLING_SADDLE.len()).contains(&orders) {
        return Err(Error::InvalidArgument(format!("orders must lie in 1..={}, got {orders}", WEAK_COUPLING_SADDLE.len())));
    }
    let bits = prec.bits();
    let d = Float::with_val(bits, dimension);
    let w = Float::with_val(bits, omega);
    let (saddle, energy) = weak_coupling_series(&d, &w, prec)?;
    let fitted: Vec<BigReal> = saddle.into_iter().take(orders).collect();
    let closed_form: Vec<BigReal> = (1..=orders).map(|k| weak_coupling_closed_form(k, &d, &w)).collect::<Result<_>>()?;
    let residuals = fitted.iter().zip(&closed_form).map(|(a, b)| Float::with_val(bits, a - b)).collect();
    Ok(WeakCouplingCheck {
        dimension: d,
        omega: w,
        fitted,
        closed_form,
        residuals,
        energy_coefficients: energy.into_iter().take(orders).collect(),
    })
}

/// The three leading powers `D^(k+1), D^k, D^(k-1)` of `epsilon_k` recovered
/// from the stationary potential, next to the exact perturbative values.
#[derive(Debug, Clone)]
pub struct LeadingTermsCheck {
    pub order: usize,
    pub from_potential: [BigReal; 3],
    pub exact: [Rational; 3],
}

impl LeadingTermsCheck {
    /// Largest `|fitted - exact| / max(1, |exact|)` over the three terms.
    pub fn max_deviation(&self) -> BigReal {
        let bits = self.from_potential[0].prec();
        let mut worst = Float::new(bits);
        for (f, e) in self.from_potential.iter().zip(&self.exact) {
            let ef = Float::with_val(bits, e);
            let scale = Float::with_val(bits, ef.abs_ref()).max(&Float::with_val(bits, 1));
            let dev = Float::with_val(bits, f - &ef).abs() / scale;
            worst = worst.max(&dev);
        }
        worst
    }
}

/// Points of the `1/D` ladder used by [`energy_leading_terms`].
const DIMENSION_LADDER: usize = 12;

/// `D^k e_k(D) = a D^(k+1) + b D^k + c D^(k-1) + ...` at `omega = 1`, with
/// `(a, b, c)` read off by interpolating `e_k(D)/D` in `1/D` on the ladder
/// `D_j = 1000 / j`.
pub fn energy_leading_terms(max_order: usize, prec: Precision) -> Result<Vec<LeadingTermsCheck>> {
    if max_order < 1 || max_order >= LADDER_POINTS {
        return Err(Error::InvalidArgument(format!("max_order must lie in 1..{LADDER_POINTS}, got {max_order}")));
    }
    let bits = prec.bits();
    let one = Float::with_val(bits, 1);
    let mut us = Vec::with_capacity(DIMENSION_LADDER);
    let mut per_order: Vec<Vec<Float>> = vec![Vec::with_capacity(DIMENSION_LADDER); max_order];
    for j in 1..=DIMENSION_LADDER {
        let u = Float::with_val(bits, j as u32) / 1000u32;
        let d = Float::with_val(bits, u.recip_ref());
        let (_, energy) = weak_coupling_series(&d, &one, prec)?;
        for (k, row) in per_order.iter_mut().enumerate() {
            row.push(Float::with_val(bits, &energy[k] * &u));
        }
        us.push(u);
    }
    let symbolic = epsilon_coefficients(&Symbolic, max_order)?;
    let mut out = Vec::with_capacity(max_order);
    for (idx, row) in per_order.iter().enumerate() {
        let k = idx + 1;
        let c = interpolate(&us, row);
        let eps = symbolic.epsilon(k);
        out.push(LeadingTermsCheck {
            order: k,
            from_potential: [c[0].clone(), c[1].clone(), c[2].clone()],
            exact: [eps.coeff(k + 1), eps.coeff(k), eps.coeff(k - 1)],
        });
    }
    Ok(out)
}

/// Exact strong-coupling large-D data: `b_0 = sum_k B_k D^(4/3 - k)` and the
/// saddle `s = g^(2/3) (S_1 + ..)` with `S_1 = sum_k S_1k D^-k`.
#[derive(Debug, Clone)]
pub struct StrongCouplingReference {
    pub b: [BigReal; 3],
    pub s1: [BigReal; 3],
}

impl StrongCouplingReference {
    /// `B_0 + B_1/D + B_2/D^2`.
    pub fn scaled_b0(&self, dimension: &BigReal) -> BigReal {
        series_in_inverse(&self.b, dimension)
    }

    /// `S_1` truncated after `1/D^2`.
    pub fn s1_at(&self, dimension: &BigReal) -> BigReal {
        series_in_inverse(&self.s1, dimension)
    }
}

fn series_in_inverse(c: &[BigReal; 3], dimension: &BigReal) -> BigReal {
    let inv = Float::with_val(c[0].prec(), dimension.recip_ref());
    c[0].clone() + Float::with_val(c[0].prec(), &c[1] * &inv) + Float::with_val(c[0].prec(), &c[2] * Float::with_val(c[0].prec(), inv.square_ref()))
}

pub fn strong_coupling_reference(prec: Precision) -> StrongCouplingReference {
    let bits = prec.bits();
    let two = Float::with_val(bits, 2);
    let root = |x: u32, n: u32| Float::with_val(bits, x).pow(Float::with_val(bits, 1) / n);
    let pow2 = |num: i32, den: u32| Float::with_val(bits, two.clone().pow(Float::with_val(bits, num) / den));
    let sqrt2 = root(2, 2);
    let sqrt3 = root(3, 2);
    let sqrt6 = root(6, 2);

    let b0 = pow2(1, 3) * 3u32 / 8u32;
    let b1 = (sqrt3.clone() - &sqrt2) / pow2(1, 6);
    let b2 = -Float::with_val(bits, 239u32) / (pow2(2, 3) * 18u32 * (sqrt6.clone() * 12u32 + 25u32));

    let s10 = pow2(-4, 3);
    let s11 = (pow2(1, 6) * &sqrt3 - pow2(5, 3)) / 6u32;
    let s12 = (sqrt6 * 27u32 - Float::with_val(bits, 73) / 2u32).cbrt() / 18u32;
    StrongCouplingReference {
        b: [b0, b1, b2],
        s1: [s10, s11, s12],
    }
}

/// Strong-coupling stationary point at `omega = 0`, `g = D` (unit coupling),
/// where the stationary value is `b_0(D)` exactly.
#[derive(Debug, Clone)]
pub struct StrongCouplingExtremum {
    pub dimension: BigReal,
    pub b0: BigReal,
    /// `b_0 / D^(4/3)`.
    pub scaled_b0: BigReal,
    /// `s / g^(2/3)`.
    pub s1: BigReal,
}

pub fn strong_coupling_extremum(dimension: &BigReal, prec: Precision) -> Result<StrongCouplingExtremum> {
    let bits = prec.bits();
    let d = Float::with_val(bits, dimension);
    let ext = extremize(&d, &d, &prec.zero(), prec)?;
    let d43 = Float::with_val(bits, d.clone().pow(Float::with_val(bits, 4) / 3u32));
    let d23 = Float::with_val(bits, d.clone().pow(Float::with_val(bits, 2) / 3u32));
    Ok(StrongCouplingExtremum {
        scaled_b0: Float::with_val(bits, &ext.value / &d43),
        s1: ext.s / &d23,
        b0: ext.value,
        dimension: d,
    })
}
