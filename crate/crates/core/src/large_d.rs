//! Large-D expansion of the leading strong-coupling coefficient from VPT
//! order N.
//!
//! With `x = 1/D`, the optimized trial frequency is written as
//! `Omega_0 = D^(1/3) sum_j C_j x^j` and the order-N approximant as
//! `b0 = D^(4/3) sum_k B_k x^k`. Only the `M + 1` highest powers of D of every
//! weak-coupling coefficient enter, and those are exact.

use rug::{Float, Rational};

use crate::convergence::{epsilon_extrapolate, odd_even_extrapolate, ExtrapolationOptions, ExtrapolationResult};
use crate::error::{Error, Result};
use crate::perturbation::{epsilon_coefficients, TopCoefficients, WeakSeries};
use crate::precision::{BigReal, Precision};
use crate::roots::{positive_roots, RealPolynomial, ScanGrid};
use crate::series::InverseDSeries;
use crate::vpt::binomial;

/// `K_{m,k}`: the `x^m` coefficient of `(1 + sum_l (C_l/C_0) x^l)^(1-3k)`.
#[derive(Debug, Clone)]
pub struct MultinomialCoefficient {
    pub m: usize,
    pub k: usize,
    pub value: BigReal,
}

/// `x^m` coefficient of `(1 + sum_{l>=1} ratios[l] x^l)^(-p)`, summed over
/// the compositions `sum_l l a_l = m`. `ratios[0]` is ignored.
pub fn inverse_power_coefficient(m: usize, p: i64, ratios: &[BigReal]) -> BigReal {
    let bits = ratios.first().map_or(64, |r| r.prec());
    let mut total = Float::new(bits);
    let mut counts = vec![0usize; m + 1];
    compositions(m, m, &mut counts, &mut |a: &[usize]| {
        let s: usize = a.iter().sum();
        // (p)_s / prod a_l!, with sign (-1)^s
        let mut w = Rational::from(1);
        for i in 0..s {
            w *= p + i as i64;
        }
        for &al in a.iter() {
            for f in 2..=al {
                w /= f as u64;
            }
        }
        if s % 2 == 1 {
            w = -w;
        }
        let mut term = Float::with_val(bits, &w);
        for (l, &al) in a.iter().enumerate().skip(1) {
            if al > 0 {
                let r = ratios.get(l).map_or_else(|| Float::new(bits), |r| r.clone());
                term *= r.pow_u(al as u32);
            }
        }
        total += term;
    });
    total
}

trait PowU {
    fn pow_u(self, e: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(self, e: u32) -> Float {
        use rug::ops::Pow;
        self.pow(e)
    }
}

/// Enumerates `counts[1..]` with `sum_l l counts[l] = remaining` using parts `<= max_part`.
fn compositions(remaining: usize, max_part: usize, counts: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if remaining == 0 {
        visit(counts);
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        counts[part] += 1;
        compositions(remaining - part, part, counts, visit);
        counts[part] -= 1;
    }
}

pub fn multinomial_k(m: usize, k: usize, ratios: &[BigReal]) -> MultinomialCoefficient {
    MultinomialCoefficient {
        m,
        k,
        value: inverse_power_coefficient(m, 3 * k as i64 - 1, ratios),
    }
}

#[derive(Debug, Clone)]
pub struct LargeDCoefficients {
    pub order: usize,
    /// Truncation M of the 1/D expansion.
    pub truncation: usize,
    /// `C_0 .. C_M`.
    pub c: Vec<BigReal>,
    /// `B_0 .. B_M`.
    pub b: Vec<BigReal>,
    /// Every positive root `C_0` of the leading condition, ascending.
    pub leading_roots: Vec<BigReal>,
}

/// Extra working digits for an expansion through order `max_order`. The
/// alternating sums behind `B_k^(N)` cancel about 0.6 digits per order.
pub fn guard_digits(max_order: usize) -> u32 {
    (3 * max_order as u32).div_ceil(4) + 10
}

/// Top-in-D weak-coupling data for every order up to `max_order`.
#[derive(Debug, Clone)]
pub struct LargeDExpansion {
    /// Working precision: the requested one plus [`guard_digits`].
    prec: Precision,
    output: Precision,
    truncation: usize,
    /// Element k-1: `e_k(x) = sum_i epsilon_{k+1-i}^(k) x^i`.
    eps: WeakSeries<InverseDSeries>,
}

impl LargeDExpansion {
    /// Results carry `prec`; the recursion itself runs with guard digits.
    pub fn new(max_order: usize, truncation: usize, prec: Precision) -> Result<Self> {
        let work = Precision::digits(prec.decimal_digits() + guard_digits(max_order));
        let ring = TopCoefficients::new(truncation + 1, work);
        let eps = epsilon_coefficients(&ring, max_order)?;
        Ok(Self {
            prec: work,
            output: prec,
            truncation,
            eps,
        })
    }

    pub fn max_order(&self) -> usize {
        self.eps.order()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn precision(&self) -> Precision {
        self.output
    }

    pub fn working_precision(&self) -> Precision {
        self.prec
    }

    fn terms(&self) -> usize {
        self.truncation + 1
    }

    fn check(&self, order: usize, truncation: usize) -> Result<()> {
        if order < 1 {
            return Err(Error::InvalidOrder { got: order, min: 1 });
        }
        if order > self.max_order() {
            return Err(Error::OrderExceedsSeries {
                requested: order,
                available: self.max_order(),
            });
        }
        if truncation > self.truncation {
            return Err(Error::TruncationOutOfRange {
                requested: truncation,
                available: self.truncation,
            });
        }
        Ok(())
    }

    /// `e_k(x)`, with `e_0 = 1/2`.
    pub fn top_epsilon(&self, k: usize) -> InverseDSeries {
        if k == 0 {
            InverseDSeries::constant(self.prec.float(0.5), self.terms())
        } else {
            self.eps.epsilon(k).clone()
        }
    }

    /// Order-N weights `binom((1-3k)/2 - 1, N-k) (-1)^(N-k)`.
    fn weights(&self, order: usize) -> Vec<BigReal> {
        (0..=order)
            .map(|k| {
                let alpha = Rational::from((1 - 3 * k as i64, 2)) - 1u32;
                let mut c = binomial(&alpha, order - k);
                if (order - k) % 2 == 1 {
                    c = -c;
                }
                self.prec.rational(&c)
            })
            .collect()
    }

    /// Leading condition as a polynomial in `u = C_0^3`.
    pub fn leading_polynomial(&self, order: usize) -> Result<RealPolynomial> {
        self.check(order, 0)?;
        let a = self.weights(order);
        let mut coeffs = vec![self.prec.zero(); order + 1];
        for (k, ak) in a.iter().enumerate() {
            let e0 = self.top_epsilon(k).coeff(0).clone();
            coeffs[order - k] = Float::with_val(self.prec.bits(), ak * &e0) * (1 - 3 * k as i64);
        }
        Ok(RealPolynomial::new(coeffs))
    }

    /// Stationarity series `dF/dw` for `w = sum_j c_j x^j`, via the
    /// composition sums for `(w / C_0)^(-3k)`.
    fn stationarity(&self, order: usize, c: &[BigReal]) -> InverseDSeries {
        let bits = self.prec.bits();
        let terms = self.terms();
        let a = self.weights(order);
        let ratios = ratios_of(c);
        let inv_c0 = Float::with_val(bits, c[0].recip_ref());
        let inv_c0_cubed = Float::with_val(bits, inv_c0.clone().pow_u(3));
        let mut out = InverseDSeries::constant(Float::with_val(bits, &a[0] / 2u32), terms);
        let mut c0_pow = Float::with_val(bits, 1);
        for k in 1..=order {
            c0_pow *= &inv_c0_cubed;
            let pw = self.power_series(3 * k as i64, &ratios);
            let factor = Float::with_val(bits, &a[k] * &c0_pow) * (1 - 3 * k as i64);
            let term = &pw.scale(&factor) * &self.top_epsilon(k);
            out += &term;
        }
        out
    }

    /// `(1 + sum ratios x^l)^(-p)` truncated to the working length.
    fn power_series(&self, p: i64, ratios: &[BigReal]) -> InverseDSeries {
        let coeffs = (0..self.terms()).map(|m| inverse_power_coefficient(m, p, ratios)).collect();
        InverseDSeries::from_coeffs(coeffs, self.terms(), self.prec)
    }

    /// Solves for `C_0 .. C_M` at order N.
    pub fn solve_c(&self, order: usize) -> Result<(Vec<BigReal>, Vec<BigReal>)> {
        self.check(order, self.truncation)?;
        let bits = self.prec.bits();
        let poly = self.leading_polynomial(order)?;
        let two = self.prec.float(2);
        let u_roots = positive_roots(&poly, &two, ScanGrid::default());
        let chosen = u_roots
            .iter()
            .min_by(|a, b| {
                let da = Float::with_val(bits, *a - &two).abs();
                let db = Float::with_val(bits, *b - &two).abs();
                da.partial_cmp(&db).expect("finite roots")
            })
            .ok_or(Error::NoLeadingRoot { order })?;
        let c0 = Float::with_val(bits, chosen.cbrt_ref());
        let leading_roots = u_roots.iter().map(|u| Float::with_val(bits, u.cbrt_ref())).collect();

        // d(dF/dw)/dw at x = 0, which multiplies every C_j in the x^j condition.
        let a = self.weights(order);
        let mut slope = Float::new(bits);
        for (k, ak) in a.iter().enumerate().skip(1) {
            let e0 = self.top_epsilon(k).coeff(0).clone();
            let pw = Float::with_val(bits, c0.pow_ref_i(-(3 * k as i32) - 1));
            let kk = k as i64;
            slope += Float::with_val(bits, ak * &e0) * pw * ((1 - 3 * kk) * (-3 * kk));
        }

        let mut c = vec![self.prec.zero(); self.terms()];
        c[0] = c0;
        for j in 1..self.terms() {
            let g = self.stationarity(order, &c);
            c[j] = -Float::with_val(bits, g.coeff(j) / &slope);
        }
        Ok((c, leading_roots))
    }

    /// Residual of the stationarity condition for given `C_j`; vanishes
    /// through `x^M` at the solution.
    pub fn stationarity_residual(&self, order: usize, c: &[BigReal]) -> Result<InverseDSeries> {
        self.check(order, 0)?;
        Ok(self.stationarity(order, c))
    }

    /// Assembles `B_0 .. B_M` at order N from the solved `C_j` through `K_{m,k}`.
    pub fn coefficients(&self, order: usize) -> Result<LargeDCoefficients> {
        let (c, leading_roots) = self.solve_c(order)?;
        let bits = self.prec.bits();
        let terms = self.terms();
        let a = self.weights(order);
        let ratios = ratios_of(&c);
        let mut b: Vec<BigReal> = c.iter().map(|cj| Float::with_val(bits, cj * &a[0]) / 2u32).collect();
        let inv_c0 = Float::with_val(bits, c[0].recip_ref());
        let inv_c0_cubed = Float::with_val(bits, inv_c0.clone().pow_u(3));
        let mut c0_pow = c[0].clone();
        for k in 1..=order {
            c0_pow *= &inv_c0_cubed;
            let ek = self.top_epsilon(k);
            let kcoef: Vec<BigReal> = (0..terms).map(|m| multinomial_k(m, k, &ratios).value).collect();
            let scale = Float::with_val(bits, &a[k] * &c0_pow);
            for (n, bn) in b.iter_mut().enumerate() {
                let mut s = Float::new(bits);
                for i in 0..=n {
                    s += Float::with_val(bits, ek.coeff(i) * &kcoef[n - i]);
                }
                *bn += s * &scale;
            }
        }
        let out = |v: Vec<BigReal>| -> Vec<BigReal> { v.into_iter().map(|x| Float::with_val(self.output.bits(), x)).collect() };
        Ok(LargeDCoefficients {
            order,
            truncation: self.truncation,
            c: out(c),
            b: out(b),
            leading_roots: out(leading_roots),
        })
    }

    /// `B_0 .. B_M` evaluated by composing truncated series directly,
    /// independent of the composition sums.
    pub fn coefficients_by_series(&self, order: usize, c: &[BigReal]) -> Result<Vec<BigReal>> {
        self.check(order, 0)?;
        let terms = self.terms();
        let a = self.weights(order);
        let w = InverseDSeries::from_coeffs(c.to_vec(), terms, self.prec);
        let w_inv3 = w.powi(-3);
        let mut f = w.scale(&Float::with_val(self.prec.bits(), &a[0] / 2u32));
        let mut wp = w.clone();
        for k in 1..=order {
            wp = &wp * &w_inv3;
            let term = (&wp * &self.top_epsilon(k)).scale(&a[k]);
            f += &term;
        }
        Ok(f.coeffs().to_vec())
    }

    /// Orders `1..=max_order` in parallel.
    pub fn sequence(&self, max_order: usize) -> Vec<Result<LargeDCoefficients>> {
        use rayon::prelude::*;
        (1..=max_order).into_par_iter().map(|n| self.coefficients(n)).collect()
    }
}

trait PowI {
    fn pow_ref_i(&self, e: i32) -> Float;
}

impl PowI for Float {
    fn pow_ref_i(&self, e: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

fn ratios_of(c: &[BigReal]) -> Vec<BigReal> {
    let bits = c[0].prec();
    c.iter().map(|cj| Float::with_val(bits, cj / &c[0])).collect()
}

/// `C_0 .. C_M` at order N.
pub fn solve_c_coefficients(order: usize, truncation: usize, prec: Precision) -> Result<Vec<BigReal>> {
    let (c, _) = LargeDExpansion::new(order, truncation, prec)?.solve_c(order)?;
    Ok(c.into_iter().map(|x| Float::with_val(prec.bits(), x)).collect())
}

/// `B_0 .. B_M` (and `C_j`) at order N.
pub fn large_d_b0(order: usize, truncation: usize, prec: Precision) -> Result<LargeDCoefficients> {
    LargeDExpansion::new(order, truncation, prec)?.coefficients(order)
}

/// First order of the parity tail after the last sign change of its first
/// differences.
pub fn fluctuation_cutoff(points: &[(usize, BigReal)]) -> usize {
    let mut last_change = points.first().map_or(0, |p| p.0);
    let diffs: Vec<(usize, Float)> = points.windows(2).map(|w| (w[1].0, Float::with_val(w[1].1.prec(), &w[1].1 - &w[0].1))).collect();
    for pair in diffs.windows(2) {
        let (a, b) = (&pair[0].1, &pair[1].1);
        if a.is_sign_negative() != b.is_sign_negative() {
            last_change = pair[0].0;
        }
    }
    last_change
}

/// Minimum order admitted to the extrapolation tail for `B_k`, `k >= 3`.
pub const HIGH_K_MIN_ORDER: usize = 40;

/// How a `B_k^(N)` tail is turned into a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtrapolationMethod {
    /// Wynn's epsilon algorithm per parity and on the merged sequence.
    #[default]
    Epsilon,
    /// Per-parity exponential tail fits.
    TailFit(ExtrapolationOptions),
}

/// Odd/even extrapolation of `B_k^(N)` after discarding the fluctuation regime.
///
/// The retained orders start at the latest of the two per-parity cutoffs (and
/// at [`HIGH_K_MIN_ORDER`] for `k >= 3`) so that the merged tail is contiguous.
pub fn extrapolate_b_sequence(k: usize, sequence: &[LargeDCoefficients], method: ExtrapolationMethod) -> Result<ExtrapolationResult> {
    let floor = if k >= 3 { HIGH_K_MIN_ORDER } else { 1 };
    let values: Vec<(usize, BigReal)> = sequence
        .iter()
        .filter(|s| s.order >= floor)
        .filter_map(|s| s.b.get(k).map(|v| (s.order, v.clone())))
        .collect();
    let mut start = floor;
    for parity in [0usize, 1] {
        let pts: Vec<(usize, BigReal)> = values.iter().filter(|(n, _)| n % 2 == parity).cloned().collect();
        start = start.max(fluctuation_cutoff(&pts));
    }
    // The parity whose cutoff was earlier still enters one order before `start`.
    let kept: Vec<(usize, BigReal)> = values.into_iter().filter(|(n, _)| *n + 1 >= start && *n >= floor).collect();
    match method {
        ExtrapolationMethod::Epsilon => epsilon_extrapolate(&kept),
        ExtrapolationMethod::TailFit(options) => odd_even_extrapolate(&kept, options),
    }
}

/// `extrapolate_B(k, N_max, M)`.
pub fn extrapolate_b(k: usize, max_order: usize, truncation: usize, prec: Precision, method: ExtrapolationMethod) -> Result<ExtrapolationResult> {
    if k > truncation {
        return Err(Error::TruncationOutOfRange {
            requested: k,
            available: truncation,
        });
    }
    let ex = LargeDExpansion::new(max_order, truncation, prec)?;
    let seq: Vec<LargeDCoefficients> = ex.sequence(max_order).into_iter().collect::<Result<_>>()?;
    extrapolate_b_sequence(k, &seq, method)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn multinomial_low_orders() {
        let p = Precision::digits(40);
        let ratios = vec![p.float(1), p.float(0.7), p.float(-0.3)];
        for k in 1..5usize {
            let kk = k as f64;
            assert!(close(&multinomial_k(0, k, &ratios).value, &p.float(1), 1e-35));
            let m1 = -(3.0 * kk - 1.0) * 0.7;
            assert!(close(&multinomial_k(1, k, &ratios).value, &p.float(m1), 1e-12));
            let m2 = 3.0 * kk * (3.0 * kk - 1.0) / 2.0 * 0.49 - (3.0 * kk - 1.0) * -0.3;
            assert!((multinomial_k(2, k, &ratios).value.to_f64() - m2).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_sum_matches_series_power() {
        let p = Precision::digits(50);
        let ratios: Vec<BigReal> = [1.0, 0.4, -0.25, 0.1, 0.05, -0.02, 0.3].iter().map(|v| p.float(*v)).collect();
        let series = InverseDSeries::from_coeffs(ratios.clone(), 7, p);
        for pexp in [2i64, 5, 11] {
            let direct = series.powi(-pexp);
            for m in 0..7 {
                let via = inverse_power_coefficient(m, pexp, &ratios);
                assert!(close(&via, direct.coeff(m), 1e-40), "p={pexp} m={m}");
            }
        }
    }

    #[test]
    fn first_and_second_order_closed_forms() {
        let p = Precision::digits(64);
        let c2 = p.float(2).cbrt();
        let one = large_d_b0(1, 2, p).unwrap();
        let want = [Float::with_val(p.bits(), &c2 * 3u32) / 8u32, Float::with_val(p.bits(), &c2 / 4u32), -Float::with_val(p.bits(), &c2 / 6u32)];
        for (got, want) in one.b.iter().zip(&want) {
            assert!(close(got, want, 1e-50));
        }
        let two = large_d_b0(2, 2, p).unwrap();
        assert!(close(&two.b[1], &(Float::with_val(p.bits(), &c2 * 7u32) / 32u32), 1e-50));
        assert!(close(&two.b[2], &-(Float::with_val(p.bits(), &c2 * 71u32) / 768u32), 1e-50));
        assert!(close(&two.c[0], &c2, 1e-50));
        assert!(close(&two.c[1], &(Float::with_val(p.bits(), &c2 * 13u32) / 12u32), 1e-50));
        assert!(close(&two.c[2], &-(Float::with_val(p.bits(), &c2 * 113u32) / 288u32), 1e-50));
    }

    #[test]
    fn first_order_frequency_expansion() {
        // (2(D + 2))^(1/3) = 2^(1/3) D^(1/3) (1 + 2x)^(1/3)
        let p = Precision::digits(50);
        let c = solve_c_coefficients(1, 4, p).unwrap();
        let c2 = p.float(2).cbrt();
        let third = Rational::from((1, 3));
        for (j, cj) in c.iter().enumerate() {
            let coef = binomial(&third, j) * Rational::from(2u32).pow_u(j);
            let want = Float::with_val(p.bits(), &c2 * &coef);
            assert!(close(cj, &want, 1e-40), "j={j}");
        }
    }

    trait RatPow {
        fn pow_u(self, e: usize) -> Rational;
    }

    impl RatPow for Rational {
        fn pow_u(self, e: usize) -> Rational {
            let mut acc = Rational::from(1);
            for _ in 0..e {
                acc *= &self;
            }
            acc
        }
    }

    #[test]
    fn solved_coefficients_zero_the_residual() {
        let p = Precision::digits(60);
        let ex = LargeDExpansion::new(12, 6, p).unwrap();
        for n in [3, 7, 12] {
            let (c, _) = ex.solve_c(n).unwrap();
            let r = ex.stationarity_residual(n, &c).unwrap();
            for i in 0..=6 {
                assert!(r.coeff(i).clone().abs() < 1e-45, "N={n} i={i} {}", r.coeff(i));
            }
        }
    }

    #[test]
    fn two_routes_agree() {
        let p = Precision::digits(60);
        let ex = LargeDExpansion::new(15, 6, p).unwrap();
        for n in [1, 4, 15] {
            let got = ex.coefficients(n).unwrap();
            let other = ex.coefficients_by_series(n, &got.c).unwrap();
            for (a, b) in got.b.iter().zip(&other) {
                let scale = a.to_f64().abs().max(1.0);
                assert!(close(a, b, 1e-45 * scale), "N={n} {a} {b}");
            }
        }
    }

    #[test]
    fn rejects_truncation_beyond_solved_range() {
        let p = Precision::digits(32);
        let ex = LargeDExpansion::new(3, 2, p).unwrap();
        assert!(matches!(ex.stationarity_residual(4, &[p.float(1)]), Err(Error::OrderExceedsSeries { .. })));
        assert!(matches!(extrapolate_b(3, 3, 2, p, ExtrapolationMethod::Epsilon), Err(Error::TruncationOutOfRange { .. })));
    }
}
