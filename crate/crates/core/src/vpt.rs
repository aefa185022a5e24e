//! Variational resummation of the weak-coupling series.
//!
//! The frequency of the weak-coupling series is replaced by a trial frequency
//! through the square-root substitution, the result is re-expanded to order N
//! and made stationary in the trial frequency. In the strong-coupling limit
//! this reduces to a Laurent polynomial in `Omega_0` whose stationary points
//! are the roots of a degree-N polynomial in `u = Omega_0^3`.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::perturbation::{epsilon_coefficients, RealDimension, WeakSeries};
use crate::precision::{BigReal, Precision};
use crate::roots::{positive_roots, RealPolynomial, ScanGrid};

/// `binom(alpha, l) = prod_{i<l} (alpha - i) / l!`.
pub fn binomial(alpha: &Rational, l: usize) -> Rational {
    let mut acc = Rational::from(1);
    for i in 0..l {
        acc *= Rational::from(alpha - Rational::from(i as u64));
        acc /= Rational::from((i + 1) as u64);
    }
    acc
}

/// Kind of stationary point selected by minimal sensitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// First derivative in the trial frequency vanishes.
    Extremum,
    /// Second derivative in the trial frequency vanishes.
    TurningPoint,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Extremum => "extremum",
            Classification::TurningPoint => "turning_point",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A positive stationary point and the approximant evaluated there.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub omega: BigReal,
    pub classification: Classification,
    pub value: BigReal,
}

#[derive(Debug, Clone)]
pub struct StrongCouplingResult {
    pub order: usize,
    pub dimension: BigReal,
    pub omega0: BigReal,
    pub classification: Classification,
    pub b0: BigReal,
    /// Every positive root of both stationarity conditions, ascending in `omega`.
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone)]
pub struct VariationalEnergyInput {
    pub order: usize,
    pub coupling: BigReal,
    pub frequency: BigReal,
    pub trial_frequency: BigReal,
}

#[derive(Debug, Clone)]
pub struct FirstOrderStrongCoupling {
    pub b0: BigReal,
    pub b1: BigReal,
    pub b2: BigReal,
    /// `Omega_0^(1), Omega_1^(1), Omega_2^(1)`.
    pub omega_coeffs: [BigReal; 3],
}

/// Finite-coupling optimum of the resummed energy.
#[derive(Debug, Clone)]
pub struct EnergyOptimum {
    pub order: usize,
    pub omega: BigReal,
    pub classification: Classification,
    pub energy: BigReal,
    pub candidates: Vec<Candidate>,
}

/// Weak-coupling series at one fixed dimension, ready for resummation.
#[derive(Debug, Clone)]
pub struct Resummation {
    dim: RealDimension,
    series: WeakSeries<BigReal>,
}

impl Resummation {
    pub fn new(dimension: &BigReal, max_order: usize, prec: Precision) -> Result<Self> {
        let dim = RealDimension::new(dimension.clone(), prec)?;
        let series = epsilon_coefficients(&dim, max_order.max(1))?;
        Ok(Self { dim, series })
    }

    pub fn from_f64(dimension: f64, max_order: usize, prec: Precision) -> Result<Self> {
        Self::new(&prec.float(dimension), max_order, prec)
    }

    pub fn dimension(&self) -> &BigReal {
        self.dim.value()
    }

    pub fn precision(&self) -> Precision {
        self.dim.precision()
    }

    pub fn max_order(&self) -> usize {
        self.series.order()
    }

    /// `epsilon_k` with `epsilon_0 = D/2`.
    pub fn epsilon(&self, k: usize) -> BigReal {
        if k == 0 {
            Float::with_val(self.bits(), self.dim.value() / 2u32)
        } else {
            self.series.epsilon(k).clone()
        }
    }

    fn bits(&self) -> u32 {
        self.precision().bits()
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order < 1 {
            return Err(Error::InvalidOrder { got: order, min: 1 });
        }
        if order > self.max_order() {
            return Err(Error::OrderExceedsSeries {
                requested: order,
                available: self.max_order(),
            });
        }
        Ok(())
    }

    /// Resummed energy at finite coupling for a given trial frequency.
    pub fn variational_energy(&self, input: &VariationalEnergyInput) -> Result<BigReal> {
        self.check_order(input.order)?;
        if input.trial_frequency <= 0 {
            return Err(Error::NonPositiveTrialFrequency(input.trial_frequency.to_string()));
        }
        let bits = self.bits();
        let n = input.order;
        let omega = &input.trial_frequency;
        let ratio = Float::with_val(bits, input.frequency.square_ref()) / Float::with_val(bits, omega.square_ref());
        let r = ratio - 1u32;
        let mut total = Float::new(bits);
        let mut g_pow = Float::with_val(bits, 1);
        for k in 0..=n {
            let alpha = Rational::from((1 - 3 * k as i64, 2));
            let mut inner = Float::new(bits);
            let mut r_pow = Float::with_val(bits, 1);
            for l in 0..=(n - k) {
                inner += Float::with_val(bits, &r_pow * &binomial(&alpha, l));
                r_pow *= &r;
            }
            let omega_pow = Float::with_val(bits, omega.pow_ref_i(1 - 3 * k as i32));
            total += self.epsilon(k) * Float::with_val(bits, &g_pow * &omega_pow) * inner;
            g_pow *= &input.coupling;
        }
        Ok(total)
    }

    /// `a_k` such that `b0(Omega_0) = sum_k a_k Omega_0^(1-3k)`.
    pub fn b0_coefficients(&self, order: usize) -> Result<Vec<BigReal>> {
        self.check_order(order)?;
        let bits = self.bits();
        Ok((0..=order)
            .map(|k| {
                let alpha = Rational::from((1 - 3 * k as i64, 2)) - 1u32;
                let mut c = binomial(&alpha, order - k);
                if (order - k) % 2 == 1 {
                    c = -c;
                }
                Float::with_val(bits, &c) * self.epsilon(k)
            })
            .collect())
    }

    /// Reduced leading strong-coupling coefficient as a function of `Omega_0`.
    pub fn b0_function(&self, order: usize, omega0: &BigReal) -> Result<BigReal> {
        if *omega0 <= 0 {
            return Err(Error::NonPositiveTrialFrequency(omega0.to_string()));
        }
        let coeffs = self.b0_coefficients(order)?;
        Ok(eval_laurent(&coeffs, omega0, 0, 3))
    }

    /// `d b0 / d Omega_0`.
    pub fn b0_derivative(&self, order: usize, omega0: &BigReal) -> Result<BigReal> {
        let coeffs = self.b0_coefficients(order)?;
        Ok(eval_laurent(&coeffs, omega0, 1, 3))
    }

    /// `d^2 b0 / d Omega_0^2`.
    pub fn b0_second_derivative(&self, order: usize, omega0: &BigReal) -> Result<BigReal> {
        let coeffs = self.b0_coefficients(order)?;
        Ok(eval_laurent(&coeffs, omega0, 2, 3))
    }

    /// Polynomials in `u = Omega_0^3` whose positive roots are the extrema
    /// and the turning points of `b0`. With `a_k` as above,
    /// `b0' = Omega_0^(-3N) P(u)` and `b0'' = -Omega_0^(-3N-1) Q(u)`.
    pub fn stationarity_polynomials(&self, order: usize) -> Result<(RealPolynomial, RealPolynomial)> {
        let a = self.b0_coefficients(order)?;
        let bits = self.bits();
        let mut p = vec![Float::new(bits); order + 1];
        let mut q = vec![Float::new(bits); order + 1];
        for (k, ak) in a.iter().enumerate() {
            let first = 1 - 3 * k as i64;
            p[order - k] = Float::with_val(bits, ak * first);
            q[order - k] = Float::with_val(bits, ak * (first * 3 * k as i64));
        }
        Ok((RealPolynomial::new(p), RealPolynomial::new(q)))
    }

    /// All positive stationary points of `b0` at one order, ascending.
    pub fn b0_candidates(&self, order: usize) -> Result<Vec<Candidate>> {
        let (p, q) = self.stationarity_polynomials(order)?;
        let bits = self.bits();
        let u1 = Float::with_val(bits, self.dim.value() + 2u32) * 2u32;
        let coeffs = self.b0_coefficients(order)?;
        let mut out = Vec::new();
        for (poly, class) in [(&p, Classification::Extremum), (&q, Classification::TurningPoint)] {
            for u in positive_roots(poly, &u1, ScanGrid::default()) {
                let omega = u.cbrt();
                let value = eval_laurent(&coeffs, &omega, 0, 3);
                out.push(Candidate {
                    omega,
                    classification: class,
                    value,
                });
            }
        }
        out.sort_by(|a, b| a.omega.partial_cmp(&b.omega).expect("finite roots"));
        Ok(out)
    }

    /// Optimizes `b0` at one order, selecting the candidate closest to `anchor`.
    ///
    /// Without an anchor only the extremum branch is considered and the
    /// smallest root wins; order one has a single extremum.
    pub fn optimize_with_anchor(&self, order: usize, anchor: Option<&BigReal>) -> Result<StrongCouplingResult> {
        let candidates = self.b0_candidates(order)?;
        let chosen = select(&candidates, anchor).ok_or(Error::NoAdmissibleRoot { order })?;
        let pick = candidates[chosen].clone();
        Ok(StrongCouplingResult {
            order,
            dimension: self.dim.value().clone(),
            omega0: pick.omega,
            classification: pick.classification,
            b0: pick.value,
            candidates,
        })
    }

    /// The anchored chain from order one up to `max_order`. Failed orders are
    /// reported in place and leave the anchor unchanged.
    pub fn b0_chain(&self, max_order: usize) -> Vec<Result<StrongCouplingResult>> {
        use rayon::prelude::*;
        let all: Vec<Result<Vec<Candidate>>> = (1..=max_order).into_par_iter().map(|n| self.b0_candidates(n)).collect();
        let mut anchor: Option<BigReal> = None;
        let mut out = Vec::with_capacity(max_order);
        for (i, cands) in all.into_iter().enumerate() {
            let order = i + 1;
            let result = cands.and_then(|candidates| {
                let chosen = select(&candidates, anchor.as_ref()).ok_or(Error::NoAdmissibleRoot { order })?;
                let pick = candidates[chosen].clone();
                Ok(StrongCouplingResult {
                    order,
                    dimension: self.dim.value().clone(),
                    omega0: pick.omega,
                    classification: pick.classification,
                    b0: pick.value,
                    candidates,
                })
            });
            if let Ok(r) = &result {
                anchor = Some(r.omega0.clone());
            }
            out.push(result);
        }
        out
    }

    /// Minimal-sensitivity optimum of `b0` at order N, following the branch
    /// connected to the unique first-order extremum.
    pub fn optimize_omega0(&self, order: usize) -> Result<StrongCouplingResult> {
        self.check_order(order)?;
        self.b0_chain(order).pop().expect("non-empty chain")
    }

    /// Laurent coefficients `f_q` with `E(Omega) = sum_q f_q Omega^(1-q)`, `0 <= q <= 3N`.
    pub fn energy_laurent(&self, order: usize, coupling: &BigReal, frequency: &BigReal) -> Result<Vec<BigReal>> {
        self.check_order(order)?;
        let bits = self.bits();
        let w2 = Float::with_val(bits, frequency.square_ref());
        let mut f = vec![Float::new(bits); 3 * order + 1];
        let mut g_pow = Float::with_val(bits, 1);
        for k in 0..=order {
            let alpha = Rational::from((1 - 3 * k as i64, 2));
            let base = self.epsilon(k) * Float::with_val(bits, &g_pow);
            for l in 0..=(order - k) {
                let bl = Float::with_val(bits, &base * &binomial(&alpha, l));
                // (w2 x - 1)^l with x = Omega^-2
                let mut w_pow = Float::with_val(bits, 1);
                for i in 0..=l {
                    let mut c = Float::with_val(bits, &bl * &w_pow) * binomial_int(l, i);
                    if (l - i) % 2 == 1 {
                        c = -c;
                    }
                    f[3 * k + 2 * i] += c;
                    w_pow *= &w2;
                }
            }
            g_pow *= coupling;
        }
        Ok(f)
    }

    /// Minimal-sensitivity optimum of the resummed energy at finite coupling,
    /// following the branch connected to the first-order extremum.
    pub fn optimize_energy(&self, order: usize, coupling: &BigReal, frequency: &BigReal) -> Result<EnergyOptimum> {
        self.check_order(order)?;
        if *coupling <= 0 {
            return Err(Error::NonPositive {
                what: "coupling",
                value: coupling.to_string(),
            });
        }
        let bits = self.bits();
        let scale = {
            let strong = Float::with_val(bits, self.dim.value() + 2u32) * 2u32 * coupling;
            let strong = strong.cbrt();
            let weak = Float::with_val(bits, frequency.abs_ref());
            if strong > weak {
                strong
            } else {
                weak
            }
        };
        let mut anchor: Option<BigReal> = None;
        let mut last = None;
        for n in 1..=order {
            let f = self.energy_laurent(n, coupling, frequency)?;
            let top = 3 * n;
            let mut p = vec![Float::new(bits); top + 1];
            let mut q = vec![Float::new(bits); top + 1];
            for (idx, fq) in f.iter().enumerate() {
                let first = 1 - idx as i64;
                p[top - idx] = Float::with_val(bits, fq * first);
                q[top - idx] = Float::with_val(bits, fq * (first * idx as i64));
            }
            let mut candidates = Vec::new();
            for (poly, class) in [
                (RealPolynomial::new(p), Classification::Extremum),
                (RealPolynomial::new(q), Classification::TurningPoint),
            ] {
                for omega in positive_roots(&poly, &scale, ScanGrid::default()) {
                    let value = eval_laurent(&f, &omega, 0, 1);
                    candidates.push(Candidate {
                        omega,
                        classification: class,
                        value,
                    });
                }
            }
            candidates.sort_by(|a, b| a.omega.partial_cmp(&b.omega).expect("finite roots"));
            let chosen = select(&candidates, anchor.as_ref()).ok_or(Error::NoAdmissibleRoot { order: n })?;
            let pick = candidates[chosen].clone();
            anchor = Some(pick.omega.clone());
            last = Some(EnergyOptimum {
                order: n,
                omega: pick.omega,
                classification: pick.classification,
                energy: pick.value,
                candidates,
            });
        }
        Ok(last.expect("order >= 1"))
    }
}

fn binomial_int(n: usize, k: usize) -> rug::Integer {
    rug::Integer::from(rug::Integer::binomial_u(n as u32, k as u32))
}

/// Closest candidate to `anchor`; without one, the smallest extremum.
fn select(candidates: &[Candidate], anchor: Option<&BigReal>) -> Option<usize> {
    match anchor {
        None => candidates.iter().position(|c| c.classification == Classification::Extremum),
        Some(a) => {
            let mut best: Option<(usize, Float)> = None;
            for (i, c) in candidates.iter().enumerate() {
                let d = Float::with_val(a.prec(), &c.omega - a).abs();
                if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                    best = Some((i, d));
                }
            }
            best.map(|(i, _)| i)
        }
    }
}

/// `d^deriv/dx^deriv sum_i c_i x^(1 - stride i)`, `deriv <= 2`.
fn eval_laurent(coeffs: &[BigReal], x: &Float, deriv: u32, stride: i32) -> Float {
    let bits = x.prec();
    let inv = Float::with_val(bits, x.recip_ref());
    let step = Float::with_val(bits, inv.pow_ref_i(stride));
    let mut term_pow = Float::with_val(bits, x.pow_ref_i(1 - deriv as i32));
    let mut acc = Float::new(bits);
    for (idx, c) in coeffs.iter().enumerate() {
        let e = 1 - stride as i64 * idx as i64;
        let factor = match deriv {
            0 => 1,
            1 => e,
            _ => e * (e - 1),
        };
        if factor != 0 && !c.is_zero() {
            acc += Float::with_val(bits, c * &term_pow) * factor;
        }
        term_pow *= &step;
    }
    acc
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

/// Closed forms of the first-order strong-coupling expansion.
pub fn first_order_strong_coupling(dimension: &BigReal, omega: &BigReal) -> Result<FirstOrderStrongCoupling> {
    if *dimension <= 0 {
        return Err(Error::NonPositiveDimension(dimension.to_string()));
    }
    let bits = dimension.prec();
    let d_plus_2 = Float::with_val(bits, dimension + 2u32);
    let root = Float::with_val(bits, &d_plus_2 * 2u32).cbrt();
    let w2 = Float::with_val(bits, omega.square_ref());
    let w4 = Float::with_val(bits, w2.square_ref());
    let o1 = Float::with_val(bits, &w2 / &root) / 3u32;
    let o2 = Float::with_val(bits, &w4 / &d_plus_2) / 108u32;
    let b0 = Float::with_val(bits, dimension * &root) * 3u32 / 8u32;
    let b1 = Float::with_val(bits, dimension * &w2) / Float::with_val(bits, &root * 4u32);
    let b2 = -(Float::with_val(bits, dimension * &w4) / Float::with_val(bits, &d_plus_2 * 48u32));
    Ok(FirstOrderStrongCoupling {
        b0,
        b1,
        b2,
        omega_coeffs: [root, o1, o2],
    })
}
