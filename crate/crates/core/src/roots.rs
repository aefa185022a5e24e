//! Positive real roots of polynomials with extended-precision coefficients.
//!
//! Roots are isolated by sign changes on a geometric grid and then refined by
//! bisection followed by bracketed Newton steps down to the working precision.

use rug::Float;

use crate::precision::BigReal;

/// `sum_i coeffs[i] v^i`.
#[derive(Debug, Clone)]
pub struct RealPolynomial {
    coeffs: Vec<BigReal>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<BigReal>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn bits(&self) -> u32 {
        self.coeffs.first().map_or(64, |c| c.prec())
    }

    pub fn eval(&self, v: &Float) -> Float {
        let mut acc = Float::new(self.bits());
        for c in self.coeffs.iter().rev() {
            acc *= v;
            acc += c;
        }
        acc
    }

    /// Value and first derivative by a single Horner sweep.
    pub fn eval_with_derivative(&self, v: &Float) -> (Float, Float) {
        let bits = self.bits();
        let mut p = Float::new(bits);
        let mut dp = Float::new(bits);
        for c in self.coeffs.iter().rev() {
            dp *= v;
            dp += &p;
            p *= v;
            p += c;
        }
        (p, dp)
    }
}

/// Geometric scan window `[center / spread, center * spread]`.
#[derive(Debug, Clone, Copy)]
pub struct ScanGrid {
    pub spread: f64,
    pub points_per_decade: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            spread: 1e3,
            points_per_decade: 400,
        }
    }
}

/// All sign-change roots of `poly` inside the grid around `center`, ascending.
pub fn positive_roots(poly: &RealPolynomial, center: &Float, grid: ScanGrid) -> Vec<BigReal> {
    let bits = poly.bits();
    let decades = grid.spread.log10();
    let steps = ((2.0 * decades) * grid.points_per_decade as f64).ceil() as usize;
    let ratio = Float::with_val(bits, 10).pow_ratio(1.0 / grid.points_per_decade as f64);
    let mut v = Float::with_val(bits, center / Float::with_val(bits, grid.spread));

    let mut roots = Vec::new();
    let mut prev_v = v.clone();
    let mut prev_f = poly.eval(&v);
    if prev_f.is_zero() {
        roots.push(v.clone());
    }
    for _ in 0..steps {
        v *= &ratio;
        let f = poly.eval(&v);
        if f.is_zero() {
            roots.push(v.clone());
        } else if !prev_f.is_zero() && prev_f.is_sign_negative() != f.is_sign_negative() {
            roots.push(refine(poly, prev_v.clone(), v.clone(), &prev_f));
        }
        prev_v.clone_from(&v);
        prev_f = f;
    }
    roots
}

trait PowRatio {
    fn pow_ratio(self, exponent: f64) -> Float;
}

impl PowRatio for Float {
    fn pow_ratio(self, exponent: f64) -> Float {
        use rug::ops::Pow;
        let bits = self.prec();
        self.pow(Float::with_val(bits, exponent))
    }
}

/// Refines a bracketed simple root to full precision.
pub fn refine(poly: &RealPolynomial, mut lo: Float, mut hi: Float, f_lo: &Float) -> Float {
    let bits = poly.bits();
    let lo_negative = f_lo.is_sign_negative();
    // Coarse bisection to about 40 bits so Newton starts inside its basin.
    for _ in 0..40 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        let fm = poly.eval(&mid);
        if fm.is_zero() {
            return mid;
        }
        if fm.is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = Float::with_val(bits, &lo + &hi) / 2u32;
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    for _ in 0..200 {
        let (f, df) = poly.eval_with_derivative(&x);
        if f.is_zero() {
            return x;
        }
        if f.is_sign_negative() == lo_negative {
            lo.clone_from(&x);
        } else {
            hi.clone_from(&x);
        }
        let step = Float::with_val(bits, &f / &df);
        let candidate = Float::with_val(bits, &x - &step);
        let inside = !df.is_zero() && candidate > lo && candidate < hi;
        let next = if inside {
            candidate
        } else {
            Float::with_val(bits, &lo + &hi) / 2u32
        };
        let moved = Float::with_val(bits, &next - &x).abs();
        x = next;
        let scale = Float::with_val(bits, x.abs_ref()) * &tol;
        if inside && moved <= scale {
            break;
        }
        let width = Float::with_val(bits, &hi - &lo);
        if width <= scale {
            break;
        }
    }
    x
}
