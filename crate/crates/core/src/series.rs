//! Truncated power series in x = 1/D with [`BigReal`] coefficients.

use std::ops::{Add, AddAssign, Mul};

use rug::Float;

use crate::precision::{BigReal, Precision};

/// `sum_{i < len} coeffs[i] x^i + O(x^len)` with `x = 1/D`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseDSeries {
    coeffs: Vec<BigReal>,
}

impl InverseDSeries {
    pub fn zero(len: usize, prec: Precision) -> Self {
        Self {
            coeffs: vec![prec.zero(); len],
        }
    }

    pub fn constant(value: BigReal, len: usize) -> Self {
        let prec = value.prec();
        let mut coeffs = vec![Float::new(prec); len];
        if len > 0 {
            coeffs[0] = value;
        }
        Self { coeffs }
    }

    /// Builds a series from leading coefficients, zero-padding or truncating to `len`.
    pub fn from_coeffs(mut coeffs: Vec<BigReal>, len: usize, prec: Precision) -> Self {
        coeffs.resize(len, prec.zero());
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigReal {
        &self.coeffs[i]
    }

    pub fn coeff_mut(&mut self, i: usize) -> &mut BigReal {
        &mut self.coeffs[i]
    }

    pub fn div_int_assign(&mut self, divisor: i64) {
        for c in &mut self.coeffs {
            *c /= divisor;
        }
    }

    pub fn set_coeff(&mut self, i: usize, value: BigReal) {
        self.coeffs[i] = value;
    }

    fn prec_bits(&self) -> u32 {
        self.coeffs.first().map_or(64, |c| c.prec())
    }

    pub fn scale(&self, factor: &Float) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| Float::with_val(c.prec(), c * factor)).collect(),
        }
    }

    pub fn scale_assign(&mut self, factor: &Float) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    /// `(1 + shift * x) * self`, i.e. multiplication by `(D + shift) / D`.
    pub fn mul_one_plus(&self, shift: i64) -> Self {
        let mut out = self.clone();
        for i in (1..self.len()).rev() {
            let t = Float::with_val(self.prec_bits(), &self.coeffs[i - 1] * shift);
            out.coeffs[i] += t;
        }
        out
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Self {
        let n = self.len();
        let bits = self.prec_bits();
        let mut out = vec![Float::new(bits); n];
        if n == 0 {
            return Self { coeffs: out };
        }
        let inv0 = Float::with_val(bits, self.coeffs[0].recip_ref());
        out[0] = inv0.clone();
        for k in 1..n {
            let mut s = Float::new(bits);
            for i in 1..=k {
                s += Float::with_val(bits, &self.coeffs[i] * &out[k - i]);
            }
            out[k] = -s * &inv0;
        }
        Self { coeffs: out }
    }

    /// Integer power, negative exponents allowed.
    pub fn powi(&self, exponent: i64) -> Self {
        let base = if exponent < 0 { self.recip() } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let bits = self.prec_bits();
        let mut acc = Self::constant(Float::with_val(bits, 1), self.len());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Evaluates the truncated series at a finite x.
    pub fn eval(&self, x: &Float) -> Float {
        let mut acc = Float::new(self.prec_bits());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

impl Mul for &InverseDSeries {
    type Output = InverseDSeries;
    fn mul(self, rhs: &InverseDSeries) -> InverseDSeries {
        let n = self.len().min(rhs.len());
        let bits = self.prec_bits();
        let mut out = vec![Float::new(bits); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += Float::with_val(bits, a * b);
            }
        }
        InverseDSeries { coeffs: out }
    }
}

impl AddAssign<&InverseDSeries> for InverseDSeries {
    fn add_assign(&mut self, rhs: &InverseDSeries) {
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Add for &InverseDSeries {
    type Output = InverseDSeries;
    fn add(self, rhs: &InverseDSeries) -> InverseDSeries {
        let mut out = self.clone();
        out += rhs;
        out
    }
}
