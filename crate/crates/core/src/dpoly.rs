//! Polynomials in the dimension D with exact rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg};

use rug::{Float, Rational};

use crate::precision::Precision;

/// `sum_i coeffs[i] D^i`, trailing zeros trimmed. The zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DPolynomial {
    coeffs: Vec<Rational>,
}

impl DPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// Builds `sum_i coeffs[i] D^i`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(ratios: &[(i64, i64)]) -> Self {
        Self::from_coeffs(ratios.iter().map(|&(n, d)| Rational::from((n, d))).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `D^power` (zero beyond the degree).
    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// `(D + shift) * self`.
    pub fn mul_linear(&self, shift: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] += Rational::from(c * shift);
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| Rational::from(c * factor)).collect())
    }

    pub fn eval_rational(&self, d: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= d;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, d: &Float) -> Float {
        let prec = d.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= d;
            acc += Float::with_val(prec, c);
        }
        acc
    }

    pub fn eval_f64(&self, d: f64) -> f64 {
        self.eval_float(&Precision::digits(32).float(d)).to_f64()
    }
}

impl Add for &DPolynomial {
    type Output = DPolynomial;
    fn add(self, rhs: &DPolynomial) -> DPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&DPolynomial> for DPolynomial {
    fn add_assign(&mut self, rhs: &DPolynomial) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::new());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.trim();
    }
}

impl Mul for &DPolynomial {
    type Output = DPolynomial;
    fn mul(self, rhs: &DPolynomial) -> DPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return DPolynomial::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        DPolynomial::from_coeffs(out)
    }
}

impl Neg for &DPolynomial {
    type Output = DPolynomial;
    fn neg(self) -> DPolynomial {
        DPolynomial::from_coeffs(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl fmt::Display for DPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*D")?,
                _ => write!(f, "({c})*D^{i}")?,
            }
        }
        Ok(())
    }
}
