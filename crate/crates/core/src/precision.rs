//! Working precision for [`BigReal`] computations.
//!
//! Precisions are declared in decimal digits and converted to MPFR bits
//! with a small guard. All values inside one computation share a single
//! precision; reported values are re-computed at an escalated precision
//! and the agreement between the two runs is the numerical uncertainty.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Configurable-precision real carrier.
pub type BigReal = Float;

/// Exact rational carrier, always kept in lowest terms with a positive
/// denominator (guaranteed by GMP).
pub type RationalScalar = Rational;

const GUARD_BITS: u32 = 16;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 16;

    pub fn digits(digits: u32) -> Self {
        Self {
            digits: digits.max(Self::MIN_DIGITS),
        }
    }

    /// Default policy for order-N resummation: `max(64, ceil(3.5 N) + 40)`.
    pub fn for_order(order: usize) -> Self {
        let scaled = (7 * order).div_ceil(2) as u32 + 40;
        Self::digits(scaled.max(64))
    }

    pub fn decimal_digits(self) -> u32 {
        self.digits
    }

    pub fn bits(self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// The 1.5x precision used for the escalation re-run.
    pub fn escalated(self) -> Self {
        Self::digits(self.digits + self.digits.div_ceil(2))
    }

    pub fn float<T>(self, value: T) -> BigReal
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(self) -> BigReal {
        Float::new(self.bits())
    }

    pub fn rational(self, value: &Rational) -> BigReal {
        Float::with_val(self.bits(), value)
    }

    /// Parses a decimal literal at this precision.
    pub fn parse(self, literal: &str) -> BigReal {
        let parsed = Float::parse(literal).unwrap_or_else(|e| panic!("bad literal {literal:?}: {e}"));
        Float::with_val(self.bits(), parsed)
    }

    /// 10^(-digits): the smallest relative difference this precision resolves.
    pub fn epsilon(self) -> BigReal {
        let ten = self.float(10);
        ten.pow(-(self.digits as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::digits(64)
    }
}

/// Formats a value in scientific notation with `digits` significant digits.
pub fn format_sci(value: &Float, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    value.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest)
}

/// Number of leading decimal digits on which two values agree, measured
/// relative to `a`. Returns `max` when they are identical.
pub fn agreement_digits(a: &Float, b: &Float, max: u32) -> u32 {
    let diff = Float::with_val(a.prec(), a - b).abs();
    if diff.is_zero() {
        return max;
    }
    let scale = Float::with_val(a.prec(), a.abs_ref());
    if scale.is_zero() {
        return 0;
    }
    let rel = Float::with_val(a.prec(), &diff / &scale);
    let digits = -rel.log10().to_f64();
    (digits.floor().max(0.0) as u32).min(max)
}

/// 2^(1/3), which appears in every large-D coefficient.
pub fn cbrt2(prec: Precision) -> BigReal {
    prec.float(2).cbrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_policy() {
        assert_eq!(Precision::for_order(1).decimal_digits(), 64);
        assert_eq!(Precision::for_order(80).decimal_digits(), 320);
        assert_eq!(Precision::for_order(100).decimal_digits(), 390);
        assert_eq!(Precision::digits(64).escalated().decimal_digits(), 96);
    }

    #[test]
    fn agreement() {
        let p = Precision::digits(50);
        let a = p.parse("1.2345678");
        let b = p.parse("1.2345679");
        assert_eq!(agreement_digits(&a, &b, 50), 7);
        assert_eq!(agreement_digits(&a, &a, 50), 50);
    }

    #[test]
    fn sci_format() {
        let p = Precision::digits(30);
        assert_eq!(format_sci(&p.parse("0.5"), 3), "5.00e-1");
    }
}
