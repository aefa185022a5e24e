//! Embedded published reference values with their tolerances.

use rug::Rational;
use serde::Deserialize;

use crate::dpoly::DPolynomial;
use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};

const EMBEDDED: &str = include_str!("../data/reference.toml");

/// Expected format version of the data file.
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceData {
    pub version: u32,
    pub weak_coupling: Vec<WeakCouplingEntry>,
    pub numerical_b0: Vec<ApproxEntry>,
    pub vpt_b0: Vec<ApproxEntry>,
    pub convergence_law: Vec<ConvergenceLawEntry>,
    pub large_d: Vec<LargeDEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct WeakCouplingEntry {
    pub order: usize,
    /// Coefficients of `D^0, D^1, ..` of `epsilon_k / D`, times `denominator`.
    pub numerator: Vec<i64>,
    pub denominator: i64,
    pub citation: String,
}

impl WeakCouplingEntry {
    pub fn polynomial(&self) -> DPolynomial {
        let mut coeffs = vec![Rational::new()];
        coeffs.extend(self.numerator.iter().map(|&c| Rational::from((c, self.denominator))));
        DPolynomial::from_coeffs(coeffs)
    }
}

/// A decimal value with its quoted uncertainty and the acceptance tolerance.
#[derive(Debug, Clone, Deserialize)]
pub struct ApproxEntry {
    pub dimension: u32,
    #[serde(default)]
    pub order: Option<usize>,
    pub value: String,
    pub uncertainty: String,
    pub tolerance: String,
    pub citation: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ConvergenceLawEntry {
    pub dimension: u32,
    pub a: f64,
    pub a_error: f64,
    pub b: f64,
    pub b_error: f64,
    pub citation: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LargeDEntry {
    pub k: usize,
    pub value: String,
    pub uncertainty: String,
    pub tolerance: String,
    pub citation: String,
}

fn decimal(field: &str, literal: &str, prec: Precision) -> Result<BigReal> {
    rug::Float::parse(literal)
        .map(|v| rug::Float::with_val(prec.bits(), v))
        .map_err(|e| Error::Reference(format!("{field} = {literal:?}: {e}")))
}

macro_rules! decimal_accessors {
    ($ty:ty) => {
        impl $ty {
            pub fn value(&self, prec: Precision) -> Result<BigReal> {
                decimal("value", &self.value, prec)
            }

            pub fn uncertainty(&self, prec: Precision) -> Result<BigReal> {
                decimal("uncertainty", &self.uncertainty, prec)
            }

            pub fn tolerance(&self, prec: Precision) -> Result<BigReal> {
                decimal("tolerance", &self.tolerance, prec)
            }
        }
    };
}

decimal_accessors!(ApproxEntry);
decimal_accessors!(LargeDEntry);

impl ReferenceData {
    pub fn parse(text: &str) -> Result<Self> {
        let data: Self = toml::from_str(text).map_err(|e| Error::Reference(e.to_string()))?;
        if data.version != VERSION {
            return Err(Error::Reference(format!("unsupported data version {}, expected {VERSION}", data.version)));
        }
        Ok(data)
    }

    /// The data file compiled into the library.
    pub fn embedded() -> Result<Self> {
        Self::parse(EMBEDDED)
    }

    pub fn numerical_b0(&self, dimension: u32) -> Option<&ApproxEntry> {
        self.numerical_b0.iter().find(|e| e.dimension == dimension)
    }

    pub fn vpt_b0(&self, dimension: u32) -> Option<&ApproxEntry> {
        self.vpt_b0.iter().find(|e| e.dimension == dimension)
    }

    pub fn convergence_law(&self, dimension: u32) -> Option<&ConvergenceLawEntry> {
        self.convergence_law.iter().find(|e| e.dimension == dimension)
    }

    pub fn large_d(&self, k: usize) -> Option<&LargeDEntry> {
        self.large_d.iter().find(|e| e.k == k)
    }
}
