pub mod convergence;
pub mod dpoly;
pub mod effpot;
pub mod error;
pub mod imaginary_time;
pub mod large_d;
pub mod perturbation;
pub mod precision;
pub mod radial;
pub mod reference;
pub mod roots;
pub mod vpt;
pub mod series;

pub use error::{Error, Result};
pub use precision::{BigReal, Precision, RationalScalar};
