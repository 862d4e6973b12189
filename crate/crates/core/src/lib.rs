//! Exact arithmetic for Reid–Tai type singularity estimates on ball
//! quotients: quadratic fields, cyclotomic splitting, age sums, case
//! analyses, and cusp boundary computations.

pub mod cycfield;
pub mod claims;
pub mod cli;
pub mod cusp;
pub mod cyclo;
pub mod error;
pub mod qfield;
pub mod reidtai;

pub use error::{Error, Result};
pub use qfield::{QElem, QMatrix, QuadField, Rational};
