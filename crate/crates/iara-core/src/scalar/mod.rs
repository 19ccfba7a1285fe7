//! Exact scalar arithmetic: arbitrary-precision rationals and the
//! cyclotomic fields Q(zeta_m). Everything downstream works over these, so
//! every identity is checked with zero tolerance.

pub(crate) mod poly;

mod cyclotomic;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar: {0:?}")]
    Parse(String),
}
