//! Exact computer algebra: sparse multivariate polynomials over the integers and the
//! rationals, rational functions, Sylvester resultants and triangular-set resultants.

mod coeff;
pub mod gcd;
mod monomial;
mod parse;
mod poly;
mod rational_function;
mod resultant;

use thiserror::Error;

pub use coeff::{int, rat, rational_to_f64, Coeff};
pub use monomial::{Monomial, Var, NVARS};
pub use poly::{MPoly, Poly, ZPoly};
pub use rational_function::{implicit_derivative, RationalFunction};
pub use resultant::{
    bareiss_det, res_triangular, sylvester_matrix, sylvester_resultant, sylvester_resultant_int,
    TriangularSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("variable {0} missing from assignment")]
    MissingVariable(Var),
    #[error("resultant undefined for two constants")]
    ConstantResultant,
    #[error("resultant of the zero polynomial")]
    ZeroPolynomial,
    #[error("H vanishes on the triangular variety")]
    VanishesOnVariety,
    #[error("not a triangular set: {0}")]
    NotTriangular(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

/// `p / q`, or `Ok(None)` when `q` does not divide `p`.
pub fn exact_divide(p: &MPoly, q: &MPoly) -> Result<Option<MPoly>, SymError> {
    p.div_exact(q)
}
