//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("ambiguous nearest boundary point: {0}")]
    Ambiguity(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge on cell [{lo}, {hi}] (local estimate {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },

    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("pole of the Cayley transform at z_n = 1")]
    CayleyPole,

    #[error("not strongly pseudoconvex: {0}")]
    NotStronglyPseudoconvex(String),

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("evaluation outside the certified radius: {0}")]
    Uncertified(String),

    #[error("model format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
