//! Weighted Bergman kernels of order `d` and the induced Narasimhan–Simha
//! type metrics on explicit model domains in `C^n`.
//!
//! The pipeline: kernel models (closed forms for the ball, polydisc and
//! diagonal ball, or truncated monomial series with certified tails for
//! Reinhardt domains) feed an exact log-kernel jet, from which metric
//! tensors, curvatures, extremal minimum integrals and boundary-asymptotic
//! experiments are assembled.

pub mod core;
pub mod error;
pub mod experiments;
pub mod extremal;
pub mod geometry;
pub mod kernel;
pub mod metric;
pub mod quad;

pub use crate::core::{
    boundary_frame, enumerate_multiindices, levi_form, log_gamma, BoundaryFrame, CPoint,
    DomainSpec, MultiIndex, C64,
};
pub use error::{Error, Result};
pub use kernel::{build_model, closed_kernel, kernel_eval, kernel_jet, KernelModel, KernelValue};
