//! Computable models of the weighted kernels `K_{D,d}`: exact closed forms,
//! moment-table series models, term-wise derivatives and the
//! homogeneous-domain constant.

mod closed;
mod model;
mod moments;
mod selberg;

pub use closed::{closed_kernel, log_weight_constant, weight_constant};
pub use model::{build_model, build_model_with, kernel_eval, kernel_jet, KernelJet, KernelModel, KernelValue};
pub use moments::{ball_log_moment, ball_moment, diagonal_log_moment, polydisc_log_moment, shadow_moment, ShadowWeight, UnitWeight};
pub use selberg::selberg_constant;
