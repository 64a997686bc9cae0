//! Shared domain model: multiindices, complex points, domain specifications,
//! defining-function jets, boundary geometry and special functions.

mod boundary;
pub(crate) mod domain;
mod multiindex;
mod special;

pub use boundary::{
    boundary_frame, frame_for, frame_for_with_guess, nearest_boundary_point,
    nearest_boundary_point_from, BoundaryFrame, RealDefiningFn,
};
pub use domain::{levi_form, CPoint, DomainSpec, RhoJets, RhoPoly, C64};
pub use multiindex::{count_multiindices, enumerate_multiindices, MultiIndex};
pub use special::{log_binomial, log_gamma};
