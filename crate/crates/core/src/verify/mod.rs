//! Numerical certificates for the defining properties of the states.
//!
//! Every check is deterministic and returns [`VerificationReport`]s whose
//! `pass` flag is `residual ≤ tolerance`. Tolerances live in [`Tolerances`].

mod algebra;
mod crossterm;
mod dynamics;
mod laguerre;
mod moments;
mod report;
mod resolution;
mod suite;

pub use algebra::{check_commutators, DEFAULT_TENSOR_DIM};
pub use crossterm::{check_cross_term, CrossTermConfig};
pub use dynamics::{build_state_at, check_continuity, check_temporal_stability, CombinedLabels, ContinuityConfig};
pub use laguerre::{
    check_laguerre_grid, check_laguerre_identity, laguerre_grid, laguerre_sides, LaguerreCase, LaguerreForm,
};
pub use moments::{
    check_hyp1f1, check_moment_discrete, check_poisson, laguerre_weighted_density, MomentMeasure, DEFAULT_MOMENT_ORDER,
};
pub use report::{Tolerances, VerificationReport};
pub use resolution::{
    check_resolution_continuous, check_resolution_discrete, continuous_kernel_factor, continuous_window_residuals,
    window_kernel, ContinuousResolutionConfig, DiscreteResolutionConfig, LReduction, RESOLUTION_FLOOR,
};
pub use suite::{run_group, run_suite, CheckGroup, LaguerreMeasureParams, SuiteConfig, SuiteSettings};
