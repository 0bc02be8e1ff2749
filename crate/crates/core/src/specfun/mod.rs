//! Special functions and quadrature shared by the rest of the crate.
//!
//! Everything here is a pure function of its arguments.

mod gamma;
mod hyp1f1;
mod laguerre;
mod quadrature;

pub use gamma::{gamma, ln_factorial, ln_gamma, ln_pochhammer, pochhammer, sqrt_pi};
pub use hyp1f1::{hyp1f1_1_eta, hyp1f1_asymptotic, hyp1f1_series, ln_hyp1f1_1_eta, SERIES_LIMIT};
pub use laguerre::{laguerre, laguerre_at_zero};
pub use quadrature::{
    gauss_legendre, integrate_interval, integrate_semiaxis, integrate_semiaxis_detailed, AdaptiveConfig, Estimate,
    QuadratureRule, RuleKind, SemiAxisIntegrand, MAX_GAUSS_LAGUERRE_ORDER,
};

pub(crate) use gamma::ln_gamma_unchecked;
