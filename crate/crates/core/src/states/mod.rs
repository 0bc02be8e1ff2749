//! Discrete, continuous and combined coherent states.
//!
//! Phase conventions: the running discrete index carries e^{−iω_kγ}, the fixed
//! index e^{+iω_fγ_f}, and continuous samples e^{−iεθ} unless
//! [`ContinuousPhase::Positive`] is selected.

mod combined;
mod continuous;
mod discrete;
mod evolution;
mod export;
mod grid;
mod measure;
mod rho;

pub use combined::{
    build_combined_cs, continuous_envelope_integral, discrete_envelope_integral, CombinedCS, Envelopes, NormCache,
    StateVector,
};
pub use continuous::{build_continuous_cs, build_continuous_cs_with_norm, ContinuousCS, ContinuousPhase};
pub use discrete::{
    build_discrete_cs, build_discrete_cs_with, phase_frequency, Construction, Cutoff, DiscreteCS, DiscreteLabels,
    DEFAULT_TAIL_THRESHOLD,
};
pub use evolution::{default_omega, discrete_label_rate, evolve_amplitudes, time_evolve};
pub use export::{from_json, to_json, GridDocument, StateDocument, StateLabels};
pub use grid::{find_eps_max, norm_const_continuous, EpsilonGrid, GridKind, GridSpec};
pub use measure::DiscreteMeasure;
pub use rho::{
    discrete_tail_bound, ln_norm_const_discrete, ln_rho_discrete, ln_series_term, norm_const_continuous_exact,
    norm_const_discrete, norm_const_discrete_partial, required_cutoff, rho_discrete, rho_step, PartialSum,
    RhoContinuous,
};
