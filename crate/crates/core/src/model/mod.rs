//! Physical parameters, spectra and truncated-basis operators.

mod operators;
mod params;
mod spectrum;

pub use operators::{
    canonical_pair, ladder_matrix, on_first_factor, on_second_factor, osc_hamiltonian_ladder_form,
    osc_hamiltonian_matrix, osc_hamiltonian_quadrature_form, quadratures, ComplexMatrix, LadderKind,
};
pub use params::{derive_params, GaugeChoice, ParamInputs, PhysicalParams, SpectrumMode, TruncatedBasis};
pub use spectrum::{alpha_bound, continuous_energy, discrete_energy, epsilon_of_alpha, phi_alpha, tensor_energy};
