//! Discrete (Landau) and continuous (drift) spectra and the plane eigenfunctions.

use num_complex::Complex64;

use super::params::{GaugeChoice, PhysicalParams, SpectrumMode};
use crate::error::{Error, Result};

/// Landau level energy: κn when shifted, κ(n + ½) otherwise.
pub fn discrete_energy(mode: SpectrumMode, n: u32, p: &PhysicalParams) -> f64 {
    match mode {
        SpectrumMode::Shifted => p.kappa * n as f64,
        SpectrumMode::Unshifted => p.kappa * (n as f64 + 0.5),
    }
}

/// ε_α = λα/(mω_c), plus λ²/(2mħω_c) in the unshifted case.
///
/// Continuous coherent states are labelled by ε⁻ = −ε_α ≥ 0.
pub fn epsilon_of_alpha(mode: SpectrumMode, alpha: f64, p: &PhysicalParams) -> f64 {
    let linear = p.lambda * alpha / (p.m * p.omega_c);
    match mode {
        SpectrumMode::Shifted => linear,
        SpectrumMode::Unshifted => linear + p.lambda * p.lambda / (2.0 * p.m * p.hbar * p.omega_c),
    }
}

/// Energy carried by the continuous sector, ħω_c ε⁻ = −κ ε_α.
pub fn continuous_energy(mode: SpectrumMode, alpha: f64, p: &PhysicalParams) -> f64 {
    -p.kappa * epsilon_of_alpha(mode, alpha, p)
}

/// Largest α with a non-negative continuous energy.
///
/// In the unshifted case the bound −λ/(2ħ) collapses to zero when λ = 0; that
/// is reported as an error rather than returned.
pub fn alpha_bound(mode: SpectrumMode, p: &PhysicalParams) -> Result<f64> {
    match mode {
        SpectrumMode::Shifted => Ok(0.0),
        SpectrumMode::Unshifted => {
            if p.lambda == 0.0 {
                Err(Error::Degenerate(
                    "alpha_bound: lambda = 0 (no electric field) makes the unshifted bound meaningless".into(),
                ))
            } else {
                Ok(-p.lambda / (2.0 * p.hbar))
            }
        }
    }
}

/// Eigenvalues of the two commuting oscillators on |n, l⟩.
pub fn tensor_energy(n: u32, l: u32, p: &PhysicalParams) -> (f64, f64) {
    (p.kappa * (n as f64 + 0.5), p.kappa * (l as f64 + 0.5))
}

/// Plane eigenfunction of the drift operator:
/// gauge 1 gives e^{i(αx + mω_c xy/2ħ)}, gauge 2 gives e^{i(αy + mω_c xy/2ħ)}.
pub fn phi_alpha(gauge: GaugeChoice, alpha: f64, x: f64, y: f64, p: &PhysicalParams) -> Complex64 {
    let linear = match gauge {
        GaugeChoice::Gauge1 => alpha * x,
        GaugeChoice::Gauge2 => alpha * y,
    };
    Complex64::from_polar(1.0, linear + p.xy_phase_coeff() * x * y)
}
