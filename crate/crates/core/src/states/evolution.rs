//! Time evolution, both as a label shift and as a coefficientwise phase.
//!
//! The running discrete index of energy E_k picks up e^{−iE_k t/ħ}. In shifted
//! mode that moves the running phase label by ω_c t; in unshifted mode, where
//! the phases are e^{−iE_kγ}, it moves it by t/ħ. The continuous sample at ε
//! picks up e^{−iω_c ε t}, and the continuous sector as a whole e^{−iΩt/ħ}, so
//! that β moves to β + Ωt/ħ.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::combined::{CombinedCS, StateVector};
use super::continuous::{build_continuous_cs_with_norm, ContinuousCS};
use super::discrete::{Construction, DiscreteCS};
use crate::error::{Error, Result};
use crate::model::{discrete_energy, PhysicalParams, SpectrumMode};

fn check_kappa(cs: &DiscreteCS, p: &PhysicalParams) -> Result<()> {
    let rel = (cs.kappa() - p.kappa).abs() / p.kappa;
    if rel > 1e-14 {
        return Err(Error::Incompatible(format!(
            "state built with kappa = {} but parameters give {}",
            cs.kappa(),
            p.kappa
        )));
    }
    Ok(())
}

/// How far the running phase label moves per unit time.
pub fn discrete_label_rate(mode: SpectrumMode, p: &PhysicalParams) -> f64 {
    match mode {
        SpectrumMode::Shifted => p.omega_c,
        SpectrumMode::Unshifted => 1.0 / p.hbar,
    }
}

impl DiscreteCS {
    pub fn label_shifted(&self, t: f64, p: &PhysicalParams) -> Result<DiscreteCS> {
        check_kappa(self, p)?;
        let shift = discrete_label_rate(self.mode(), p) * t;
        let mut labels = self.labels();
        match self.construction() {
            Construction::FixedL => labels.gamma += shift,
            Construction::FixedN => labels.gamma_prime += shift,
        }
        self.rebuild(labels)
    }

    pub fn phase_evolved(&self, t: f64, p: &PhysicalParams) -> Result<DiscreteCS> {
        check_kappa(self, p)?;
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            let e = discrete_energy(self.mode(), k as u32, p);
            *c *= Complex64::from_polar(1.0, -e * t / p.hbar);
        }
        Ok(out)
    }
}

impl ContinuousCS {
    pub fn label_shifted(&self, t: f64, p: &PhysicalParams) -> Result<ContinuousCS> {
        let theta = self.theta() - self.phase().sign() * p.omega_c * t;
        build_continuous_cs_with_norm(self.k(), theta, self.rho(), self.grid(), self.phase(), self.n_rho())
    }

    pub fn phase_evolved(&self, t: f64, p: &PhysicalParams) -> ContinuousCS {
        let mut out = self.clone();
        for (c, &e) in out.values.iter_mut().zip(self.grid.nodes()) {
            *c *= Complex64::from_polar(1.0, -p.omega_c * e * t);
        }
        out
    }
}

/// The evolved state written through its labels: γ (or γ′), θ and β move; the
/// envelope values f and g keep the values of the initial labels.
pub fn time_evolve(cs: &CombinedCS, t: f64, omega: f64, p: &PhysicalParams) -> Result<CombinedCS> {
    let discrete = cs.discrete().label_shifted(t, p)?;
    let continuous = cs.continuous().label_shifted(t, p)?;
    let beta = (cs.beta() + omega * t / p.hbar).rem_euclid(2.0 * PI);
    let beta = if beta >= 2.0 * PI { 0.0 } else { beta };
    CombinedCS::from_parts(discrete, continuous, beta, cs.f_value(), cs.g_value())
}

/// Amplitudes of e^{−iHt}|cs⟩ computed by multiplying each coefficient by its phase.
pub fn evolve_amplitudes(cs: &CombinedCS, t: f64, omega: f64, p: &PhysicalParams) -> Result<StateVector> {
    let d = cs.discrete().phase_evolved(t, p)?;
    let c = cs.continuous().phase_evolved(t, p);
    let sector = Complex64::from_polar(1.0, -omega * t / p.hbar);
    let cg = Complex64::from_polar(cs.g_value(), -cs.beta()) * sector;
    Ok(StateVector {
        discrete: d.coeffs().iter().map(|x| x * cs.f_value()).collect(),
        continuous: c.values().iter().map(|x| x * cg).collect(),
    })
}

/// Default Ω = κ(N + 1), an upper bound for the discrete energies kept at cutoff N.
pub fn default_omega(cutoff: usize, p: &PhysicalParams) -> f64 {
    p.kappa * (cutoff as f64 + 1.0)
}
