//! Weights dν(J) solving the discrete moment problem ∫ Jⁿ dν(J) = ρ(n).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SpectrumMode;
use crate::specfun::{ln_gamma_unchecked, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscreteMeasure {
    /// dν = e^{−J} dJ, for ρ(n) = n!.
    Exp,
    /// dν = J^{1/2} e^{−J/κ} / (κ^{3/2} Γ(3/2)) dJ, for ρ(n) = κⁿ (3/2)ₙ.
    Gamma32,
}

impl DiscreteMeasure {
    pub fn for_mode(mode: SpectrumMode) -> Self {
        match mode {
            SpectrumMode::Shifted => DiscreteMeasure::Exp,
            SpectrumMode::Unshifted => DiscreteMeasure::Gamma32,
        }
    }

    /// The mode whose ρ-weights this measure reproduces.
    pub fn mode(&self) -> SpectrumMode {
        match self {
            DiscreteMeasure::Exp => SpectrumMode::Shifted,
            DiscreteMeasure::Gamma32 => SpectrumMode::Unshifted,
        }
    }

    /// Density of dν with respect to dJ.
    pub fn density(&self, j: f64, kappa: f64) -> f64 {
        if j < 0.0 {
            return 0.0;
        }
        match self {
            DiscreteMeasure::Exp => (-j).exp(),
            DiscreteMeasure::Gamma32 => {
                let ln = 0.5 * j.ln() - j / kappa - 1.5 * kappa.ln() - ln_gamma_unchecked(1.5);
                ln.exp()
            }
        }
    }

    /// Gauss rule with ∫ f dν ≈ Σ wᵢ f(Jᵢ), exact for polynomials of degree < 2·order.
    pub fn gauss_rule(&self, order: usize, kappa: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if !(kappa > 0.0) {
            return Err(Error::domain(
                "DiscreteMeasure",
                format!("kappa = {kappa} must be positive"),
            ));
        }
        match self {
            DiscreteMeasure::Exp => {
                let r = QuadratureRule::gauss_laguerre(order, 0.0)?;
                Ok((r.nodes().to_vec(), r.weights().to_vec()))
            }
            DiscreteMeasure::Gamma32 => {
                let r = QuadratureRule::gauss_laguerre(order, 0.5)?;
                let norm = ln_gamma_unchecked(1.5).exp();
                let nodes = r.nodes().iter().map(|x| kappa * x).collect();
                let weights = r.weights().iter().map(|w| w / norm).collect();
                Ok((nodes, weights))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_semiaxis, SemiAxisIntegrand};
    use crate::states::rho::rho_discrete;

    #[test]
    fn rules_reproduce_rho() {
        for kappa in [0.5, 1.0, 2.0] {
            for m in [DiscreteMeasure::Exp, DiscreteMeasure::Gamma32] {
                let (x, w) = m.gauss_rule(48, kappa).unwrap();
                for n in 0..40u32 {
                    let moment: f64 = x.iter().zip(&w).map(|(j, w)| w * j.powi(n as i32)).sum();
                    let want = rho_discrete(m.mode(), n, kappa).unwrap();
                    assert!((moment / want - 1.0).abs() < 1e-11, "{m:?} {kappa} {n}");
                }
            }
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        for kappa in [0.5, 2.0] {
            for m in [DiscreteMeasure::Exp, DiscreteMeasure::Gamma32] {
                let f = |j: f64| m.density(j, kappa);
                let total = integrate_semiaxis(SemiAxisIntegrand::General(&f), 1e-12).unwrap();
                assert!((total - 1.0).abs() < 1e-10);
            }
        }
    }
}
