//! Continuous-sector states sampled on an ε-grid:
//! c(ε) = N_ρ(K)^{−1/2} K^{ε/2} e^{∓iεθ} / √ρ(ε).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{norm_const_continuous, EpsilonGrid};
use super::rho::{check_k, RhoContinuous};
use crate::error::{Error, Result};

/// Sign of the θ phase. `Negative` (default) gives e^{−iεθ}, so time evolution
/// moves θ forward; `Positive` gives e^{+iεθ} and moves θ backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuousPhase {
    #[default]
    Negative,
    Positive,
}

impl ContinuousPhase {
    pub fn sign(&self) -> f64 {
        match self {
            ContinuousPhase::Negative => -1.0,
            ContinuousPhase::Positive => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousCS {
    pub(crate) k: f64,
    pub(crate) theta: f64,
    pub(crate) rho: RhoContinuous,
    pub(crate) phase: ContinuousPhase,
    pub(crate) n_rho: f64,
    pub(crate) grid: EpsilonGrid,
    pub(crate) values: Vec<Complex64>,
}

pub fn build_continuous_cs(
    k: f64,
    theta: f64,
    rho: RhoContinuous,
    grid: &EpsilonGrid,
    phase: ContinuousPhase,
) -> Result<ContinuousCS> {
    let n_rho = norm_const_continuous(k, rho, grid)?;
    build_continuous_cs_with_norm(k, theta, rho, grid, phase, n_rho)
}

/// Same as [`build_continuous_cs`] with N_ρ(K) supplied, e.g. from a cache.
pub fn build_continuous_cs_with_norm(
    k: f64,
    theta: f64,
    rho: RhoContinuous,
    grid: &EpsilonGrid,
    phase: ContinuousPhase,
    n_rho: f64,
) -> Result<ContinuousCS> {
    check_k("build_continuous_cs", k)?;
    if !theta.is_finite() {
        return Err(Error::domain(
            "build_continuous_cs",
            format!("theta = {theta} must be finite"),
        ));
    }
    if !(n_rho > 0.0) || !n_rho.is_finite() {
        return Err(Error::domain(
            "build_continuous_cs",
            format!("N_rho = {n_rho} must be positive"),
        ));
    }
    let ln_n = n_rho.ln();
    let s = phase.sign();
    let values = grid
        .nodes()
        .iter()
        .map(|&e| {
            let modulus = (0.5 * (rho.ln_density(k, e) - ln_n)).exp();
            Complex64::from_polar(modulus, s * e * theta)
        })
        .collect();
    Ok(ContinuousCS {
        k,
        theta,
        rho,
        phase,
        n_rho,
        grid: grid.clone(),
        values,
    })
}

impl ContinuousCS {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho(&self) -> RhoContinuous {
        self.rho
    }

    pub fn phase(&self) -> ContinuousPhase {
        self.phase
    }

    pub fn n_rho(&self) -> f64 {
        self.n_rho
    }

    pub fn grid(&self) -> &EpsilonGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Σ wᵢ |c(εᵢ)|².
    pub fn norm_sqr(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(c, w)| w * c.norm_sqr())
            .sum()
    }

    pub fn rebuild(&self, k: f64, theta: f64) -> Result<ContinuousCS> {
        build_continuous_cs(k, theta, self.rho, &self.grid, self.phase)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rho != other.rho || self.grid != other.grid {
            return Err(Error::Incompatible(
                "continuous states live on different grids or rho-weights".into(),
            ));
        }
        Ok(())
    }

    /// ⟨self|other⟩ by the grid quadrature.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((a, b), w)| a.conj() * b * *w)
            .sum())
    }

    pub fn distance_sqr(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((a, b), w)| w * (a - b).norm_sqr())
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::grid::GridSpec;
    use approx::assert_relative_eq;

    const R: RhoContinuous = RhoContinuous::Gamma;

    fn grid(k: f64) -> EpsilonGrid {
        EpsilonGrid::for_k(k, R, &GridSpec::default()).unwrap()
    }

    #[test]
    fn unit_quadrature_norm() {
        for k in [0.1, 0.5, 1.0, 2.5, 5.0] {
            let cs = build_continuous_cs(k, 0.7, R, &grid(k), ContinuousPhase::Negative).unwrap();
            assert!((cs.norm_sqr() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn modulus_ignores_theta() {
        let g = grid(2.0);
        let a = build_continuous_cs(2.0, 0.0, R, &g, ContinuousPhase::Negative).unwrap();
        let b = build_continuous_cs(2.0, 3.1, R, &g, ContinuousPhase::Positive).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x.norm() - y.norm()).abs() <= 1e-15 * x.norm().max(1e-300));
        }
    }

    #[test]
    fn unit_k_profile() {
        let g = grid(1.0);
        let cs = build_continuous_cs(1.0, 0.4, R, &g, ContinuousPhase::Negative).unwrap();
        for (&e, c) in g.nodes().iter().zip(cs.values()).step_by(97) {
            let want = 1.0 / (crate::specfun::gamma(e + 1.0).unwrap() * cs.n_rho());
            assert_relative_eq!(c.norm_sqr(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn phase_sign() {
        let g = grid(1.0);
        let cs = build_continuous_cs(1.0, 0.4, R, &g, ContinuousPhase::Negative).unwrap();
        let i = 500;
        let e = g.nodes()[i];
        let want = Complex64::from_polar(cs.values()[i].norm(), -e * 0.4);
        assert!((cs.values()[i] - want).norm() < 1e-15);
    }

    #[test]
    fn overlap_properties() {
        let g = grid(3.0);
        let a = build_continuous_cs(1.0, 0.3, R, &g, ContinuousPhase::Negative).unwrap();
        let b = build_continuous_cs(2.0, -0.5, R, &g, ContinuousPhase::Negative).unwrap();
        let ab = a.overlap(&b).unwrap();
        assert!((ab - b.overlap(&a).unwrap().conj()).norm() < 1e-15);
        assert!(ab.norm() < 1.0);
        let other = grid(1.0);
        let c = build_continuous_cs(1.0, 0.3, R, &other, ContinuousPhase::Negative).unwrap();
        assert!(matches!(a.overlap(&c), Err(Error::Incompatible(_))));
    }

    #[test]
    fn rejects_bad_labels() {
        let g = grid(1.0);
        assert!(build_continuous_cs(0.0, 0.0, R, &g, ContinuousPhase::Negative).is_err());
        assert!(build_continuous_cs(1.0, f64::NAN, R, &g, ContinuousPhase::Negative).is_err());
    }
}
