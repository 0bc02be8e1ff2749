//! Combined states f(K,θ)|D⟩ + e^{−iβ} g(J,J′)|C⟩ and their envelopes.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::continuous::{build_continuous_cs_with_norm, ContinuousCS, ContinuousPhase};
use super::discrete::DiscreteCS;
use super::grid::{norm_const_continuous, EpsilonGrid};
use super::measure::DiscreteMeasure;
use super::rho::{norm_const_continuous_exact, norm_const_discrete, RhoContinuous};
use crate::error::{Error, Result};
use crate::specfun::{integrate_semiaxis, sqrt_pi, SemiAxisIntegrand};

/// ∫₀^∞ e^{−J²} N(J) dν(J). The Bohr averages over γ, γ′ contribute 1.
pub fn discrete_envelope_integral(measure: DiscreteMeasure, kappa: f64, tol: f64) -> Result<f64> {
    let mode = measure.mode();
    let failure = RefCell::new(None);
    let f = |j: f64| {
        if j > 40.0 {
            return 0.0;
        }
        match norm_const_discrete(mode, j, kappa) {
            Ok(n) => (-j * j).exp() * n * measure.density(j, kappa),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let v = integrate_semiaxis(SemiAxisIntegrand::General(&f), tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    v
}

/// ∫_ℝ ∫₀^∞ e^{−(K²+θ²)} N_ρ(K) σ(K) dK dθ/2π, with the θ integral done in closed form.
pub fn continuous_envelope_integral(rho: RhoContinuous, tol: f64) -> Result<f64> {
    let failure = RefCell::new(None);
    let f = |k: f64| {
        if k <= 0.0 || k > 40.0 {
            return 0.0;
        }
        match norm_const_continuous_exact(k, rho, 1e-13) {
            Ok(n) => n * rho.sigma(k) * (-k * k).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let v = integrate_semiaxis(SemiAxisIntegrand::General(&f), tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(v? * sqrt_pi() / (2.0 * PI))
}

/// Normalizers of f = N_f e^{−(K²+θ²)/2} and g = N_g e^{−(J²+J′²)/2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelopes {
    pub n_f: f64,
    pub n_g: f64,
}

impl Envelopes {
    pub fn compute(measure: DiscreteMeasure, kappa: f64, rho: RhoContinuous, tol: f64) -> Result<Self> {
        let d = discrete_envelope_integral(measure, kappa, tol)?;
        let c = continuous_envelope_integral(rho, tol)?;
        Ok(Self {
            n_f: 1.0 / c.sqrt(),
            n_g: 1.0 / d,
        })
    }

    pub fn f(&self, k: f64, theta: f64) -> f64 {
        self.n_f * (-(k * k + theta * theta) / 2.0).exp()
    }

    pub fn g(&self, j: f64, j_prime: f64) -> f64 {
        self.n_g * (-(j * j + j_prime * j_prime) / 2.0).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedCS {
    pub(crate) discrete: DiscreteCS,
    pub(crate) continuous: ContinuousCS,
    pub(crate) beta: f64,
    pub(crate) f_value: f64,
    pub(crate) g_value: f64,
}

pub fn build_combined_cs(
    discrete: DiscreteCS,
    continuous: ContinuousCS,
    beta: f64,
    envelopes: &Envelopes,
) -> Result<CombinedCS> {
    let labels = discrete.labels();
    let f_value = envelopes.f(continuous.k(), continuous.theta());
    let g_value = envelopes.g(labels.j, labels.j_prime);
    CombinedCS::from_parts(discrete, continuous, beta, f_value, g_value)
}

/// Amplitudes of a combined state: f·c_k on the discrete sector, e^{−iβ}g·c(εᵢ) on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub discrete: Vec<Complex64>,
    pub continuous: Vec<Complex64>,
}

impl StateVector {
    /// Largest entrywise |a − b| over both sectors, zero-padding the discrete part.
    pub fn max_abs_deviation(&self, other: &StateVector) -> Result<f64> {
        if self.continuous.len() != other.continuous.len() {
            return Err(Error::Incompatible("continuous sectors have different lengths".into()));
        }
        let zero = Complex64::new(0.0, 0.0);
        let n = self.discrete.len().max(other.discrete.len());
        let d = (0..n)
            .map(|k| {
                let a = self.discrete.get(k).copied().unwrap_or(zero);
                let b = other.discrete.get(k).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max);
        let c = self
            .continuous
            .iter()
            .zip(&other.continuous)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(d.max(c))
    }
}

impl CombinedCS {
    pub fn from_parts(
        discrete: DiscreteCS,
        continuous: ContinuousCS,
        beta: f64,
        f_value: f64,
        g_value: f64,
    ) -> Result<Self> {
        if !(0.0..2.0 * PI).contains(&beta) {
            return Err(Error::domain(
                "build_combined_cs",
                format!("beta = {beta} must lie in [0, 2π)"),
            ));
        }
        for (name, v) in [("f", f_value), ("g", g_value)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(
                    "build_combined_cs",
                    format!("envelope {name} = {v} must be finite and >= 0"),
                ));
            }
        }
        Ok(Self {
            discrete,
            continuous,
            beta,
            f_value,
            g_value,
        })
    }

    pub fn discrete(&self) -> &DiscreteCS {
        &self.discrete
    }

    pub fn continuous(&self) -> &ContinuousCS {
        &self.continuous
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn f_value(&self) -> f64 {
        self.f_value
    }

    pub fn g_value(&self) -> f64 {
        self.g_value
    }

    /// f²‖D‖² + g²‖C‖²; the sectors are orthogonal.
    pub fn norm_sqr(&self) -> f64 {
        self.f_value.powi(2) * self.discrete.norm_sqr() + self.g_value.powi(2) * self.continuous.norm_sqr()
    }

    pub fn amplitudes(&self) -> StateVector {
        let f = self.f_value;
        let cg = Complex64::from_polar(self.g_value, -self.beta);
        StateVector {
            discrete: self.discrete.coeffs().iter().map(|c| c * f).collect(),
            continuous: self.continuous.values().iter().map(|c| c * cg).collect(),
        }
    }

    /// f f′⟨D|D′⟩ + g g′ e^{i(β−β′)}⟨C|C′⟩.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        let d = self.discrete.overlap(&other.discrete)?;
        let c = self.continuous.overlap(&other.continuous)?;
        Ok(d * (self.f_value * other.f_value)
            + c * Complex64::from_polar(self.g_value * other.g_value, self.beta - other.beta))
    }

    /// ‖self − other‖².
    pub fn distance_sqr(&self, other: &Self) -> Result<f64> {
        self.discrete.check_compatible(&other.discrete)?;
        self.continuous.check_compatible(&other.continuous)?;
        let a = self.amplitudes();
        let b = other.amplitudes();
        let zero = Complex64::new(0.0, 0.0);
        let n = a.discrete.len().max(b.discrete.len());
        let d: f64 = (0..n)
            .map(|k| {
                let x = a.discrete.get(k).copied().unwrap_or(zero);
                let y = b.discrete.get(k).copied().unwrap_or(zero);
                (x - y).norm_sqr()
            })
            .sum();
        let c: f64 = a
            .continuous
            .iter()
            .zip(&b.continuous)
            .zip(self.continuous.grid().weights())
            .map(|((x, y), w)| w * (x - y).norm_sqr())
            .sum();
        Ok(d + c)
    }
}

/// Read-only table of N_ρ(K) on one grid, filled before any parallel work.
#[derive(Debug, Clone)]
pub struct NormCache {
    rho: RhoContinuous,
    grid: EpsilonGrid,
    values: BTreeMap<u64, f64>,
}

impl NormCache {
    pub fn build(ks: &[f64], rho: RhoContinuous, grid: &EpsilonGrid) -> Result<Self> {
        let mut values = BTreeMap::new();
        for &k in ks {
            if let std::collections::btree_map::Entry::Vacant(e) = values.entry(k.to_bits()) {
                e.insert(norm_const_continuous(k, rho, grid)?);
            }
        }
        Ok(Self {
            rho,
            grid: grid.clone(),
            values,
        })
    }

    pub fn get(&self, k: f64) -> Option<f64> {
        self.values.get(&k.to_bits()).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grid(&self) -> &EpsilonGrid {
        &self.grid
    }

    pub fn continuous_cs(&self, k: f64, theta: f64, phase: ContinuousPhase) -> Result<ContinuousCS> {
        let n = self
            .get(k)
            .ok_or_else(|| Error::domain("NormCache", format!("K = {k} was not precomputed")))?;
        build_continuous_cs_with_norm(k, theta, self.rho, &self.grid, phase, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpectrumMode;
    use crate::specfun::{integrate_interval, AdaptiveConfig};
    use crate::states::continuous::build_continuous_cs;
    use crate::states::discrete::{build_discrete_cs, Construction, Cutoff, DiscreteLabels};
    use crate::states::grid::GridSpec;
    use approx::assert_relative_eq;

    const R: RhoContinuous = RhoContinuous::Gamma;

    #[allow(clippy::too_many_arguments)]
    fn sample(
        mode: SpectrumMode,
        j: f64,
        jp: f64,
        k: f64,
        theta: f64,
        beta: f64,
        env: &Envelopes,
        grid: &EpsilonGrid,
    ) -> CombinedCS {
        let d = build_discrete_cs(
            mode,
            DiscreteLabels::new(j, 0.3, jp, -0.2),
            Construction::FixedL,
            1,
            Cutoff::Auto,
            1.0,
        )
        .unwrap();
        let c = build_continuous_cs(k, theta, R, grid, ContinuousPhase::Negative).unwrap();
        build_combined_cs(d, c, beta, env).unwrap()
    }

    #[test]
    fn shifted_discrete_normalizer_is_closed_form() {
        let v = discrete_envelope_integral(DiscreteMeasure::Exp, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v, sqrt_pi() / 2.0, max_relative = 1e-11);
        let env = Envelopes::compute(DiscreteMeasure::Exp, 1.0, R, 1e-11).unwrap();
        assert_relative_eq!(env.n_g, 2.0 / sqrt_pi(), max_relative = 1e-11);
    }

    #[test]
    fn envelope_conditions_hold() {
        for (measure, kappa) in [
            (DiscreteMeasure::Exp, 1.0),
            (DiscreteMeasure::Gamma32, 1.0),
            (DiscreteMeasure::Gamma32, 2.0),
        ] {
            let env = Envelopes::compute(measure, kappa, R, 1e-11).unwrap();
            // ∫∫|g|² N(J)N(J′) dν dν′ computed as a two-dimensional product of one-dimensional quadratures.
            let inner = |j: f64| {
                (-j * j).exp() * norm_const_discrete(measure.mode(), j, kappa).unwrap() * measure.density(j, kappa)
            };
            let one = integrate_interval(&inner, 0.0, 12.0, 1e-12, AdaptiveConfig::default())
                .unwrap()
                .value;
            assert!((env.n_g * env.n_g * one * one - 1.0).abs() < 1e-8);
            // ∫∫|f|² dμ_C with the θ integral by quadrature this time.
            let theta = integrate_interval(&|t: f64| (-t * t).exp(), -12.0, 12.0, 1e-13, AdaptiveConfig::default())
                .unwrap()
                .value;
            let kpart = |k: f64| {
                if k == 0.0 {
                    return 0.0;
                }
                norm_const_continuous_exact(k, R, 1e-13).unwrap() * (-k).exp() * (-k * k).exp()
            };
            let kv = integrate_interval(&kpart, 0.0, 9.0, 1e-11, AdaptiveConfig::default())
                .unwrap()
                .value;
            assert!((env.n_f * env.n_f * kv * theta / (2.0 * PI) - 1.0).abs() < 1e-8);
            assert_relative_eq!(env.f(0.0, 0.0), env.n_f);
            assert_eq!(env.g(0.3, 1.7), env.g(1.7, 0.3));
        }
    }

    #[test]
    fn norm_is_additive_and_beta_blind() {
        let env = Envelopes { n_f: 1.3, n_g: 0.9 };
        let grid = EpsilonGrid::for_k(2.0, R, &GridSpec::default()).unwrap();
        let a = sample(SpectrumMode::Shifted, 1.0, 0.5, 1.2, 0.3, 0.0, &env, &grid);
        let b = sample(SpectrumMode::Shifted, 1.0, 0.5, 1.2, 0.3, 4.0, &env, &grid);
        let direct = a.overlap(&a).unwrap();
        assert!((direct.re - a.norm_sqr()).abs() < 1e-12 && direct.im.abs() < 1e-15);
        assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-15);
        let want = a.f_value().powi(2) * a.discrete().norm_sqr() + a.g_value().powi(2) * a.continuous().norm_sqr();
        assert!((a.norm_sqr() - want).abs() <= 1e-12);
        // Only the continuous sector picks up e^{i(β−β′)}.
        let ab = a.overlap(&b).unwrap();
        let want = a.f_value().powi(2) * a.discrete().norm_sqr()
            + Complex64::from_polar(a.g_value().powi(2) * a.continuous().norm_sqr(), -4.0);
        assert!((ab - want).norm() < 1e-12);
        assert!((a.distance_sqr(&a).unwrap()).abs() < 1e-30);
    }

    #[test]
    fn far_envelope_leaves_discrete_state() {
        let env = Envelopes::compute(DiscreteMeasure::Exp, 1.0, R, 1e-10).unwrap();
        let grid = EpsilonGrid::for_k(1.0, R, &GridSpec::default()).unwrap();
        let s = sample(SpectrumMode::Shifted, 40.0, 40.0, 1.0, 0.0, 1.0, &env, &grid);
        assert_eq!(s.g_value(), 0.0);
        assert!(s.amplitudes().continuous.iter().all(|c| *c == Complex64::new(0.0, 0.0)));
        assert!((s.norm_sqr() - s.f_value().powi(2) * s.discrete().norm_sqr()).abs() == 0.0);
    }

    #[test]
    fn beta_range_enforced() {
        let env = Envelopes { n_f: 1.0, n_g: 1.0 };
        let grid = EpsilonGrid::for_k(1.0, R, &GridSpec::default()).unwrap();
        let d = build_discrete_cs(
            SpectrumMode::Shifted,
            DiscreteLabels::new(1.0, 0.0, 1.0, 0.0),
            Construction::FixedL,
            0,
            Cutoff::Auto,
            1.0,
        )
        .unwrap();
        let c = build_continuous_cs(1.0, 0.0, R, &grid, ContinuousPhase::Negative).unwrap();
        assert!(build_combined_cs(d.clone(), c.clone(), 2.0 * PI, &env).is_err());
        assert!(build_combined_cs(d, c, -0.1, &env).is_err());
    }

    #[test]
    fn cache_matches_direct() {
        let grid = EpsilonGrid::for_k(3.0, R, &GridSpec::default()).unwrap();
        let cache = NormCache::build(&[0.5, 1.0, 3.0, 1.0], R, &grid).unwrap();
        assert_eq!(cache.len(), 3);
        let a = cache.continuous_cs(1.0, 0.2, ContinuousPhase::Negative).unwrap();
        let b = build_continuous_cs(1.0, 0.2, R, &grid, ContinuousPhase::Negative).unwrap();
        assert_eq!(a, b);
        assert!(cache.continuous_cs(2.0, 0.2, ContinuousPhase::Negative).is_err());
    }
}
