//! Quadrature grids on the continuous label ε ≥ 0.

use serde::{Deserialize, Serialize};

use super::rho::{check_k, RhoContinuous};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    #[default]
    Trapezoid,
    Simpson,
}

/// How to lay out an [`EpsilonGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub kind: GridKind,
    pub points: usize,
    /// Fixed upper end; when absent it is found from the decay of K^ε/ρ(ε).
    pub eps_max: Option<f64>,
    /// Relative size of the integrand at ε_max.
    pub rel_cutoff: f64,
    /// Largest ε_max the automatic search may return.
    pub eps_limit: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            kind: GridKind::Trapezoid,
            points: 2000,
            eps_max: None,
            rel_cutoff: 1e-16,
            eps_limit: 1e5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid {
    kind: GridKind,
    eps_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Smallest ε past the peak of K^ε/ρ(ε) where it has dropped below `rel · peak`.
///
/// ln(K^ε/ρ(ε)) is concave in ε, so a forward scan can stop at the first such point.
pub fn find_eps_max(k: f64, rho: RhoContinuous, rel: f64, limit: f64) -> Result<f64> {
    check_k("find_eps_max", k)?;
    if !(rel > 0.0 && rel < 1.0) {
        return Err(Error::domain(
            "find_eps_max",
            format!("rel_cutoff {rel} must lie in (0, 1)"),
        ));
    }
    let drop = rel.ln();
    let step = 0.25;
    let mut peak = rho.ln_density(k, 0.0);
    let mut prev = peak;
    let mut e = 0.0;
    while e <= limit {
        e += step;
        let v = rho.ln_density(k, e);
        peak = peak.max(v);
        if v < prev && v < peak + drop {
            return Ok(e);
        }
        prev = v;
    }
    Err(Error::NonConvergence {
        what: "epsilon grid extent",
        estimate: e,
        error_bound: f64::INFINITY,
    })
}

impl EpsilonGrid {
    pub fn uniform(kind: GridKind, eps_max: f64, points: usize) -> Result<Self> {
        if !(eps_max > 0.0) || !eps_max.is_finite() {
            return Err(Error::domain(
                "EpsilonGrid",
                format!("eps_max = {eps_max} must be positive"),
            ));
        }
        if points < 3 {
            return Err(Error::domain(
                "EpsilonGrid",
                format!("need at least 3 points, got {points}"),
            ));
        }
        let points = match kind {
            GridKind::Simpson if points.is_multiple_of(2) => points + 1,
            _ => points,
        };
        let h = eps_max / (points - 1) as f64;
        let nodes: Vec<f64> = (0..points)
            .map(|i| if i + 1 == points { eps_max } else { h * i as f64 })
            .collect();
        let weights: Vec<f64> = (0..points)
            .map(|i| {
                let end = i == 0 || i + 1 == points;
                match kind {
                    GridKind::Trapezoid => {
                        if end {
                            0.5 * h
                        } else {
                            h
                        }
                    }
                    GridKind::Simpson => {
                        if end {
                            h / 3.0
                        } else if i % 2 == 1 {
                            4.0 * h / 3.0
                        } else {
                            2.0 * h / 3.0
                        }
                    }
                }
            })
            .collect();
        Ok(Self {
            kind,
            eps_max,
            nodes,
            weights,
        })
    }

    /// A grid wide enough for every K ≤ `k_max`.
    pub fn for_k(k_max: f64, rho: RhoContinuous, spec: &GridSpec) -> Result<Self> {
        let eps_max = match spec.eps_max {
            Some(e) => e,
            None => find_eps_max(k_max.max(1.0), rho, spec.rel_cutoff, spec.eps_limit)?,
        };
        Self::uniform(spec.kind, eps_max, spec.points)
    }

    /// Rebuilds a grid from stored parts, checking its invariants.
    pub fn from_parts(kind: GridKind, eps_max: f64, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::domain(
                "EpsilonGrid",
                "nodes and weights must be non-empty and equally long",
            ));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("EpsilonGrid", "nodes must be strictly ascending"));
        }
        if !(nodes[0] >= 0.0) || !(nodes[nodes.len() - 1] <= eps_max) {
            return Err(Error::domain("EpsilonGrid", "nodes must lie in [0, eps_max]"));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::domain("EpsilonGrid", "weights must be positive"));
        }
        Ok(Self {
            kind,
            eps_max,
            nodes,
            weights,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.eps_max / (self.len() - 1) as f64
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&e, &w)| w * f(e)).sum()
    }

    /// Errors when K^ε/ρ(ε) at the last node exceeds `rel` times its peak on the grid.
    pub fn check_covers(&self, k: f64, rho: RhoContinuous, rel: f64) -> Result<()> {
        let peak = self
            .nodes
            .iter()
            .map(|&e| rho.ln_density(k, e))
            .fold(f64::NEG_INFINITY, f64::max);
        let end = rho.ln_density(k, self.eps_max);
        if end > peak + rel.ln() {
            return Err(Error::domain(
                "EpsilonGrid",
                format!(
                    "grid up to eps_max = {} is too short for K = {k}: integrand at the end is {:.3e} of its peak",
                    self.eps_max,
                    (end - peak).exp()
                ),
            ));
        }
        Ok(())
    }
}

/// N_ρ(K) on the grid, so that continuous states built on the same grid have unit quadrature norm.
pub fn norm_const_continuous(k: f64, rho: RhoContinuous, grid: &EpsilonGrid) -> Result<f64> {
    check_k("norm_const_continuous", k)?;
    grid.check_covers(k, rho, 1e-14)?;
    Ok(grid.integrate(|e| rho.ln_density(k, e).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::rho::norm_const_continuous_exact;
    use approx::assert_relative_eq;

    const R: RhoContinuous = RhoContinuous::Gamma;

    #[test]
    fn trapezoid_weights_sum_to_extent() {
        let g = EpsilonGrid::uniform(GridKind::Trapezoid, 17.5, 2000).unwrap();
        assert_relative_eq!(g.weights().iter().sum::<f64>(), 17.5, max_relative = 1e-13);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(*g.nodes().last().unwrap(), 17.5);
        let s = EpsilonGrid::uniform(GridKind::Simpson, 3.0, 10).unwrap();
        assert_eq!(s.len(), 11);
        assert_relative_eq!(s.integrate(|e| e * e * e), 81.0 / 4.0, max_relative = 1e-13);
    }

    #[test]
    fn extent_tracks_decay() {
        for k in [0.1, 1.0, 5.0, 40.0] {
            let e = find_eps_max(k, R, 1e-16, 1e5).unwrap();
            let peak = (0..4000)
                .map(|i| R.ln_density(k, i as f64 * 0.05))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(R.ln_density(k, e) < peak + (1e-16f64).ln());
            assert!(R.ln_density(k, e - 0.25) >= peak + (1e-16f64).ln() - 1.0);
        }
        assert!(matches!(
            find_eps_max(1e6, R, 1e-16, 100.0),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn grid_normalizer_against_fine_trapezoid() {
        let k = 1.0;
        let spec = GridSpec::default();
        let g = EpsilonGrid::for_k(k, R, &spec).unwrap();
        let on_grid = norm_const_continuous(k, R, &g).unwrap();
        // Independent fine trapezoid with 10⁶ intervals on the same extent.
        let n = 1_000_000;
        let h = g.eps_max() / n as f64;
        let f = |e: f64| (e * k.ln() - crate::specfun::ln_gamma(e + 1.0).unwrap()).exp();
        let fine = h * (0.5 * (f(0.0) + f(g.eps_max())) + (1..n).map(|i| f(h * i as f64)).sum::<f64>());
        // Euler–Maclaurin: the coarse rule is off by about h²/12 · (f'(b) − f'(0)) with f'(b) ≈ 0, f'(0) = ln K + γ_E.
        let hc = g.spacing();
        let em = -hc * hc / 12.0 * (k.ln() + 0.577_215_664_901_532_9);
        assert!((on_grid - fine - em).abs() < 1e-3 * em.abs(), "{on_grid} {fine} {em}");
        let exact = norm_const_continuous_exact(k, R, 1e-13).unwrap();
        assert_relative_eq!(fine, exact, max_relative = 1e-11);
    }

    #[test]
    fn simpson_grid_is_accurate() {
        let spec = GridSpec {
            kind: GridKind::Simpson,
            ..GridSpec::default()
        };
        for k in [0.1, 1.0, 2.0, 5.0] {
            let g = EpsilonGrid::for_k(k, R, &spec).unwrap();
            let v = norm_const_continuous(k, R, &g).unwrap();
            let exact = norm_const_continuous_exact(k, R, 1e-13).unwrap();
            assert_relative_eq!(v, exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn short_grid_is_rejected() {
        let g = EpsilonGrid::uniform(GridKind::Trapezoid, 5.0, 100).unwrap();
        assert!(norm_const_continuous(5.0, R, &g).is_err());
        assert!(norm_const_continuous(0.0, R, &g).is_err());
    }

    #[test]
    fn parts_are_validated() {
        assert!(EpsilonGrid::from_parts(GridKind::Trapezoid, 1.0, vec![0.0, 0.5, 1.0], vec![0.25, 0.5, 0.25]).is_ok());
        assert!(EpsilonGrid::from_parts(GridKind::Trapezoid, 1.0, vec![0.0, 0.5, 0.4], vec![0.25, 0.5, 0.25]).is_err());
        assert!(
            EpsilonGrid::from_parts(GridKind::Trapezoid, 1.0, vec![0.0, 0.5, 1.0], vec![0.25, -0.5, 0.25]).is_err()
        );
        assert!(EpsilonGrid::from_parts(GridKind::Trapezoid, 0.8, vec![0.0, 0.5, 1.0], vec![0.25, 0.5, 0.25]).is_err());
    }

    #[test]
    fn small_k_normalizer_decreases() {
        let spec = GridSpec::default();
        let mut prev = f64::INFINITY;
        for p in 1..12 {
            let k = 10f64.powi(-p);
            let g = EpsilonGrid::for_k(k, R, &spec).unwrap();
            let v = norm_const_continuous(k, R, &g).unwrap();
            assert!(v < prev);
            // Mass concentrates at ε = 0: N_ρ(K) ≈ 1/ln(1/K) for small K.
            if p >= 4 {
                assert!(v * (1.0 / k).ln() < 1.5);
            }
            prev = v;
        }
    }
}
