use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, SpectrumMode};
use crate::states::{
    build_combined_cs, build_continuous_cs, build_discrete_cs, evolve_amplitudes, required_cutoff, time_evolve,
    CombinedCS, Construction, ContinuousPhase, Cutoff, DiscreteLabels, Envelopes, EpsilonGrid, GridSpec, RhoContinuous,
    DEFAULT_TAIL_THRESHOLD,
};

/// Max over `times` of the coefficientwise gap between the label-shifted state
/// and the phase-evolved amplitudes.
pub fn check_temporal_stability(
    cs: &CombinedCS,
    times: &[f64],
    omega: f64,
    p: &PhysicalParams,
    tolerance: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut by_time = Vec::new();
    for &t in times {
        let shifted = time_evolve(cs, t, omega, p)?.amplitudes();
        let evolved = evolve_amplitudes(cs, t, omega, p)?;
        let dev = shifted.max_abs_deviation(&evolved)?;
        worst = worst.max(dev);
        by_time.push(serde_json::json!([t, dev]));
    }
    let d = cs.discrete();
    Ok(VerificationReport::new("temporal_stability", worst, tolerance)
        .param("mode", serde_json::to_value(d.mode()).expect("mode serializes"))
        .param(
            "construction",
            serde_json::to_value(d.construction()).expect("construction serializes"),
        )
        .param(
            "phase",
            serde_json::to_value(cs.continuous().phase()).expect("phase serializes"),
        )
        .param("omega", omega)
        .param("times", times.to_vec())
        .detail("deviation_by_time", by_time)
        .timed(start))
}

/// Labels of a combined state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinedLabels {
    pub j: f64,
    pub gamma: f64,
    pub j_prime: f64,
    pub gamma_prime: f64,
    pub k: f64,
    pub theta: f64,
    pub beta: f64,
}

impl Default for CombinedLabels {
    fn default() -> Self {
        Self {
            j: 1.2,
            gamma: 0.4,
            j_prime: 0.8,
            gamma_prime: -0.3,
            k: 1.1,
            theta: 0.2,
            beta: 0.7,
        }
    }
}

impl CombinedLabels {
    fn moved(&self, d: f64) -> Self {
        Self {
            j: self.j + d,
            gamma: self.gamma + d,
            j_prime: self.j_prime + d,
            gamma_prime: self.gamma_prime + d,
            k: self.k + d,
            theta: self.theta + d,
            beta: (self.beta + d).rem_euclid(2.0 * PI),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuityConfig {
    pub mode: SpectrumMode,
    pub construction: Construction,
    pub fixed_index: u32,
    pub labels: CombinedLabels,
    pub initial_step: f64,
    pub halvings: usize,
    pub grid: GridSpec,
    pub envelopes: Envelopes,
}

impl Default for ContinuityConfig {
    fn default() -> Self {
        Self {
            mode: SpectrumMode::Unshifted,
            construction: Construction::FixedL,
            fixed_index: 1,
            labels: CombinedLabels::default(),
            initial_step: 0.1,
            halvings: 20,
            grid: GridSpec::default(),
            envelopes: Envelopes { n_f: 1.0, n_g: 1.0 },
        }
    }
}

/// Builds a combined state on a caller-chosen cutoff and grid, so states with
/// nearby labels can be compared.
#[allow(clippy::too_many_arguments)]
pub fn build_state_at(
    mode: SpectrumMode,
    construction: Construction,
    fixed: u32,
    labels: &CombinedLabels,
    cutoff: usize,
    kappa: f64,
    grid: &EpsilonGrid,
    envelopes: &Envelopes,
) -> Result<CombinedCS> {
    let d = build_discrete_cs(
        mode,
        DiscreteLabels::new(labels.j, labels.gamma, labels.j_prime, labels.gamma_prime),
        construction,
        fixed,
        Cutoff::Levels(cutoff),
        kappa,
    )?;
    let c = build_continuous_cs(
        labels.k,
        labels.theta,
        RhoContinuous::Gamma,
        grid,
        ContinuousPhase::Negative,
    )?;
    build_combined_cs(d, c, labels.beta, envelopes)
}

/// ‖CS(ℓ + δ·(1,…,1)) − CS(ℓ)‖ for δ = δ₀, δ₀/2, …, δ₀/2^halvings.
///
/// The residual is the last distance when the sequence strictly decreases and
/// +∞ otherwise.
pub fn check_continuity(cfg: &ContinuityConfig, p: &PhysicalParams, tolerance: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    if !(cfg.initial_step > 0.0) {
        return Err(Error::domain("check_continuity", "initial_step must be positive"));
    }
    let l = &cfg.labels;
    let far = l.moved(cfg.initial_step);
    let j_run = match cfg.construction {
        Construction::FixedL => l.j.max(far.j),
        Construction::FixedN => l.j_prime.max(far.j_prime),
    };
    let cutoff = required_cutoff(cfg.mode, j_run, p.kappa, DEFAULT_TAIL_THRESHOLD)?;
    let grid = EpsilonGrid::for_k(l.k.max(far.k), RhoContinuous::Gamma, &cfg.grid)?;
    let build = |x: &CombinedLabels| {
        build_state_at(
            cfg.mode,
            cfg.construction,
            cfg.fixed_index,
            x,
            cutoff,
            p.kappa,
            &grid,
            &cfg.envelopes,
        )
    };
    let base = build(l)?;
    let mut distances = Vec::with_capacity(cfg.halvings + 1);
    let mut step = cfg.initial_step;
    for _ in 0..=cfg.halvings {
        let moved = build(&l.moved(step))?;
        distances.push(moved.distance_sqr(&base)?.max(0.0).sqrt());
        step /= 2.0;
    }
    let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    let last = *distances.last().expect("at least one distance");
    let residual = if decreasing { last } else { f64::INFINITY };
    Ok(VerificationReport::new("continuity", residual, tolerance)
        .param("mode", serde_json::to_value(cfg.mode).expect("mode serializes"))
        .param("initial_step", cfg.initial_step)
        .param("halvings", cfg.halvings)
        .param("cutoff", cutoff)
        .detail("distances", distances)
        .detail("monotone", decreasing)
        .timed(start))
}
