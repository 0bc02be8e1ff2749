//! The discrete–continuous block of ∫ |Φ⟩⟨Φ| dβ/2π.
//!
//! With |Φ⟩ = f|D⟩ + e^{−iβ} g|C⟩ the off-diagonal block is f g e^{iβ} |D⟩⟨C|,
//! which the β average must remove.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::model::SpectrumMode;
use crate::states::{
    build_continuous_cs, build_discrete_cs, required_cutoff, Construction, ContinuousPhase, Cutoff, DiscreteLabels,
    DiscreteMeasure, Envelopes, EpsilonGrid, GridSpec, RhoContinuous, DEFAULT_TAIL_THRESHOLD,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrossTermConfig {
    pub mode: SpectrumMode,
    pub kappa: f64,
    pub fixed_l: u32,
    pub beta_nodes: usize,
    /// Sample labels, each list taken in full product with the others.
    pub j: Vec<f64>,
    pub j_prime: Vec<f64>,
    pub k: Vec<f64>,
    pub theta: Vec<f64>,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub grid: GridSpec,
    /// Envelope normalizers; computed from the measures when absent.
    pub envelopes: Option<Envelopes>,
}

impl Default for CrossTermConfig {
    fn default() -> Self {
        Self {
            mode: SpectrumMode::Unshifted,
            kappa: 1.0,
            fixed_l: 1,
            beta_nodes: 64,
            j: vec![0.5, 1.0, 2.0],
            j_prime: vec![0.5, 1.5],
            k: vec![0.5, 1.0, 2.0],
            theta: vec![0.0, 0.4],
            gamma: 0.3,
            gamma_prime: -0.2,
            grid: GridSpec::default(),
            envelopes: None,
        }
    }
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Reports `crossterm_average` (|mean of e^{iβ}| over the nodes),
/// `crossterm_block` (Frobenius norm of the β-averaged block) and
/// `crossterm_necessity` (0.1·f̄ḡ divided by the block norm at a single β node;
/// below 1 means the block is not small without the average). Here
/// f̄ḡ = Σ w |f g| ‖D‖ ‖C‖ bounds the block norm over the label samples.
pub fn check_cross_term(
    cfg: &CrossTermConfig,
    block_tolerance: f64,
    average_tolerance: f64,
    necessity_tolerance: f64,
) -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    if cfg.beta_nodes < 2 {
        return Err(Error::domain(
            "check_cross_term",
            format!("beta_nodes = {} must be at least 2", cfg.beta_nodes),
        ));
    }
    if [&cfg.j, &cfg.j_prime, &cfg.k, &cfg.theta].iter().any(|v| v.is_empty()) {
        return Err(Error::domain("check_cross_term", "label samples must be non-empty"));
    }
    let rho = RhoContinuous::Gamma;
    let env = match cfg.envelopes {
        Some(e) => e,
        None => Envelopes::compute(DiscreteMeasure::for_mode(cfg.mode), cfg.kappa, rho, 1e-10)?,
    };
    let j_max = cfg.j.iter().copied().fold(0.0, f64::max);
    let cutoff = required_cutoff(cfg.mode, j_max, cfg.kappa, DEFAULT_TAIL_THRESHOLD)?;
    let k_max = cfg.k.iter().copied().fold(0.0, f64::max);
    let grid = EpsilonGrid::for_k(k_max, rho, &cfg.grid)?;
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();

    let count = (cfg.j.len() * cfg.j_prime.len() * cfg.k.len() * cfg.theta.len()) as f64;
    let weight = 1.0 / count;
    let mut y = DMatrix::<Complex64>::zeros(cutoff, grid.len());
    let mut bound = 0.0;
    let mut continuous = Vec::new();
    for &k in &cfg.k {
        for &theta in &cfg.theta {
            let c = build_continuous_cs(k, theta, rho, &grid, ContinuousPhase::Negative)?;
            let f = env.f(k, theta);
            let row: Vec<Complex64> = c.values().iter().zip(&sqrt_w).map(|(v, s)| (v * s).conj()).collect();
            continuous.push((f, c.norm_sqr().sqrt(), row));
        }
    }
    for &j in &cfg.j {
        for &jp in &cfg.j_prime {
            let d = build_discrete_cs(
                cfg.mode,
                DiscreteLabels::new(j, cfg.gamma, jp, cfg.gamma_prime),
                Construction::FixedL,
                cfg.fixed_l,
                Cutoff::Levels(cutoff),
                cfg.kappa,
            )?;
            let g = env.g(j, jp);
            let d_norm = d.norm_sqr().sqrt();
            for (f, c_norm, row) in &continuous {
                let fg = weight * f * g;
                bound += fg.abs() * d_norm * c_norm;
                for (a, da) in d.coeffs().iter().enumerate() {
                    let s = da * fg;
                    for (b, cb) in row.iter().enumerate() {
                        y[(a, b)] += s * cb;
                    }
                }
            }
        }
    }

    let nodes = cfg.beta_nodes;
    let mut x = DMatrix::<Complex64>::zeros(cutoff, grid.len());
    let mut average = Complex64::new(0.0, 0.0);
    for b in 0..nodes {
        let beta = 2.0 * PI * b as f64 / nodes as f64;
        let phase = Complex64::from_polar(1.0 / nodes as f64, beta);
        average += phase;
        x += &y * phase;
    }
    let block = frobenius(&x);
    let single = frobenius(&y);
    let ratio = 0.1 * bound / single;

    let params = |r: VerificationReport| {
        r.param("mode", serde_json::to_value(cfg.mode).expect("mode serializes"))
            .param("kappa", cfg.kappa)
            .param("beta_nodes", nodes)
            .param("cutoff", cutoff)
            .param("grid_points", grid.len())
    };
    Ok(vec![
        params(VerificationReport::new(
            "crossterm_average",
            average.norm(),
            average_tolerance,
        ))
        .timed(start),
        params(VerificationReport::new("crossterm_block", block, block_tolerance))
            .detail("unaveraged_norm", single)
            .timed(start),
        params(VerificationReport::new(
            "crossterm_necessity",
            ratio,
            necessity_tolerance,
        ))
        .detail("unaveraged_norm", single)
        .detail("fg_bound", bound)
        .timed(start),
    ])
}
