//! Resolution of the identity on the discrete and continuous sectors.
//!
//! Discrete sector: the phase averages over γ and γ′ are done with M ≥ 2N + 1
//! equispaced nodes over one period, which is exact for the equally spaced
//! frequencies kept at cutoff N. The J and J′ integrals use the Gauss rule of
//! the measure. Because a fixed-l state factors into a J′ part and a J part,
//! the assembled operator on H^l is S_l · T, where S_l = ∫ J′^l/ρ(l) dν(J′)
//! and T is the N × N operator from the running index.
//!
//! Continuous sector: the K integral is done in closed form,
//! ∫ K^{(ε+ε′)/2} σ(K) dK = ρ((ε+ε′)/2), and θ is averaged over [−W, W], which
//! turns δ(ε − ε′) into sin(WΔ)/(πΔ).

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::model::SpectrumMode;
use crate::states::{
    build_discrete_cs_with, ln_norm_const_discrete, ln_rho_discrete, Construction, Cutoff, DiscreteLabels,
    DiscreteMeasure, RhoContinuous,
};

/// Which part of the discrete sector the assembled operator is compared on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum LReduction {
    /// The single subspace H^l.
    FixedSector { l: u32 },
    /// Every subspace l < l_max, each with its own fixed-l family.
    SummedOverL { l_max: u32 },
}

impl Default for LReduction {
    fn default() -> Self {
        LReduction::FixedSector { l: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscreteResolutionConfig {
    pub mode: SpectrumMode,
    pub measure: DiscreteMeasure,
    pub kappa: f64,
    pub cutoff: usize,
    pub reduction: LReduction,
    /// Gauss orders, ascending; each should double the previous one.
    pub orders: Vec<usize>,
    /// Phase nodes per period; defaults to 2·cutoff + 1.
    pub phase_nodes: Option<usize>,
}

impl Default for DiscreteResolutionConfig {
    fn default() -> Self {
        Self {
            mode: SpectrumMode::Shifted,
            measure: DiscreteMeasure::Exp,
            kappa: 1.0,
            cutoff: 20,
            reduction: LReduction::default(),
            orders: vec![4, 8, 16, 32, 64, 128],
            phase_nodes: None,
        }
    }
}

impl DiscreteResolutionConfig {
    pub fn for_mode(mode: SpectrumMode, kappa: f64, cutoff: usize) -> Self {
        Self {
            mode,
            measure: DiscreteMeasure::for_mode(mode),
            kappa,
            cutoff,
            ..Self::default()
        }
    }
}

/// Below this the residual is at rounding level and need not halve any further.
pub const RESOLUTION_FLOOR: f64 = 1e-13;

struct Assembled {
    diag_residual: f64,
    offdiag: f64,
}

fn assemble(cfg: &DiscreteResolutionConfig, order: usize, m: usize) -> Result<Assembled> {
    let n = cfg.cutoff;
    let (x, w) = cfg.measure.gauss_rule(order, cfg.kappa)?;
    let period = match cfg.mode {
        SpectrumMode::Shifted => 2.0 * PI,
        SpectrumMode::Unshifted => 2.0 * PI / cfg.kappa,
    };
    let mut t = DMatrix::<Complex64>::zeros(n, n);
    for (&j, &wj) in x.iter().zip(&w) {
        if wj == 0.0 {
            continue;
        }
        let scale = (0.5 * (wj.ln() + ln_norm_const_discrete(cfg.mode, j, cfg.kappa)?)).exp() / (m as f64).sqrt();
        for k in 0..m {
            let gamma = period * k as f64 / m as f64;
            let cs = build_discrete_cs_with(
                cfg.mode,
                DiscreteLabels::new(j, gamma, 0.0, 0.0),
                Construction::FixedL,
                0,
                Cutoff::Levels(n),
                cfg.kappa,
                f64::INFINITY,
            )?;
            let v: Vec<Complex64> = cs.coeffs().iter().map(|c| c * scale).collect();
            for a in 0..n {
                for b in 0..n {
                    t[(a, b)] += v[a] * v[b].conj();
                }
            }
        }
    }
    let sectors: Vec<u32> = match cfg.reduction {
        LReduction::FixedSector { l } => vec![l],
        LReduction::SummedOverL { l_max } => (0..l_max).collect(),
    };
    let mut diag_residual = 0.0f64;
    let mut offdiag = 0.0f64;
    for l in sectors {
        let ln_rho_l = ln_rho_discrete(cfg.mode, l, cfg.kappa)?;
        let s_l: f64 = x
            .iter()
            .zip(&w)
            .map(|(&j, &wj)| {
                if l == 0 {
                    wj
                } else {
                    (wj.ln() + l as f64 * j.ln() - ln_rho_l).exp()
                }
            })
            .sum();
        for a in 0..n {
            for b in 0..n {
                let e = t[(a, b)] * s_l;
                if a == b {
                    diag_residual = diag_residual.max((e - 1.0).norm());
                } else {
                    offdiag = offdiag.max(e.norm());
                }
            }
        }
    }
    Ok(Assembled { diag_residual, offdiag })
}

/// Reports `resolution_discrete` (max |T − I| at the highest order),
/// `resolution_discrete_offdiag` and `resolution_discrete_convergence`, whose
/// residual is the total amount by which a doubling of the order failed to
/// halve the residual (or reach [`RESOLUTION_FLOOR`]).
pub fn check_resolution_discrete(
    cfg: &DiscreteResolutionConfig,
    tolerance: f64,
    offdiag_tolerance: f64,
) -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    if cfg.cutoff < 1 {
        return Err(Error::domain("check_resolution_discrete", "cutoff must be at least 1"));
    }
    if cfg.orders.is_empty() || cfg.orders.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "check_resolution_discrete",
            "orders must be non-empty and ascending",
        ));
    }
    if cfg.measure.mode() != cfg.mode {
        return Err(Error::Incompatible(format!(
            "measure {:?} does not solve the moment problem of mode {:?}",
            cfg.measure, cfg.mode
        )));
    }
    let m = cfg.phase_nodes.unwrap_or(2 * cfg.cutoff + 1);
    if m < 2 * cfg.cutoff + 1 {
        return Err(Error::domain(
            "check_resolution_discrete",
            format!(
                "phase_nodes = {m} must be at least 2·cutoff + 1 = {}",
                2 * cfg.cutoff + 1
            ),
        ));
    }
    let mut residuals = Vec::new();
    let mut offdiag = 0.0f64;
    for &q in &cfg.orders {
        let a = assemble(cfg, q, m)?;
        residuals.push(a.diag_residual.max(a.offdiag));
        offdiag = a.offdiag;
    }
    let violation: f64 = cfg
        .orders
        .windows(2)
        .zip(residuals.windows(2))
        .filter(|(o, _)| o[1] == 2 * o[0])
        .map(|(_, r)| (r[1] - (r[0] / 2.0).max(RESOLUTION_FLOOR)).max(0.0))
        .sum();
    let last = *residuals.last().expect("orders are non-empty");
    let params = |r: VerificationReport| {
        r.param("mode", serde_json::to_value(cfg.mode).expect("mode serializes"))
            .param(
                "measure",
                serde_json::to_value(cfg.measure).expect("measure serializes"),
            )
            .param("kappa", cfg.kappa)
            .param("cutoff", cfg.cutoff)
            .param(
                "reduction",
                serde_json::to_value(cfg.reduction).expect("reduction serializes"),
            )
            .param("phase_nodes", m)
    };
    let by_order: Vec<_> = cfg
        .orders
        .iter()
        .zip(&residuals)
        .map(|(o, r)| serde_json::json!([o, r]))
        .collect();
    Ok(vec![
        params(VerificationReport::new("resolution_discrete", last, tolerance))
            .param("order", *cfg.orders.last().expect("non-empty"))
            .detail("residual_by_order", by_order.clone())
            .timed(start),
        params(VerificationReport::new(
            "resolution_discrete_offdiag",
            offdiag,
            offdiag_tolerance,
        ))
        .timed(start),
        params(VerificationReport::new(
            "resolution_discrete_convergence",
            violation,
            0.0,
        ))
        .detail("residual_by_order", by_order)
        .timed(start),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuousResolutionConfig {
    pub rho: RhoContinuous,
    /// Gaussian test function exp(−(ε − center)²/(2 width²)).
    pub center: f64,
    pub width: f64,
    pub eps_max: f64,
    pub step: f64,
    /// Window half-widths W, ascending; the last one is the reported window.
    pub windows: Vec<f64>,
}

impl Default for ContinuousResolutionConfig {
    fn default() -> Self {
        Self {
            rho: RhoContinuous::Gamma,
            center: 2.0,
            width: 0.5,
            eps_max: 8.0,
            step: 0.01,
            windows: vec![1.0, 2.0, 4.0, 8.0, 16.0],
        }
    }
}

/// ρ((ε+ε′)/2) / √(ρ(ε)ρ(ε′)).
pub fn continuous_kernel_factor(rho: RhoContinuous, e1: f64, e2: f64) -> f64 {
    (rho.ln_rho(0.5 * (e1 + e2)) - 0.5 * (rho.ln_rho(e1) + rho.ln_rho(e2))).exp()
}

/// sin(WΔ)/(πΔ), with its limit W/π at Δ = 0.
pub fn window_kernel(w: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        w / PI
    } else {
        (w * delta).sin() / (PI * delta)
    }
}

/// |⟨ψ, T_W ψ⟩/⟨ψ, ψ⟩ − 1| for every window, on a trapezoid grid.
pub fn continuous_window_residuals(cfg: &ContinuousResolutionConfig) -> Result<Vec<f64>> {
    if !(cfg.width > 0.0 && cfg.step > 0.0 && cfg.eps_max > cfg.step) {
        return Err(Error::domain(
            "check_resolution_continuous",
            "width, step and eps_max must be positive",
        ));
    }
    if cfg.windows.is_empty() || cfg.windows.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::domain(
            "check_resolution_continuous",
            "windows must be positive and non-empty",
        ));
    }
    let psi = |e: f64| (-(e - cfg.center).powi(2) / (2.0 * cfg.width * cfg.width)).exp();
    let peak = if cfg.center >= 0.0 && cfg.center <= cfg.eps_max {
        1.0
    } else {
        psi(0.0).max(psi(cfg.eps_max))
    };
    if psi(cfg.eps_max) > 1e-12 * peak {
        return Err(Error::domain(
            "check_resolution_continuous",
            format!(
                "test function is {:.3e} of its peak at eps_max = {}; it must be supported inside the grid",
                psi(cfg.eps_max) / peak,
                cfg.eps_max
            ),
        ));
    }
    let points = (cfg.eps_max / cfg.step).round() as usize + 1;
    let h = cfg.eps_max / (points - 1) as f64;
    let nodes: Vec<f64> = (0..points).map(|i| h * i as f64).collect();
    let wq: Vec<f64> = (0..points)
        .map(|i| if i == 0 || i + 1 == points { 0.5 * h } else { h })
        .collect();
    let ln_rho: Vec<f64> = nodes.iter().map(|&e| cfg.rho.ln_rho(e)).collect();
    // ρ at the midpoints ε_{(i+j)/2} lives on the half-step grid.
    let ln_rho_half: Vec<f64> = (0..2 * points - 1)
        .map(|k| cfg.rho.ln_rho(0.5 * h * k as f64))
        .collect();
    let a: Vec<f64> = nodes.iter().zip(&wq).map(|(&e, &w)| w * psi(e)).collect();
    let norm: f64 = nodes.iter().zip(&wq).map(|(&e, &w)| w * psi(e) * psi(e)).sum();
    let mut out = Vec::with_capacity(cfg.windows.len());
    for &win in &cfg.windows {
        let mut q = 0.0;
        for i in 0..points {
            if a[i] == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..points {
                let k = (ln_rho_half[i + j] - 0.5 * (ln_rho[i] + ln_rho[j])).exp();
                row += a[j] * k * window_kernel(win, h * (i as f64 - j as f64));
            }
            q += a[i] * row;
        }
        out.push((q / norm - 1.0).abs());
    }
    Ok(out)
}

/// Reports `resolution_continuous` (residual at the widest window),
/// `resolution_continuous_monotone` (total increase between successive windows)
/// and `resolution_continuous_diagonal` (max |k(ε, ε) − 1| on the grid).
pub fn check_resolution_continuous(
    cfg: &ContinuousResolutionConfig,
    tolerance: f64,
) -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    let residuals = continuous_window_residuals(cfg)?;
    let increase: f64 = residuals.windows(2).map(|r| (r[1] - r[0]).max(0.0)).sum();
    let points = (cfg.eps_max / cfg.step).round() as usize + 1;
    let diag = (0..points)
        .map(|i| {
            let e = cfg.eps_max * i as f64 / (points - 1) as f64;
            (continuous_kernel_factor(cfg.rho, e, e) - 1.0).abs()
        })
        .fold(0.0f64, f64::max);
    let by_window: Vec<_> = cfg
        .windows
        .iter()
        .zip(&residuals)
        .map(|(w, r)| serde_json::json!([w, r]))
        .collect();
    let params = |r: VerificationReport| {
        r.param("center", cfg.center)
            .param("width", cfg.width)
            .param("eps_max", cfg.eps_max)
            .param("step", cfg.step)
            .param("windows", cfg.windows.clone())
    };
    Ok(vec![
        params(VerificationReport::new(
            "resolution_continuous",
            *residuals.last().expect("windows are non-empty"),
            tolerance,
        ))
        .detail("residual_by_window", by_window.clone())
        .timed(start),
        params(VerificationReport::new("resolution_continuous_monotone", increase, 0.0))
            .detail("residual_by_window", by_window)
            .timed(start),
        params(VerificationReport::new("resolution_continuous_diagonal", diag, 0.0)).timed(start),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_block_is_identity() {
        let cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Shifted, 1.0, 20);
        let r = check_resolution_discrete(&cfg, 1e-9, 1e-12).unwrap();
        for x in &r {
            assert!(x.pass, "{x:?}");
        }
    }

    #[test]
    fn unshifted_gamma32_block_is_identity() {
        for kappa in [0.5, 1.0, 2.0] {
            let mut cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Unshifted, kappa, 15);
            cfg.orders = vec![16, 32, 64];
            let r = check_resolution_discrete(&cfg, 1e-8, 1e-12).unwrap();
            for x in &r {
                assert!(x.pass, "kappa={kappa}: {x:?}");
            }
        }
    }

    #[test]
    fn low_orders_are_not_exact() {
        let mut cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Shifted, 1.0, 20);
        cfg.orders = vec![4];
        let r = check_resolution_discrete(&cfg, 1e-9, 1e-12).unwrap();
        assert!(r[0].residual > 1e-3);
    }

    #[test]
    fn summed_sectors_and_higher_l() {
        let mut cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Shifted, 1.0, 10);
        cfg.orders = vec![32, 64];
        cfg.reduction = LReduction::SummedOverL { l_max: 6 };
        let r = check_resolution_discrete(&cfg, 1e-9, 1e-12).unwrap();
        assert!(r[0].pass, "{:?}", r[0]);
        cfg.reduction = LReduction::FixedSector { l: 5 };
        let r = check_resolution_discrete(&cfg, 1e-9, 1e-12).unwrap();
        assert!(r[0].pass, "{:?}", r[0]);
    }

    #[test]
    fn too_few_phase_nodes_rejected() {
        let mut cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Shifted, 1.0, 10);
        cfg.phase_nodes = Some(15);
        assert!(check_resolution_discrete(&cfg, 1e-9, 1e-12).is_err());
        let mut cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Shifted, 1.0, 10);
        cfg.measure = DiscreteMeasure::Gamma32;
        assert!(matches!(
            check_resolution_discrete(&cfg, 1e-9, 1e-12),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn kernel_diagonal_is_one() {
        for e in [0.0, 0.3, 1.7, 12.25, 40.0] {
            assert_eq!(continuous_kernel_factor(RhoContinuous::Gamma, e, e), 1.0);
        }
        // log-convexity of Γ puts the off-diagonal factor below 1.
        assert!(continuous_kernel_factor(RhoContinuous::Gamma, 1.0, 3.0) < 1.0);
    }

    #[test]
    fn default_bump_converges() {
        let r = check_resolution_continuous(&ContinuousResolutionConfig::default(), 1e-2).unwrap();
        for x in &r {
            assert!(x.pass, "{x:?}");
        }
    }

    #[test]
    fn flat_region_matches_fourier_window() {
        // Near the minimum of Γ(ε+1) the kernel factor is ≈ 1, and the window
        // keeps the fraction erf(W s) of a Gaussian of width s.
        let s = 0.04;
        let cfg = ContinuousResolutionConfig {
            center: 0.461_632_144_968_362_3,
            width: s,
            eps_max: 1.0,
            step: 0.002,
            windows: vec![6.25, 12.5, 25.0, 50.0],
            ..ContinuousResolutionConfig::default()
        };
        let res = continuous_window_residuals(&cfg).unwrap();
        for (w, r) in cfg.windows.iter().zip(&res) {
            let oracle = libm::erfc(w * s);
            assert!((r - oracle).abs() <= 1e-3, "W={w}: {r} vs {oracle}");
        }
    }

    #[test]
    fn unsupported_test_function_is_rejected() {
        let cfg = ContinuousResolutionConfig {
            eps_max: 3.0,
            ..ContinuousResolutionConfig::default()
        };
        assert!(check_resolution_continuous(&cfg, 1e-2).is_err());
    }
}
