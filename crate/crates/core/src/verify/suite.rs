use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::algebra::{check_commutators, DEFAULT_TENSOR_DIM};
use super::crossterm::{check_cross_term, CrossTermConfig};
use super::dynamics::{build_state_at, check_continuity, check_temporal_stability, CombinedLabels, ContinuityConfig};
use super::laguerre::{check_laguerre_grid, LaguerreForm};
use super::moments::{check_hyp1f1, check_moment_discrete, check_poisson, MomentMeasure, DEFAULT_MOMENT_ORDER};
use super::report::{Tolerances, VerificationReport};
use super::resolution::{
    check_resolution_continuous, check_resolution_discrete, ContinuousResolutionConfig, DiscreteResolutionConfig,
    LReduction,
};
use crate::error::{Error, Result};
use crate::model::{PhysicalParams, SpectrumMode};
use crate::states::{
    default_omega, required_cutoff, Construction, Envelopes, EpsilonGrid, GridSpec, RhoContinuous,
    DEFAULT_TAIL_THRESHOLD,
};

/// A selectable group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckGroup {
    All,
    Commutators,
    Moments,
    Hyp1f1,
    Laguerre,
    Identity,
    Crossterm,
    Temporal,
    Continuity,
    Poisson,
}

impl CheckGroup {
    /// Every concrete group, in report order.
    pub const EACH: [CheckGroup; 9] = [
        CheckGroup::Commutators,
        CheckGroup::Moments,
        CheckGroup::Hyp1f1,
        CheckGroup::Laguerre,
        CheckGroup::Identity,
        CheckGroup::Crossterm,
        CheckGroup::Temporal,
        CheckGroup::Continuity,
        CheckGroup::Poisson,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckGroup::All => "all",
            CheckGroup::Commutators => "commutators",
            CheckGroup::Moments => "moments",
            CheckGroup::Hyp1f1 => "hyp1f1",
            CheckGroup::Laguerre => "laguerre",
            CheckGroup::Identity => "identity",
            CheckGroup::Crossterm => "crossterm",
            CheckGroup::Temporal => "temporal",
            CheckGroup::Continuity => "continuity",
            CheckGroup::Poisson => "poisson",
        }
    }

    /// Expands `all` and removes duplicates, keeping report order.
    pub fn expand(groups: &[CheckGroup]) -> Vec<CheckGroup> {
        let all = groups.contains(&CheckGroup::All);
        CheckGroup::EACH
            .into_iter()
            .filter(|g| all || groups.contains(g))
            .collect()
    }
}

impl fmt::Display for CheckGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(CheckGroup::All)
            .chain(CheckGroup::EACH)
            .find(|g| g.name() == s)
            .ok_or_else(|| {
                Error::domain(
                    "check group",
                    format!(
                        "unknown group '{s}'; expected one of all, {}",
                        CheckGroup::EACH.map(|g| g.name()).join(", ")
                    ),
                )
            })
    }
}

/// (μ, σ) of the Laguerre-weighted moment density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaguerreMeasureParams {
    pub mu: f64,
    pub sigma: f64,
}

/// Sizes, grids and sample points of the individual checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSettings {
    pub commutator_n: usize,
    pub tensor_dim: usize,
    pub moment_order: usize,
    pub moment_max_n: u32,
    pub moment_kappas: Vec<f64>,
    /// Adds a `moment_laguerre_weighted` entry per κ when present.
    pub laguerre_weighted: Option<LaguerreMeasureParams>,
    pub hyp1f1_x: Vec<f64>,
    pub laguerre_form: LaguerreForm,
    pub laguerre_kappa: f64,
    pub resolution_cutoff: usize,
    pub resolution_orders: Vec<usize>,
    pub reduction: LReduction,
    pub continuous: ContinuousResolutionConfig,
    pub crossterm: CrossTermConfig,
    /// Times in units of 1/ω_c.
    pub times: Vec<f64>,
    pub continuity: ContinuityConfig,
    pub poisson_j: Vec<f64>,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self {
            commutator_n: 40,
            tensor_dim: DEFAULT_TENSOR_DIM,
            moment_order: DEFAULT_MOMENT_ORDER,
            moment_max_n: 40,
            moment_kappas: vec![0.5, 1.0, 2.0],
            laguerre_weighted: None,
            hyp1f1_x: vec![0.1, 1.0, 5.0, 20.0, 40.0],
            laguerre_form: LaguerreForm::Corrected,
            laguerre_kappa: 1.0,
            resolution_cutoff: 20,
            resolution_orders: vec![4, 8, 16, 32, 64, 128],
            reduction: LReduction::default(),
            continuous: ContinuousResolutionConfig::default(),
            crossterm: CrossTermConfig::default(),
            times: vec![0.1, 1.0, 10.0],
            continuity: ContinuityConfig::default(),
            poisson_j: vec![0.5, 2.0, 4.0],
        }
    }
}

/// Everything the checks need.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub params: PhysicalParams,
    /// Mode of the cross-term and continuity checks.
    pub mode: SpectrumMode,
    pub tolerances: Tolerances,
    /// Ω; κ(N + 1) for the cutoff N of each state when absent.
    pub omega: Option<f64>,
    pub settings: SuiteSettings,
}

fn moment_range(
    mode: SpectrumMode,
    measure: MomentMeasure,
    kappa: f64,
    s: &SuiteSettings,
    tol: f64,
) -> Result<VerificationReport> {
    let start = std::time::Instant::now();
    let mut worst = 0.0f64;
    for n in 0..=s.moment_max_n {
        let r = check_moment_discrete(mode, measure, n, kappa, s.moment_order, tol)?;
        worst = worst.max(r.residual);
    }
    let mut r = VerificationReport::new(format!("moment_{}", measure.name()), worst, tol)
        .param("mode", serde_json::to_value(mode).expect("mode serializes"))
        .param("kappa", kappa)
        .param("n_max", s.moment_max_n);
    if let MomentMeasure::LaguerreWeighted { mu, sigma } = measure {
        r = r.param("mu", mu).param("sigma", sigma);
    } else {
        r = r.param("order", s.moment_order);
    }
    Ok(r.timed(start))
}

/// Runs one group of checks.
pub fn run_group(cfg: &SuiteConfig, group: CheckGroup) -> Result<Vec<VerificationReport>> {
    let tol = &cfg.tolerances;
    let p = &cfg.params;
    let s = &cfg.settings;
    match group {
        CheckGroup::All => {
            let mut out = Vec::new();
            for g in CheckGroup::EACH {
                out.extend(run_group(cfg, g)?);
            }
            Ok(out)
        }
        CheckGroup::Commutators => check_commutators(s.commutator_n, s.tensor_dim, p, tol),
        CheckGroup::Moments => {
            let mut out = vec![moment_range(
                SpectrumMode::Shifted,
                MomentMeasure::Exp,
                1.0,
                s,
                tol.moment,
            )?];
            for &kappa in &s.moment_kappas {
                out.push(moment_range(
                    SpectrumMode::Unshifted,
                    MomentMeasure::Gamma32,
                    kappa,
                    s,
                    tol.moment,
                )?);
            }
            if let Some(LaguerreMeasureParams { mu, sigma }) = s.laguerre_weighted {
                let m = MomentMeasure::LaguerreWeighted { mu, sigma };
                for &kappa in &s.moment_kappas {
                    out.push(match moment_range(SpectrumMode::Unshifted, m, kappa, s, tol.moment) {
                        Ok(r) => r,
                        // A divergent moment is a failed check, not a broken run.
                        Err(e @ Error::Divergent(_)) => {
                            VerificationReport::new("moment_laguerre_weighted", f64::INFINITY, tol.moment)
                                .param("kappa", kappa)
                                .param("mu", mu)
                                .param("sigma", sigma)
                                .detail("error", e.to_string())
                        }
                        Err(e) => return Err(e),
                    });
                }
            }
            Ok(out)
        }
        CheckGroup::Hyp1f1 => Ok(vec![check_hyp1f1(&s.hyp1f1_x, tol.hyp1f1)?]),
        CheckGroup::Laguerre => Ok(vec![check_laguerre_grid(
            s.laguerre_kappa,
            s.laguerre_form,
            tol.laguerre,
        )?]),
        CheckGroup::Identity => {
            let mut out = Vec::new();
            for (mode, t) in [
                (SpectrumMode::Shifted, tol.resolution_shifted),
                (SpectrumMode::Unshifted, tol.resolution_unshifted),
            ] {
                let rc = DiscreteResolutionConfig {
                    orders: s.resolution_orders.clone(),
                    reduction: s.reduction,
                    ..DiscreteResolutionConfig::for_mode(mode, p.kappa, s.resolution_cutoff)
                };
                out.extend(check_resolution_discrete(&rc, t, tol.resolution_offdiag)?);
            }
            out.extend(check_resolution_continuous(&s.continuous, tol.resolution_continuous)?);
            Ok(out)
        }
        CheckGroup::Crossterm => {
            let cc = CrossTermConfig {
                mode: cfg.mode,
                kappa: p.kappa,
                ..s.crossterm.clone()
            };
            check_cross_term(&cc, tol.crossterm, tol.crossterm_average, tol.crossterm_necessity)
        }
        CheckGroup::Temporal => {
            let labels = CombinedLabels::default();
            let grid = EpsilonGrid::for_k(labels.k, RhoContinuous::Gamma, &GridSpec::default())?;
            let env = Envelopes { n_f: 1.0, n_g: 1.0 };
            let times: Vec<f64> = s.times.iter().map(|t| t / p.omega_c).collect();
            let mut out = Vec::new();
            for mode in [SpectrumMode::Shifted, SpectrumMode::Unshifted] {
                for c in [Construction::FixedL, Construction::FixedN] {
                    let j_run = match c {
                        Construction::FixedL => labels.j,
                        Construction::FixedN => labels.j_prime,
                    };
                    let cutoff = required_cutoff(mode, j_run, p.kappa, DEFAULT_TAIL_THRESHOLD)?;
                    let cs = build_state_at(mode, c, 2, &labels, cutoff, p.kappa, &grid, &env)?;
                    let omega = cfg.omega.unwrap_or_else(|| default_omega(cutoff, p));
                    out.push(check_temporal_stability(&cs, &times, omega, p, tol.temporal)?);
                }
            }
            Ok(out)
        }
        CheckGroup::Continuity => {
            let cc = ContinuityConfig {
                mode: cfg.mode,
                ..s.continuity.clone()
            };
            Ok(vec![check_continuity(&cc, p, tol.continuity)?])
        }
        CheckGroup::Poisson => Ok(vec![check_poisson(&s.poisson_j, tol.poisson)?]),
    }
}

/// Runs every selected group in report order. A group that errors does not
/// stop the others.
pub fn run_suite(cfg: &SuiteConfig, groups: &[CheckGroup]) -> Vec<(CheckGroup, Result<Vec<VerificationReport>>)> {
    CheckGroup::expand(groups)
        .into_iter()
        .map(|g| (g, run_group(cfg, g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_parse_and_expand() {
        assert_eq!("temporal".parse::<CheckGroup>().unwrap(), CheckGroup::Temporal);
        assert!("bogus".parse::<CheckGroup>().is_err());
        assert_eq!(CheckGroup::expand(&[CheckGroup::All]).len(), 9);
        assert_eq!(
            CheckGroup::expand(&[CheckGroup::Poisson, CheckGroup::Temporal, CheckGroup::Poisson]),
            vec![CheckGroup::Temporal, CheckGroup::Poisson]
        );
    }

    #[test]
    fn cheap_groups_pass_by_default() {
        let cfg = SuiteConfig::default();
        for g in [
            CheckGroup::Commutators,
            CheckGroup::Moments,
            CheckGroup::Hyp1f1,
            CheckGroup::Temporal,
            CheckGroup::Poisson,
        ] {
            for r in run_group(&cfg, g).unwrap() {
                assert!(r.pass, "{g}: {r:?}");
            }
        }
    }

    #[test]
    fn temporal_group_has_four_entries() {
        let r = run_group(&SuiteConfig::default(), CheckGroup::Temporal).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|x| x.check_name == "temporal_stability"));
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<SuiteConfig>("{\"bogus\": 1}").is_err());
        let cfg: SuiteConfig = serde_json::from_str("{\"settings\": {\"commutator_n\": 10}}").unwrap();
        assert_eq!(cfg.settings.commutator_n, 10);
    }

    #[test]
    fn divergent_laguerre_moment_is_a_failed_entry() {
        let mut cfg = SuiteConfig::default();
        cfg.settings.moment_max_n = 2;
        cfg.settings.moment_kappas = vec![1.0];
        cfg.settings.laguerre_weighted = Some(LaguerreMeasureParams { mu: 0.0, sigma: 0.0 });
        let r = run_group(&cfg, CheckGroup::Moments).unwrap();
        assert_eq!(r.len(), 3);
        let last = r.last().unwrap();
        assert_eq!(last.check_name, "moment_laguerre_weighted");
        assert!(!last.pass);
        assert!(last.details["error"].as_str().unwrap().contains("divergent"));
    }
}
