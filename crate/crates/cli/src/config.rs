//! The run configuration: one JSON document, every field optional, every
//! value checked before any computation starts.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use landau_gk::model::{GaugeChoice, ParamInputs, PhysicalParams, SpectrumMode};
use landau_gk::states::{Construction, ContinuousPhase, Envelopes, GridSpec, DEFAULT_TAIL_THRESHOLD};
use landau_gk::verify::{CheckGroup, SuiteConfig, SuiteSettings, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Labels and numerics of the state built by `cs-build` and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StateSection {
    pub j: f64,
    pub gamma: f64,
    pub j_prime: f64,
    pub gamma_prime: f64,
    pub k: f64,
    pub theta: f64,
    pub beta: f64,
    pub construction: Construction,
    pub fixed_index: u32,
    /// Number of running levels; chosen from `tail_threshold` when absent.
    pub cutoff: Option<usize>,
    pub tail_threshold: f64,
    pub phase: ContinuousPhase,
    pub grid: GridSpec,
    /// Envelope normalizers; computed from the measures when absent.
    pub envelopes: Option<Envelopes>,
}

impl Default for StateSection {
    fn default() -> Self {
        Self {
            j: 1.0,
            gamma: 0.0,
            j_prime: 1.0,
            gamma_prime: 0.0,
            k: 1.0,
            theta: 0.0,
            beta: 0.0,
            construction: Construction::FixedL,
            fixed_index: 0,
            cutoff: None,
            tail_threshold: DEFAULT_TAIL_THRESHOLD,
            phase: ContinuousPhase::Negative,
            grid: GridSpec::default(),
            envelopes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub n_max: u32,
    pub l_max: u32,
    pub alpha: Vec<f64>,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            n_max: 2,
            l_max: 0,
            alpha: vec![-1.0],
        }
    }
}

/// Inclusive range sampled at `points` equispaced values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + h * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WavefunctionSection {
    pub alpha: f64,
    pub x: Axis,
    pub y: Axis,
}

impl Default for WavefunctionSection {
    fn default() -> Self {
        let axis = Axis {
            min: 0.0,
            max: 2.0,
            points: 21,
        };
        Self {
            alpha: -1.0,
            x: axis,
            y: axis,
        }
    }
}

/// Label grid of `sweep`: every (J, K) pair, J outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub j: Vec<f64>,
    pub k: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            j: vec![0.5, 1.0, 2.0, 4.0],
            k: vec![0.5, 1.0, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub checks: Vec<CheckGroup>,
    /// Keep wall times in the report; off by default so reports are reproducible.
    pub include_runtime: bool,
    /// Ω of the combined-state evolution; κ(N + 1) when absent.
    pub omega: Option<f64>,
    pub settings: SuiteSettings,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            checks: vec![CheckGroup::All],
            include_runtime: false,
            omega: None,
            settings: SuiteSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamInputs,
    pub mode: SpectrumMode,
    pub gauge: GaugeChoice,
    pub state: StateSection,
    pub spectrum: SpectrumSection,
    pub wavefunction: WavefunctionSection,
    pub sweep: SweepSection,
    pub verify: VerifySection,
    pub tolerances: Tolerances,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ParamInputs::default(),
            mode: SpectrumMode::Unshifted,
            gauge: GaugeChoice::Gauge1,
            state: StateSection::default(),
            spectrum: SpectrumSection::default(),
            wavefunction: WavefunctionSection::default(),
            sweep: SweepSection::default(),
            verify: VerifySection::default(),
            tolerances: Tolerances::default(),
            out_dir: PathBuf::from("."),
        }
    }
}

/// Command-line values that replace config entries.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<SpectrumMode>,
    pub gauge: Option<GaugeChoice>,
    pub kappa: Option<f64>,
    pub cutoff: Option<usize>,
    pub out_dir: Option<PathBuf>,
    /// `NAME=VALUE` pairs, applied in order.
    pub tolerances: Vec<String>,
}

fn finite(field: &str, v: f64) -> CliResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::field(field, format!("{v} is not finite")))
    }
}

fn positive(field: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::field(field, format!("{v} must be positive and finite")))
    }
}

fn non_negative(field: &str, v: f64) -> CliResult<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::field(field, format!("{v} must be finite and >= 0")))
    }
}

fn at_least(field: &str, v: usize, min: usize) -> CliResult<()> {
    if v >= min {
        Ok(())
    } else {
        Err(CliError::field(field, format!("{v} is below the minimum {min}")))
    }
}

fn each(field: &str, values: &[f64], check: fn(&str, f64) -> CliResult<()>) -> CliResult<()> {
    if values.is_empty() {
        return Err(CliError::field(field, "must not be empty"));
    }
    for (i, &v) in values.iter().enumerate() {
        check(&format!("{field}[{i}]"), v)?;
    }
    Ok(())
}

impl RunConfig {
    /// Reads a config file; errors carry the path of the offending field.
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Parse { message, .. } => CliError::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            if field == "." {
                CliError::Parse {
                    path: PathBuf::from("<config>"),
                    message: inner.to_string(),
                }
            } else {
                CliError::field(field, inner.to_string())
            }
        })
    }

    pub fn apply(&mut self, o: &Overrides) -> CliResult<()> {
        if let Some(m) = o.mode {
            self.mode = m;
        }
        if let Some(g) = o.gauge {
            self.gauge = g;
        }
        if let Some(k) = o.kappa {
            positive("kappa", k)?;
            // κ = ħω_c; the field strengths stay put and ħ absorbs the change.
            let p = self.physical()?;
            self.params.hbar = k / p.omega_c;
        }
        if let Some(c) = o.cutoff {
            self.state.cutoff = Some(c);
            self.verify.settings.resolution_cutoff = c;
        }
        if let Some(d) = &o.out_dir {
            self.out_dir = d.clone();
        }
        for item in &o.tolerances {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::field("tolerances", format!("expected NAME=VALUE, got '{item}'")))?;
            let field = format!("tolerances.{name}");
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::field(&field, format!("'{value}' is not a number")))?;
            self.tolerances
                .set(name.trim(), v)
                .map_err(|e| CliError::field(&field, e.to_string()))?;
        }
        Ok(())
    }

    pub fn physical(&self) -> CliResult<PhysicalParams> {
        let p = &self.params;
        for (name, v) in [
            ("params.m", p.m),
            ("params.hbar", p.hbar),
            ("params.e_charge", p.e_charge),
            ("params.b_field", p.b_field),
            ("params.c", p.c),
        ] {
            positive(name, v)?;
        }
        non_negative("params.e_field", p.e_field)?;
        p.derive().map_err(|e| CliError::field("params", e.to_string()))
    }

    /// Checks every section against the preconditions of the library calls.
    pub fn validate(&self) -> CliResult<()> {
        self.physical()?;

        let s = &self.state;
        non_negative("state.j", s.j)?;
        non_negative("state.j_prime", s.j_prime)?;
        finite("state.gamma", s.gamma)?;
        finite("state.gamma_prime", s.gamma_prime)?;
        positive("state.k", s.k)?;
        finite("state.theta", s.theta)?;
        if !(0.0..2.0 * PI).contains(&s.beta) {
            return Err(CliError::field("state.beta", format!("{} must lie in [0, 2π)", s.beta)));
        }
        if let Some(c) = s.cutoff {
            at_least("state.cutoff", c, 1)?;
        }
        if !(s.tail_threshold > 0.0 && s.tail_threshold < 1.0) {
            return Err(CliError::field(
                "state.tail_threshold",
                format!("{} must lie in (0, 1)", s.tail_threshold),
            ));
        }
        at_least("state.grid.points", s.grid.points, 3)?;
        if let Some(e) = s.grid.eps_max {
            positive("state.grid.eps_max", e)?;
        }
        if !(s.grid.rel_cutoff > 0.0 && s.grid.rel_cutoff < 1.0) {
            return Err(CliError::field(
                "state.grid.rel_cutoff",
                format!("{} must lie in (0, 1)", s.grid.rel_cutoff),
            ));
        }
        positive("state.grid.eps_limit", s.grid.eps_limit)?;
        if let Some(e) = s.envelopes {
            positive("state.envelopes.n_f", e.n_f)?;
            positive("state.envelopes.n_g", e.n_g)?;
        }

        each("spectrum.alpha", &self.spectrum.alpha, finite)?;

        let w = &self.wavefunction;
        finite("wavefunction.alpha", w.alpha)?;
        for (name, a) in [("wavefunction.x", w.x), ("wavefunction.y", w.y)] {
            finite(&format!("{name}.min"), a.min)?;
            finite(&format!("{name}.max"), a.max)?;
            if a.max < a.min {
                return Err(CliError::field(
                    format!("{name}.max"),
                    format!("{} is below min = {}", a.max, a.min),
                ));
            }
            at_least(&format!("{name}.points"), a.points, 1)?;
        }

        each("sweep.j", &self.sweep.j, non_negative)?;
        each("sweep.k", &self.sweep.k, positive)?;

        let v = &self.verify;
        if v.checks.is_empty() {
            return Err(CliError::field("verify.checks", "must not be empty"));
        }
        if let Some(o) = v.omega {
            positive("verify.omega", o)?;
        }
        let t = &v.settings;
        at_least("verify.settings.commutator_n", t.commutator_n, 3)?;
        at_least("verify.settings.tensor_dim", t.tensor_dim, 2)?;
        at_least("verify.settings.moment_order", t.moment_order, 1)?;
        each("verify.settings.moment_kappas", &t.moment_kappas, positive)?;
        if let Some(pl) = t.laguerre_weighted {
            finite("verify.settings.laguerre_weighted.mu", pl.mu)?;
            finite("verify.settings.laguerre_weighted.sigma", pl.sigma)?;
        }
        each("verify.settings.hyp1f1_x", &t.hyp1f1_x, positive)?;
        positive("verify.settings.laguerre_kappa", t.laguerre_kappa)?;
        at_least("verify.settings.resolution_cutoff", t.resolution_cutoff, 1)?;
        if t.resolution_orders.is_empty() {
            return Err(CliError::field(
                "verify.settings.resolution_orders",
                "must not be empty",
            ));
        }
        for (i, &q) in t.resolution_orders.iter().enumerate() {
            at_least(&format!("verify.settings.resolution_orders[{i}]"), q, 1)?;
        }
        each("verify.settings.times", &t.times, finite)?;
        each("verify.settings.poisson_j", &t.poisson_j, positive)?;
        let c = &t.continuity;
        positive("verify.settings.continuity.initial_step", c.initial_step)?;
        at_least("verify.settings.continuity.halvings", c.halvings, 1)?;
        let x = &t.crossterm;
        at_least("verify.settings.crossterm.beta_nodes", x.beta_nodes, 2)?;
        each("verify.settings.crossterm.j", &x.j, non_negative)?;
        each("verify.settings.crossterm.j_prime", &x.j_prime, non_negative)?;
        each("verify.settings.crossterm.k", &x.k, positive)?;

        for name in Tolerances::NAMES {
            let v = self.tolerances.get(name).expect("listed name");
            non_negative(&format!("tolerances.{name}"), v)?;
        }
        Ok(())
    }

    pub fn suite(&self) -> CliResult<SuiteConfig> {
        Ok(SuiteConfig {
            params: self.physical()?,
            mode: self.mode,
            tolerances: self.tolerances.clone(),
            omega: self.verify.omega,
            settings: self.verify.settings.clone(),
        })
    }
}
