use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, Value>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Wall time; `None` once stripped for reproducible output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    /// Supporting numbers, e.g. the residual at every quadrature order.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl VerificationReport {
    /// `pass` is `residual ≤ tolerance`; a NaN residual never passes.
    pub fn new(check_name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            runtime_ms: None,
            details: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        self
    }

    pub fn without_runtime(mut self) -> Self {
        self.runtime_ms = None;
        self
    }
}

/// Every tolerance used by the checks, in one place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub commutator: f64,
    pub commutator_scaled: f64,
    pub commutator_corner: f64,
    pub commutator_exact: f64,
    pub moment: f64,
    pub hyp1f1: f64,
    pub laguerre: f64,
    pub resolution_shifted: f64,
    pub resolution_unshifted: f64,
    pub resolution_offdiag: f64,
    pub resolution_continuous: f64,
    pub crossterm: f64,
    pub crossterm_average: f64,
    pub crossterm_necessity: f64,
    pub temporal: f64,
    pub continuity: f64,
    pub poisson: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            commutator: 1e-14,
            commutator_scaled: 1e-14,
            commutator_corner: 0.0,
            commutator_exact: 0.0,
            moment: 1e-10,
            hyp1f1: 1e-10,
            laguerre: 1e-7,
            resolution_shifted: 1e-9,
            resolution_unshifted: 1e-8,
            resolution_offdiag: 1e-12,
            resolution_continuous: 1e-2,
            crossterm: 1e-12,
            crossterm_average: 1e-14,
            crossterm_necessity: 1.0,
            temporal: 1e-12,
            continuity: 1e-6,
            poisson: 1e-9,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 17] = [
        "commutator",
        "commutator_scaled",
        "commutator_corner",
        "commutator_exact",
        "moment",
        "hyp1f1",
        "laguerre",
        "resolution_shifted",
        "resolution_unshifted",
        "resolution_offdiag",
        "resolution_continuous",
        "crossterm",
        "crossterm_average",
        "crossterm_necessity",
        "temporal",
        "continuity",
        "poisson",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "commutator" => &mut self.commutator,
            "commutator_scaled" => &mut self.commutator_scaled,
            "commutator_corner" => &mut self.commutator_corner,
            "commutator_exact" => &mut self.commutator_exact,
            "moment" => &mut self.moment,
            "hyp1f1" => &mut self.hyp1f1,
            "laguerre" => &mut self.laguerre,
            "resolution_shifted" => &mut self.resolution_shifted,
            "resolution_unshifted" => &mut self.resolution_unshifted,
            "resolution_offdiag" => &mut self.resolution_offdiag,
            "resolution_continuous" => &mut self.resolution_continuous,
            "crossterm" => &mut self.crossterm,
            "crossterm_average" => &mut self.crossterm_average,
            "crossterm_necessity" => &mut self.crossterm_necessity,
            "temporal" => &mut self.temporal,
            "continuity" => &mut self.continuity,
            "poisson" => &mut self.poisson,
            _ => return None,
        })
    }

    /// Sets one tolerance by name, or every tolerance when `name` is `all`.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::domain(
                "tolerance",
                format!("{name} = {value} must be finite and >= 0"),
            ));
        }
        if name == "all" {
            for n in Self::NAMES {
                *self.slot(n).expect("listed name") = value;
            }
            return Ok(());
        }
        match self.slot(name) {
            Some(s) => {
                *s = value;
                Ok(())
            }
            None => Err(Error::domain(
                "tolerance",
                format!(
                    "unknown tolerance '{name}'; expected one of all, {}",
                    Self::NAMES.join(", ")
                ),
            )),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.clone().slot(name).map(|v| *v)
    }

    pub fn validate(&self) -> Result<()> {
        for n in Self::NAMES {
            let v = self.get(n).expect("listed name");
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain("tolerance", format!("{n} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}
