//! JSON export of combined states. Floats are written with round-trip precision,
//! so an export followed by an import reproduces every coefficient bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::combined::CombinedCS;
use super::continuous::{ContinuousCS, ContinuousPhase};
use super::discrete::{Construction, DiscreteCS, DiscreteLabels};
use super::grid::{EpsilonGrid, GridKind};
use super::rho::RhoContinuous;
use crate::error::{Error, Result};
use crate::model::SpectrumMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateLabels {
    pub j: f64,
    pub gamma: f64,
    pub j_prime: f64,
    pub gamma_prime: f64,
    pub k: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDocument {
    pub kind: GridKind,
    pub eps_max: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub mode: SpectrumMode,
    pub labels: StateLabels,
    pub kappa: f64,
    pub construction: Construction,
    pub fixed_index: u32,
    pub sector_norm: f64,
    pub tail_bound: f64,
    pub coeffs: Vec<[f64; 2]>,
    pub rho: RhoContinuous,
    pub phase: ContinuousPhase,
    pub n_rho: f64,
    pub grid: GridDocument,
    pub values: Vec<[f64; 2]>,
    pub beta: f64,
    pub f: f64,
    pub g: f64,
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl From<&CombinedCS> for StateDocument {
    fn from(cs: &CombinedCS) -> Self {
        let d = cs.discrete();
        let c = cs.continuous();
        let l = d.labels();
        Self {
            mode: d.mode(),
            labels: StateLabels {
                j: l.j,
                gamma: l.gamma,
                j_prime: l.j_prime,
                gamma_prime: l.gamma_prime,
                k: c.k(),
                theta: c.theta(),
            },
            kappa: d.kappa(),
            construction: d.construction(),
            fixed_index: d.fixed(),
            sector_norm: d.sector_norm(),
            tail_bound: d.tail_bound(),
            coeffs: pairs(d.coeffs()),
            rho: c.rho(),
            phase: c.phase(),
            n_rho: c.n_rho(),
            grid: GridDocument {
                kind: c.grid().kind(),
                eps_max: c.grid().eps_max(),
                nodes: c.grid().nodes().to_vec(),
                weights: c.grid().weights().to_vec(),
            },
            values: pairs(c.values()),
            beta: cs.beta(),
            f: cs.f_value(),
            g: cs.g_value(),
        }
    }
}

impl TryFrom<StateDocument> for CombinedCS {
    type Error = Error;

    fn try_from(doc: StateDocument) -> Result<Self> {
        let grid = EpsilonGrid::from_parts(doc.grid.kind, doc.grid.eps_max, doc.grid.nodes, doc.grid.weights)?;
        if doc.values.len() != grid.len() {
            return Err(Error::domain(
                "StateDocument",
                format!(
                    "values has {} entries but the grid has {}",
                    doc.values.len(),
                    grid.len()
                ),
            ));
        }
        if doc.coeffs.is_empty() {
            return Err(Error::domain("StateDocument", "coeffs must not be empty"));
        }
        let l = &doc.labels;
        let discrete = DiscreteCS {
            mode: doc.mode,
            kappa: doc.kappa,
            labels: DiscreteLabels::new(l.j, l.gamma, l.j_prime, l.gamma_prime),
            construction: doc.construction,
            fixed: doc.fixed_index,
            coeffs: complexes(&doc.coeffs),
            sector_norm: doc.sector_norm,
            tail_bound: doc.tail_bound,
        };
        let continuous = ContinuousCS {
            k: l.k,
            theta: l.theta,
            rho: doc.rho,
            phase: doc.phase,
            n_rho: doc.n_rho,
            grid,
            values: complexes(&doc.values),
        };
        CombinedCS::from_parts(discrete, continuous, doc.beta, doc.f, doc.g)
    }
}

pub fn to_json(cs: &CombinedCS) -> Result<String> {
    serde_json::to_string_pretty(&StateDocument::from(cs)).map_err(|e| Error::domain("to_json", e.to_string()))
}

pub fn from_json(text: &str) -> Result<CombinedCS> {
    let doc: StateDocument = serde_json::from_str(text).map_err(|e| Error::domain("from_json", e.to_string()))?;
    CombinedCS::try_from(doc)
}
