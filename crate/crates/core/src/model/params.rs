use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field strengths and constants, with the derived cyclotron frequency
/// ω_c = eB/(mc), drift momentum scale λ = mcE/B and energy quantum κ = ħω_c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub hbar: f64,
    pub e_charge: f64,
    pub b_field: f64,
    pub c: f64,
    pub e_field: f64,
    pub omega_c: f64,
    pub lambda: f64,
    pub kappa: f64,
}

/// The independent inputs of [`PhysicalParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamInputs {
    pub m: f64,
    pub hbar: f64,
    pub e_charge: f64,
    pub b_field: f64,
    pub c: f64,
    pub e_field: f64,
}

impl Default for ParamInputs {
    /// Natural units, m = ħ = e = B = c = E = 1.
    fn default() -> Self {
        Self {
            m: 1.0,
            hbar: 1.0,
            e_charge: 1.0,
            b_field: 1.0,
            c: 1.0,
            e_field: 1.0,
        }
    }
}

impl ParamInputs {
    pub fn derive(&self) -> Result<PhysicalParams> {
        derive_params(self.m, self.hbar, self.e_charge, self.b_field, self.c, self.e_field)
    }
}

pub fn derive_params(m: f64, hbar: f64, e_charge: f64, b_field: f64, c: f64, e_field: f64) -> Result<PhysicalParams> {
    for (name, v) in [
        ("m", m),
        ("hbar", hbar),
        ("e_charge", e_charge),
        ("b_field", b_field),
        ("c", c),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(
                "derive_params",
                format!("{name} = {v} must be positive and finite"),
            ));
        }
    }
    if !(e_field >= 0.0) || !e_field.is_finite() {
        return Err(Error::domain(
            "derive_params",
            format!("e_field = {e_field} must be >= 0"),
        ));
    }
    let omega_c = e_charge * b_field / (m * c);
    Ok(PhysicalParams {
        m,
        hbar,
        e_charge,
        b_field,
        c,
        e_field,
        omega_c,
        lambda: m * c * e_field / b_field,
        kappa: hbar * omega_c,
    })
}

impl PhysicalParams {
    pub fn inputs(&self) -> ParamInputs {
        ParamInputs {
            m: self.m,
            hbar: self.hbar,
            e_charge: self.e_charge,
            b_field: self.b_field,
            c: self.c,
            e_field: self.e_field,
        }
    }

    /// 2mħω_c, the value of [b, b†].
    pub fn ladder_scale_sq(&self) -> f64 {
        2.0 * self.m * self.hbar * self.omega_c
    }

    /// mω_c / (2ħ), the coefficient of xy in the plane-wave phase.
    pub fn xy_phase_coeff(&self) -> f64 {
        self.m * self.omega_c / (2.0 * self.hbar)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        ParamInputs::default().derive().expect("natural units are valid")
    }
}

/// Which symmetric gauge (and matching scalar potential) is in force.
///
/// `Gauge1`: A = (B/2·y, −B/2·x), Φ = −Ey. `Gauge2`: A = (−B/2·y, B/2·x), Φ = −Ex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeChoice {
    #[default]
    Gauge1,
    Gauge2,
}

/// Whether the ground energies are subtracted from the spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    /// Discrete levels κn, continuous part ε = λα/(mω_c).
    Shifted,
    /// Discrete levels κ(n + ½), continuous part with the λ²/(2mħω_c) offset.
    #[default]
    Unshifted,
}

/// Fock cutoffs for the two oscillator indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedBasis {
    pub n_max: usize,
    pub l_max: usize,
}

impl TruncatedBasis {
    pub fn new(n_max: usize, l_max: usize) -> Result<Self> {
        if n_max < 2 || l_max < 1 {
            return Err(Error::domain(
                "TruncatedBasis",
                format!("need n_max >= 2 and l_max >= 1, got ({n_max}, {l_max})"),
            ));
        }
        Ok(Self { n_max, l_max })
    }

    pub fn dim(&self) -> usize {
        self.n_max * self.l_max
    }
}
