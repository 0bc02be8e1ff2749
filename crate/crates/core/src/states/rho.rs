//! ρ-weights and the normalizers N(J) and N_ρ(K).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SpectrumMode;
use crate::specfun::{
    integrate_semiaxis, ln_factorial, ln_gamma_unchecked, ln_hyp1f1_1_eta, ln_pochhammer, SemiAxisIntegrand,
};

const LN_MAX: f64 = 709.782_712_893_384;

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::domain("rho", format!("kappa = {kappa} must be positive")));
    }
    Ok(())
}

fn check_label(what: &'static str, j: f64) -> Result<()> {
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::domain(what, format!("label {j} must be finite and >= 0")));
    }
    Ok(())
}

fn exp_checked(what: &'static str, ln: f64) -> Result<f64> {
    if ln > LN_MAX {
        return Err(Error::Overflow { what, log_value: ln });
    }
    Ok(ln.exp())
}

/// ln ρ(n): ln n! when shifted, n ln κ + ln (3/2)ₙ otherwise.
pub fn ln_rho_discrete(mode: SpectrumMode, n: u32, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(match mode {
        SpectrumMode::Shifted => ln_factorial(n),
        SpectrumMode::Unshifted => n as f64 * kappa.ln() + ln_pochhammer(1.5, n)?,
    })
}

pub fn rho_discrete(mode: SpectrumMode, n: u32, kappa: f64) -> Result<f64> {
    exp_checked("rho_discrete", ln_rho_discrete(mode, n, kappa)?)?;
    Ok((0..n as usize).map(|k| rho_step(mode, k, kappa)).product())
}

/// ρ(n+1)/ρ(n).
pub fn rho_step(mode: SpectrumMode, n: usize, kappa: f64) -> f64 {
    match mode {
        SpectrumMode::Shifted => (n + 1) as f64,
        SpectrumMode::Unshifted => kappa * (n as f64 + 1.5),
    }
}

/// ln N(J): J when shifted, ln ₁F₁(1; 3/2; J/κ) otherwise.
pub fn ln_norm_const_discrete(mode: SpectrumMode, j: f64, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    check_label("norm_const_discrete", j)?;
    match mode {
        SpectrumMode::Shifted => Ok(j),
        SpectrumMode::Unshifted => ln_hyp1f1_1_eta(1.5, j / kappa),
    }
}

pub fn norm_const_discrete(mode: SpectrumMode, j: f64, kappa: f64) -> Result<f64> {
    exp_checked("norm_const_discrete", ln_norm_const_discrete(mode, j, kappa)?)
}

/// ln(Jⁿ/ρ(n)), with 0⁰ = 1.
pub fn ln_series_term(mode: SpectrumMode, n: u32, j: f64, kappa: f64) -> Result<f64> {
    let power = if n == 0 { 0.0 } else { n as f64 * j.ln() };
    Ok(power - ln_rho_discrete(mode, n, kappa)?)
}

/// Upper bound on Σ_{n ≥ cutoff} Jⁿ/ρ(n) relative to N(J), from the ratio test.
///
/// The term ratio J/(ρ(n+1)/ρ(n)) decreases in n, so once it is below one the
/// tail is dominated by a geometric series. Returns infinity otherwise.
pub fn discrete_tail_bound(mode: SpectrumMode, j: f64, kappa: f64, cutoff: usize) -> Result<f64> {
    check_label("discrete_tail_bound", j)?;
    check_kappa(kappa)?;
    if j == 0.0 {
        return Ok(if cutoff == 0 { 1.0 } else { 0.0 });
    }
    let r = j / rho_step(mode, cutoff, kappa);
    if r >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let n = u32::try_from(cutoff).map_err(|_| Error::domain("discrete_tail_bound", "cutoff too large"))?;
    let ln_tail = ln_series_term(mode, n, j, kappa)? - (1.0 - r).ln() - ln_norm_const_discrete(mode, j, kappa)?;
    Ok(ln_tail.exp().min(1.0))
}

/// Smallest cutoff whose relative tail bound is at most `threshold`.
pub fn required_cutoff(mode: SpectrumMode, j: f64, kappa: f64, threshold: f64) -> Result<usize> {
    if !(threshold > 0.0) {
        return Err(Error::domain(
            "required_cutoff",
            format!("threshold {threshold} must be positive"),
        ));
    }
    const LIMIT: usize = 1 << 20;
    let mut cutoff = 1;
    while cutoff <= LIMIT {
        let tail = discrete_tail_bound(mode, j, kappa, cutoff)?;
        if tail <= threshold {
            return Ok(cutoff);
        }
        cutoff += 1;
    }
    Err(Error::CutoffTooSmall {
        cutoff: LIMIT,
        tail_bound: discrete_tail_bound(mode, j, kappa, LIMIT)?,
        threshold,
    })
}

/// Partial sum Σ_{n < terms} Jⁿ/ρ(n) with an absolute bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub sum: f64,
    pub tail_bound: f64,
}

pub fn norm_const_discrete_partial(mode: SpectrumMode, j: f64, kappa: f64, terms: usize) -> Result<PartialSum> {
    check_label("norm_const_discrete_partial", j)?;
    check_kappa(kappa)?;
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 0..terms {
        sum += term;
        term *= j / rho_step(mode, n, kappa);
    }
    let rel = discrete_tail_bound(mode, j, kappa, terms)?;
    let tail_bound = if rel.is_finite() {
        rel * norm_const_discrete(mode, j, kappa)?
    } else {
        f64::INFINITY
    };
    Ok(PartialSum { sum, tail_bound })
}

/// The continuous ρ-weight and its moment weight σ, ∫₀^∞ K^ε σ(K) dK = ρ(ε).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoContinuous {
    /// ρ(ε) = Γ(ε + 1), σ(K) = e^{−K}.
    #[default]
    Gamma,
}

impl RhoContinuous {
    pub fn ln_rho(&self, eps: f64) -> f64 {
        match self {
            RhoContinuous::Gamma => ln_gamma_unchecked(eps + 1.0),
        }
    }

    pub fn rho(&self, eps: f64) -> f64 {
        self.ln_rho(eps).exp()
    }

    pub fn sigma(&self, k: f64) -> f64 {
        match self {
            RhoContinuous::Gamma => (-k).exp(),
        }
    }

    /// ln of the integrand K^ε/ρ(ε) of N_ρ(K).
    pub fn ln_density(&self, k: f64, eps: f64) -> f64 {
        eps * k.ln() - self.ln_rho(eps)
    }
}

pub(crate) fn check_k(what: &'static str, k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(what, format!("K = {k} must be positive and finite")));
    }
    Ok(())
}

/// N_ρ(K) = ∫₀^∞ K^ε/ρ(ε) dε by adaptive quadrature, independent of any ε-grid.
pub fn norm_const_continuous_exact(k: f64, rho: RhoContinuous, tol: f64) -> Result<f64> {
    check_k("norm_const_continuous_exact", k)?;
    let f = |e: f64| rho.ln_density(k, e).exp();
    integrate_semiaxis(SemiAxisIntegrand::General(&f), tol)
}
