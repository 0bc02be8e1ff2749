//! Moment problems, the ₁F₁ normalizer and the Poisson statistics of shifted states.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::model::SpectrumMode;
use crate::specfun::{hyp1f1_1_eta, integrate_interval, laguerre, ln_gamma, ln_hyp1f1_1_eta, AdaptiveConfig};
use crate::states::{build_discrete_cs, ln_rho_discrete, Construction, Cutoff, DiscreteLabels, DiscreteMeasure};

/// Candidate weights dν(J) for the discrete moment problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum MomentMeasure {
    Exp,
    Gamma32,
    /// The Laguerre-weighted density with free parameters μ, σ (η = 3/2).
    LaguerreWeighted {
        mu: f64,
        sigma: f64,
    },
}

impl MomentMeasure {
    pub fn name(&self) -> &'static str {
        match self {
            MomentMeasure::Exp => "exp",
            MomentMeasure::Gamma32 => "gamma32",
            MomentMeasure::LaguerreWeighted { .. } => "laguerre_weighted",
        }
    }
}

/// Gauss–Laguerre order used when none is given.
pub const DEFAULT_MOMENT_ORDER: usize = 64;

/// ln of the Laguerre-weighted density at J for moment n, with sign.
///
/// dν(J) = Γ²(n+1)/(κ^η Γ(η)) ₁F₁(1; η; J/κ) e^{−J/κ} J^{η−1−n} (1/κ + μ − σ)^{−n} L_n^{η−1}[(μ − σ)J] dJ.
pub fn laguerre_weighted_density(n: u32, j: f64, kappa: f64, mu: f64, sigma: f64) -> Result<f64> {
    let eta = 1.5;
    if !(kappa > 0.0) {
        return Err(Error::domain(
            "laguerre_weighted_density",
            format!("kappa = {kappa} must be positive"),
        ));
    }
    let base = 1.0 / kappa + mu - sigma;
    if n > 0 && base == 0.0 {
        return Err(Error::Degenerate("1/kappa + mu - sigma vanishes".into()));
    }
    if j <= 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let ln_abs = 2.0 * ln_gamma(nf + 1.0)? - eta * kappa.ln() - ln_gamma(eta)? + ln_hyp1f1_1_eta(eta, j / kappa)?
        - j / kappa
        + (eta - 1.0 - nf) * j.ln()
        - nf * base.abs().ln();
    let sign = if base < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    Ok(sign * ln_abs.exp() * laguerre(n, eta - 1.0, (mu - sigma) * j))
}

/// |∫ Jⁿ/ρ(n) dν(J) − 1| for the given measure.
///
/// `Exp` and `Gamma32` use a Gauss rule of `order` nodes. `LaguerreWeighted`
/// integrates adaptively on [0, X] for doubling X and reports
/// [`Error::Divergent`] when the partial integrals keep growing.
pub fn check_moment_discrete(
    mode: SpectrumMode,
    measure: MomentMeasure,
    n: u32,
    kappa: f64,
    order: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let ln_rho = ln_rho_discrete(mode, n, kappa)?;
    let value = match measure {
        MomentMeasure::Exp | MomentMeasure::Gamma32 => {
            let m = if measure == MomentMeasure::Exp {
                DiscreteMeasure::Exp
            } else {
                DiscreteMeasure::Gamma32
            };
            let (x, w) = m.gauss_rule(order, kappa)?;
            x.iter()
                .zip(&w)
                .map(|(&j, &wi)| {
                    if n == 0 {
                        wi
                    } else {
                        (wi.ln() + n as f64 * j.ln() - ln_rho).exp()
                    }
                })
                .sum::<f64>()
        }
        MomentMeasure::LaguerreWeighted { mu, sigma } => weighted_moment(n, kappa, mu, sigma, ln_rho)?,
    };
    let mut r = VerificationReport::new(format!("moment_{}", measure.name()), (value - 1.0).abs(), tolerance)
        .param("mode", serde_json::to_value(mode).expect("mode serializes"))
        .param("n", n)
        .param("kappa", kappa)
        .detail("moment", value);
    if let MomentMeasure::LaguerreWeighted { mu, sigma } = measure {
        r = r.param("mu", mu).param("sigma", sigma);
    } else {
        r = r.param("order", order);
    }
    Ok(r.timed(start))
}

fn weighted_moment(n: u32, kappa: f64, mu: f64, sigma: f64, ln_rho: f64) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let f = |j: f64| {
        if j <= 0.0 {
            return 0.0;
        }
        match laguerre_weighted_density(n, j, kappa, mu, sigma) {
            Ok(d) => d * (n as f64 * j.ln() - ln_rho).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = 25.0 * kappa;
    let mut last_piece = f64::INFINITY;
    for _ in 0..8 {
        let piece = integrate_interval(&f, lo, hi, 1e-12, AdaptiveConfig::default());
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let piece = piece?.value;
        total += piece;
        if piece.abs() <= 1e-13 * total.abs() {
            return Ok(total);
        }
        last_piece = piece;
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Divergent(format!(
        "moment n = {n} of the Laguerre-weighted measure (mu = {mu}, sigma = {sigma}): \
         integral up to J = {lo} is {total:.6e} and its last doubling added {last_piece:.6e}"
    )))
}

/// ₁F₁(1; 3/2; x) against √π eˣ erf(√x) / (2√x), relative, worst over `xs`.
pub fn check_hyp1f1(xs: &[f64], tolerance: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for &x in xs {
        if !(x > 0.0) {
            return Err(Error::domain("check_hyp1f1", format!("x = {x} must be positive")));
        }
        let z = x.sqrt();
        let oracle = std::f64::consts::PI.sqrt() * x.exp() * libm::erf(z) / (2.0 * z);
        let v = hyp1f1_1_eta(1.5, x)?;
        let rel = ((v - oracle) / oracle).abs();
        worst = worst.max(rel);
        rows.push(serde_json::json!([x, rel]));
    }
    Ok(VerificationReport::new("hyp1f1_erf", worst, tolerance)
        .param("x", xs.to_vec())
        .detail("relative_by_x", rows)
        .timed(start))
}

/// ⟨n⟩ = J for shifted states, whose weights |c_n|² are Poisson.
pub fn check_poisson(js: &[f64], tolerance: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut means = Vec::new();
    for &j in js {
        let cs = build_discrete_cs(
            SpectrumMode::Shifted,
            DiscreteLabels::new(j, 0.0, 1.0, 0.0),
            Construction::FixedL,
            0,
            Cutoff::Auto,
            1.0,
        )?;
        let mean = cs.mean_level();
        worst = worst.max((mean - j).abs());
        means.push(mean);
    }
    Ok(VerificationReport::new("poisson_mean", worst, tolerance)
        .param("j", js.to_vec())
        .detail("mean", means)
        .timed(start))
}
