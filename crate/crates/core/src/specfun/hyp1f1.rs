//! Kummer's function ₁F₁(1; η; x) for real η > 0 and x ≥ 0.
//!
//! With a = 1 the Kummer series is Σ x^k / (η)_k. For large x we use
//!
//! ```text
//! ₁F₁(1; η; x) = Γ(η) eˣ x^{1−η} − (η − 1) x^{1−η} eˣ Γ(η − 1, x)
//! ```
//!
//! and the asymptotic expansion of the upper incomplete gamma function,
//! which turns the second term into (η − 1)/x · Σ_k (η−2)(η−3)…(η−1−k) / x^k.

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_unchecked;

/// Switch point between the power series and the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 30.0;

const MAX_SERIES_TERMS: usize = 10_000;

fn check_args(eta: f64, x: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::domain("hyp1f1_1_eta", format!("eta = {eta} must be positive")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "hyp1f1_1_eta",
            format!("x = {x} must be finite and >= 0"),
        ));
    }
    Ok(())
}

/// Power series Σ x^k/(η)_k, summed until the terms stop mattering.
pub fn hyp1f1_series(eta: f64, x: f64) -> Result<f64> {
    check_args(eta, x)?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        term *= x / (eta + k as f64);
        sum += term;
        if term <= f64::EPSILON * 1e-2 * sum && (k as f64 + eta) > x {
            return Ok(sum);
        }
        if !sum.is_finite() {
            return Err(Error::Overflow {
                what: "hyp1f1_1_eta",
                log_value: f64::INFINITY,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "hyp1f1_1_eta series",
        estimate: sum,
        error_bound: term,
    })
}

/// The bracket of the large-x form, split as (log of leading term, correction).
fn asymptotic_parts(eta: f64, x: f64) -> (f64, f64) {
    let ln_main = ln_gamma_unchecked(eta) + x + (1.0 - eta) * x.ln();
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev_abs = f64::INFINITY;
    for k in 1..200 {
        term *= (eta - 1.0 - k as f64) / x;
        let a = term.abs();
        if a >= prev_abs {
            break;
        }
        sum += term;
        prev_abs = a;
        if a <= f64::EPSILON * 1e-2 * sum.abs() {
            break;
        }
    }
    (ln_main, (eta - 1.0) / x * sum)
}

/// Large-x evaluation of ₁F₁(1; η; x).
pub fn hyp1f1_asymptotic(eta: f64, x: f64) -> Result<f64> {
    check_args(eta, x)?;
    if x < 1.0 {
        return Err(Error::domain(
            "hyp1f1_asymptotic",
            format!("x = {x} is too small for the asymptotic form"),
        ));
    }
    let (ln_main, corr) = asymptotic_parts(eta, x);
    if ln_main > f64::MAX.ln() {
        return Err(Error::Overflow {
            what: "hyp1f1_1_eta",
            log_value: ln_main,
        });
    }
    Ok(ln_main.exp() - corr)
}

/// ₁F₁(1; η; x), series for x ≤ 30 and asymptotic expansion beyond.
pub fn hyp1f1_1_eta(eta: f64, x: f64) -> Result<f64> {
    check_args(eta, x)?;
    if x <= SERIES_LIMIT {
        hyp1f1_series(eta, x)
    } else {
        hyp1f1_asymptotic(eta, x)
    }
}

/// ln ₁F₁(1; η; x); finite for every admissible argument.
pub fn ln_hyp1f1_1_eta(eta: f64, x: f64) -> Result<f64> {
    check_args(eta, x)?;
    if x <= SERIES_LIMIT {
        Ok(hyp1f1_series(eta, x)?.ln())
    } else {
        let (ln_main, corr) = asymptotic_parts(eta, x);
        // corr / main is below e^{-29} here, so ln_1p is exact enough.
        Ok(ln_main + (-corr * (-ln_main).exp()).ln_1p())
    }
}
