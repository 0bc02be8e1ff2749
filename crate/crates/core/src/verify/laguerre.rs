//! The Laplace transform of t^{ν−n} L_n^{ν−n}:
//!
//! n! ∫₀^∞ t^{ν−n} e^{μt} L_n^{ν−n}[(σ − μ)t] e^{−st} dt = Γ(ν+1) (s − σ)ⁿ (s − μ)^{−ν−1}.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::error::{Error, Result};
use crate::specfun::{integrate_semiaxis, laguerre, ln_factorial, ln_gamma, SemiAxisIntegrand};

/// Sign of the Laguerre argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaguerreForm {
    /// Argument (σ − μ)t, for which the identity holds.
    #[default]
    Corrected,
    /// Argument (μ − σ)t; agrees with `Corrected` only when σ = μ.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreCase {
    pub n: u32,
    pub nu: f64,
    pub mu: f64,
    pub sigma: f64,
    pub s: f64,
}

/// 27 cases: n ∈ {0, 2, 5}, μ ∈ {0, 0.15, 0.3}, σ ∈ {−0.2, 0, μ}, ν = n + ½, s = 1/κ + μ.
pub fn laguerre_grid(kappa: f64) -> Vec<LaguerreCase> {
    let mut out = Vec::with_capacity(27);
    for n in [0u32, 2, 5] {
        for mu in [0.0, 0.15, 0.3] {
            for sigma in [-0.2, 0.0, mu] {
                out.push(LaguerreCase {
                    n,
                    nu: n as f64 + 0.5,
                    mu,
                    sigma,
                    s: 1.0 / kappa + mu,
                });
            }
        }
    }
    out
}

/// Both sides of the identity: (quadrature of the left side, closed-form right side).
pub fn laguerre_sides(case: LaguerreCase, form: LaguerreForm) -> Result<(f64, f64)> {
    let LaguerreCase { n, nu, mu, sigma, s } = case;
    let nf = n as f64;
    if !(nu > nf - 1.0) {
        return Err(Error::domain(
            "laguerre identity",
            format!("nu = {nu} must exceed n - 1 = {}", nf - 1.0),
        ));
    }
    if !(s > mu) {
        return Err(Error::Divergent(format!(
            "Laplace integral needs s > mu, got s = {s}, mu = {mu}"
        )));
    }
    let a = nu - nf;
    let slope = match form {
        LaguerreForm::Corrected => sigma - mu,
        LaguerreForm::Literal => mu - sigma,
    };
    let rate = s - mu;
    let f = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        (a * t.ln() - rate * t).exp() * laguerre(n, a, slope * t)
    };
    let lhs = ln_factorial(n).exp() * integrate_semiaxis(SemiAxisIntegrand::General(&f), 1e-13)?;
    let rhs = (ln_gamma(nu + 1.0)? - (nu + 1.0) * rate.ln()).exp() * (s - sigma).powi(n as i32);
    Ok((lhs, rhs))
}

/// Relative residual |LHS − RHS| / |RHS| (absolute when RHS = 0).
pub fn check_laguerre_identity(case: LaguerreCase, form: LaguerreForm, tolerance: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let (lhs, rhs) = laguerre_sides(case, form)?;
    let residual = if rhs == 0.0 {
        lhs.abs()
    } else {
        ((lhs - rhs) / rhs).abs()
    };
    Ok(VerificationReport::new("laguerre_identity", residual, tolerance)
        .param("n", case.n)
        .param("nu", case.nu)
        .param("mu", case.mu)
        .param("sigma", case.sigma)
        .param("s", case.s)
        .param("form", serde_json::to_value(form).expect("form serializes"))
        .detail("lhs", lhs)
        .detail("rhs", rhs)
        .timed(start))
}

/// Worst relative residual over [`laguerre_grid`].
pub fn check_laguerre_grid(kappa: f64, form: LaguerreForm, tolerance: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut per_case = Vec::new();
    for case in laguerre_grid(kappa) {
        let r = check_laguerre_identity(case, form, tolerance)?;
        worst = worst.max(r.residual);
        per_case.push(serde_json::json!([case.n, case.mu, case.sigma, r.residual]));
    }
    Ok(VerificationReport::new("laguerre_identity_grid", worst, tolerance)
        .param("kappa", kappa)
        .param("cases", per_case.len())
        .param("form", serde_json::to_value(form).expect("form serializes"))
        .detail("n_mu_sigma_residual", per_case)
        .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, laguerre_at_zero, QuadratureRule};

    fn case(n: u32, nu: f64, mu: f64, sigma: f64, s: f64) -> LaguerreCase {
        LaguerreCase { n, nu, mu, sigma, s }
    }

    #[test]
    fn n_zero_is_a_gamma_integral() {
        let (l, r) = laguerre_sides(case(0, 0.5, 0.0, 0.0, 1.0), LaguerreForm::Corrected).unwrap();
        let g = gamma(1.5).unwrap();
        assert!((l / g - 1.0).abs() < 1e-12);
        assert!((r / g - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spot_values() {
        let r = check_laguerre_identity(case(3, 3.5, 0.2, -0.1, 1.2), LaguerreForm::Corrected, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        // σ = μ: L_n^{ν−n}(0) = C(ν, n), so the left side is n! C(ν, n) Γ(ν − n + 1) (s − μ)^{n−ν−1}.
        let (n, nu, mu, s) = (4u32, 4.5f64, 0.25f64, 1.1f64);
        let closed = gamma(n as f64 + 1.0).unwrap()
            * laguerre_at_zero(n, nu - n as f64)
            * gamma(nu - n as f64 + 1.0).unwrap()
            * (s - mu).powf(n as f64 - nu - 1.0);
        let (l, r) = laguerre_sides(case(n, nu, mu, mu, s), LaguerreForm::Corrected).unwrap();
        assert!((l / closed - 1.0).abs() < 1e-8);
        assert!((r / closed - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_gauss_rule_agrees() {
        // With t^{ν−n} e^{−(s−μ)t} as the weight the integrand is a polynomial of degree n.
        let c = case(5, 5.5, 0.3, -0.2, 1.3);
        let a = c.nu - c.n as f64;
        let rate = c.s - c.mu;
        let rule = QuadratureRule::gauss_laguerre(8, a).unwrap();
        let v = rule.apply(|u| laguerre(c.n, a, (c.sigma - c.mu) * u / rate)) / rate.powf(a + 1.0)
            * gamma(c.n as f64 + 1.0).unwrap();
        let (l, r) = laguerre_sides(c, LaguerreForm::Corrected).unwrap();
        assert!((v / r - 1.0).abs() < 1e-12);
        assert!((l / r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn grid_passes_with_corrected_sign() {
        assert_eq!(laguerre_grid(1.0).len(), 27);
        let r = check_laguerre_grid(1.0, LaguerreForm::Corrected, 1e-7).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn literal_sign_fails_off_the_diagonal() {
        let r = check_laguerre_identity(case(2, 2.5, 0.3, -0.2, 1.3), LaguerreForm::Literal, 1e-7).unwrap();
        assert!(!r.pass);
        let r = check_laguerre_identity(case(2, 2.5, 0.3, 0.3, 1.3), LaguerreForm::Literal, 1e-7).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            laguerre_sides(case(1, 0.5, 1.0, 0.0, 1.0), LaguerreForm::Corrected),
            Err(Error::Divergent(_))
        ));
        assert!(laguerre_sides(case(3, 1.5, 0.0, 0.0, 1.0), LaguerreForm::Corrected).is_err());
    }
}
