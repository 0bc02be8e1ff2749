//! Discrete-sector coherent states on one degenerate subspace.
//!
//! With the fixed index f carrying labels (J_f, γ_f) and the running index k
//! carrying (J_r, γ_r), the coefficients are
//!
//! c_k = [N(J) N(J′)]^{−1/2} · J_f^{f/2} e^{+iω_f γ_f}/√ρ(f) · J_r^{k/2} e^{−iω_k γ_r}/√ρ(k)
//!
//! where ω_k = k in shifted mode and ω_k = E_k = κ(k + ½) in unshifted mode.
//! `FixedL` runs over n with labels (J, γ) and fixes l; `FixedN` runs over l
//! with labels (J′, γ′) and fixes n.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rho::{discrete_tail_bound, ln_norm_const_discrete, ln_series_term, required_cutoff};
use crate::error::{Error, Result};
use crate::model::SpectrumMode;

/// Relative tail allowed when no explicit threshold is given.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteLabels {
    pub j: f64,
    pub gamma: f64,
    pub j_prime: f64,
    pub gamma_prime: f64,
}

impl DiscreteLabels {
    pub fn new(j: f64, gamma: f64, j_prime: f64, gamma_prime: f64) -> Self {
        Self {
            j,
            gamma,
            j_prime,
            gamma_prime,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("J", self.j), ("J'", self.j_prime)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::domain(
                    "DiscreteLabels",
                    format!("{name} = {v} must be finite and >= 0"),
                ));
            }
        }
        for (name, v) in [("gamma", self.gamma), ("gamma'", self.gamma_prime)] {
            if !v.is_finite() {
                return Err(Error::domain("DiscreteLabels", format!("{name} = {v} must be finite")));
            }
        }
        Ok(())
    }
}

/// Which Fock index is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Fixed l, sum over n; time evolution moves γ.
    #[default]
    FixedL,
    /// Fixed n, sum over l; time evolution moves γ′.
    FixedN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cutoff {
    /// Smallest cutoff meeting the tail threshold.
    Auto,
    /// Exactly this many running levels.
    Levels(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCS {
    pub(crate) mode: SpectrumMode,
    pub(crate) kappa: f64,
    pub(crate) labels: DiscreteLabels,
    pub(crate) construction: Construction,
    pub(crate) fixed: u32,
    pub(crate) coeffs: Vec<Complex64>,
    pub(crate) sector_norm: f64,
    pub(crate) tail_bound: f64,
}

/// Phase frequency ω_k of level k.
pub fn phase_frequency(mode: SpectrumMode, k: u32, kappa: f64) -> f64 {
    match mode {
        SpectrumMode::Shifted => k as f64,
        SpectrumMode::Unshifted => kappa * (k as f64 + 0.5),
    }
}

pub fn build_discrete_cs(
    mode: SpectrumMode,
    labels: DiscreteLabels,
    construction: Construction,
    fixed: u32,
    cutoff: Cutoff,
    kappa: f64,
) -> Result<DiscreteCS> {
    build_discrete_cs_with(mode, labels, construction, fixed, cutoff, kappa, DEFAULT_TAIL_THRESHOLD)
}

pub fn build_discrete_cs_with(
    mode: SpectrumMode,
    labels: DiscreteLabels,
    construction: Construction,
    fixed: u32,
    cutoff: Cutoff,
    kappa: f64,
    threshold: f64,
) -> Result<DiscreteCS> {
    labels.validate()?;
    let (j_run, g_run, j_fix, g_fix) = match construction {
        Construction::FixedL => (labels.j, labels.gamma, labels.j_prime, labels.gamma_prime),
        Construction::FixedN => (labels.j_prime, labels.gamma_prime, labels.j, labels.gamma),
    };
    let levels = match cutoff {
        Cutoff::Auto => required_cutoff(mode, j_run, kappa, threshold)?,
        Cutoff::Levels(c) => c,
    };
    if levels == 0 {
        return Err(Error::domain("build_discrete_cs", "cutoff must be at least 1"));
    }
    let rel_tail = discrete_tail_bound(mode, j_run, kappa, levels)?;
    if rel_tail > threshold {
        return Err(Error::CutoffTooSmall {
            cutoff: levels,
            tail_bound: rel_tail,
            threshold,
        });
    }
    let ln_n_run = ln_norm_const_discrete(mode, j_run, kappa)?;
    let ln_n_fix = ln_norm_const_discrete(mode, j_fix, kappa)?;
    let ln_fixed = ln_series_term(mode, fixed, j_fix, kappa)? - ln_n_fix;
    let fixed_phase = phase_frequency(mode, fixed, kappa) * g_fix;

    let mut coeffs = Vec::with_capacity(levels);
    for k in 0..levels as u32 {
        let ln_t = ln_series_term(mode, k, j_run, kappa)?;
        let modulus = (0.5 * (ln_t - ln_n_run + ln_fixed)).exp();
        let phase = fixed_phase - phase_frequency(mode, k, kappa) * g_run;
        coeffs.push(Complex64::from_polar(modulus, phase));
    }
    let sector_norm = ln_fixed.exp();
    Ok(DiscreteCS {
        mode,
        kappa,
        labels,
        construction,
        fixed,
        coeffs,
        sector_norm,
        tail_bound: sector_norm * rel_tail,
    })
}

impl DiscreteCS {
    pub fn mode(&self) -> SpectrumMode {
        self.mode
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn labels(&self) -> DiscreteLabels {
        self.labels
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn fixed(&self) -> u32 {
        self.fixed
    }

    /// Coefficients over the running index.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact squared norm of the untruncated state on its fixed-index subspace.
    pub fn sector_norm(&self) -> f64 {
        self.sector_norm
    }

    /// Bound on the squared norm dropped by the truncation.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Σ |c_k|² over the retained levels.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Labels of the running index.
    pub fn running_labels(&self) -> (f64, f64) {
        match self.construction {
            Construction::FixedL => (self.labels.j, self.labels.gamma),
            Construction::FixedN => (self.labels.j_prime, self.labels.gamma_prime),
        }
    }

    /// New labels at the same cutoff, without a tail check.
    pub fn rebuild(&self, labels: DiscreteLabels) -> Result<DiscreteCS> {
        build_discrete_cs_with(
            self.mode,
            labels,
            self.construction,
            self.fixed,
            Cutoff::Levels(self.cutoff()),
            self.kappa,
            f64::INFINITY,
        )
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.mode != other.mode
            || self.kappa != other.kappa
            || self.construction != other.construction
            || self.fixed != other.fixed
        {
            return Err(Error::Incompatible(format!(
                "discrete states differ in mode/kappa/construction/fixed index: ({:?}, {}, {:?}, {}) vs ({:?}, {}, {:?}, {})",
                self.mode, self.kappa, self.construction, self.fixed, other.mode, other.kappa, other.construction, other.fixed
            )));
        }
        Ok(())
    }

    /// ⟨self|other⟩; missing levels of the shorter state count as zero.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum())
    }

    /// ‖self − other‖², zero-padding the shorter state.
    pub fn distance_sqr(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let n = self.cutoff().max(other.cutoff());
        let zero = Complex64::new(0.0, 0.0);
        Ok((0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm_sqr()
            })
            .sum())
    }

    /// Σ k |c_k|² / Σ |c_k|².
    pub fn mean_level(&self) -> f64 {
        let (num, den) = self.coeffs.iter().enumerate().fold((0.0, 0.0), |(a, b), (k, c)| {
            (a + k as f64 * c.norm_sqr(), b + c.norm_sqr())
        });
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::rho::{norm_const_discrete, rho_discrete};
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    const S: SpectrumMode = SpectrumMode::Shifted;
    const U: SpectrumMode = SpectrumMode::Unshifted;

    fn build(mode: SpectrumMode, l: DiscreteLabels, c: Construction, fixed: u32) -> DiscreteCS {
        build_discrete_cs(mode, l, c, fixed, Cutoff::Auto, 1.0).unwrap()
    }

    #[test]
    fn zero_label_concentrates_on_ground_level() {
        for mode in [S, U] {
            let jp = 1.7;
            let l = 3;
            let cs = build(mode, DiscreteLabels::new(0.0, 0.4, jp, 0.9), Construction::FixedL, l);
            assert_eq!(cs.cutoff(), 1);
            let want =
                (jp.powi(l as i32) / rho_discrete(mode, l, 1.0).unwrap() / norm_const_discrete(mode, jp, 1.0).unwrap())
                    .sqrt();
            assert_relative_eq!(cs.coeffs()[0].norm(), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn fixed_sector_norm() {
        let cs = build(S, DiscreteLabels::new(1.0, 0.0, 1.0, 0.0), Construction::FixedL, 0);
        assert_relative_eq!(cs.norm_sqr(), 1.0 / E, max_relative = 1e-12);
        assert_relative_eq!(cs.sector_norm(), 1.0 / E, max_relative = 1e-15);
        let gap = cs.sector_norm() - cs.norm_sqr();
        assert!(gap >= -1e-15 && gap <= cs.tail_bound() + 1e-15);
    }

    #[test]
    fn shifted_phase_period() {
        let a = build(S, DiscreteLabels::new(2.0, 0.3, 1.0, 0.2), Construction::FixedL, 1);
        let b = build(
            S,
            DiscreteLabels::new(2.0, 0.3 + 2.0 * PI, 1.0, 0.2),
            Construction::FixedL,
            1,
        );
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn unshifted_phase_period_up_to_global_phase() {
        for kappa in [0.5, 1.0, 2.0] {
            let l1 = DiscreteLabels::new(1.5, 0.3, 1.0, 0.2);
            let l2 = DiscreteLabels::new(1.5, 0.3 + 2.0 * PI / kappa, 1.0, 0.2);
            let a = build_discrete_cs(U, l1, Construction::FixedL, 2, Cutoff::Auto, kappa).unwrap();
            let b = build_discrete_cs(U, l2, Construction::FixedL, 2, Cutoff::Auto, kappa).unwrap();
            let ov = a.overlap(&b).unwrap().norm() / (a.norm_sqr() * b.norm_sqr()).sqrt();
            assert!((ov - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_at_opposite_phase_matches_series() {
        let (j, jp, l) = (1.3, 0.8, 2u32);
        let a = build(S, DiscreteLabels::new(j, 0.1, jp, 0.0), Construction::FixedL, l);
        let b = build(S, DiscreteLabels::new(j, 0.1 + PI, jp, 0.0), Construction::FixedL, l);
        let mut series = 0.0;
        let mut t = 1.0;
        for n in 0..60 {
            series += if n % 2 == 0 { t } else { -t };
            t *= j / (n + 1) as f64;
        }
        let fixed = jp.powi(l as i32) / 2.0 / jp.exp();
        let want = (-j).exp() * fixed * series;
        let got = a.overlap(&b).unwrap();
        // Truncation drops at most the tail bound of |c_n|².
        assert!(
            (got.re - want).abs() <= a.tail_bound() && got.im.abs() < 1e-14,
            "{got} {want}"
        );
        assert_relative_eq!(want, fixed * (-2.0 * j).exp(), max_relative = 1e-12);
    }

    #[test]
    fn overlap_is_hermitian() {
        let a = build(U, DiscreteLabels::new(2.0, 0.3, 1.0, 0.2), Construction::FixedN, 1);
        let b = build(U, DiscreteLabels::new(2.5, -0.7, 1.2, 1.1), Construction::FixedN, 1);
        let ab = a.overlap(&b).unwrap();
        let ba = b.overlap(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
        let aa = a.overlap(&a).unwrap();
        assert!(aa.re > 0.0 && aa.im == 0.0);
    }

    #[test]
    fn summing_subspaces_gives_unit_norm() {
        for mode in [S, U] {
            for c in [Construction::FixedL, Construction::FixedN] {
                let labels = DiscreteLabels::new(2.0, 0.3, 1.5, -0.4);
                let fix_label = match c {
                    Construction::FixedL => labels.j_prime,
                    Construction::FixedN => labels.j,
                };
                let outer = required_cutoff(mode, fix_label, 1.0, 1e-12).unwrap() as u32;
                let total: f64 = (0..outer).map(|f| build(mode, labels, c, f).norm_sqr()).sum();
                assert!((total - 1.0).abs() < 1e-10, "{mode:?} {c:?} {total}");
            }
        }
    }

    #[test]
    fn poisson_mean() {
        for j in [0.5, 2.0, 4.0] {
            let cs = build(S, DiscreteLabels::new(j, 0.0, 0.0, 0.0), Construction::FixedL, 0);
            assert!((cs.mean_level() - j).abs() < 1e-9);
        }
    }

    #[test]
    fn small_cutoff_is_reported() {
        let err = build_discrete_cs(
            S,
            DiscreteLabels::new(4.0, 0.0, 0.0, 0.0),
            Construction::FixedL,
            0,
            Cutoff::Levels(5),
            1.0,
        );
        assert!(matches!(err, Err(Error::CutoffTooSmall { cutoff: 5, .. })));
    }

    #[test]
    fn mismatched_states_are_incompatible() {
        let a = build(S, DiscreteLabels::new(1.0, 0.0, 1.0, 0.0), Construction::FixedL, 0);
        let b = build(S, DiscreteLabels::new(1.0, 0.0, 1.0, 0.0), Construction::FixedL, 1);
        let c = build(U, DiscreteLabels::new(1.0, 0.0, 1.0, 0.0), Construction::FixedL, 0);
        assert!(matches!(a.overlap(&b), Err(Error::Incompatible(_))));
        assert!(matches!(a.overlap(&c), Err(Error::Incompatible(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn truncated_norm_within_tail(j in 0.0f64..20.0, jp in 0.0f64..5.0, fixed in 0u32..6, shifted in any::<bool>(), kappa in 0.5f64..2.0) {
                let mode = if shifted { S } else { U };
                let cs = build_discrete_cs(mode, DiscreteLabels::new(j, 0.2, jp, -0.3), Construction::FixedL, fixed, Cutoff::Auto, kappa).unwrap();
                let gap = cs.sector_norm() - cs.norm_sqr();
                prop_assert!(cs.norm_sqr() <= 1.0 + 1e-12);
                prop_assert!(gap >= -1e-12 * cs.sector_norm());
                prop_assert!(gap <= cs.tail_bound() + 1e-12 * cs.sector_norm());
            }
        }
    }
}
