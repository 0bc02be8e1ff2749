use std::f64::consts::PI;

use landau_gk::model::{derive_params, ladder_matrix, on_first_factor, on_second_factor, LadderKind, SpectrumMode};
use landau_gk::specfun::{gamma, hyp1f1_asymptotic, hyp1f1_series, laguerre, ln_factorial, pochhammer, QuadratureRule};
use landau_gk::states::{
    build_combined_cs, build_continuous_cs, build_discrete_cs, default_omega, evolve_amplitudes, from_json,
    required_cutoff, time_evolve, to_json, Construction, ContinuousPhase, Cutoff, DiscreteLabels, Envelopes,
    EpsilonGrid, GridSpec, RhoContinuous,
};
use landau_gk::verify::{check_laguerre_grid, check_resolution_discrete, DiscreteResolutionConfig, LaguerreForm};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = SpectrumMode> {
    prop_oneof![Just(SpectrumMode::Shifted), Just(SpectrumMode::Unshifted)]
}

fn construction() -> impl Strategy<Value = Construction> {
    prop_oneof![Just(Construction::FixedL), Just(Construction::FixedN)]
}

fn binomial(top: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (top - i as f64) / (i + 1) as f64)
}

/// Σ_m (−1)^m C(n + a, n − m) x^m / m!, with the absolute-value sum as its scale.
fn laguerre_oracle(n: u32, a: f64, x: f64) -> (f64, f64) {
    (0..=n).fold((0.0, 0.0), |(s, scale), m| {
        let t = binomial(n as f64 + a, n - m) * x.powi(m as i32) / gamma(m as f64 + 1.0).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        (s + sign * t, scale + t.abs())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_is_a_gamma_ratio(n in 0u32..=50, a in prop_oneof![Just(1.0), Just(1.5), 0.2f64..4.0]) {
        let want = gamma(a + n as f64).unwrap() / gamma(a).unwrap();
        prop_assert!((pochhammer(a, n) / want - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn hyp1f1_branches_meet_on_crossover_band(x in 25.0f64..35.0, eta in prop_oneof![Just(1.5), 1.0f64..3.0]) {
        let s = hyp1f1_series(eta, x).unwrap();
        let a = hyp1f1_asymptotic(eta, x).unwrap();
        prop_assert!((s / a - 1.0).abs() <= 1e-8, "x={} eta={}: {} vs {}", x, eta, s, a);
    }

    #[test]
    fn gauss_laguerre_is_exact_below_degree_2q(q in 1usize..=64, frac in 0.0f64..1.0) {
        let k = ((2 * q - 1) as f64 * frac).floor() as i32;
        let rule = QuadratureRule::gauss_laguerre(q, 0.0).unwrap();
        // Σ wᵢ xᵢᵏ / k!, accumulated in the log domain to stay finite at high k.
        let ln_k = ln_factorial(k as u32);
        let got: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| (w.ln() + k as f64 * x.ln() - ln_k).exp())
            .sum();
        prop_assert!((got - 1.0).abs() <= 1e-12, "q={} k={}: {}", q, k, got);
    }

    #[test]
    fn laguerre_recurrence_matches_monomials(n in 0u32..=12, a in prop_oneof![Just(0.0), Just(0.5), Just(1.0)], x in 0.0f64..10.0) {
        let (want, scale) = laguerre_oracle(n, a, x);
        prop_assert!((laguerre(n, a, x) - want).abs() <= 1e-9 * scale.max(want.abs()));
    }

    #[test]
    fn tensor_factors_commute(n in 2usize..8, m in 2usize..8, kind in prop_oneof![Just(LadderKind::BPrime), Just(LadderKind::BPrimeDag)]) {
        let p = derive_params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let a = on_first_factor(&ladder_matrix(kind, n, &p).unwrap(), m);
        let b = on_second_factor(n, &ladder_matrix(LadderKind::BPrimeDag, m, &p).unwrap());
        prop_assert_eq!(a.commutator(&b).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn fixed_sectors_sum_to_one(j in 0.0f64..6.0, jp in 0.0f64..6.0, gamma in -3.0f64..3.0, kappa in 0.5f64..2.0, m in mode()) {
        let sectors = required_cutoff(m, jp, kappa, 1e-12).unwrap();
        let total: f64 = (0..sectors as u32)
            .map(|l| {
                let labels = DiscreteLabels::new(j, gamma, jp, 0.4);
                build_discrete_cs(m, labels, Construction::FixedL, l, Cutoff::Auto, kappa).unwrap().norm_sqr()
            })
            .sum();
        prop_assert!((total - 1.0).abs() <= 1e-10, "{}", total);
    }

    #[test]
    fn continuous_states_are_normalized(k in 0.1f64..5.0, theta in -PI..PI) {
        let grid = EpsilonGrid::for_k(k, RhoContinuous::Gamma, &GridSpec::default()).unwrap();
        let c = build_continuous_cs(k, theta, RhoContinuous::Gamma, &grid, ContinuousPhase::Negative).unwrap();
        prop_assert!((c.norm_sqr() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn gamma_periodicity(j in 0.0f64..5.0, g in -PI..PI, kappa in 0.5f64..2.0, m in mode()) {
        let period = match m {
            SpectrumMode::Shifted => 2.0 * PI,
            SpectrumMode::Unshifted => 2.0 * PI / kappa,
        };
        let a = build_discrete_cs(m, DiscreteLabels::new(j, g, 1.0, 0.2), Construction::FixedL, 1, Cutoff::Auto, kappa).unwrap();
        let b = build_discrete_cs(m, DiscreteLabels::new(j, g + period, 1.0, 0.2), Construction::FixedL, 1, Cutoff::Auto, kappa).unwrap();
        let ov = a.overlap(&b).unwrap().norm() / (a.norm_sqr() * b.norm_sqr()).sqrt();
        prop_assert!((ov - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn label_shift_is_time_evolution(
        m in mode(),
        c in construction(),
        j in 0.1f64..4.0,
        k in 0.2f64..3.0,
        beta in 0.0f64..(2.0 * PI),
        t in prop_oneof![Just(0.1), Just(1.0), Just(10.0), 0.0f64..10.0],
    ) {
        let p = derive_params(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let d = build_discrete_cs(m, DiscreteLabels::new(j, 0.3, 0.9, -0.4), c, 2, Cutoff::Auto, p.kappa).unwrap();
        let grid = EpsilonGrid::for_k(k, RhoContinuous::Gamma, &GridSpec::default()).unwrap();
        let cont = build_continuous_cs(k, 0.1, RhoContinuous::Gamma, &grid, ContinuousPhase::Negative).unwrap();
        let cs = build_combined_cs(d, cont, beta, &Envelopes { n_f: 1.0, n_g: 1.0 }).unwrap();
        let omega = default_omega(cs.discrete().cutoff(), &p);
        let a = time_evolve(&cs, t / p.omega_c, omega, &p).unwrap().amplitudes();
        let b = evolve_amplitudes(&cs, t / p.omega_c, omega, &p).unwrap();
        prop_assert!(a.max_abs_deviation(&b).unwrap() <= 1e-12);
    }

    #[test]
    fn export_round_trip_is_bit_exact(m in mode(), j in 0.0f64..5.0, k in 0.2f64..3.0, theta in -3.0f64..3.0, beta in 0.0f64..(2.0 * PI)) {
        let d = build_discrete_cs(m, DiscreteLabels::new(j, 0.7, 1.1, 0.0), Construction::FixedN, 0, Cutoff::Auto, 1.0).unwrap();
        let grid = EpsilonGrid::for_k(k, RhoContinuous::Gamma, &GridSpec { points: 200, ..GridSpec::default() }).unwrap();
        let cont = build_continuous_cs(k, theta, RhoContinuous::Gamma, &grid, ContinuousPhase::Positive).unwrap();
        let cs = build_combined_cs(d, cont, beta, &Envelopes { n_f: 0.7, n_g: 1.3 }).unwrap();
        let text = to_json(&cs).unwrap();
        let back = from_json(&text).unwrap();
        prop_assert_eq!(&back, &cs);
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }
}

#[test]
fn reports_are_deterministic() {
    let strip = |r: landau_gk::verify::VerificationReport| r.without_runtime();
    let a = strip(check_laguerre_grid(1.0, LaguerreForm::Corrected, 1e-7).unwrap());
    let b = strip(check_laguerre_grid(1.0, LaguerreForm::Corrected, 1e-7).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let cfg = DiscreteResolutionConfig::for_mode(SpectrumMode::Unshifted, 1.0, 10);
    let a: Vec<_> = check_resolution_discrete(&cfg, 1e-8, 1e-12)
        .unwrap()
        .into_iter()
        .map(strip)
        .collect();
    let b: Vec<_> = check_resolution_discrete(&cfg, 1e-8, 1e-12)
        .unwrap()
        .into_iter()
        .map(strip)
        .collect();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn resolution_residual_shrinks_from_32_to_128_nodes() {
    for m in [SpectrumMode::Shifted, SpectrumMode::Unshifted] {
        let cfg = DiscreteResolutionConfig {
            orders: vec![32, 64, 128],
            ..DiscreteResolutionConfig::for_mode(m, 1.0, 20)
        };
        let rs = check_resolution_discrete(&cfg, 1e-8, 1e-12).unwrap();
        let cert = rs
            .iter()
            .find(|r| r.check_name == "resolution_discrete_convergence")
            .unwrap();
        assert!(cert.pass, "{cert:?}");
    }
}
