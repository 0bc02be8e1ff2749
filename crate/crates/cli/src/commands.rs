//! The five subcommands. Each writes its files under `out_dir` and returns
//! what it wrote together with the process exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use landau_gk::model::{alpha_bound, continuous_energy, discrete_energy, phi_alpha, PhysicalParams, SpectrumMode};
use landau_gk::states::{
    build_combined_cs, build_continuous_cs, build_discrete_cs_with, to_json, CombinedCS, Cutoff, DiscreteCS,
    DiscreteLabels, DiscreteMeasure, Envelopes, EpsilonGrid, NormCache, RhoContinuous,
};
use landau_gk::verify::{run_group, CheckGroup, VerificationReport};
use landau_gk::Error;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{exit, CliError, CliResult};

const RHO: RhoContinuous = RhoContinuous::Gamma;
const ENVELOPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            exit_code: exit::SUCCESS,
            files: Vec::new(),
            summary: Vec::new(),
            warnings: Vec::new(),
        }
    }
}

/// Round-trip decimal: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_file(dir: &Path, name: &str, body: &str, out: &mut Outcome) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    out.files.push(path);
    Ok(())
}

fn bound_of(mode: SpectrumMode, p: &PhysicalParams) -> CliResult<f64> {
    alpha_bound(mode, p).map_err(|e| CliError::field("params.e_field", e.to_string()))
}

/// CSV of n, l, α and the energies; α above the bound is flagged in `valid`.
pub fn spectrum(cfg: &RunConfig) -> CliResult<Outcome> {
    let p = cfg.physical()?;
    let bound = bound_of(cfg.mode, &p)?;
    let s = &cfg.spectrum;
    let mut csv = String::from("n,l,alpha,E_discrete,E_continuous,E_total,valid\n");
    let mut invalid = 0usize;
    for n in 0..=s.n_max {
        for l in 0..=s.l_max {
            for &alpha in &s.alpha {
                let ed = discrete_energy(cfg.mode, n, &p);
                let ec = continuous_energy(cfg.mode, alpha, &p);
                let valid = alpha <= bound;
                if !valid {
                    invalid += 1;
                }
                writeln!(
                    csv,
                    "{n},{l},{},{},{},{},{}",
                    num(alpha),
                    num(ed),
                    num(ec),
                    num(ed + ec),
                    valid as u8
                )
                .expect("writing to a String");
            }
        }
    }
    let mut out = Outcome::new();
    write_file(&cfg.out_dir, "spectrum.csv", &csv, &mut out)?;
    if invalid > 0 {
        out.warnings.push(format!(
            "{invalid} row(s) have alpha above the bound {} and a negative continuous energy",
            num(bound)
        ));
    }
    Ok(out)
}

fn envelopes(cfg: &RunConfig, kappa: f64) -> CliResult<Envelopes> {
    match cfg.state.envelopes {
        Some(e) => Ok(e),
        None => Envelopes::compute(DiscreteMeasure::for_mode(cfg.mode), kappa, RHO, ENVELOPE_TOL)
            .map_err(|e| CliError::compute("envelope normalizers", e)),
    }
}

fn discrete_state(cfg: &RunConfig, j: f64, kappa: f64) -> CliResult<DiscreteCS> {
    let s = &cfg.state;
    let cutoff = s.cutoff.map(Cutoff::Levels).unwrap_or(Cutoff::Auto);
    build_discrete_cs_with(
        cfg.mode,
        DiscreteLabels::new(j, s.gamma, s.j_prime, s.gamma_prime),
        s.construction,
        s.fixed_index,
        cutoff,
        kappa,
        s.tail_threshold,
    )
    .map_err(|e| match e {
        Error::CutoffTooSmall { .. } => CliError::field("state.cutoff", e.to_string()),
        other => CliError::compute("discrete state", other),
    })
}

/// The combined state described by the `state` section.
pub fn build_state(cfg: &RunConfig) -> CliResult<CombinedCS> {
    let p = cfg.physical()?;
    let s = &cfg.state;
    let d = discrete_state(cfg, s.j, p.kappa)?;
    let grid = EpsilonGrid::for_k(s.k, RHO, &s.grid).map_err(|e| CliError::compute("state.grid", e))?;
    let c =
        build_continuous_cs(s.k, s.theta, RHO, &grid, s.phase).map_err(|e| CliError::compute("continuous state", e))?;
    let env = envelopes(cfg, p.kappa)?;
    build_combined_cs(d, c, s.beta, &env).map_err(|e| CliError::compute("combined state", e))
}

/// State JSON plus plot tables of |c_k|² and |c(ε)|².
pub fn cs_build(cfg: &RunConfig) -> CliResult<Outcome> {
    let cs = build_state(cfg)?;
    let json = to_json(&cs).map_err(|e| CliError::compute("state export", e))?;
    let mut disc = String::from("level,abs2\n");
    for (k, c) in cs.discrete().coeffs().iter().enumerate() {
        writeln!(disc, "{k},{}", num(c.norm_sqr())).expect("writing to a String");
    }
    let mut cont = String::from("epsilon,abs2\n");
    for (e, c) in cs.continuous().grid().nodes().iter().zip(cs.continuous().values()) {
        writeln!(cont, "{},{}", num(*e), num(c.norm_sqr())).expect("writing to a String");
    }
    let mut out = Outcome::new();
    write_file(&cfg.out_dir, "state.json", &json, &mut out)?;
    write_file(&cfg.out_dir, "state_discrete.csv", &disc, &mut out)?;
    write_file(&cfg.out_dir, "state_continuous.csv", &cont, &mut out)?;
    out.summary.push(format!(
        "cutoff {}  mean level {}  tail bound {}",
        cs.discrete().cutoff(),
        num(cs.discrete().mean_level()),
        num(cs.discrete().tail_bound())
    ));
    Ok(out)
}

fn error_report(group: CheckGroup, e: &Error) -> VerificationReport {
    VerificationReport::new(group.name(), f64::INFINITY, 0.0).detail("error", e.to_string())
}

/// Runs the selected groups concurrently and writes the merged report in group order.
pub fn verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let suite = cfg.suite()?;
    let groups = CheckGroup::expand(&cfg.verify.checks);
    let results: Vec<_> = groups.par_iter().map(|&g| (g, run_group(&suite, g))).collect();

    let mut reports = Vec::new();
    let mut non_converged = false;
    for (g, r) in results {
        match r {
            Ok(rs) => reports.extend(rs),
            Err(e) => {
                non_converged |= matches!(e, Error::NonConvergence { .. } | Error::Divergent(_));
                reports.push(error_report(g, &e));
            }
        }
    }
    if !cfg.verify.include_runtime {
        reports = reports.into_iter().map(VerificationReport::without_runtime).collect();
    }
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    let mut out = Outcome::new();
    write_file(&cfg.out_dir, "verify_report.json", &json, &mut out)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    for r in &reports {
        out.summary.push(format!(
            "{} {:<36} residual {:.3e}  tolerance {:.3e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check_name,
            r.residual,
            r.tolerance
        ));
    }
    out.summary
        .push(format!("{} of {} checks passed", reports.len() - failed, reports.len()));
    out.exit_code = if non_converged {
        exit::NON_CONVERGENCE
    } else if failed > 0 {
        exit::VERIFICATION_FAILED
    } else {
        exit::SUCCESS
    };
    Ok(out)
}

/// φ_α on a rectangular grid, x outermost.
pub fn wavefunction(cfg: &RunConfig) -> CliResult<Outcome> {
    let p = cfg.physical()?;
    let w = &cfg.wavefunction;
    let mut out = Outcome::new();
    match alpha_bound(cfg.mode, &p) {
        Ok(b) if w.alpha > b => out.warnings.push(format!(
            "wavefunction.alpha = {} exceeds the bound {}; the continuous energy is negative",
            num(w.alpha),
            num(b)
        )),
        Ok(_) => {}
        Err(e) => out.warnings.push(format!("no alpha bound: {e}")),
    }
    let ys = w.y.values();
    let mut csv = String::from("x,y,re,im\n");
    for x in w.x.values() {
        for &y in &ys {
            let v = phi_alpha(cfg.gauge, w.alpha, x, y, &p);
            writeln!(csv, "{},{},{},{}", num(x), num(y), num(v.re), num(v.im)).expect("writing to a String");
        }
    }
    write_file(&cfg.out_dir, "wavefunction.csv", &csv, &mut out)?;
    Ok(out)
}

/// Combined states over the (J, K) grid; rows follow the input order.
pub fn sweep(cfg: &RunConfig) -> CliResult<Outcome> {
    let p = cfg.physical()?;
    let s = &cfg.state;
    let sw = &cfg.sweep;
    let k_max = sw.k.iter().copied().fold(0.0, f64::max);
    let grid = EpsilonGrid::for_k(k_max, RHO, &s.grid).map_err(|e| CliError::compute("state.grid", e))?;
    let cache = NormCache::build(&sw.k, RHO, &grid).map_err(|e| CliError::compute("sweep.k", e))?;
    let env = envelopes(cfg, p.kappa)?;

    let points: Vec<(f64, f64)> = sw.j.iter().flat_map(|&j| sw.k.iter().map(move |&k| (j, k))).collect();
    let rows: Vec<CliResult<String>> = points
        .par_iter()
        .map(|&(j, k)| {
            let d = discrete_state(cfg, j, p.kappa)?;
            let c = cache
                .continuous_cs(k, s.theta, s.phase)
                .map_err(|e| CliError::compute(format!("sweep point K = {k}"), e))?;
            let cs = build_combined_cs(d, c, s.beta, &env)
                .map_err(|e| CliError::compute(format!("sweep point J = {j}"), e))?;
            let dcs = cs.discrete();
            Ok(format!(
                "{},{},{},{},{},{},{}\n",
                num(j),
                num(k),
                dcs.cutoff(),
                num(dcs.tail_bound()),
                num(dcs.mean_level()),
                num(cs.continuous().n_rho()),
                num(cs.norm_sqr())
            ))
        })
        .collect();
    let mut csv = String::from("J,K,cutoff,tail_bound,mean_level,N_rho,norm_sqr\n");
    for r in rows {
        csv.push_str(&r?);
    }
    let mut out = Outcome::new();
    write_file(&cfg.out_dir, "sweep.csv", &csv, &mut out)?;
    out.summary.push(format!("{} points", points.len()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_in(dir: &Path) -> RunConfig {
        RunConfig {
            out_dir: dir.to_path_buf(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn unit_spectrum_rows() {
        let dir = tempfile::tempdir().unwrap();
        let out = spectrum(&cfg_in(dir.path())).unwrap();
        assert!(out.warnings.is_empty());
        let text = std::fs::read_to_string(&out.files[0]).unwrap();
        let e: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
            .collect();
        assert_eq!(e, vec![0.5, 1.5, 2.5]);
    }

    #[test]
    fn alpha_above_bound_is_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.spectrum.alpha = vec![-1.0, 0.25];
        let out = spectrum(&cfg).unwrap();
        assert_eq!(out.warnings.len(), 1);
        let text = std::fs::read_to_string(&out.files[0]).unwrap();
        assert_eq!(text.lines().filter(|l| l.ends_with(",0")).count(), 3);
    }

    #[test]
    fn shifted_ground_level_is_zero() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.mode = SpectrumMode::Shifted;
        let out = spectrum(&cfg).unwrap();
        let text = std::fs::read_to_string(&out.files[0]).unwrap();
        let first = text.lines().nth(1).unwrap();
        assert_eq!(first.split(',').nth(3).unwrap().parse::<f64>().unwrap(), 0.0);
    }

    #[test]
    fn zero_label_concentrates_on_the_ground_level() {
        let mut cfg = RunConfig::default();
        cfg.state.j = 0.0;
        let cs = build_state(&cfg).unwrap();
        let c = cs.discrete().coeffs();
        assert!(c[0].norm() > 0.0);
        assert!(c[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn wavefunction_origin_and_modulus() {
        let dir = tempfile::tempdir().unwrap();
        let out = wavefunction(&cfg_in(dir.path())).unwrap();
        let text = std::fs::read_to_string(&out.files[0]).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows[0], vec![0.0, 0.0, 1.0, 0.0]);
        for r in &rows {
            assert!((r[2].hypot(r[3]) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gauges_swap_the_linear_term() {
        let p = PhysicalParams::default();
        let g1 = landau_gk::model::GaugeChoice::Gauge1;
        let g2 = landau_gk::model::GaugeChoice::Gauge2;
        for (x, y) in [(0.3, -1.2), (2.0, 0.7)] {
            let a = phi_alpha(g1, -0.8, x, y, &p);
            let b = phi_alpha(g2, -0.8, y, x, &p);
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn sweep_rows_follow_input_order() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg_in(dir.path());
        cfg.sweep.j = vec![2.0, 0.5];
        cfg.sweep.k = vec![1.5, 0.5];
        let out = sweep(&cfg).unwrap();
        let text = std::fs::read_to_string(&out.files[0]).unwrap();
        let labels: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',').map(|v| v.parse::<f64>().unwrap());
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect();
        assert_eq!(labels, vec![(2.0, 1.5), (2.0, 0.5), (0.5, 1.5), (0.5, 0.5)]);
    }
}
