//! The `run`, `sweep` and `verify` pipelines.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use radgas::domain::validate_parameters;
use radgas::functionals::{
    interval_probe, oscillation_ratio, representation_check, temperature_envelope_check, theta_bound_from_y,
};
use radgas::integrator::run_simulation;
use radgas::{Output64, RunSettings, Scenario64};

use crate::config::{self, RunConfig, SweepConfig};
use crate::output::{diagnostics_csv, snapshot_name, snapshot_text, table_csv, write_atomic};
use crate::{checks, pool, worker_count, CliError};

fn settings(cfg: &RunConfig) -> RunSettings<f64> {
    RunSettings {
        sample_cadence: cfg.sample_cadence,
        keep_states: !cfg.probes.is_empty(),
        snapshot_times: if cfg.emit_snapshots {
            cfg.snapshot_times.clone()
        } else {
            Vec::new()
        },
        dt_cap: None,
    }
}

fn scenario_line(s: &Scenario64) -> String {
    format!(
        "family={} amplitudes=({}, {}, {}, {}) width={} L={} N={} T_end={} cfl={} boundary={} picard_tol={}",
        s.family.name(),
        s.amplitude_v,
        s.amplitude_u,
        s.amplitude_theta,
        s.amplitude_z,
        s.width,
        s.half_width,
        s.n,
        s.t_end,
        s.cfl,
        s.boundary.name(),
        s.picard_tol
    )
}

fn report_text(cfg: &RunConfig, out: &Output64) -> String {
    let s = &cfg.scenario;
    let p = &s.params;
    let last = out.records.last().expect("at least the initial record");
    let mut r = String::new();
    let _ = writeln!(r, "status: completed");
    let _ = writeln!(r, "scenario: {}", scenario_line(s));
    let _ = writeln!(r, "parameters: {}", validate_parameters(p).summary());
    let _ = writeln!(
        r,
        "steps: {} (rejected {}, max Picard sweeps per step {})",
        out.steps, out.rejected_steps, out.max_picard_iters
    );
    let _ = writeln!(
        r,
        "final: t={} mass_dev={} momentum={} total_energy={} G={} V={}",
        last.t, last.mass_dev, last.momentum, last.total_energy, last.g, last.v_rate
    );
    let _ = writeln!(
        r,
        "final norms: dev_L2={} dev_L4={} dev_Linf={} grad_L2={} boundary_dev={}",
        last.norms.l2, last.norms.l4, last.norms.linf, last.norms.grad_l2, last.boundary_deviation
    );
    let fold =
        |f: fn(&radgas::Record64) -> f64, init: f64, g: fn(f64, f64) -> f64| out.records.iter().map(f).fold(init, g);
    let _ = writeln!(
        r,
        "bounds over run: min_v={} max_v={} min_theta={} max_theta={}",
        fold(|r| r.min_v, f64::INFINITY, f64::min),
        fold(|r| r.max_v, f64::NEG_INFINITY, f64::max),
        fold(|r| r.min_theta, f64::INFINITY, f64::min),
        fold(|r| r.max_theta, f64::NEG_INFINITY, f64::max),
    );
    let _ = writeln!(
        r,
        "functionals: X={} Y={} theta bound 1+Y^(1/(2b+6))={} max_theta={}",
        last.x_acc,
        last.y_run,
        theta_bound_from_y(p, last.y_run),
        last.max_theta
    );
    match temperature_envelope_check(&out.states) {
        Ok(e) => {
            let _ = writeln!(r, "temperature envelope: {e}");
        }
        Err(e) => {
            let _ = writeln!(r, "temperature envelope: n/a ({e})");
        }
    }
    let m = (p.b + 4.0) / 2.0;
    for &k in &cfg.probes {
        let mut line = format!("probe k={k}:");
        match interval_probe(&out.final_state, &out.grid, k) {
            Ok(w) => {
                let _ = write!(
                    line,
                    " a_k={} b_k={} avg_v={} avg_theta={}",
                    w.a_k, w.b_k, w.avg_v, w.avg_theta
                );
            }
            Err(e) => {
                let _ = write!(line, " interval n/a ({e})");
            }
        }
        match oscillation_ratio(&out.final_state, &out.grid, p, m, k) {
            Ok(x) => {
                let _ = write!(line, " oscillation_ratio(m={m})={x}");
            }
            Err(e) => {
                let _ = write!(line, " oscillation n/a ({e})");
            }
        }
        match representation_check(&out.states, &out.grid, p, k, s.t_end) {
            Ok(rep) => {
                let _ = write!(line, " representation max_rel_error={} Q={}", rep.max_rel_error, rep.q);
            }
            Err(e) => {
                let _ = write!(line, " representation n/a ({e})");
            }
        }
        let _ = writeln!(r, "{line}");
    }
    r
}

/// What one run produced, for the sweep summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub final_linf_dev: f64,
    pub x_final: f64,
    pub y_final: f64,
    pub min_theta: f64,
    pub max_theta: f64,
}

/// Runs one configuration and writes its files into `dir`.
pub fn execute_run(cfg: &RunConfig, dir: &Path) -> Result<RunSummary, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let out = match run_simulation(&cfg.scenario, &settings(cfg)) {
        Ok(out) => out,
        Err(e) => {
            let err = CliError::from(e);
            let text = format!(
                "status: failed\nscenario: {}\nerror: {err}\n",
                scenario_line(&cfg.scenario)
            );
            write_atomic(&dir.join("report.txt"), text.as_bytes())?;
            return Err(err);
        }
    };
    write_atomic(&dir.join("diagnostics.csv"), &diagnostics_csv(&out.records)?)?;
    for snap in &out.snapshots {
        write_atomic(
            &dir.join(snapshot_name(snap.t)),
            snapshot_text(snap, &out.grid).as_bytes(),
        )?;
    }
    write_atomic(&dir.join("report.txt"), report_text(cfg, &out).as_bytes())?;
    let last = out.records.last().expect("initial record");
    Ok(RunSummary {
        final_linf_dev: last.norms.linf,
        x_final: last.x_acc,
        y_final: last.y_run,
        min_theta: out.records.iter().map(|r| r.min_theta).fold(f64::INFINITY, f64::min),
        max_theta: out
            .records
            .iter()
            .map(|r| r.max_theta)
            .fold(f64::NEG_INFINITY, f64::max),
    })
}

fn resolve_output(cfg_dir: PathBuf, override_dir: Option<&Path>) -> PathBuf {
    override_dir.map(Path::to_path_buf).unwrap_or(cfg_dir)
}

pub fn run_command(config_path: &Path, output_dir: Option<&Path>) -> Result<(), CliError> {
    let (raw, base) = config::load(config_path)?;
    let mut cfg = RunConfig::from_raw(&raw, &base)?;
    cfg.output_dir = resolve_output(cfg.output_dir, output_dir);
    execute_run(&cfg, &cfg.output_dir).map(|_| ())
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "b",
    "beta",
    "admissible",
    "status",
    "final_Linf_dev",
    "X_final",
    "Y_final",
    "min_theta",
    "max_theta",
];

pub fn sweep_command(config_path: &Path, output_dir: Option<&Path>) -> Result<(), CliError> {
    let (raw, base) = config::load(config_path)?;
    let mut cfg = SweepConfig::from_raw(&raw, &base)?;
    cfg.base.output_dir = resolve_output(cfg.base.output_dir, output_dir);
    let root = cfg.base.output_dir.clone();
    let cells = cfg.cells();
    let workers = worker_count(cfg.max_parallel);
    let results: Vec<(f64, f64, bool, Result<RunSummary, CliError>)> = pool(workers)?.install(|| {
        cells
            .par_iter()
            .map(|&(b, beta)| {
                let mut cell = cfg.base.clone();
                cell.scenario.params.b = b;
                cell.scenario.params.beta = beta;
                let admissible = cell.scenario.params.admissible();
                let result = cell
                    .scenario
                    .check()
                    .map_err(CliError::from)
                    .and_then(|_| execute_run(&cell, &root.join(format!("b{b}_beta{beta}"))));
                (b, beta, admissible, result)
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut fatal: Option<CliError> = None;
    let mut io: Option<CliError> = None;
    for (b, beta, admissible, result) in &results {
        let mut row = vec![b.to_string(), beta.to_string(), admissible.to_string()];
        match result {
            Ok(s) => {
                row.push("completed".into());
                for x in [s.final_linf_dev, s.x_final, s.y_final, s.min_theta, s.max_theta] {
                    row.push(x.to_string());
                }
            }
            Err(e) => {
                row.push(
                    match e {
                        CliError::BlowUp(_) => "blowup",
                        CliError::Config(_) => "invalid",
                        _ => "error",
                    }
                    .into(),
                );
                row.extend(std::iter::repeat_n(String::new(), 5));
                match e {
                    CliError::BlowUp(_) if *admissible => {
                        fatal.get_or_insert_with(|| CliError::BlowUp(format!("cell (b={b}, beta={beta}): {e}")));
                    }
                    CliError::Io(_) => {
                        io.get_or_insert_with(|| e.clone());
                    }
                    _ => {}
                }
            }
        }
        rows.push(row);
    }
    write_atomic(&root.join("sweep_summary.csv"), &table_csv(&SWEEP_COLUMNS, rows)?)?;
    match (io, fatal) {
        (Some(e), _) | (None, Some(e)) => Err(e),
        (None, None) => Ok(()),
    }
}

pub fn verify_command(config_path: &Path, output_dir: Option<&Path>) -> Result<(), CliError> {
    let (raw, base) = config::load(config_path)?;
    let mut cfg = RunConfig::from_raw(&raw, &base)?;
    cfg.output_dir = resolve_output(cfg.output_dir, output_dir);
    if !(cfg.scenario.t_end > 0.0) {
        return Err(CliError::Config("T_end must be positive: nothing to verify".into()));
    }
    let results = pool(worker_count(
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    ))?
    .install(|| checks::run_suite(&cfg));
    let mut text = format!("scenario: {}\n", scenario_line(&cfg.scenario));
    for c in &results {
        let _ = writeln!(
            text,
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed: Vec<&str> = results.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let _ = writeln!(
        text,
        "summary: {} passed, {} failed",
        results.len() - failed.len(),
        failed.len()
    );
    write_atomic(&cfg.output_dir.join("verify_report.txt"), text.as_bytes())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
