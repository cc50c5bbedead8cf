//! The property suite behind `verify`: constitutive oracles, manufactured
//! solutions, fine-grid oracles and qualitative properties of the configured
//! scenario.

use radgas::domain::State;
use radgas::functionals::{
    oscillation_ratio, representation_check, second_half_growth, temperature_envelope_check, theta_bound_from_y,
    window_extrema,
};
use radgas::integrator::{run_simulation, select_timestep, strang_step};
use radgas::verification::{convergence_study, oracle_compare, temporal_study, ManufacturedSolution};
use radgas::{Output64, Params64, RunSettings, Scenario64, StepControls};

use crate::config::RunConfig;

const EQUILIBRIUM_TOL: f64 = 1e-12;
const CONSERVATION_TOL: f64 = 1e-13;
const SPECIES_BALANCE_TOL: f64 = 1e-10;
const CONFINEMENT_TOL: f64 = 1e-12;
const DRIFT_RATIO_MIN: f64 = 3.5;
const PLATEAU_TOL: f64 = 0.05;
const DECAY_FRACTION: f64 = 0.5;
const GROWTH_TOL: f64 = 0.10;
const REPRESENTATION_TOL: f64 = 0.01;
const REPRESENTATION_GAIN_MIN: f64 = 2.0;
const ENVELOPE_MIN: f64 = 0.1;
const ENVELOPE_STABILITY: f64 = 0.10;
const SPACE_ORDER: (f64, f64) = (1.8, 2.2);
const TIME_ORDER_MIN: f64 = 1.8;
const ORACLE_SHRINK_MIN: f64 = 3.0;
const ORACLE_LINF_MAX: f64 = 1e-3;
const ORACLE_T_MAX: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn constitutive(params: &Params64) -> Vec<Check> {
    let mut worst_fd = 0.0f64;
    let mut worst_identity = 0.0f64;
    let mut min_eta = f64::INFINITY;
    for i in 0..40 {
        for j in 0..40 {
            let v = 0.2 + 0.1 * i as f64;
            let th = 0.2 + 0.1 * j as f64;
            let d = params.partials(v, th);
            let h = 1e-6;
            let fd = [
                (params.p(v + h, th) - params.p(v - h, th)) / (2.0 * h),
                (params.p(v, th + h) - params.p(v, th - h)) / (2.0 * h),
                (params.e(v + h, th) - params.e(v - h, th)) / (2.0 * h),
                (params.e(v, th + h) - params.e(v, th - h)) / (2.0 * h),
            ];
            for (a, b) in [d.p_v, d.p_theta, d.e_v, d.e_theta].iter().zip(fd) {
                worst_fd = worst_fd.max((a - b).abs() / a.abs().max(1.0));
            }
            let lhs = d.e_v + params.p(v, th);
            worst_identity = worst_identity.max((lhs - th * d.p_theta).abs() / lhs.abs().max(1.0));
            min_eta = min_eta.min(params.eta(v, th));
        }
    }
    vec![
        check(
            "constitutive_partials",
            worst_fd < 1e-6,
            format!("max relative finite-difference mismatch {worst_fd:.2e}"),
        ),
        check(
            "constitutive_identity",
            worst_identity < 1e-12,
            format!("max |e_v + p - theta p_theta| relative {worst_identity:.2e}"),
        ),
        check(
            "entropy_nonnegative",
            min_eta >= 0.0,
            format!("min eta over samples {min_eta:.3e}"),
        ),
    ]
}

fn manufactured(params: &Params64) -> Vec<Check> {
    let ms = ManufacturedSolution::gaussian(*params);
    let (space, time) = rayon::join(
        || convergence_study(&ms, 6.0, &[64, 128, 256], 0.5),
        || temporal_study(&ms, 6.0, 128, 0.5, &[250, 500, 1000, 2000]),
    );
    let space = match space {
        Ok(r) => {
            let (lo, hi) = (r.min_order().unwrap_or(f64::NAN), r.max_order().unwrap_or(f64::NAN));
            check(
                "mms_space_order",
                lo >= SPACE_ORDER.0 && hi <= SPACE_ORDER.1,
                format!(
                    "observed orders in [{lo:.3}, {hi:.3}], want [{}, {}]",
                    SPACE_ORDER.0, SPACE_ORDER.1
                ),
            )
        }
        Err(e) => check("mms_space_order", false, e.to_string()),
    };
    let time = match time {
        Ok(r) => {
            let lo = r.min_order().unwrap_or(f64::NAN);
            check(
                "mms_time_order",
                lo >= TIME_ORDER_MIN,
                format!("min observed order {lo:.3}, want >= {TIME_ORDER_MIN}"),
            )
        }
        Err(e) => check("mms_time_order", false, e.to_string()),
    };
    vec![space, time]
}

fn oracle(spec: &Scenario64) -> Check {
    let n = spec.n;
    if !n.is_multiple_of(8) || n / 4 < 8 {
        return check(
            "oracle_consistency",
            true,
            format!("skipped: N = {n} too small to coarsen"),
        );
    }
    let mut s = spec.clone();
    s.t_end = s.t_end.min(ORACLE_T_MAX);
    let (a, b) = rayon::join(|| oracle_compare(&s, n / 4, n), || oracle_compare(&s, n / 2, 2 * n));
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let shrink = (0..4)
                .map(|f| a.errors[f].linf / b.errors[f].linf)
                .fold(f64::INFINITY, f64::min);
            let fine = b.max_linf();
            check(
                "oracle_consistency",
                shrink >= ORACLE_SHRINK_MIN && fine < ORACLE_LINF_MAX,
                format!(
                    "T={}: ({}, {}) vs ({}, {}) min Linf shrink {shrink:.2} (min {ORACLE_SHRINK_MIN}); finest Linf {fine:.3e} (max {ORACLE_LINF_MAX:e})",
                    s.t_end,
                    n / 4,
                    n,
                    n / 2,
                    2 * n
                ),
            )
        }
        (a, b) => check("oracle_consistency", false, format!("{:?} / {:?}", a.err(), b.err())),
    }
}

fn equilibrium(spec: &Scenario64) -> Check {
    let grid = match spec.grid() {
        Ok(g) => g,
        Err(e) => return check("equilibrium_fixed_point", false, e.to_string()),
    };
    let controls = StepControls::from_spec(spec);
    let start = State::<f64>::equilibrium(spec.n);
    let mut s = start.clone();
    for _ in 0..1000 {
        let dt = select_timestep(&s, &grid, &spec.params, &controls);
        match strang_step(&s, &grid, &spec.params, dt, &controls) {
            Ok(o) => s = o.new_state,
            Err(e) => return check("equilibrium_fixed_point", false, e.to_string()),
        }
    }
    let dev = [
        (&s.v, &start.v),
        (&s.u, &start.u),
        (&s.theta, &start.theta),
        (&s.z, &start.z),
    ]
    .iter()
    .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
    .fold(0.0, f64::max);
    check(
        "equilibrium_fixed_point",
        dev <= EQUILIBRIUM_TOL,
        format!("max change after 1000 steps {dev:.2e} (tol {EQUILIBRIUM_TOL:e})"),
    )
}

fn every_other(states: &[State<f64>]) -> Vec<State<f64>> {
    let mut out: Vec<State<f64>> = states.iter().step_by(2).cloned().collect();
    if states.len().is_multiple_of(2) {
        out.extend(states.last().cloned());
    }
    out
}

fn drift(out: &Output64) -> f64 {
    let e0 = out.records[0].total_energy;
    out.records
        .iter()
        .map(|r| (r.total_energy - e0).abs())
        .fold(0.0, f64::max)
}

fn properties(cfg: &RunConfig, out: &Output64, halved: &Output64) -> Vec<Check> {
    let spec = &cfg.scenario;
    let params = &spec.params;
    let t_end = spec.t_end;
    let recs = &out.records;
    let r0 = &recs[0];
    let mut checks = Vec::new();

    let total_mass: f64 = out.initial_state.v.iter().map(|v| v * out.grid.dx).sum();
    let momentum_scale = r0.momentum.abs().max(1.0);
    let z_scale = r0.z_l1.max(f64::MIN_POSITIVE);
    let (mut mass, mut momentum, mut species) = (0.0f64, 0.0f64, 0.0f64);
    for r in recs {
        mass = mass.max((r.mass_dev - r0.mass_dev).abs() / total_mass);
        momentum = momentum.max((r.momentum - r0.momentum).abs() / momentum_scale);
        species = species.max((r.z_l1 + r.z_reacted + r.z_outflow - r0.z_l1).abs() / z_scale);
    }
    let conserved = if spec.boundary == radgas::Boundary::Periodic {
        mass <= CONSERVATION_TOL && momentum <= CONSERVATION_TOL
    } else {
        mass <= CONSERVATION_TOL
    };
    checks.push(check(
        "conservation",
        conserved && (r0.z_l1 == 0.0 || species <= SPECIES_BALANCE_TOL),
        format!("mass {mass:.2e}, momentum {momentum:.2e}, species balance {species:.2e}"),
    ));

    let violations = out
        .states
        .iter()
        .flat_map(|s| s.z.iter())
        .filter(|&&z| !(-CONFINEMENT_TOL..=1.0 + CONFINEMENT_TOL).contains(&z))
        .count();
    let rise = recs.windows(2).map(|w| w[1].max_z - w[0].max_z).fold(0.0, f64::max);
    checks.push(check(
        "species_confinement",
        violations == 0 && rise <= 0.0,
        format!("{violations} violations, largest max_z rise {rise:.2e}"),
    ));

    let (d1, d2) = (drift(out), drift(halved));
    let ratio = if d2 > 0.0 {
        d1 / d2
    } else if d1 == 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    checks.push(check(
        "energy_drift",
        ratio >= DRIFT_RATIO_MIN || d1 < 1e-13,
        format!("drift {d1:.3e} -> {d2:.3e} under halved dt, ratio {ratio:.3} (min {DRIFT_RATIO_MIN})"),
    ));

    let early = window_extrema(recs, t_end / 4.0, t_end / 2.0);
    let late = window_extrema(recs, t_end / 2.0, t_end);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let worst = [
        rel(late.min_v, early.min_v),
        rel(late.max_v, early.max_v),
        rel(late.min_theta, early.min_theta),
        rel(late.max_theta, early.max_theta),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    checks.push(check(
        "uniform_bounds",
        worst < PLATEAU_TOL,
        format!("largest window change {worst:.4} (tol {PLATEAU_TOL})"),
    ));

    let last = recs.last().unwrap();
    let peak = |f: fn(&radgas::Record64) -> f64| recs.iter().map(f).fold(0.0, f64::max);
    let frac = |x: f64, p: f64| if p > 0.0 { x / p } else { 0.0 };
    let linf = frac(last.norms.linf, peak(|r| r.norms.linf));
    let l4 = frac(last.norms.l4, peak(|r| r.norms.l4));
    let grad = frac(last.norms.grad_l2, peak(|r| r.norms.grad_l2));
    let z_mono = recs.windows(2).all(|w| w[1].z_l1 <= w[0].z_l1);
    checks.push(check(
        "decay",
        linf < DECAY_FRACTION && l4 < DECAY_FRACTION && grad < DECAY_FRACTION && z_mono,
        format!("final/peak Linf {linf:.3}, L4 {l4:.3}, grad_L2 {grad:.3}; z_L1 nonincreasing {z_mono}"),
    ));

    let t: Vec<f64> = recs.iter().map(|r| r.t).collect();
    let xy: Vec<f64> = recs.iter().map(|r| r.x_acc + r.y_run).collect();
    let bound: Vec<f64> = recs
        .iter()
        .map(|r| r.max_theta / theta_bound_from_y(params, r.y_run))
        .collect();
    let (g_xy, g_b) = (second_half_growth(&t, &xy), second_half_growth(&t, &bound));
    checks.push(check(
        "functional_bounds",
        g_xy < GROWTH_TOL && g_b < GROWTH_TOL,
        format!("second-half growth X+Y {g_xy:.4}, temperature ratio {g_b:.4} (tol {GROWTH_TOL})"),
    ));

    let coarse = every_other(&out.states);
    let m = (params.b + 4.0) / 2.0;
    for &k in &cfg.probes {
        let rep = representation_check(&out.states, &out.grid, params, k, t_end)
            .and_then(|f| representation_check(&coarse, &out.grid, params, k, t_end).map(|c| (f, c)));
        checks.push(match rep {
            Ok((f, c)) => {
                let gain = if f.max_rel_error > 0.0 {
                    c.max_rel_error / f.max_rel_error
                } else {
                    f64::INFINITY
                };
                check(
                    "representation",
                    f.max_rel_error < REPRESENTATION_TOL
                        && (gain >= REPRESENTATION_GAIN_MIN || c.max_rel_error < 1e-12),
                    format!(
                        "k={k}: max relative error {:.3e}, {:.3e} at doubled cadence (gain {gain:.2})",
                        f.max_rel_error, c.max_rel_error
                    ),
                )
            }
            Err(e) => check("representation", false, format!("k={k}: {e}")),
        });
        let osc: Result<Vec<f64>, _> = out
            .states
            .iter()
            .map(|s| oscillation_ratio(s, &out.grid, params, m, k))
            .collect();
        checks.push(match osc {
            Ok(values) => {
                let mut run = 0.0f64;
                let running: Vec<f64> = values
                    .iter()
                    .map(|&x| {
                        run = run.max(x);
                        run
                    })
                    .collect();
                let ts: Vec<f64> = out.states.iter().map(|s| s.t).collect();
                let g = second_half_growth(&ts, &running);
                check(
                    "oscillation",
                    g < GROWTH_TOL,
                    format!("k={k}: running max {run:.4}, second-half growth {g:.4}"),
                )
            }
            Err(e) => check("oscillation", false, format!("k={k}: {e}")),
        });
    }

    checks.push(
        match (
            temperature_envelope_check(&out.states),
            temperature_envelope_check(&coarse),
        ) {
            (Ok(f), Ok(c)) => {
                let change = (c - f).abs() / f;
                check(
                    "temperature_envelope",
                    f > ENVELOPE_MIN && change <= ENVELOPE_STABILITY,
                    format!("envelope {f:.4}, {c:.4} at doubled cadence, change {change:.3}"),
                )
            }
            (a, b) => check("temperature_envelope", false, format!("{:?} / {:?}", a.err(), b.err())),
        },
    );
    checks
}

/// Runs everything; a failing run turns into failing checks rather than an error.
pub fn run_suite(cfg: &RunConfig) -> Vec<Check> {
    let spec = &cfg.scenario;
    let mut halved_spec = spec.clone();
    halved_spec.cfl = spec.cfl / 2.0;
    let settings = RunSettings::sampled(cfg.sample_cadence);
    let light = RunSettings {
        keep_states: false,
        ..RunSettings::sampled(cfg.sample_cadence)
    };

    let ((base, halved), (eq, (mms, orc))) = rayon::join(
        || {
            rayon::join(
                || run_simulation(spec, &settings),
                || run_simulation(&halved_spec, &light),
            )
        },
        || {
            rayon::join(
                || equilibrium(spec),
                || rayon::join(|| manufactured(&spec.params), || oracle(spec)),
            )
        },
    );

    let mut checks = constitutive(&spec.params);
    checks.extend(mms);
    checks.push(orc);
    checks.push(eq);
    match (base, halved) {
        (Ok(out), Ok(half)) => checks.extend(properties(cfg, &out, &half)),
        (a, b) => checks.push(check(
            "scenario_run",
            false,
            format!(
                "{:?} / {:?}",
                a.err().map(|e| e.to_string()),
                b.err().map(|e| e.to_string())
            ),
        )),
    }
    checks
}
