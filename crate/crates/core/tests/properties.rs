use proptest::prelude::*;

use radgas::domain::{build_grid_with, make_initial_data, validate_initial_data};
use radgas::functionals::{
    dissipation_rate, entropy_energy, norms, representation_check, x_increment, xy_series, y_integrand,
};
use radgas::integrator::run_simulation;
use radgas::verification::{convergence_study, ManufacturedSolution};
use radgas::{Boundary, InitialFamily, Params64, RunSettings, Scenario64, State64};

fn perturbed(family: InitialFamily, amps: [f64; 4], n: usize, t_end: f64, boundary: Boundary) -> Scenario64 {
    let mut s = Scenario64::equilibrium(10.0, n, t_end);
    s.family = family;
    s.boundary = boundary;
    [s.amplitude_v, s.amplitude_u, s.amplitude_theta, s.amplitude_z] = amps;
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functionals_are_nonnegative(
        v in proptest::collection::vec(0.2f64..5.0, 32),
        th in proptest::collection::vec(0.2f64..5.0, 32),
        z in proptest::collection::vec(0.0f64..1.0, 32),
        u in proptest::collection::vec(-2.0f64..2.0, 33),
        periodic in any::<bool>(),
    ) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::FarField };
        let grid = build_grid_with(4.0, 32, boundary).unwrap();
        let p = Params64::default();
        let mut s = State64 { t: 0.0, v, theta: th, z, u };
        if periodic { s.u[32] = s.u[0] } else { s.u[0] = 0.0; s.u[32] = 0.0 }
        prop_assert!(dissipation_rate(&s, &grid, &p) >= 0.0);
        prop_assert!(entropy_energy(&s, &grid, &p) >= 0.0);
        prop_assert!(y_integrand(&s, &grid, &p) >= 0.0);
        let n = norms(&s, &grid);
        prop_assert!(n.l2 >= 0.0 && n.l4 >= 0.0 && n.linf >= 0.0 && n.grad_l2 >= 0.0);
        let later = State64 { t: 0.3, ..State64::equilibrium(32) };
        prop_assert!(x_increment(&s, &later, &grid, &p) >= 0.0);
    }

    #[test]
    fn initial_families_validate(
        av in -0.5f64..1.0, au in -1.0f64..1.0, at in -0.5f64..1.0, az in 0.0f64..1.0,
        bump in any::<bool>(),
    ) {
        let family = if bump { InitialFamily::CompactBump } else { InitialFamily::Gaussian };
        let spec = perturbed(family, [av, au, at, az], 128, 1.0, Boundary::FarField);
        let grid = spec.grid().unwrap();
        let s = make_initial_data(&spec, &grid).unwrap();
        prop_assert!(validate_initial_data(&s, &grid).unwrap().passed());
    }
}

#[test]
fn shipped_scenarios_validate() {
    for spec in [Scenario64::canonical(), Scenario64::equilibrium(10.0, 64, 1.0)] {
        let grid = spec.grid().unwrap();
        let s = make_initial_data(&spec, &grid).unwrap();
        assert!(validate_initial_data(&s, &grid).unwrap().passed());
    }
}

#[test]
fn histories_are_monotone_and_positive() {
    for boundary in [Boundary::FarField, Boundary::Periodic] {
        let spec = perturbed(InitialFamily::Gaussian, [0.3, 0.3, 0.5, 0.8], 128, 3.0, boundary);
        let out = run_simulation(&spec, &RunSettings::sampled(0.1)).unwrap();
        for w in out.records.windows(2) {
            assert!(w[1].x_acc >= w[0].x_acc && w[1].y_run >= w[0].y_run);
            assert!(w[1].max_z <= w[0].max_z);
            assert!(w[1].z_l1 <= w[0].z_l1);
        }
        for s in &out.states {
            assert!(s.v.iter().all(|&v| v > spec.floor_v));
            assert!(s.theta.iter().all(|&t| t > spec.floor_theta));
        }
        let series = xy_series(&out.states, &out.grid, &spec.params).unwrap();
        let last = out.records.last().unwrap();
        assert_eq!(*series.last().unwrap(), (last.x_acc, last.y_run));
        let z0 = out.records[0].z_l1;
        let balance = last.z_l1 + last.z_reacted + last.z_outflow - z0;
        assert!(balance.abs() <= 1e-10 * z0, "{boundary:?}: {balance:e}");
    }
}

#[test]
fn boundary_guard_holds_before_waves_arrive() {
    let mut spec = Scenario64::canonical();
    spec.t_end = 4.0;
    let out = run_simulation(
        &spec,
        &RunSettings {
            keep_states: false,
            ..RunSettings::sampled(0.5)
        },
    )
    .unwrap();
    for r in &out.records {
        assert!(r.boundary_deviation < 1e-6, "t = {}: {:e}", r.t, r.boundary_deviation);
    }
}

#[test]
fn representation_error_falls_under_refinement() {
    let mut errors = Vec::new();
    for (n, cadence) in [(128, 0.2), (256, 0.1)] {
        let spec = perturbed(
            InitialFamily::Gaussian,
            [0.1, 0.1, 0.2, 0.5],
            n,
            2.0,
            Boundary::FarField,
        );
        let out = run_simulation(&spec, &RunSettings::sampled(cadence)).unwrap();
        errors.push(
            representation_check(&out.states, &out.grid, &spec.params, 2, 2.0)
                .unwrap()
                .max_rel_error,
        );
    }
    let order = (errors[0] / errors[1]).log2();
    assert!(order >= 1.0, "{errors:?}");
}

#[test]
fn manufactured_errors_decrease_strictly() {
    let ms = ManufacturedSolution::gaussian(Params64::default());
    let report = convergence_study(&ms, 6.0, &[32, 64, 128], 0.25).unwrap();
    for f in 0..4 {
        assert!(report.errors[1][f].l2 < report.errors[0][f].l2);
        assert!(report.errors[2][f].l2 < report.errors[1][f].l2);
    }
}

#[test]
fn single_precision_run() {
    let mut spec = radgas::ScenarioSpec::<f32>::canonical();
    spec.n = 64;
    spec.t_end = 1.0;
    spec.picard_tol = 1e-5;
    let out = run_simulation(&spec, &RunSettings::sampled(0.5)).unwrap();
    let last = out.records.last().unwrap();
    assert!(last.is_valid());
    assert!((last.mass_dev - out.records[0].mass_dev).abs() < 1e-4);
}
