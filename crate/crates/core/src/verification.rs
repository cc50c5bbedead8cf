//! Manufactured solutions, refinement studies and fine-grid oracle
//! comparisons for the integrator.

use rayon::prelude::*;

use crate::constitutive::GasParameters;
use crate::domain::{build_grid_with, Boundary, Grid, ScenarioSpec, State};
use crate::error::{Result, SimError};
use crate::integrator::{run_from, run_simulation, RunSettings, SourceTerms};
use crate::scalar::Real;

pub const FIELDS: [&str; 4] = ["v", "u", "theta", "z"];

/// Spatial shape of one manufactured field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape<T> {
    Flat,
    /// `exp(-(x - center)^2 / width^2)`
    Gaussian {
        center: T,
        width: T,
    },
    /// `sin(wavenumber * x)`
    Sine {
        wavenumber: T,
    },
}

impl<T: Real> Shape<T> {
    /// `(g, g', g'')` at `x`.
    fn eval(&self, x: T) -> [T; 3] {
        match *self {
            Shape::Flat => [T::zero(); 3],
            Shape::Gaussian { center, width } => {
                let w2 = width * width;
                let y = x - center;
                let g = (-(y * y) / w2).exp();
                let two = T::lit(2.0);
                [g, -two * y / w2 * g, (T::lit(4.0) * y * y / (w2 * w2) - two / w2) * g]
            }
            Shape::Sine { wavenumber: k } => {
                let (s, c) = (k * x).sin_cos();
                [s, k * c, -k * k * s]
            }
        }
    }
}

/// `base + amplitude * exp(-rate t) * shape(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile<T> {
    pub base: T,
    pub amplitude: T,
    pub rate: T,
    pub shape: Shape<T>,
}

/// Value and derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet<T> {
    pub f: T,
    pub t: T,
    pub x: T,
    pub xx: T,
}

impl<T: Real> Profile<T> {
    pub fn constant(base: T) -> Self {
        Self {
            base,
            amplitude: T::zero(),
            rate: T::zero(),
            shape: Shape::Flat,
        }
    }

    pub fn jet(&self, t: T, x: T) -> Jet<T> {
        let [g, gx, gxx] = self.shape.eval(x);
        let a = self.amplitude * (-self.rate * t).exp();
        Jet {
            f: self.base + a * g,
            t: -self.rate * a * g,
            x: a * gx,
            xx: a * gxx,
        }
    }

    pub fn value(&self, t: T, x: T) -> T {
        self.jet(t, x).f
    }
}

/// Closed-form fields `(v, u, theta, z)` together with the gas they are
/// forced against.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedSolution<T> {
    pub v: Profile<T>,
    pub u: Profile<T>,
    pub theta: Profile<T>,
    pub z: Profile<T>,
    pub params: GasParameters<T>,
}

impl<T: Real> ManufacturedSolution<T> {
    pub fn equilibrium(params: GasParameters<T>) -> Self {
        Self {
            v: Profile::constant(T::one()),
            u: Profile::constant(T::zero()),
            theta: Profile::constant(T::one()),
            z: Profile::constant(T::zero()),
            params,
        }
    }

    /// Coupled Gaussian fields with staggered centres, decaying like `e^{-t}`.
    pub fn gaussian(params: GasParameters<T>) -> Self {
        let g = |c: f64| Shape::Gaussian {
            center: T::lit(c),
            width: T::one(),
        };
        let p = |base: f64, amp: f64, c: f64| Profile {
            base: T::lit(base),
            amplitude: T::lit(amp),
            rate: T::one(),
            shape: g(c),
        };
        Self {
            v: p(1.0, 0.1, 0.3),
            u: p(0.0, 0.1, -0.2),
            theta: p(1.0, 0.2, 0.0),
            z: p(0.0, 0.3, 0.1),
            params,
        }
    }

    /// Checks the sign constraints on `[-half_width, half_width] x [0, t_end]`
    /// at a grid of sample points.
    pub fn check(&self, half_width: T, t_end: T) -> Result<()> {
        let m = 200;
        for a in 0..=20 {
            let t = t_end * T::of_usize(a) / T::lit(20.0);
            for b in 0..=m {
                let x = -half_width + T::lit(2.0) * half_width * T::of_usize(b) / T::of_usize(m);
                let (v, th, z) = (self.v.value(t, x), self.theta.value(t, x), self.z.value(t, x));
                if !(v > T::zero() && th > T::zero() && z >= T::zero() && z <= T::one()) {
                    return Err(SimError::Precondition(format!(
                        "manufactured fields leave the admissible set at (t, x) = ({t}, {x})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Fields sampled on the mesh: cell centres for `v, theta, z`, nodes for `u`.
    pub fn state(&self, grid: &Grid<T>, t: T) -> State<T> {
        let cells = |p: &Profile<T>| grid.cell_centers.iter().map(|&x| p.value(t, x)).collect::<Vec<T>>();
        let mut u: Vec<T> = grid.node_positions.iter().map(|&x| self.u.value(t, x)).collect();
        match grid.boundary {
            Boundary::FarField => {
                u[0] = T::zero();
                u[grid.n] = T::zero();
            }
            Boundary::Periodic => u[grid.n] = u[0],
        }
        State {
            t,
            v: cells(&self.v),
            theta: cells(&self.theta),
            z: cells(&self.z),
            u,
        }
    }
}

/// Residuals `(S_v, S_u, S_theta, S_z)` of the system under the
/// manufactured fields, `S_theta` in the temperature form
/// `e_theta theta_t + theta p_theta u_x = mu u_x^2 / v + (kappa theta_x / v)_x + lambda phi z + S_theta`.
pub fn manufactured_source<T: Real>(ms: &ManufacturedSolution<T>, params: &GasParameters<T>, t: T, x: T) -> [T; 4] {
    let v = ms.v.jet(t, x);
    let u = ms.u.jet(t, x);
    let th = ms.theta.jet(t, x);
    let z = ms.z.jet(t, x);
    let p = params;
    let d = p.partials(v.f, th.f);

    let s_v = v.t - u.x;

    let p_x = d.p_v * v.x + d.p_theta * th.x;
    let viscous_x = p.mu * (u.xx / v.f - u.x * v.x / (v.f * v.f));
    let s_u = u.t + p_x - viscous_x;

    // (F theta_x)_x with F = kappa / v = kappa1 / v + kappa2 theta^b.
    let f = p.kappa(v.f, th.f) / v.f;
    let f_x = -p.kappa1 * v.x / (v.f * v.f) + p.kappa2 * p.b * th.f.powf(p.b - T::one()) * th.x;
    let conduction = f_x * th.x + f * th.xx;
    let rate = p.phi(th.f);
    let s_theta =
        d.e_theta * th.t + th.f * d.p_theta * u.x - p.mu * u.x * u.x / v.f - conduction - p.lambda * rate * z.f;

    let v2 = v.f * v.f;
    let diffusion = p.d * (z.xx / v2 - T::lit(2.0) * z.x * v.x / (v2 * v.f));
    let s_z = z.t - diffusion + rate * z.f;
    [s_v, s_u, s_theta, s_z]
}

struct Forcing<'a, T> {
    ms: &'a ManufacturedSolution<T>,
}

impl<T: Real> SourceTerms<T> for Forcing<'_, T> {
    fn sources(&self, t: T, x: T) -> [T; 4] {
        manufactured_source(self.ms, &self.ms.params, t, x)
    }
}

/// Discrete L2 (midpoint, node-lumped for `u`) and max norms of a difference.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldError<T> {
    pub l2: T,
    pub linf: T,
}

fn field_errors<T: Real>(a: &State<T>, b: &State<T>, grid: &Grid<T>) -> [FieldError<T>; 4] {
    let cell = |x: &[T], y: &[T]| {
        let mut e = FieldError::<T>::default();
        for (p, q) in x.iter().zip(y) {
            let d = (*p - *q).abs();
            e.l2 += d * d * grid.dx;
            e.linf = e.linf.max(d);
        }
        e.l2 = e.l2.sqrt();
        e
    };
    let mut eu = FieldError::<T>::default();
    for ((p, q), m) in a.u.iter().zip(&b.u).zip(grid.node_masses()) {
        let d = (*p - *q).abs();
        eu.l2 += d * d * m;
        eu.linf = eu.linf.max(d);
    }
    eu.l2 = eu.l2.sqrt();
    [cell(&a.v, &b.v), eu, cell(&a.theta, &b.theta), cell(&a.z, &b.z)]
}

/// What a row of a [`ConvergenceReport`] refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    /// Rows are mesh sizes `N`; errors are against the manufactured fields.
    Space,
    /// Rows are step counts at fixed `N`; errors are successive differences.
    Time,
}

/// Errors and observed orders per refinement level.
///
/// `orders[i][f]` compares level `i` with level `i - 1` (L2 norms); it is
/// `None` on the first level and when both errors are at round-off level
/// (an exact solve).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub refinement: Refinement,
    pub resolutions: Vec<usize>,
    pub errors: Vec<[FieldError<T>; 4]>,
    pub orders: Vec<[Option<T>; 4]>,
}

impl<T: Real> ConvergenceReport<T> {
    fn from_errors(refinement: Refinement, resolutions: Vec<usize>, errors: Vec<[FieldError<T>; 4]>) -> Self {
        let roundoff = T::lit(1e3) * T::epsilon();
        let mut orders = vec![[None; 4]];
        for w in errors.windows(2) {
            let mut o = [None; 4];
            for f in 0..4 {
                let (coarse, fine) = (w[0][f].l2, w[1][f].l2);
                if coarse > roundoff || fine > roundoff {
                    o[f] = Some((coarse / fine).log2());
                }
            }
            orders.push(o);
        }
        Self {
            refinement,
            resolutions,
            errors,
            orders,
        }
    }

    /// Every observed order (skipping exact levels).
    pub fn all_orders(&self) -> impl Iterator<Item = (usize, &'static str, T)> + '_ {
        self.orders.iter().enumerate().flat_map(move |(i, o)| {
            o.iter()
                .enumerate()
                .filter_map(move |(f, x)| x.map(|x| (self.resolutions[i], FIELDS[f], x)))
        })
    }

    pub fn min_order(&self) -> Option<T> {
        self.all_orders().map(|(_, _, o)| o).reduce(T::min)
    }

    pub fn max_order(&self) -> Option<T> {
        self.all_orders().map(|(_, _, o)| o).reduce(T::max)
    }

    /// `resolution,field,L2,Linf,order`, with `order` empty on the first
    /// level and `exact` when the errors vanish.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("resolution,field,L2,Linf,order\n");
        for (i, &res) in self.resolutions.iter().enumerate() {
            for (f, name) in FIELDS.iter().enumerate() {
                let e = self.errors[i][f];
                let order = match (i, self.orders[i][f]) {
                    (0, _) => String::new(),
                    (_, Some(o)) => format!("{}", o.as_f64()),
                    (_, None) => "exact".into(),
                };
                out.push_str(&format!("{res},{name},{},{},{order}\n", e.l2.as_f64(), e.linf.as_f64()));
            }
        }
        out
    }
}

fn mms_spec<T: Real>(ms: &ManufacturedSolution<T>, half_width: T, n: usize, t_end: T) -> ScenarioSpec<T> {
    let mut spec = ScenarioSpec::equilibrium(half_width, n, t_end);
    spec.params = ms.params;
    spec.picard_tol = T::lit(1e-12);
    spec
}

/// Runs the forced problem on `[-half_width, half_width]` with `n` cells to
/// `t_end` using uniform steps no larger than `dt_cap`.
pub fn manufactured_run<T: Real>(
    ms: &ManufacturedSolution<T>,
    half_width: T,
    n: usize,
    t_end: T,
    dt_cap: Option<T>,
) -> Result<(Grid<T>, State<T>, usize)> {
    let spec = mms_spec(ms, half_width, n, t_end);
    let grid = build_grid_with(half_width, n, Boundary::FarField)?;
    let initial = ms.state(&grid, T::zero());
    let settings = RunSettings {
        sample_cadence: t_end,
        keep_states: false,
        snapshot_times: Vec::new(),
        dt_cap,
    };
    let forcing = Forcing { ms };
    let out = run_from(&spec, &grid, initial, &settings, Some(&forcing))?;
    Ok((grid, out.final_state, out.steps))
}

/// Spatial refinement on `[-half_width, half_width]`; the step cap shrinks
/// with the mesh so every run sees `dt` proportional to `dx` or smaller.
pub fn convergence_study<T: Real>(
    ms: &ManufacturedSolution<T>,
    half_width: T,
    resolutions: &[usize],
    t_end: T,
) -> Result<ConvergenceReport<T>> {
    if resolutions.len() < 3 || resolutions.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(SimError::Precondition(
            "need at least 3 resolutions, each doubling N".into(),
        ));
    }
    ms.check(half_width, t_end)?;
    let errors = resolutions
        .par_iter()
        .map(|&n| {
            let dx = T::lit(2.0) * half_width / T::of_usize(n);
            let (grid, state, _) = manufactured_run(ms, half_width, n, t_end, Some(T::lit(0.25) * dx))?;
            let exact = ms.state(&grid, t_end);
            Ok(field_errors(&state, &exact, &grid))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_errors(
        Refinement::Space,
        resolutions.to_vec(),
        errors,
    ))
}

/// Time refinement at fixed `n`; `step_counts` must double and each must
/// give steps inside the stability limits. Errors are the successive
/// differences `|y(dt) - y(dt/2)|`, so there is one error row fewer than runs.
pub fn temporal_study<T: Real>(
    ms: &ManufacturedSolution<T>,
    half_width: T,
    n: usize,
    t_end: T,
    step_counts: &[usize],
) -> Result<ConvergenceReport<T>> {
    if step_counts.len() < 3 || step_counts.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(SimError::Precondition(
            "need at least 3 step counts, each doubling".into(),
        ));
    }
    ms.check(half_width, t_end)?;
    let runs = step_counts
        .par_iter()
        .map(|&m| {
            let cap = t_end / T::of_usize(m);
            let (grid, state, steps) = manufactured_run(ms, half_width, n, t_end, Some(cap))?;
            if steps != m {
                return Err(SimError::Precondition(format!(
                    "{m} steps requested but stability limits forced {steps}"
                )));
            }
            Ok((grid, state))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = &runs[0].0;
    let errors = runs.windows(2).map(|w| field_errors(&w[0].1, &w[1].1, grid)).collect();
    Ok(ConvergenceReport::from_errors(
        Refinement::Time,
        step_counts[1..].to_vec(),
        errors,
    ))
}

/// Restricts a fine state to a coarse mesh: cell averages for the cell
/// fields, shared nodes for `u`.
pub fn restrict<T: Real>(fine: &State<T>, ratio: usize) -> State<T> {
    let avg = |x: &[T]| {
        x.chunks(ratio)
            .map(|c| c.iter().copied().sum::<T>() / T::of_usize(ratio))
            .collect::<Vec<T>>()
    };
    State {
        t: fine.t,
        v: avg(&fine.v),
        theta: avg(&fine.theta),
        z: avg(&fine.z),
        u: fine.u.iter().step_by(ratio).copied().collect(),
    }
}

/// Discrepancy between a coarse run and a restricted fine run of the same scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleDiscrepancy<T> {
    pub n_coarse: usize,
    pub n_fine: usize,
    pub errors: [FieldError<T>; 4],
}

impl<T: Real> OracleDiscrepancy<T> {
    pub fn max_linf(&self) -> T {
        self.errors.iter().fold(T::zero(), |m, e| m.max(e.linf))
    }
}

pub fn oracle_compare<T: Real>(spec: &ScenarioSpec<T>, n_coarse: usize, n_fine: usize) -> Result<OracleDiscrepancy<T>> {
    if n_fine < 4 * n_coarse || !n_fine.is_multiple_of(n_coarse) {
        return Err(SimError::Precondition(format!(
            "fine mesh {n_fine} must be a multiple of, and at least 4x, {n_coarse}"
        )));
    }
    let runs = [n_coarse, n_fine]
        .par_iter()
        .map(|&n| {
            let mut s = spec.clone();
            s.n = n;
            let settings = RunSettings {
                sample_cadence: s.t_end,
                keep_states: false,
                snapshot_times: Vec::new(),
                dt_cap: None,
            };
            run_simulation(&s, &settings).map(|o| (o.grid, o.final_state))
        })
        .collect::<Result<Vec<_>>>()?;
    let coarse_grid = &runs[0].0;
    let restricted = restrict(&runs[1].1, n_fine / n_coarse);
    Ok(OracleDiscrepancy {
        n_coarse,
        n_fine,
        errors: field_errors(&runs[0].1, &restricted, coarse_grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Residual of the system by central differences of the closed-form fields.
    fn fd_residual(ms: &ManufacturedSolution<f64>, t: f64, x: f64) -> [f64; 4] {
        let h = 1e-4;
        let p = &ms.params;
        let f = |pr: &Profile<f64>, t: f64, x: f64| pr.value(t, x);
        let dt = |pr: &Profile<f64>| (f(pr, t + h, x) - f(pr, t - h, x)) / (2.0 * h);
        let dx = |g: &dyn Fn(f64) -> f64| (g(x + h) - g(x - h)) / (2.0 * h);
        let v = |x: f64| f(&ms.v, t, x);
        let u = |x: f64| f(&ms.u, t, x);
        let th = |x: f64| f(&ms.theta, t, x);
        let z = |x: f64| f(&ms.z, t, x);
        let ux = |x: f64| (u(x + h) - u(x - h)) / (2.0 * h);
        let thx = |x: f64| (th(x + h) - th(x - h)) / (2.0 * h);
        let zx = |x: f64| (z(x + h) - z(x - h)) / (2.0 * h);

        let s_v = dt(&ms.v) - ux(x);
        let stress = |x: f64| p.mu * ux(x) / v(x) - p.p(v(x), th(x));
        let s_u = dt(&ms.u) - dx(&stress);
        let flux = |x: f64| p.kappa(v(x), th(x)) * thx(x) / v(x);
        let d = p.partials(v(x), th(x));
        let s_th = d.e_theta * dt(&ms.theta) + th(x) * d.p_theta * ux(x)
            - p.mu * ux(x).powi(2) / v(x)
            - dx(&flux)
            - p.lambda * p.phi(th(x)) * z(x);
        let zflux = |x: f64| p.d * zx(x) / v(x).powi(2);
        let s_z = dt(&ms.z) - dx(&zflux) + p.phi(th(x)) * z(x);
        [s_v, s_u, s_th, s_z]
    }

    #[test]
    fn equilibrium_sources_vanish() {
        let ms = ManufacturedSolution::equilibrium(GasParameters::<f64>::default());
        for &(t, x) in &[(0.0, 0.0), (1.3, -2.0), (5.0, 4.5)] {
            assert_eq!(manufactured_source(&ms, &ms.params, t, x), [0.0; 4]);
        }
    }

    #[test]
    fn volume_only_example() {
        let l = 6.0;
        let params = GasParameters::<f64>::default();
        let ms = ManufacturedSolution {
            v: Profile {
                base: 1.0,
                amplitude: 0.1,
                rate: 1.0,
                shape: Shape::Sine {
                    wavenumber: std::f64::consts::PI / l,
                },
            },
            ..ManufacturedSolution::equilibrium(params)
        };
        let s = manufactured_source(&ms, &params, 0.0, 0.0);
        assert_eq!(s[0], 0.0);
        let s = manufactured_source(&ms, &params, 0.7, 1.1);
        assert!((s[0] - ms.v.jet(0.7, 1.1).t).abs() < 1e-16);
        assert_eq!(s[3], 0.0);
    }

    #[test]
    fn sources_match_finite_differences() {
        let params = GasParameters::<f64> {
            kappa2: 0.7,
            lambda: 1.5,
            d: 0.8,
            ..Default::default()
        };
        let ms = ManufacturedSolution::gaussian(params);
        for &t in &[0.0, 0.3, 1.0] {
            for k in -20..=20 {
                let x = 0.17 * k as f64;
                let exact = manufactured_source(&ms, &params, t, x);
                let fd = fd_residual(&ms, t, x);
                for f in 0..4 {
                    assert!(
                        (exact[f] - fd[f]).abs() < 1e-6,
                        "field {f} at ({t}, {x}): {} vs {}",
                        exact[f],
                        fd[f]
                    );
                }
            }
        }
    }

    #[test]
    fn manufactured_check_rejects_bad_fields() {
        let mut ms = ManufacturedSolution::gaussian(GasParameters::<f64>::default());
        assert!(ms.check(6.0, 1.0).is_ok());
        ms.z.amplitude = 1.5;
        assert!(matches!(ms.check(6.0, 1.0), Err(SimError::Precondition(_))));
    }

    #[test]
    fn equilibrium_study_is_exact() {
        let ms = ManufacturedSolution::equilibrium(GasParameters::<f64>::default());
        let report = convergence_study(&ms, 6.0, &[16, 32, 64], 0.2).unwrap();
        assert!(report.errors.iter().all(|e| e.iter().all(|f| f.linf < 1e-13)));
        assert_eq!(report.all_orders().count(), 0);
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 1 + 12);
        assert!(csv.lines().nth(5).unwrap().ends_with(",exact"));
        assert!(convergence_study(&ms, 6.0, &[16, 32], 0.2).is_err());
        assert!(convergence_study(&ms, 6.0, &[16, 32, 48], 0.2).is_err());
    }

    #[test]
    fn restriction_of_uniform_refinement_is_exact() {
        let fine = State {
            t: 0.0,
            v: vec![1.0, 3.0, 2.0, 2.0],
            theta: vec![1.0; 4],
            z: vec![0.0, 0.5, 0.25, 0.25],
            u: vec![0.0, 9.0, 1.0, 9.0, 2.0],
        };
        let c = restrict(&fine, 2);
        assert_eq!(c.v, vec![2.0, 2.0]);
        assert_eq!(c.z, vec![0.25, 0.25]);
        assert_eq!(c.u, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn equilibrium_oracle_is_zero() {
        let spec = ScenarioSpec::<f64>::equilibrium(10.0, 16, 0.5);
        let d = oracle_compare(&spec, 16, 64).unwrap();
        assert!(d.max_linf() < 1e-13);
        assert!(oracle_compare(&spec, 16, 32).is_err());
    }
}
