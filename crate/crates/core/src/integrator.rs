//! Time integration by Strang splitting.
//!
//! One composed step is `species(dt/2) . heat(dt/2) . hydro(dt) . heat(dt/2) . species(dt/2)`.
//! The hydrodynamic substep advances `(v, u)` explicitly with Heun's method and
//! `theta` frozen; the heat and species substeps are Crank-Nicolson in
//! conservative form, the heat one iterated by Picard sweeps with frozen
//! coefficients. Every substep is second order, so the composition is too.
//!
//! Positivity is never enforced by clipping: a substep that would cross a
//! floor fails, and the composed step is retried with half the time step.

use crate::constitutive::GasParameters;
use crate::domain::{make_initial_data, validate_initial_data, Boundary, Grid, ScenarioSpec, State};
use crate::error::{Result, SimError};
use crate::functionals::{self, DiagnosticsRecord};
use crate::scalar::Real;
use crate::tridiag::{cyclic_tridiagonal_solve, tridiagonal_solve};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControls<T> {
    pub cfl: T,
    pub dt_min: T,
    pub dt_max: T,
    pub picard_tol: T,
    pub picard_max_iters: usize,
    pub floor_v: T,
    pub floor_theta: T,
    pub max_step_rejections: usize,
}

impl<T: Real> StepControls<T> {
    pub fn from_spec(spec: &ScenarioSpec<T>) -> Self {
        Self {
            cfl: spec.cfl,
            dt_min: spec.dt_min,
            dt_max: spec.dt_max,
            picard_tol: spec.picard_tol,
            picard_max_iters: spec.picard_max_iters,
            floor_v: spec.floor_v,
            floor_theta: spec.floor_theta,
            max_step_rejections: spec.max_step_rejections,
        }
    }
}

impl<T: Real> Default for StepControls<T> {
    fn default() -> Self {
        Self::from_spec(&ScenarioSpec::equilibrium(T::one(), 8, T::one()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<T> {
    pub new_state: State<T>,
    pub dt_used: T,
    /// Picard sweeps summed over both heat substeps of the accepted step.
    pub picard_iters: usize,
    pub rejected_count: usize,
    /// `sum dt * phi * z dx` consumed by the reaction during the step.
    pub z_reacted: T,
    /// Species leaving through far-field boundaries during the step.
    pub z_outflow: T,
}

/// Additive forcing `(S_v, S_u, S_theta, S_z)` evaluated at `(t, x)`.
///
/// `S_theta` enters the temperature form `e_theta theta_t + ... = ... + S_theta`.
pub trait SourceTerms<T>: Sync {
    fn sources(&self, t: T, x: T) -> [T; 4];
}

/// Largest stable step from the acoustic, diffusive and reactive limits.
///
/// The acoustic limit is `cfl * dx / max(|u| + c)` with
/// `c = v sqrt(max(-p_v + theta p_theta^2 / e_theta, 0) / v)`. The explicit
/// viscous stage and the positivity of the Crank-Nicolson species update add
/// `cfl * dx^2 / (2 max(mu / v, d / v^2))` and `cfl / max(phi)`.
pub fn select_timestep<T: Real>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParameters<T>,
    controls: &StepControls<T>,
) -> T {
    let (acoustic, diffusive, reactive) = timestep_limits(state, grid, params, controls.cfl);
    acoustic
        .min(diffusive)
        .min(reactive)
        .max(controls.dt_min)
        .min(controls.dt_max)
}

pub(crate) fn timestep_limits<T: Real>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParameters<T>,
    cfl: T,
) -> (T, T, T) {
    let mut speed = T::zero();
    let mut diffusivity = T::zero();
    let mut rate = T::zero();
    for i in 0..grid.n {
        let v = state.v[i];
        let th = state.theta[i];
        let d = params.partials(v, th);
        let arg = (-d.p_v + th * d.p_theta * d.p_theta / d.e_theta).max(T::zero());
        let c = v * (arg / v).sqrt();
        let umax = state.u[i].abs().max(state.u[i + 1].abs());
        speed = speed.max(umax + c);
        diffusivity = diffusivity.max(params.mu / v).max(params.d / (v * v));
        rate = rate.max(params.phi(th));
    }
    let inf = T::infinity();
    let acoustic = if speed > T::zero() { cfl * grid.dx / speed } else { inf };
    let diffusive = if diffusivity > T::zero() {
        cfl * grid.dx * grid.dx / (T::lit(2.0) * diffusivity)
    } else {
        inf
    };
    let reactive = if rate > T::zero() { cfl / rate } else { inf };
    (acoustic, diffusive, reactive)
}

/// Bundles what every substep needs.
#[derive(Clone, Copy)]
pub struct Stepper<'a, T> {
    pub grid: &'a Grid<T>,
    pub params: &'a GasParameters<T>,
    pub controls: &'a StepControls<T>,
    pub sources: Option<&'a dyn SourceTerms<T>>,
}

fn half<T: Real>() -> T {
    T::lit(0.5)
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(grid: &'a Grid<T>, params: &'a GasParameters<T>, controls: &'a StepControls<T>) -> Self {
        Self {
            grid,
            params,
            controls,
            sources: None,
        }
    }

    pub fn with_sources(mut self, sources: &'a dyn SourceTerms<T>) -> Self {
        self.sources = Some(sources);
        self
    }

    fn source_at(&self, t: T, x: T, k: usize) -> T {
        self.sources.map_or(T::zero(), |s| s.sources(t, x)[k])
    }

    /// `u_x` on every cell.
    fn strain(&self, u: &[T]) -> Vec<T> {
        let dx = self.grid.dx;
        u.windows(2).map(|w| (w[1] - w[0]) / dx).collect()
    }

    fn hydro_rhs(&self, v: &[T], u: &[T], theta: &[T], t: T) -> (Vec<T>, Vec<T>) {
        let g = self.grid;
        let n = g.n;
        let p = self.params;
        let strain = self.strain(u);
        let stress: Vec<T> = (0..n).map(|i| p.mu * strain[i] / v[i] - p.p(v[i], theta[i])).collect();
        let mut dv = strain;
        if self.sources.is_some() {
            for (i, dvi) in dv.iter_mut().enumerate() {
                *dvi += self.source_at(t, g.cell_centers[i], 0);
            }
        }
        let mut du = vec![T::zero(); n + 1];
        for j in 1..n {
            du[j] = (stress[j] - stress[j - 1]) / g.dx;
        }
        if g.boundary == Boundary::Periodic {
            du[0] = (stress[0] - stress[n - 1]) / g.dx;
        }
        if self.sources.is_some() {
            let (lo, hi) = match g.boundary {
                Boundary::FarField => (1, n),
                Boundary::Periodic => (0, n),
            };
            for (j, duj) in du.iter_mut().enumerate().take(hi).skip(lo) {
                *duj += self.source_at(t, g.node_positions[j], 1);
            }
        }
        du[n] = du[0];
        (dv, du)
    }

    fn check_floor_v(&self, v: &[T]) -> Result<()> {
        if let Some(i) = v.iter().position(|&x| !(x > self.controls.floor_v)) {
            return Err(SimError::Positivity(format!(
                "v[{i}] = {} fell to floor_v = {}",
                v[i], self.controls.floor_v
            )));
        }
        Ok(())
    }

    /// Explicit Heun step for `v_t = u_x`, `u_t = (mu u_x / v - p)_x` with `theta` frozen.
    pub fn hydro(&self, state: &State<T>, t0: T, dt: T) -> Result<State<T>> {
        let (dv0, du0) = self.hydro_rhs(&state.v, &state.u, &state.theta, t0);
        let v1: Vec<T> = state.v.iter().zip(&dv0).map(|(&v, &d)| v + dt * d).collect();
        let u1: Vec<T> = state.u.iter().zip(&du0).map(|(&u, &d)| u + dt * d).collect();
        self.check_floor_v(&v1)?;
        let (dv1, du1) = self.hydro_rhs(&v1, &u1, &state.theta, t0 + dt);
        let h = half::<T>() * dt;
        let v: Vec<T> = (0..self.grid.n).map(|i| state.v[i] + h * (dv0[i] + dv1[i])).collect();
        let u: Vec<T> = (0..=self.grid.n).map(|j| state.u[j] + h * (du0[j] + du1[j])).collect();
        self.check_floor_v(&v)?;
        Ok(State { v, u, ..state.clone() })
    }

    /// Face coefficients for a cell-based diffusion operator. Entry `i` is
    /// the face right of cell `i`; on far-field meshes a final entry holds
    /// the (shared) boundary-face coefficient.
    fn faces(&self, cell_coef: &[T], ghost_coef: T) -> Vec<T> {
        let n = self.grid.n;
        let mut f: Vec<T> = (0..n - 1)
            .map(|i| half::<T>() * (cell_coef[i] + cell_coef[i + 1]))
            .collect();
        match self.grid.boundary {
            Boundary::Periodic => f.push(half::<T>() * (cell_coef[n - 1] + cell_coef[0])),
            Boundary::FarField => {
                f.push(half::<T>() * (cell_coef[n - 1] + ghost_coef));
                f.push(half::<T>() * (cell_coef[0] + ghost_coef));
            }
        }
        f
    }

    /// `(k_right, k_left)` for cell `i`.
    #[inline]
    fn face_pair(&self, faces: &[T], i: usize) -> (T, T) {
        let n = self.grid.n;
        match self.grid.boundary {
            Boundary::Periodic => (faces[i], faces[(i + n - 1) % n]),
            Boundary::FarField => {
                let right = faces[i];
                let left = if i == 0 { faces[n] } else { faces[i - 1] };
                (right, left)
            }
        }
    }

    /// Discrete `(k w_x)_x` with ghost value `ghost` on far-field meshes.
    fn diffusion(&self, faces: &[T], w: &[T], ghost: T) -> Vec<T> {
        let n = self.grid.n;
        let dx2 = self.grid.dx * self.grid.dx;
        (0..n)
            .map(|i| {
                let (kr, kl) = self.face_pair(faces, i);
                let (wr, wl) = match self.grid.boundary {
                    Boundary::Periodic => (w[(i + 1) % n], w[(i + n - 1) % n]),
                    Boundary::FarField => (
                        if i + 1 < n { w[i + 1] } else { ghost },
                        if i > 0 { w[i - 1] } else { ghost },
                    ),
                };
                (kr * (wr - w[i]) - kl * (w[i] - wl)) / dx2
            })
            .collect()
    }

    /// Assembles `diag_extra[i] w_i - (s k) second difference` and solves.
    /// Returns the solution of `(M + s K) w = rhs` where `K` is the negative
    /// discrete diffusion operator with the given faces and ghost value.
    fn solve_implicit(&self, faces: &[T], scale: T, base_diag: &[T], rhs: &mut [T], ghost: T) -> Result<Vec<T>> {
        let n = self.grid.n;
        let c = scale / (self.grid.dx * self.grid.dx);
        let mut lower = vec![T::zero(); n];
        let mut upper = vec![T::zero(); n];
        let mut diag = vec![T::zero(); n];
        for i in 0..n {
            let (kr, kl) = self.face_pair(faces, i);
            diag[i] = base_diag[i] + c * (kr + kl);
            upper[i] = -c * kr;
            lower[i] = -c * kl;
        }
        match self.grid.boundary {
            Boundary::Periodic => cyclic_tridiagonal_solve(&lower, &diag, &upper, rhs),
            Boundary::FarField => {
                rhs[0] -= lower[0] * ghost;
                rhs[n - 1] -= upper[n - 1] * ghost;
                lower[0] = T::zero();
                upper[n - 1] = T::zero();
                tridiagonal_solve(&lower, &diag, &upper, rhs)
            }
        }
    }

    fn conduction_faces(&self, v: &[T], theta: &[T]) -> Vec<T> {
        let p = self.params;
        let coef: Vec<T> = v.iter().zip(theta).map(|(&v, &th)| p.kappa(v, th) / v).collect();
        self.faces(&coef, p.kappa(T::one(), T::one()))
    }

    /// Temperature sources at fixed `v, u, z`.
    fn heat_sources(&self, state: &State<T>, theta: &[T], strain: &[T], t: T) -> Vec<T> {
        let p = self.params;
        (0..self.grid.n)
            .map(|i| {
                let v = state.v[i];
                let d = strain[i];
                let mut s =
                    -p.theta_p_theta(v, theta[i]) * d + p.mu * d * d / v + p.lambda * p.phi(theta[i]) * state.z[i];
                if self.sources.is_some() {
                    s += self.source_at(t, self.grid.cell_centers[i], 2);
                }
                s
            })
            .collect()
    }

    /// Crank-Nicolson step of
    /// `e_theta theta_t = -theta p_theta u_x + mu u_x^2 / v + (kappa theta_x / v)_x + lambda phi z`
    /// written for `e(v, theta)` so that the conduction flux telescopes.
    /// Returns the new state and the number of Picard sweeps.
    pub fn heat(&self, state: &State<T>, t0: T, dt: T) -> Result<(State<T>, usize)> {
        let p = self.params;
        let n = self.grid.n;
        let ctl = self.controls;
        let one = T::one();
        let hdt = half::<T>() * dt;
        let strain = self.strain(&state.u);
        let th0 = &state.theta;
        let e0: Vec<T> = (0..n).map(|i| p.e(state.v[i], th0[i])).collect();
        let faces0 = self.conduction_faces(&state.v, th0);
        let cond0 = self.diffusion(&faces0, th0, one);
        let src0 = self.heat_sources(state, th0, &strain, t0);
        let explicit: Vec<T> = (0..n).map(|i| e0[i] + hdt * (cond0[i] + src0[i])).collect();

        // Each Picard sweep solves for the increment over the current iterate,
        // so a state that already satisfies the scheme is reproduced exactly.
        let mut current = th0.clone();
        let mut change = T::infinity();
        for iter in 1..=ctl.picard_max_iters {
            let faces = self.conduction_faces(&state.v, &current);
            let cond = self.diffusion(&faces, &current, one);
            let src = self.heat_sources(state, &current, &strain, t0 + dt);
            let mut base = Vec::with_capacity(n);
            let mut rhs = Vec::with_capacity(n);
            for i in 0..n {
                let v = state.v[i];
                base.push(p.partials(v, current[i]).e_theta);
                rhs.push(explicit[i] - p.e(v, current[i]) + hdt * (cond[i] + src[i]));
            }
            let delta = self.solve_implicit(&faces, hdt, &base, &mut rhs, T::zero())?;
            let next: Vec<T> = current.iter().zip(&delta).map(|(&a, &d)| a + d).collect();
            if let Some(i) = next.iter().position(|&x| !(x > ctl.floor_theta)) {
                return Err(SimError::Positivity(format!(
                    "theta[{i}] = {} fell to floor_theta = {}",
                    next[i], ctl.floor_theta
                )));
            }
            change = delta.iter().fold(T::zero(), |m, &d| m.max(d.abs()));
            current = next;
            if change < ctl.picard_tol {
                return Ok((
                    State {
                        theta: current,
                        ..state.clone()
                    },
                    iter,
                ));
            }
        }
        Err(SimError::Convergence {
            iters: ctl.picard_max_iters,
            change: change.as_f64(),
        })
    }

    /// Crank-Nicolson step of `z_t = (d z_x / v^2)_x - phi(theta) z`.
    /// Returns the new state, the amount reacted and the far-field outflow.
    pub fn species(&self, state: &State<T>, t0: T, dt: T) -> Result<(State<T>, T, T)> {
        let p = self.params;
        let g = self.grid;
        let n = g.n;
        let hdt = half::<T>() * dt;
        let coef: Vec<T> = state.v.iter().map(|&v| p.d / (v * v)).collect();
        let faces = self.faces(&coef, p.d);
        let rate: Vec<T> = state.theta.iter().map(|&th| p.phi(th)).collect();
        let lap0 = self.diffusion(&faces, &state.z, T::zero());
        let mut rhs: Vec<T> = (0..n)
            .map(|i| state.z[i] + hdt * (lap0[i] - rate[i] * state.z[i]))
            .collect();
        if self.sources.is_some() {
            for (i, r) in rhs.iter_mut().enumerate() {
                let x = g.cell_centers[i];
                *r += hdt * (self.source_at(t0, x, 3) + self.source_at(t0 + dt, x, 3));
            }
        }
        let base: Vec<T> = rate.iter().map(|&r| T::one() + hdt * r).collect();
        let mut z = self.solve_implicit(&faces, hdt, &base, &mut rhs, T::zero())?;

        if self.sources.is_none() {
            let zmax = state.z.iter().fold(T::zero(), |m, &x| m.max(x));
            let slack = T::lit(1e-13) * zmax.max(T::min_positive_value());
            for (i, zi) in z.iter_mut().enumerate() {
                // Sherman-Morrison round-off can leave values a few ulps outside the range.
                if *zi < T::zero() || *zi > zmax {
                    if *zi < -slack || *zi > zmax + slack {
                        return Err(SimError::Positivity(format!("z[{i}] = {} left [0, {}]", *zi, zmax)));
                    }
                    *zi = zi.max(T::zero()).min(zmax);
                }
            }
        }

        let reacted = (0..n)
            .map(|i| dt * rate[i] * half::<T>() * (state.z[i] + z[i]) * g.dx)
            .sum::<T>();
        let outflow = match g.boundary {
            Boundary::Periodic => T::zero(),
            Boundary::FarField => {
                let (kr, _) = self.face_pair(&faces, n - 1);
                let (_, kl) = self.face_pair(&faces, 0);
                hdt * (kr * (state.z[n - 1] + z[n - 1]) + kl * (state.z[0] + z[0])) / g.dx
            }
        };
        Ok((State { z, ..state.clone() }, reacted, outflow))
    }

    fn compose(&self, state: &State<T>, dt: T) -> Result<StepOutcome<T>> {
        let t0 = state.t;
        let hdt = half::<T>() * dt;
        let (s1, r1, o1) = self.species(state, t0, hdt)?;
        let (s2, i1) = self.heat(&s1, t0, hdt)?;
        let s3 = self.hydro(&s2, t0, dt)?;
        let (s4, i2) = self.heat(&s3, t0 + hdt, hdt)?;
        let (mut s5, r2, o2) = self.species(&s4, t0 + hdt, hdt)?;
        s5.t = t0 + dt;
        Ok(StepOutcome {
            new_state: s5,
            dt_used: dt,
            picard_iters: i1 + i2,
            rejected_count: 0,
            z_reacted: r1 + r2,
            z_outflow: o1 + o2,
        })
    }

    /// One composed step, halving `dt` on recoverable failures.
    pub fn strang(&self, state: &State<T>, dt: T) -> Result<StepOutcome<T>> {
        let mut dt = dt;
        let mut rejected = 0;
        loop {
            match self.compose(state, dt) {
                Ok(mut out) => {
                    out.rejected_count = rejected;
                    return Ok(out);
                }
                Err(e) if e.is_recoverable() => {
                    rejected += 1;
                    dt *= half::<T>();
                    if rejected > self.controls.max_step_rejections || dt < self.controls.dt_min {
                        return Err(SimError::BlowUp {
                            t: state.t.as_f64(),
                            reason: format!("{e} (after {rejected} step rejections)"),
                        });
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
}

pub fn hydro_step<T: Real>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParameters<T>,
    dt: T,
    controls: &StepControls<T>,
) -> Result<State<T>> {
    let mut out = Stepper::new(grid, params, controls).hydro(state, state.t, dt)?;
    out.t = state.t + dt;
    Ok(out)
}

pub fn heat_step<T: Real>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParameters<T>,
    dt: T,
    controls: &StepControls<T>,
) -> Result<(State<T>, usize)> {
    let (mut out, iters) = Stepper::new(grid, params, controls).heat(state, state.t, dt)?;
    out.t = state.t + dt;
    Ok((out, iters))
}

pub fn species_step<T: Real>(state: &State<T>, grid: &Grid<T>, params: &GasParameters<T>, dt: T) -> Result<State<T>> {
    let controls = StepControls::default();
    let (mut out, _, _) = Stepper::new(grid, params, &controls).species(state, state.t, dt)?;
    out.t = state.t + dt;
    Ok(out)
}

pub fn strang_step<T: Real>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParameters<T>,
    dt: T,
    controls: &StepControls<T>,
) -> Result<StepOutcome<T>> {
    Stepper::new(grid, params, controls).strang(state, dt)
}

/// Sampling and retention options for [`run_simulation`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings<T> {
    /// Interval between diagnostics samples; the end time is always sampled.
    pub sample_cadence: T,
    /// Keep every sampled state (needed by the history-based probes).
    pub keep_states: bool,
    /// Extra times at which a copy of the state is captured.
    pub snapshot_times: Vec<T>,
    /// Upper bound on every step, on top of the scenario's `dt_max`.
    pub dt_cap: Option<T>,
}

impl<T: Real> RunSettings<T> {
    pub fn sampled(sample_cadence: T) -> Self {
        Self {
            sample_cadence,
            keep_states: true,
            snapshot_times: Vec::new(),
            dt_cap: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOutput<T> {
    pub grid: Grid<T>,
    pub initial_state: State<T>,
    pub final_state: State<T>,
    pub records: Vec<DiagnosticsRecord<T>>,
    /// Sampled states aligned with `records` when `keep_states` is set.
    pub states: Vec<State<T>>,
    pub snapshots: Vec<State<T>>,
    pub steps: usize,
    pub rejected_steps: usize,
    pub max_picard_iters: usize,
}

pub fn run_simulation<T: Real>(spec: &ScenarioSpec<T>, settings: &RunSettings<T>) -> Result<SimulationOutput<T>> {
    spec.check()?;
    let grid = spec.grid()?;
    let initial = make_initial_data(spec, &grid)?;
    let report = validate_initial_data(&initial, &grid)?;
    if !report.passed() {
        return Err(SimError::Config(format!(
            "initial data fails: {}",
            report.failures().join(", ")
        )));
    }
    run_from(spec, &grid, initial, settings, None)
}

/// Integrates from an explicit initial state, optionally with forcing.
pub fn run_from<T: Real>(
    spec: &ScenarioSpec<T>,
    grid: &Grid<T>,
    initial: State<T>,
    settings: &RunSettings<T>,
    sources: Option<&dyn SourceTerms<T>>,
) -> Result<SimulationOutput<T>> {
    spec.check()?;
    if !(settings.sample_cadence > T::zero()) {
        return Err(SimError::Config("sample_cadence must be positive".into()));
    }
    initial.check_invariants(grid)?;
    let params = &spec.params;
    let controls = StepControls::from_spec(spec);
    let mut stepper = Stepper::new(grid, params, &controls);
    if let Some(s) = sources {
        stepper = stepper.with_sources(s);
    }

    let t_end = spec.t_end;
    let stops = stop_schedule(t_end, settings);
    let mut state = initial.clone();
    let mut tracker = functionals::RecordTracker::new(&state, grid, params);
    let mut records = vec![tracker.record(&state, grid, params)];
    let mut states = if settings.keep_states {
        vec![state.clone()]
    } else {
        Vec::new()
    };
    let mut snapshots = Vec::new();
    for &(t, _, snap) in stops.iter().take_while(|s| s.0 == T::zero()) {
        if snap && t == T::zero() {
            snapshots.push(state.clone());
        }
    }
    let mut steps = 0;
    let mut rejected_steps = 0;
    let mut max_picard_iters = 0;
    let tiny = T::lit(1e-12) * t_end.max(T::one());

    for &(target, sample, snap) in stops.iter().filter(|s| s.0 > T::zero()) {
        while target - state.t > tiny {
            let mut dt = select_timestep(&state, grid, params, &controls);
            if let Some(cap) = settings.dt_cap {
                dt = dt.min(cap);
            }
            let remaining = target - state.t;
            let count = (remaining / dt - T::lit(1e-9)).ceil().max(T::one());
            let dt = remaining / count;
            let outcome = stepper.strang(&state, dt)?;
            steps += 1;
            rejected_steps += outcome.rejected_count;
            max_picard_iters = max_picard_iters.max(outcome.picard_iters);
            tracker.absorb(outcome.z_reacted, outcome.z_outflow);
            state = outcome.new_state;
            if let Err(e) = state.check_invariants(grid) {
                return Err(SimError::BlowUp {
                    t: state.t.as_f64(),
                    reason: e.to_string(),
                });
            }
        }
        state.t = target;
        if sample {
            records.push(tracker.record(&state, grid, params));
            if settings.keep_states {
                states.push(state.clone());
            }
        }
        if snap {
            snapshots.push(state.clone());
        }
    }

    Ok(SimulationOutput {
        grid: grid.clone(),
        initial_state: initial,
        final_state: state,
        records,
        states,
        snapshots,
        steps,
        rejected_steps,
        max_picard_iters,
    })
}

/// Sorted `(time, is_sample, is_snapshot)` stops in `[0, t_end]`.
fn stop_schedule<T: Real>(t_end: T, settings: &RunSettings<T>) -> Vec<(T, bool, bool)> {
    let mut stops: Vec<(T, bool, bool)> = Vec::new();
    let count = (t_end / settings.sample_cadence - T::lit(1e-9)).ceil().max(T::zero());
    let count = count.to_usize().unwrap_or(0);
    for k in 1..=count {
        let t = (settings.sample_cadence * T::of_usize(k)).min(t_end);
        stops.push((t, true, false));
    }
    if stops.last().map_or(t_end > T::zero(), |s| s.0 < t_end) {
        stops.push((t_end, true, false));
    }
    let eps = T::lit(1e-12) * t_end.max(T::one());
    for &ts in &settings.snapshot_times {
        if ts < T::zero() || ts > t_end {
            continue;
        }
        match stops.iter_mut().find(|s| (s.0 - ts).abs() <= eps) {
            Some(s) => s.2 = true,
            None => stops.push((ts, false, true)),
        }
    }
    stops.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    stops
}
