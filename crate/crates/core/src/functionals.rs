//! Analytic functionals and probes evaluated on discrete states and run
//! histories: conserved quantities, entropy and dissipation, the `X`/`Y`
//! functionals, deviation norms, the interval and oscillation probes, the
//! local representation of `v` and the lower temperature envelope.
//!
//! Spatial integrals use the midpoint rule on cells (node-lumped masses for
//! `u`); time integrals use the trapezoid rule over sampled states.

use crate::constitutive::GasParameters;
use crate::domain::{boundary_deviation, Boundary, Grid, State};
use crate::error::{Result, SimError};
use crate::scalar::Real;

/// Deviation norms of `(v - 1, u, theta - 1, z)` and of its discrete gradient.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms<T> {
    pub l2: T,
    pub l4: T,
    pub linf: T,
    pub grad_l2: T,
}

impl<T: Real> Norms<T> {
    pub fn get(&self, label: &str) -> Option<T> {
        match label {
            "L2" => Some(self.l2),
            "L4" => Some(self.l4),
            "Linf" => Some(self.linf),
            "grad_L2" => Some(self.grad_l2),
            _ => None,
        }
    }
}

/// One diagnostics sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord<T> {
    pub t: T,
    pub mass_dev: T,
    pub momentum: T,
    pub total_energy: T,
    /// Entropy-energy `G = sum (eta + u^2/2) dx`.
    pub g: T,
    /// Dissipation rate `V`.
    pub v_rate: T,
    pub x_acc: T,
    pub y_run: T,
    pub min_v: T,
    pub max_v: T,
    pub min_theta: T,
    pub max_theta: T,
    pub max_z: T,
    pub z_l1: T,
    pub norms: Norms<T>,
    pub boundary_deviation: T,
    /// Cumulative species consumed by the reaction since `t = 0`.
    pub z_reacted: T,
    /// Cumulative species lost through far-field boundaries since `t = 0`.
    pub z_outflow: T,
}

pub const CSV_COLUMNS: [&str; 19] = [
    "t",
    "mass_dev",
    "momentum",
    "total_energy",
    "G",
    "V",
    "X",
    "Y",
    "min_v",
    "max_v",
    "min_theta",
    "max_theta",
    "max_z",
    "z_L1",
    "dev_L2",
    "dev_L4",
    "dev_Linf",
    "grad_L2",
    "boundary_dev",
];

impl<T: Real> DiagnosticsRecord<T> {
    pub fn values(&self) -> [T; 19] {
        [
            self.t,
            self.mass_dev,
            self.momentum,
            self.total_energy,
            self.g,
            self.v_rate,
            self.x_acc,
            self.y_run,
            self.min_v,
            self.max_v,
            self.min_theta,
            self.max_theta,
            self.max_z,
            self.z_l1,
            self.norms.l2,
            self.norms.l4,
            self.norms.linf,
            self.norms.grad_l2,
            self.boundary_deviation,
        ]
    }

    /// Fields in [`CSV_COLUMNS`] order, formatted with [`format_real`].
    pub fn csv_row(&self) -> Vec<String> {
        self.values().iter().map(|v| format_real(v.as_f64())).collect()
    }

    pub fn is_valid(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
            && self.min_v > T::zero()
            && self.min_theta > T::zero()
            && self.max_z >= T::zero()
            && self.max_z <= T::one()
    }
}

/// Shortest round-trip text for `x`, in exponent form when it is very small
/// or very large.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Neighbour of a face: a cell index or the far-field ghost.
#[derive(Clone, Copy)]
enum Side {
    Cell(usize),
    Ghost,
}

fn faces<T: Real>(grid: &Grid<T>) -> Vec<(Side, Side)> {
    let n = grid.n;
    let mut out: Vec<(Side, Side)> = (0..n - 1).map(|i| (Side::Cell(i), Side::Cell(i + 1))).collect();
    match grid.boundary {
        Boundary::Periodic => out.push((Side::Cell(n - 1), Side::Cell(0))),
        Boundary::FarField => {
            out.push((Side::Ghost, Side::Cell(0)));
            out.push((Side::Cell(n - 1), Side::Ghost));
        }
    }
    out
}

#[inline]
fn at<T: Real>(field: &[T], side: Side, ghost: T) -> T {
    match side {
        Side::Cell(i) => field[i],
        Side::Ghost => ghost,
    }
}

/// `(mass_dev, momentum, total_energy)`.
pub fn conserved_quantities<T: Real>(state: &State<T>, grid: &Grid<T>, params: &GasParameters<T>) -> (T, T, T) {
    let dx = grid.dx;
    let e_ref = params.e(T::one(), T::one());
    let mut mass = T::zero();
    let mut energy = T::zero();
    for i in 0..grid.n {
        mass += (state.v[i] - T::one()) * dx;
        energy += (params.e(state.v[i], state.theta[i]) - e_ref + params.lambda * state.z[i]) * dx;
    }
    let mut momentum = T::zero();
    for (u, m) in state.u.iter().zip(grid.node_masses()) {
        momentum += *u * m;
        energy += T::lit(0.5) * *u * *u * m;
    }
    (mass, momentum, energy)
}

fn kinetic<T: Real>(state: &State<T>, grid: &Grid<T>) -> T {
    state
        .u
        .iter()
        .zip(grid.node_masses())
        .map(|(&u, m)| T::lit(0.5) * u * u * m)
        .sum()
}

/// `V = sum (mu u_x^2 / (v theta) + kappa theta_x^2 / (v theta^2)) dx`.
pub fn dissipation_rate<T: Real>(state: &State<T>, grid: &Grid<T>, params: &GasParameters<T>) -> T {
    let dx = grid.dx;
    let mut total = T::zero();
    for i in 0..grid.n {
        let d = (state.u[i + 1] - state.u[i]) / dx;
        total += params.mu * d * d / (state.v[i] * state.theta[i]) * dx;
    }
    let half = T::lit(0.5);
    for (l, r) in faces(grid) {
        let (vl, vr) = (at(&state.v, l, T::one()), at(&state.v, r, T::one()));
        let (tl, tr) = (at(&state.theta, l, T::one()), at(&state.theta, r, T::one()));
        let v = half * (vl + vr);
        let th = half * (tl + tr);
        let grad = (tr - tl) / dx;
        total += params.kappa(v, th) * grad * grad / (v * th * th) * dx;
    }
    total
}

/// `G = sum (eta(v, theta) + u^2 / 2) dx`.
pub fn entropy_energy<T: Real>(state: &State<T>, grid: &Grid<T>, params: &GasParameters<T>) -> T {
    let eta: T = (0..grid.n)
        .map(|i| params.eta(state.v[i], state.theta[i]) * grid.dx)
        .sum();
    eta + kinetic(state, grid)
}

/// `sum (v_x^2 + u_x^2 + theta_x^2 + z_x^2) dx` on the staggered mesh.
pub fn gradient_sq_sum<T: Real>(state: &State<T>, grid: &Grid<T>) -> T {
    let dx = grid.dx;
    let mut total = T::zero();
    for i in 0..grid.n {
        let d = (state.u[i + 1] - state.u[i]) / dx;
        total += d * d * dx;
    }
    for (l, r) in faces(grid) {
        let gv = (at(&state.v, r, T::one()) - at(&state.v, l, T::one())) / dx;
        let gt = (at(&state.theta, r, T::one()) - at(&state.theta, l, T::one())) / dx;
        let gz = (at(&state.z, r, T::zero()) - at(&state.z, l, T::zero())) / dx;
        total += (gv * gv + gt * gt + gz * gz) * dx;
    }
    total
}

pub fn norms<T: Real>(state: &State<T>, grid: &Grid<T>) -> Norms<T> {
    let mut s2 = T::zero();
    let mut s4 = T::zero();
    let mut linf = T::zero();
    let mut add = |w: T, weight: T| {
        let w2 = w * w;
        s2 += w2 * weight;
        s4 += w2 * w2 * weight;
        linf = linf.max(w.abs());
    };
    for i in 0..grid.n {
        add(state.v[i] - T::one(), grid.dx);
        add(state.theta[i] - T::one(), grid.dx);
        add(state.z[i], grid.dx);
    }
    for (u, m) in state.u.iter().zip(grid.node_masses()) {
        add(*u, m);
    }
    Norms {
        l2: s2.sqrt(),
        l4: s4.sqrt().sqrt(),
        linf,
        grad_l2: gradient_sq_sum(state, grid).sqrt(),
    }
}

/// `sum (1 + theta^(b+3)) ((theta_b - theta_a) / h)^2 dx * h` between two samples.
pub fn x_increment<T: Real>(earlier: &State<T>, later: &State<T>, grid: &Grid<T>, params: &GasParameters<T>) -> T {
    let h = later.t - earlier.t;
    if !(h > T::zero()) {
        return T::zero();
    }
    let exponent = params.b + T::lit(3.0);
    (0..grid.n)
        .map(|i| {
            let rate = (later.theta[i] - earlier.theta[i]) / h;
            (T::one() + later.theta[i].powf(exponent)) * rate * rate * grid.dx * h
        })
        .sum()
}

/// `sum (1 + theta^(2b)) theta_x^2 dx` at one instant.
pub fn y_integrand<T: Real>(state: &State<T>, grid: &Grid<T>, params: &GasParameters<T>) -> T {
    let two_b = T::lit(2.0) * params.b;
    let half = T::lit(0.5);
    faces(grid)
        .into_iter()
        .map(|(l, r)| {
            let (tl, tr) = (at(&state.theta, l, T::one()), at(&state.theta, r, T::one()));
            let grad = (tr - tl) / grid.dx;
            (T::one() + (half * (tl + tr)).powf(two_b)) * grad * grad * grid.dx
        })
        .sum()
}

/// Running `X(t)` and `Y(t)` at each sample of a history.
pub fn xy_series<T: Real>(history: &[State<T>], grid: &Grid<T>, params: &GasParameters<T>) -> Result<Vec<(T, T)>> {
    if history.len() < 2 {
        return Err(SimError::InsufficientHistory(format!(
            "X/Y need at least 2 samples, got {}",
            history.len()
        )));
    }
    let mut x = T::zero();
    let mut y = y_integrand(&history[0], grid, params);
    let mut out = vec![(x, y)];
    for w in history.windows(2) {
        x += x_increment(&w[0], &w[1], grid, params);
        y = y.max(y_integrand(&w[1], grid, params));
        out.push((x, y));
    }
    Ok(out)
}

/// Final `(X, Y)` over a sampled history, `theta_t` by backward differences.
pub fn accumulate_xy<T: Real>(history: &[State<T>], grid: &Grid<T>, params: &GasParameters<T>) -> Result<(T, T)> {
    Ok(*xy_series(history, grid, params)?.last().expect("nonempty series"))
}

/// `1 + Y^(1 / (2b + 6))`.
pub fn theta_bound_from_y<T: Real>(params: &GasParameters<T>, y: T) -> T {
    T::one() + y.max(T::zero()).powf(T::one() / (T::lit(2.0) * params.b + T::lit(6.0)))
}

/// Builds records sample by sample, carrying the running functionals.
#[derive(Debug, Clone)]
pub struct RecordTracker<T> {
    previous: Option<State<T>>,
    x_acc: T,
    y_run: T,
    z_reacted: T,
    z_outflow: T,
}

impl<T: Real> RecordTracker<T> {
    pub fn new(_initial: &State<T>, _grid: &Grid<T>, _params: &GasParameters<T>) -> Self {
        Self {
            previous: None,
            x_acc: T::zero(),
            y_run: T::zero(),
            z_reacted: T::zero(),
            z_outflow: T::zero(),
        }
    }

    pub fn absorb(&mut self, reacted: T, outflow: T) {
        self.z_reacted += reacted;
        self.z_outflow += outflow;
    }

    pub fn record(&mut self, state: &State<T>, grid: &Grid<T>, params: &GasParameters<T>) -> DiagnosticsRecord<T> {
        if let Some(prev) = &self.previous {
            self.x_acc += x_increment(prev, state, grid, params);
        }
        self.y_run = self.y_run.max(y_integrand(state, grid, params));
        self.previous = Some(state.clone());
        let (mass_dev, momentum, total_energy) = conserved_quantities(state, grid, params);
        let fold = |xs: &[T], init: T, f: fn(T, T) -> T| xs.iter().fold(init, |m, &x| f(m, x));
        DiagnosticsRecord {
            t: state.t,
            mass_dev,
            momentum,
            total_energy,
            g: entropy_energy(state, grid, params),
            v_rate: dissipation_rate(state, grid, params),
            x_acc: self.x_acc,
            y_run: self.y_run,
            min_v: fold(&state.v, T::infinity(), T::min),
            max_v: fold(&state.v, T::neg_infinity(), T::max),
            min_theta: fold(&state.theta, T::infinity(), T::min),
            max_theta: fold(&state.theta, T::neg_infinity(), T::max),
            max_z: fold(&state.z, T::zero(), T::max),
            z_l1: state.z.iter().map(|&z| z.abs() * grid.dx).sum(),
            norms: norms(state, grid),
            boundary_deviation: boundary_deviation(state, grid),
            z_reacted: self.z_reacted,
            z_outflow: self.z_outflow,
        }
    }
}

/// Interval averages over `Omega_k = [-k-1, k+1]` and the cells closest to them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeWindow<T> {
    pub k: usize,
    /// Position where `v` is closest to its average.
    pub a_k: T,
    /// Position where `theta` is closest to its average.
    pub b_k: T,
    pub a_index: usize,
    pub b_index: usize,
    pub avg_v: T,
    pub avg_theta: T,
}

fn window<T: Real>(grid: &Grid<T>, k: usize, reach: usize) -> Result<std::ops::Range<usize>> {
    let edge = T::of_usize(k + reach);
    if edge > grid.half_width {
        return Err(SimError::WindowOutOfDomain(format!(
            "window k = {k} reaches {edge}, beyond L = {}",
            grid.half_width
        )));
    }
    let half = T::of_usize(k + 1);
    let cells = grid.cells_within(-half, half);
    if cells.is_empty() {
        return Err(SimError::WindowOutOfDomain(format!("no cells inside Omega_{k}")));
    }
    Ok(cells)
}

fn closest<T: Real>(values: &[T], cells: std::ops::Range<usize>, target: f64) -> usize {
    let mut best = cells.start;
    let mut dist = f64::INFINITY;
    for i in cells {
        let d = (values[i].as_f64() - target).abs();
        if d < dist {
            dist = d;
            best = i;
        }
    }
    best
}

pub fn interval_probe<T: Real>(state: &State<T>, grid: &Grid<T>, k: usize) -> Result<ProbeWindow<T>> {
    let cells = window(grid, k, 1)?;
    let count = T::of_usize(cells.len());
    let avg_v = state.v[cells.clone()].iter().copied().sum::<T>() / count;
    let avg_theta = state.theta[cells.clone()].iter().copied().sum::<T>() / count;
    let a_index = closest(&state.v, cells.clone(), avg_v.as_f64());
    let b_index = closest(&state.theta, cells, avg_theta.as_f64());
    Ok(ProbeWindow {
        k,
        a_k: grid.cell_centers[a_index],
        b_k: grid.cell_centers[b_index],
        a_index,
        b_index,
        avg_v,
        avg_theta,
    })
}

/// `sup_{Omega_k} |theta^m - theta^m(b_k)| / sqrt(V)` for `0 <= m <= (b + 4) / 2`.
pub fn oscillation_ratio<T: Real>(
    state: &State<T>,
    grid: &Grid<T>,
    params: &GasParameters<T>,
    m: T,
    k: usize,
) -> Result<T> {
    let upper = (params.b + T::lit(4.0)) / T::lit(2.0);
    if m < T::zero() || m > upper {
        return Err(SimError::Precondition(format!("m = {m} outside [0, {upper}]")));
    }
    let probe = interval_probe(state, grid, k)?;
    let cells = window(grid, k, 1)?;
    let reference = state.theta[probe.b_index].powf(m);
    let numerator = cells.fold(T::zero(), |acc, i| acc.max((state.theta[i].powf(m) - reference).abs()));
    if numerator == T::zero() {
        return Ok(T::zero());
    }
    let v = dissipation_rate(state, grid, params);
    Ok(numerator / v.sqrt().max(T::lit(1e-30)))
}

/// Reconstruction of `v` on `Omega_k` from the local representation formula.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationProbe<T> {
    pub k: usize,
    /// Cell indices of `Omega_k` the arrays refer to.
    pub cells: Vec<usize>,
    pub b: Vec<T>,
    pub q: T,
    pub v_reconstructed: Vec<T>,
    pub max_rel_error: T,
}

/// The cut-off: 1 up to `k + 1`, linear down to 0 at `k + 2`.
pub fn cutoff<T: Real>(k: usize, x: T) -> T {
    let a = T::of_usize(k + 1);
    if x <= a {
        T::one()
    } else if x <= a + T::one() {
        a + T::one() - x
    } else {
        T::zero()
    }
}

/// Evaluates `v(t) = B Q(t) + (1/mu) int_0^t B(t) Q(t) v p / (B(s) Q(s)) ds` on
/// `Omega_k` from sampled states (trapezoid in time) and compares with the
/// evolved `v`.
///
/// The quadratures are the summation-by-parts duals of the staggered
/// momentum update: node weights `dx` for `B`, cut-off increments across the
/// ramp cells for `Q`. With them the identity holds exactly for the
/// semi-discrete flow, so the residual measures time discretization only.
pub fn representation_check<T: Real>(
    history: &[State<T>],
    grid: &Grid<T>,
    params: &GasParameters<T>,
    k: usize,
    t: T,
) -> Result<RepresentationProbe<T>> {
    let cells = window(grid, k, 2)?;
    let first = history
        .first()
        .ok_or_else(|| SimError::InsufficientHistory("empty history".into()))?;
    if first.t != T::zero() {
        return Err(SimError::InsufficientHistory("history must start at t = 0".into()));
    }
    let eps = T::lit(1e-9) * t.abs().max(T::one());
    let used: Vec<&State<T>> = history.iter().filter(|s| s.t <= t + eps).collect();
    let last = used.last().expect("first sample is used");
    if (last.t - t).abs() > eps {
        return Err(SimError::InsufficientHistory(format!("no sample at t = {t}")));
    }
    let n = grid.n;
    let mu = params.mu;
    let phi: Vec<T> = grid.node_positions.iter().map(|&x| cutoff(k, x)).collect();

    // Cut-off weighted integral of the stress across the ramp.
    let ramp = |s: &State<T>| -> T {
        (0..n)
            .filter(|&j| phi[j] != phi[j + 1])
            .map(|j| {
                let strain = (s.u[j + 1] - s.u[j]) / grid.dx;
                let stress = mu * strain / s.v[j] - params.p(s.v[j], s.theta[j]);
                (phi[j] - phi[j + 1]) * stress
            })
            .sum()
    };
    let mut ln_q = vec![T::zero()];
    let mut prev = ramp(used[0]);
    for w in used.windows(2) {
        let cur = ramp(w[1]);
        let h = w[1].t - w[0].t;
        ln_q.push(*ln_q.last().unwrap() + T::lit(0.5) * h * (prev + cur) / mu);
        prev = cur;
    }

    let u0 = &first.u;
    let ln_b = |s: &State<T>, i: usize| -> T {
        let tail: T = (i + 1..=n).map(|j| phi[j] * (u0[j] - s.u[j]) * grid.dx).sum();
        first.v[i].ln() + tail / mu
    };

    let mut b_out = Vec::with_capacity(cells.len());
    let mut rec_out = Vec::with_capacity(cells.len());
    let mut max_rel = T::zero();
    let ln_q_t = *ln_q.last().unwrap();
    for i in cells.clone() {
        let ln_bq: Vec<T> = used.iter().zip(&ln_q).map(|(s, &lq)| ln_b(s, i) + lq).collect();
        let top = *ln_bq.last().unwrap();
        // Terms v p B(t)Q(t) / (B(s)Q(s)), scaled to avoid overflow.
        let terms: Vec<T> = used
            .iter()
            .zip(&ln_bq)
            .map(|(s, &lbq)| s.v[i] * params.p(s.v[i], s.theta[i]) * (top - lbq).exp())
            .collect();
        let mut integral = T::zero();
        for (w, f) in used.windows(2).zip(terms.windows(2)) {
            integral += T::lit(0.5) * (w[1].t - w[0].t) * (f[0] + f[1]);
        }
        let rec = top.exp() + integral / mu;
        let actual = last.v[i];
        max_rel = max_rel.max(((rec - actual) / actual).abs());
        b_out.push(ln_b(last, i).exp());
        rec_out.push(rec);
    }
    Ok(RepresentationProbe {
        k,
        cells: cells.collect(),
        b: b_out,
        q: ln_q_t.exp(),
        v_reconstructed: rec_out,
        max_rel_error: max_rel,
    })
}

/// `inf_{s < t, x} theta(t, x) (1 + (t - s) m_s) / m_s` with `m_s = min_x theta(s, .)`.
pub fn temperature_envelope_check<T: Real>(history: &[State<T>]) -> Result<T> {
    if history.len() < 2 {
        return Err(SimError::InsufficientHistory(format!(
            "envelope needs at least 2 samples, got {}",
            history.len()
        )));
    }
    let minima: Vec<(T, T)> = history
        .iter()
        .map(|s| (s.t, s.theta.iter().fold(T::infinity(), |m, &x| m.min(x))))
        .collect();
    let mut inf = T::infinity();
    for (later, &(t, m_t)) in minima.iter().enumerate() {
        for &(s, m_s) in &minima[..later] {
            inf = inf.min(m_t * (T::one() + (t - s) * m_s) / m_s);
        }
    }
    Ok(inf)
}

/// `max(values) / max(values over t <= T/2) - 1` for a time series on `[0, T]`.
pub fn second_half_growth<T: Real>(times: &[T], values: &[T]) -> T {
    let end = times.last().copied().unwrap_or(T::zero());
    let mid = end * T::lit(0.5);
    let first = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t <= mid)
        .fold(T::neg_infinity(), |m, (_, &v)| m.max(v));
    let all = values.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
    if first <= T::zero() {
        return if all <= T::zero() { T::zero() } else { T::infinity() };
    }
    all / first - T::one()
}

/// Extrema of `v` and `theta` over records with `t0 <= t <= t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowExtrema<T> {
    pub min_v: T,
    pub max_v: T,
    pub min_theta: T,
    pub max_theta: T,
}

pub fn window_extrema<T: Real>(records: &[DiagnosticsRecord<T>], t0: T, t1: T) -> WindowExtrema<T> {
    let eps = T::lit(1e-12);
    let mut w = WindowExtrema {
        min_v: T::infinity(),
        max_v: T::neg_infinity(),
        min_theta: T::infinity(),
        max_theta: T::neg_infinity(),
    };
    for r in records.iter().filter(|r| r.t >= t0 - eps && r.t <= t1 + eps) {
        w.min_v = w.min_v.min(r.min_v);
        w.max_v = w.max_v.max(r.max_v);
        w.min_theta = w.min_theta.min(r.min_theta);
        w.max_theta = w.max_theta.max(r.max_theta);
    }
    w
}
