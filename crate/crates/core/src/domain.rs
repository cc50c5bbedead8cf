//! Truncated Lagrangian domain, staggered mesh, discrete state and the
//! initial-data families, together with the parameter and data validators.

use crate::constitutive::GasParameters;
use crate::error::{Result, SimError};
use crate::scalar::Real;

/// How the truncated domain `[-L, L]` stands in for the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Dirichlet far-field values: `u = 0` on the end nodes, ghost cells at
    /// `(v, theta, z) = (1, 1, 0)`.
    #[default]
    FarField,
    /// The domain wraps around; node `N` is node `0`.
    Periodic,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::FarField => "far_field",
            Boundary::Periodic => "periodic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "far_field" => Ok(Boundary::FarField),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(SimError::Config(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Uniform staggered mesh: `v, theta, z` on `N` cells, `u` on `N + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub half_width: T,
    pub n: usize,
    pub dx: T,
    pub cell_centers: Vec<T>,
    pub node_positions: Vec<T>,
    pub boundary: Boundary,
}

impl<T: Real> Grid<T> {
    /// Cell index to the right of a node; `None` past the right end (far field).
    #[inline]
    pub fn right_cell(&self, i: usize) -> Option<usize> {
        if i + 1 < self.n {
            Some(i + 1)
        } else if self.boundary == Boundary::Periodic {
            Some(0)
        } else {
            None
        }
    }

    /// Lumped node masses: `dx` inside, `dx/2` on the two end nodes.
    pub fn node_masses(&self) -> Vec<T> {
        let mut m = vec![self.dx; self.n + 1];
        m[0] = self.dx / T::lit(2.0);
        m[self.n] = self.dx / T::lit(2.0);
        m
    }

    /// Number of cells making up the outermost 5% at each end.
    pub fn edge_cells(&self) -> usize {
        ((self.n as f64) * 0.05).ceil().max(1.0) as usize
    }

    /// Cells whose both nodes lie in `[lo, hi]`.
    pub fn cells_within(&self, lo: T, hi: T) -> std::ops::Range<usize> {
        let eps = self.dx * T::lit(1e-9);
        let start = self
            .node_positions
            .iter()
            .position(|&x| x >= lo - eps)
            .unwrap_or(self.n);
        let end = self.node_positions.iter().rposition(|&x| x <= hi + eps).unwrap_or(0);
        if end > start {
            start..end
        } else {
            start..start
        }
    }
}

pub fn build_grid<T: Real>(half_width: T, n: usize) -> Result<Grid<T>> {
    build_grid_with(half_width, n, Boundary::FarField)
}

pub fn build_grid_with<T: Real>(half_width: T, n: usize, boundary: Boundary) -> Result<Grid<T>> {
    if !(half_width > T::zero()) || !half_width.is_finite() {
        return Err(SimError::Config(format!("L must be positive, got {half_width}")));
    }
    if n < 8 || !n.is_multiple_of(2) {
        return Err(SimError::Config(format!("N must be even and at least 8, got {n}")));
    }
    let dx = T::lit(2.0) * half_width / T::of_usize(n);
    let node_positions: Vec<T> = (0..=n)
        .map(|j| -half_width + T::lit(2.0) * half_width * T::of_usize(j) / T::of_usize(n))
        .collect();
    let cell_centers = node_positions.windows(2).map(|w| (w[0] + w[1]) / T::lit(2.0)).collect();
    Ok(Grid {
        half_width,
        n,
        dx,
        cell_centers,
        node_positions,
        boundary,
    })
}

/// Discrete state: cell fields `v, theta, z` and node velocity `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub t: T,
    pub v: Vec<T>,
    pub theta: Vec<T>,
    pub z: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Real> State<T> {
    /// The non-vacuum equilibrium `(1, 0, 1, 0)`.
    pub fn equilibrium(n: usize) -> Self {
        Self {
            t: T::zero(),
            v: vec![T::one(); n],
            theta: vec![T::one(); n],
            z: vec![T::zero(); n],
            u: vec![T::zero(); n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// Shape, positivity, species range and boundary-node consistency.
    pub fn check_invariants(&self, grid: &Grid<T>) -> Result<()> {
        let n = grid.n;
        if self.v.len() != n || self.theta.len() != n || self.z.len() != n || self.u.len() != n + 1 {
            return Err(SimError::Precondition("state shape does not match grid".into()));
        }
        if let Some(i) = self.v.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(SimError::Positivity(format!("v[{i}] = {}", self.v[i])));
        }
        if let Some(i) = self.theta.iter().position(|&t| !(t > T::zero()) || !t.is_finite()) {
            return Err(SimError::Positivity(format!("theta[{i}] = {}", self.theta[i])));
        }
        if let Some(i) = self.z.iter().position(|&z| !(z >= T::zero() && z <= T::one())) {
            return Err(SimError::Positivity(format!("z[{i}] = {} outside [0, 1]", self.z[i])));
        }
        if self.u.iter().any(|u| !u.is_finite()) {
            return Err(SimError::Positivity("non-finite velocity".into()));
        }
        match grid.boundary {
            Boundary::FarField if self.u[0] != T::zero() || self.u[n] != T::zero() => {
                Err(SimError::Precondition("far-field boundary velocity must vanish".into()))
            }
            Boundary::Periodic if self.u[0] != self.u[n] => {
                Err(SimError::Precondition("periodic end nodes disagree".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Shape of the initial perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialFamily {
    Equilibrium,
    Gaussian,
    CompactBump,
}

impl InitialFamily {
    pub fn name(self) -> &'static str {
        match self {
            InitialFamily::Equilibrium => "equilibrium",
            InitialFamily::Gaussian => "gaussian",
            InitialFamily::CompactBump => "compact_bump",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "equilibrium" => Ok(InitialFamily::Equilibrium),
            "gaussian" => Ok(InitialFamily::Gaussian),
            "compact_bump" => Ok(InitialFamily::CompactBump),
            other => Err(SimError::Config(format!("unknown family `{other}`"))),
        }
    }
}

/// Everything needed to set up and integrate one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec<T> {
    pub family: InitialFamily,
    pub amplitude_v: T,
    pub amplitude_u: T,
    pub amplitude_theta: T,
    pub amplitude_z: T,
    pub width: T,
    pub params: GasParameters<T>,
    pub half_width: T,
    pub n: usize,
    pub t_end: T,
    pub cfl: T,
    pub picard_tol: T,
    pub picard_max_iters: usize,
    pub floor_v: T,
    pub floor_theta: T,
    pub boundary: Boundary,
    pub dt_min: T,
    pub dt_max: T,
    pub max_step_rejections: usize,
}

impl<T: Real> ScenarioSpec<T> {
    /// Unperturbed equilibrium on `[-L, L]` with canonical numerics.
    pub fn equilibrium(half_width: T, n: usize, t_end: T) -> Self {
        Self {
            family: InitialFamily::Equilibrium,
            amplitude_v: T::zero(),
            amplitude_u: T::zero(),
            amplitude_theta: T::zero(),
            amplitude_z: T::zero(),
            width: T::one(),
            params: GasParameters::default(),
            half_width,
            n,
            t_end,
            cfl: T::lit(0.5),
            picard_tol: T::lit(1e-10),
            picard_max_iters: 50,
            floor_v: T::lit(1e-6),
            floor_theta: T::lit(1e-6),
            boundary: Boundary::FarField,
            dt_min: T::lit(1e-12),
            dt_max: T::one(),
            max_step_rejections: 24,
        }
    }

    /// The reference scenario: Gaussian data `(0.1, 0.1, 0.2, 0.5)`, width 1,
    /// `L = 20`, `N = 512`, `T = 20`, periodic truncation.
    pub fn canonical() -> Self {
        Self {
            family: InitialFamily::Gaussian,
            amplitude_v: T::lit(0.1),
            amplitude_u: T::lit(0.1),
            amplitude_theta: T::lit(0.2),
            amplitude_z: T::lit(0.5),
            boundary: Boundary::Periodic,
            ..Self::equilibrium(T::lit(20.0), 512, T::lit(20.0))
        }
    }

    pub fn grid(&self) -> Result<Grid<T>> {
        build_grid_with(self.half_width, self.n, self.boundary)
    }

    pub fn check(&self) -> Result<()> {
        self.params.check()?;
        if !(self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(SimError::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return Err(SimError::Config(format!(
                "T_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        for (name, value) in [
            ("width", self.width),
            ("picard_tol", self.picard_tol),
            ("floor_v", self.floor_v),
            ("floor_theta", self.floor_theta),
            ("dt_min", self.dt_min),
            ("dt_max", self.dt_max),
        ] {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(SimError::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if self.dt_min > self.dt_max {
            return Err(SimError::Config("dt_min exceeds dt_max".into()));
        }
        if self.picard_max_iters == 0 {
            return Err(SimError::Config("picard_max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Bump of unit height supported on `|x| < radius`.
fn smooth_bump<T: Real>(x: T, radius: T) -> T {
    let s = x / radius;
    let s2 = s * s;
    if s2 >= T::one() {
        T::zero()
    } else {
        (T::one() - T::one() / (T::one() - s2)).exp()
    }
}

/// Initial data of the requested family sampled on the mesh.
pub fn make_initial_data<T: Real>(spec: &ScenarioSpec<T>, grid: &Grid<T>) -> Result<State<T>> {
    let n = grid.n;
    let mut state = State::equilibrium(n);
    let profile: Box<dyn Fn(T) -> T> = match spec.family {
        InitialFamily::Equilibrium => return Ok(state),
        InitialFamily::Gaussian => {
            if !(spec.width > T::zero()) {
                return Err(SimError::Config("width must be positive".into()));
            }
            let w = spec.width;
            Box::new(move |x: T| (-(x * x) / (w * w)).exp())
        }
        InitialFamily::CompactBump => {
            let r = grid.half_width / T::lit(2.0);
            Box::new(move |x: T| smooth_bump(x, r))
        }
    };
    // Both profiles peak at 1 and are nonnegative, so these bounds are sharp.
    if spec.amplitude_v <= -T::one() {
        return Err(SimError::Config(format!(
            "amplitude_v = {} makes v nonpositive",
            spec.amplitude_v
        )));
    }
    if spec.amplitude_theta <= -T::one() {
        return Err(SimError::Config(format!(
            "amplitude_theta = {} makes theta nonpositive",
            spec.amplitude_theta
        )));
    }
    if spec.amplitude_z < T::zero() || spec.amplitude_z > T::one() {
        return Err(SimError::Config(format!(
            "amplitude_z = {} leaves [0, 1]",
            spec.amplitude_z
        )));
    }
    for (i, &x) in grid.cell_centers.iter().enumerate() {
        let g = profile(x);
        state.v[i] = T::one() + spec.amplitude_v * g;
        state.theta[i] = T::one() + spec.amplitude_theta * g;
        state.z[i] = spec.amplitude_z * g;
    }
    for (j, &x) in grid.node_positions.iter().enumerate() {
        state.u[j] = spec.amplitude_u * profile(x);
    }
    match grid.boundary {
        Boundary::FarField => {
            state.u[0] = T::zero();
            state.u[n] = T::zero();
        }
        Boundary::Periodic => state.u[n] = state.u[0],
    }
    Ok(state)
}

/// Outcome of checking `b > 12/7, 0 <= beta < b + 9`, with the older
/// parameter regions for context.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterReport {
    pub b: f64,
    pub beta: f64,
    pub b_condition: bool,
    pub beta_condition: bool,
    pub admissible: bool,
    /// `b >= 11/3, 0 <= beta <= b + 9`: the range of the earlier Cauchy result.
    pub prior_cauchy_region: bool,
    /// `9/4 < b < 3, 0 <= beta < 2b + 6`.
    pub region_e1: bool,
    /// `b >= 3, 0 <= beta < b + 9`.
    pub region_e2: bool,
    pub physical_radiation_case: bool,
}

impl ParameterReport {
    pub fn summary(&self) -> String {
        format!(
            "b = {}, beta = {}: {} (b > 12/7: {}, 0 <= beta < b + 9: {}; prior Cauchy region: {}, E1: {}, E2: {}{})",
            self.b,
            self.beta,
            if self.admissible { "admissible" } else { "inadmissible" },
            self.b_condition,
            self.beta_condition,
            self.prior_cauchy_region,
            self.region_e1,
            self.region_e2,
            if self.physical_radiation_case {
                ", physical case b = 3"
            } else {
                ""
            },
        )
    }
}

pub fn validate_parameters<T: Real>(params: &GasParameters<T>) -> ParameterReport {
    let b = params.b.as_f64();
    let beta = params.beta.as_f64();
    let b_condition = b > 12.0 / 7.0;
    let beta_condition = (0.0..b + 9.0).contains(&beta);
    ParameterReport {
        b,
        beta,
        b_condition,
        beta_condition,
        admissible: b_condition && beta_condition,
        prior_cauchy_region: b >= 11.0 / 3.0 && beta >= 0.0 && beta <= b + 9.0,
        region_e1: b > 9.0 / 4.0 && b < 3.0 && beta >= 0.0 && beta < 2.0 * b + 6.0,
        region_e2: b >= 3.0 && beta >= 0.0 && beta < b + 9.0,
        physical_radiation_case: b == 3.0,
    }
}

/// Result of the initial-data checks.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDataReport {
    pub min_v: f64,
    pub min_theta: f64,
    pub min_z: f64,
    pub max_z: f64,
    pub far_field_deviation: f64,
    /// Discrete `H^1` norm of `(v - 1, u, theta - 1, z)`.
    pub h1_norm: f64,
    /// Discrete `L^1` norm of `z`.
    pub z_l1: f64,
    /// Discrete `L^1` norm of the whole perturbation.
    pub l1_norm: f64,
}

impl InitialDataReport {
    pub const FAR_FIELD_TOL: f64 = 1e-8;

    pub fn positive(&self) -> bool {
        self.min_v > 0.0 && self.min_theta > 0.0
    }

    pub fn z_in_range(&self) -> bool {
        self.min_z >= 0.0 && self.max_z <= 1.0
    }

    pub fn far_field_ok(&self) -> bool {
        self.far_field_deviation < Self::FAR_FIELD_TOL
    }

    pub fn finite(&self) -> bool {
        self.h1_norm.is_finite() && self.l1_norm.is_finite()
    }

    pub fn passed(&self) -> bool {
        self.positive() && self.z_in_range() && self.far_field_ok() && self.finite()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.positive() {
            out.push("positivity of v0 and theta0");
        }
        if !self.z_in_range() {
            out.push("0 <= z0 <= 1");
        }
        if !self.far_field_ok() {
            out.push("far-field decay");
        }
        if !self.finite() {
            out.push("finite H1/L1 norms");
        }
        out
    }
}

/// Largest deviation from `(1, 0, 1, 0)` over the outermost 5% of cells.
pub fn boundary_deviation<T: Real>(state: &State<T>, grid: &Grid<T>) -> T {
    let n = grid.n;
    let k = grid.edge_cells().min(n);
    let mut dev = T::zero();
    let cells = (0..k).chain(n - k..n);
    for i in cells {
        dev = dev
            .max((state.v[i] - T::one()).abs())
            .max((state.theta[i] - T::one()).abs())
            .max(state.z[i].abs());
    }
    for j in (0..=k).chain(n - k..=n) {
        dev = dev.max(state.u[j].abs());
    }
    dev
}

pub fn validate_initial_data<T: Real>(state: &State<T>, grid: &Grid<T>) -> Result<InitialDataReport> {
    let n = grid.n;
    if state.v.len() != n || state.theta.len() != n || state.z.len() != n || state.u.len() != n + 1 {
        return Err(SimError::Precondition("state shape does not match grid".into()));
    }
    let fold_min = |xs: &[T]| xs.iter().fold(f64::INFINITY, |m, x| m.min(x.as_f64()));
    let fold_max = |xs: &[T]| xs.iter().fold(f64::NEG_INFINITY, |m, x| m.max(x.as_f64()));
    let dx = grid.dx.as_f64();
    let masses = grid.node_masses();
    let mut l2 = 0.0;
    let mut l1 = 0.0;
    let mut z_l1 = 0.0;
    for i in 0..n {
        let dv = state.v[i].as_f64() - 1.0;
        let dt = state.theta[i].as_f64() - 1.0;
        let z = state.z[i].as_f64();
        l2 += (dv * dv + dt * dt + z * z) * dx;
        l1 += (dv.abs() + dt.abs() + z.abs()) * dx;
        z_l1 += z.abs() * dx;
    }
    for (u, m) in state.u.iter().zip(&masses) {
        l2 += u.as_f64().powi(2) * m.as_f64();
        l1 += u.as_f64().abs() * m.as_f64();
    }
    let grad2 = crate::functionals::gradient_sq_sum(state, grid).as_f64();
    Ok(InitialDataReport {
        min_v: fold_min(&state.v),
        min_theta: fold_min(&state.theta),
        min_z: fold_min(&state.z),
        max_z: fold_max(&state.z),
        far_field_deviation: boundary_deviation(state, grid).as_f64(),
        h1_norm: (l2 + grad2).sqrt(),
        z_l1,
        l1_norm: l1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let g = build_grid(1.0f64, 8).unwrap();
        assert_eq!(g.dx, 0.25);
        assert_eq!(g.node_positions.len(), 9);
        assert_eq!(g.node_positions[0], -1.0);
        assert_eq!(g.node_positions[8], 1.0);
        let g = build_grid(50.0f64, 1000).unwrap();
        assert!((g.dx - 0.1).abs() < 1e-15);
        assert!(build_grid(1.0f64, 7).is_err());
        assert!(build_grid(1.0f64, 6).is_err());
        assert!(build_grid(0.0f64, 8).is_err());
    }

    #[test]
    fn grid_geometry() {
        let g = build_grid(20.0f64, 512).unwrap();
        for w in g.node_positions.windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] - w[0] - g.dx).abs() < 1e-12);
        }
        for (i, c) in g.cell_centers.iter().enumerate() {
            assert!((c - 0.5 * (g.node_positions[i] + g.node_positions[i + 1])).abs() < 1e-14);
        }
        let total: f64 = (0..g.n).map(|_| g.dx).sum();
        assert!((total - 40.0).abs() <= 1e-12 * 40.0);
        let masses: f64 = g.node_masses().iter().sum();
        assert!((masses - 40.0).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_family() {
        let spec = ScenarioSpec::<f64>::equilibrium(5.0, 64, 1.0);
        let g = spec.grid().unwrap();
        let s = make_initial_data(&spec, &g).unwrap();
        assert!(s.v.iter().all(|&v| v == 1.0));
        assert!(s.theta.iter().all(|&t| t == 1.0));
        assert!(s.z.iter().all(|&z| z == 0.0));
        assert!(s.u.iter().all(|&u| u == 0.0));
        let r = validate_initial_data(&s, &g).unwrap();
        assert!(r.passed());
        assert_eq!(r.h1_norm, 0.0);
        assert_eq!(r.l1_norm, 0.0);
        assert_eq!(r.far_field_deviation, 0.0);
    }

    #[test]
    fn gaussian_family() {
        let mut spec = ScenarioSpec::<f64>::equilibrium(20.0, 800, 1.0);
        spec.family = InitialFamily::Gaussian;
        spec.amplitude_z = 0.5;
        let g = spec.grid().unwrap();
        let s = make_initial_data(&spec, &g).unwrap();
        let z_at = |x: f64| spec.amplitude_z * (-(x * x)).exp();
        assert!((z_at(0.0) - 0.5).abs() < 1e-15);
        assert!(s.z[0] < 1e-10 && s.z[799] < 1e-10);
        let mid = g.cell_centers.iter().position(|&x| x.abs() < g.dx).unwrap();
        assert!((s.z[mid] - z_at(g.cell_centers[mid])).abs() < 1e-15);
        let r = validate_initial_data(&s, &g).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        let exact = 0.5 * std::f64::consts::PI.sqrt();
        assert!((r.z_l1 - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn nonpositive_amplitudes_rejected() {
        let mut spec = ScenarioSpec::<f64>::equilibrium(10.0, 64, 1.0);
        spec.family = InitialFamily::Gaussian;
        spec.amplitude_theta = -1.5;
        let g = spec.grid().unwrap();
        assert!(make_initial_data(&spec, &g).is_err());
        spec.amplitude_theta = 0.0;
        spec.amplitude_v = -1.0;
        assert!(make_initial_data(&spec, &g).is_err());
        spec.amplitude_v = 0.0;
        spec.amplitude_z = 1.2;
        assert!(make_initial_data(&spec, &g).is_err());
    }

    #[test]
    fn compact_bump_vanishes_outside_half_domain() {
        let mut spec = ScenarioSpec::<f64>::equilibrium(10.0, 200, 1.0);
        spec.family = InitialFamily::CompactBump;
        spec.amplitude_theta = 0.3;
        spec.amplitude_u = 0.2;
        let g = spec.grid().unwrap();
        let s = make_initial_data(&spec, &g).unwrap();
        for (i, &x) in g.cell_centers.iter().enumerate() {
            if x.abs() >= 5.0 {
                assert_eq!(s.theta[i], 1.0);
            }
        }
        assert!((s.theta[100] - 1.3).abs() < 0.01);
        assert!(validate_initial_data(&s, &g).unwrap().passed());
    }

    #[test]
    fn negative_cell_fails_positivity() {
        let g = build_grid(5.0f64, 16).unwrap();
        let mut s = State::equilibrium(16);
        s.v[7] = -0.1;
        let r = validate_initial_data(&s, &g).unwrap();
        assert!(!r.positive());
        assert!(!r.passed());
        assert!(s.check_invariants(&g).is_err());
    }

    #[test]
    fn parameter_examples() {
        let p = GasParameters::<f64>::default();
        let r = validate_parameters(&p);
        assert!(r.admissible && r.region_e2 && r.physical_radiation_case && !r.prior_cauchy_region);
        let r = validate_parameters(&GasParameters {
            b: 12.0 / 7.0,
            beta: 0.0,
            ..p
        });
        assert!(!r.admissible && !r.b_condition);
        let r = validate_parameters(&GasParameters {
            b: 2.0,
            beta: 11.0,
            ..p
        });
        assert!(!r.admissible && r.b_condition && !r.beta_condition);
        let r = validate_parameters(&GasParameters { b: 4.0, beta: 1.0, ..p });
        assert!(r.admissible && r.prior_cauchy_region);
        assert!(r.summary().contains("admissible"));
    }

    #[test]
    fn far_field_tails_below_tolerance() {
        for family in [InitialFamily::Gaussian, InitialFamily::CompactBump] {
            let mut spec = ScenarioSpec::<f64>::canonical();
            spec.family = family;
            let g = spec.grid().unwrap();
            let s = make_initial_data(&spec, &g).unwrap();
            assert!(boundary_deviation(&s, &g) < 1e-8);
        }
    }
}
