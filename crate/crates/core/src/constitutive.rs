//! Constitutive laws of the radiative reactive gas: equation of state,
//! Arrhenius rate, heat conductivity and the derived entropy and
//! conduction potentials.
//!
//! The `GasParameters` methods are unchecked and meant for inner loops; the
//! free functions validate the open quadrant `v > 0, theta > 0` first.

use crate::error::{Result, SimError};
use crate::scalar::Real;

/// Physical constants of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParameters<T> {
    /// Perfect gas constant `R`.
    pub r: T,
    /// Specific heat `C_v`.
    pub cv: T,
    /// Radiation constant `a`.
    pub a: T,
    /// Bulk viscosity `mu`.
    pub mu: T,
    pub kappa1: T,
    pub kappa2: T,
    /// Conductivity exponent `b`.
    pub b: T,
    /// Species diffusion coefficient.
    pub d: T,
    /// Reaction heat release.
    pub lambda: T,
    /// Rate coefficient `K`.
    pub k_react: T,
    /// Activation energy `A`.
    pub activation: T,
    /// Rate exponent `beta`.
    pub beta: T,
}

impl<T: Real> Default for GasParameters<T> {
    /// All constants one, `b = 3`, `beta = 2`.
    fn default() -> Self {
        let one = T::one();
        Self {
            r: one,
            cv: one,
            a: one,
            mu: one,
            kappa1: one,
            kappa2: one,
            b: T::lit(3.0),
            d: one,
            lambda: one,
            k_react: one,
            activation: one,
            beta: T::lit(2.0),
        }
    }
}

/// Analytic partial derivatives of pressure and internal energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials<T> {
    pub p_v: T,
    pub p_theta: T,
    pub e_v: T,
    pub e_theta: T,
}

#[inline]
fn pow<T: Real>(x: T, y: T) -> T {
    (y * x.ln()).exp()
}

impl<T: Real> GasParameters<T> {
    /// The named fields paired with their configuration keys.
    pub fn fields(&self) -> [(&'static str, T); 12] {
        [
            ("R", self.r),
            ("Cv", self.cv),
            ("a", self.a),
            ("mu", self.mu),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("b", self.b),
            ("d", self.d),
            ("lambda", self.lambda),
            ("K_react", self.k_react),
            ("A", self.activation),
            ("beta", self.beta),
        ]
    }

    /// Checks finiteness and signs: every constant positive except `b, beta >= 0`.
    pub fn check(&self) -> Result<()> {
        for (name, value) in self.fields() {
            if !value.is_finite() {
                return Err(SimError::Config(format!("parameter {name} is not finite")));
            }
            let nonneg = name == "b" || name == "beta";
            if (nonneg && value < T::zero()) || (!nonneg && value <= T::zero()) {
                return Err(SimError::Config(format!("parameter {name} = {value} out of range")));
            }
        }
        Ok(())
    }

    /// `b > 12/7` and `0 <= beta < b + 9`.
    pub fn admissible(&self) -> bool {
        self.b > T::lit(12.0) / T::lit(7.0) && self.beta >= T::zero() && self.beta < self.b + T::lit(9.0)
    }

    #[inline]
    pub fn p(&self, v: T, theta: T) -> T {
        let t2 = theta * theta;
        self.r * theta / v + self.a * t2 * t2 / T::lit(3.0)
    }

    #[inline]
    pub fn e(&self, v: T, theta: T) -> T {
        let t2 = theta * theta;
        self.cv * theta + self.a * v * t2 * t2
    }

    #[inline]
    pub fn phi(&self, theta: T) -> T {
        // exp(-A/theta) underflows to 0 for tiny theta, which is the physical limit.
        let decay = (-self.activation / theta).exp();
        if decay == T::zero() {
            return T::zero();
        }
        self.k_react * pow(theta, self.beta) * decay
    }

    #[inline]
    pub fn kappa(&self, v: T, theta: T) -> T {
        self.kappa1 + self.kappa2 * v * pow(theta, self.b)
    }

    #[inline]
    pub fn partials(&self, v: T, theta: T) -> Partials<T> {
        let t3 = theta * theta * theta;
        let four = T::lit(4.0);
        Partials {
            p_v: -self.r * theta / (v * v),
            p_theta: self.r / v + four / T::lit(3.0) * self.a * t3,
            e_v: self.a * t3 * theta,
            e_theta: self.cv + four * self.a * v * t3,
        }
    }

    /// `theta * p_theta`, the coefficient of `u_x` in the temperature equation.
    #[inline]
    pub fn theta_p_theta(&self, v: T, theta: T) -> T {
        let t2 = theta * theta;
        self.r * theta / v + T::lit(4.0) / T::lit(3.0) * self.a * t2 * t2
    }

    #[inline]
    pub fn eta(&self, v: T, theta: T) -> T {
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let dt = theta - one;
        self.cv * (theta - theta.ln() - one)
            + self.r * (v - v.ln() - one)
            + self.a * v * dt * dt * (three * theta * theta + two * theta + one) / three
    }

    #[inline]
    pub fn conduction_potential(&self, v: T, theta: T) -> T {
        let bp1 = self.b + T::one();
        self.kappa1 * theta / v + self.kappa2 * pow(theta, bp1) / bp1
    }
}

fn check_quadrant<T: Real>(v: T, theta: T) -> Result<()> {
    if !(v > T::zero()) || !v.is_finite() {
        return Err(SimError::Domain(format!("specific volume must be positive, got {v}")));
    }
    check_theta(theta)
}

fn check_theta<T: Real>(theta: T) -> Result<()> {
    if !(theta > T::zero()) || !theta.is_finite() {
        return Err(SimError::Domain(format!("temperature must be positive, got {theta}")));
    }
    Ok(())
}

pub fn pressure<T: Real>(params: &GasParameters<T>, v: T, theta: T) -> Result<T> {
    check_quadrant(v, theta)?;
    Ok(params.p(v, theta))
}

pub fn internal_energy<T: Real>(params: &GasParameters<T>, v: T, theta: T) -> Result<T> {
    check_quadrant(v, theta)?;
    Ok(params.e(v, theta))
}

pub fn reaction_rate<T: Real>(params: &GasParameters<T>, theta: T) -> Result<T> {
    check_theta(theta)?;
    Ok(params.phi(theta))
}

pub fn conductivity<T: Real>(params: &GasParameters<T>, v: T, theta: T) -> Result<T> {
    check_quadrant(v, theta)?;
    Ok(params.kappa(v, theta))
}

pub fn constitutive_partials<T: Real>(params: &GasParameters<T>, v: T, theta: T) -> Result<Partials<T>> {
    check_quadrant(v, theta)?;
    Ok(params.partials(v, theta))
}

/// Relative entropy `eta(v, theta)`; nonnegative and zero only at `(1, 1)`.
pub fn entropy_eta<T: Real>(params: &GasParameters<T>, v: T, theta: T) -> Result<T> {
    check_quadrant(v, theta)?;
    Ok(params.eta(v, theta))
}

/// `K(v, theta)`, the antiderivative in `theta` of `kappa(v, .) / v` vanishing at zero.
pub fn conduction_potential<T: Real>(params: &GasParameters<T>, v: T, theta: T) -> Result<T> {
    check_quadrant(v, theta)?;
    Ok(params.conduction_potential(v, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> GasParameters<f64> {
        GasParameters::default()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn pressure_examples() {
        let p = unit();
        assert!(close(pressure(&p, 1.0, 1.0).unwrap(), 4.0 / 3.0, 1e-15));
        assert!(close(pressure(&p, 2.0, 1.0).unwrap(), 5.0 / 6.0, 1e-15));
        let p3 = GasParameters { a: 3.0, ..unit() };
        assert!(close(pressure(&p3, 1.0, 2.0).unwrap(), 18.0, 1e-15));
    }

    #[test]
    fn internal_energy_examples() {
        let p = unit();
        assert_eq!(internal_energy(&p, 1.0, 1.0).unwrap(), 2.0);
        let p2 = GasParameters { cv: 2.0, ..unit() };
        assert_eq!(internal_energy(&p2, 1.0, 1.0).unwrap(), 3.0);
        assert_eq!(internal_energy(&p, 3.0, 2.0).unwrap(), 50.0);
    }

    #[test]
    fn reaction_rate_examples() {
        let p = GasParameters { beta: 0.0, ..unit() };
        assert!(close(reaction_rate(&p, 1.0).unwrap(), 0.367879441171442, 1e-12));
        let p = GasParameters {
            activation: 2.0,
            beta: 1.0,
            ..unit()
        };
        assert!(close(reaction_rate(&p, 2.0).unwrap(), 0.735758882342885, 1e-12));
        let p = GasParameters {
            k_react: 5.0,
            activation: 10.0,
            beta: 0.0,
            ..unit()
        };
        assert_eq!(reaction_rate(&p, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn conductivity_examples() {
        let p = unit();
        assert!(close(conductivity(&p, 1.0, 1.0).unwrap(), 2.0, 1e-15));
        let p2 = GasParameters { kappa2: 2.0, ..unit() };
        assert!(close(conductivity(&p2, 1.0, 2.0).unwrap(), 17.0, 1e-14));
        let p3 = GasParameters {
            kappa1: 0.5,
            b: 0.0,
            ..unit()
        };
        assert!(close(conductivity(&p3, 7.0, 9.0).unwrap(), 7.5, 1e-15));
    }

    #[test]
    fn partials_examples() {
        let p = unit();
        let d = constitutive_partials(&p, 1.0, 1.0).unwrap();
        assert!(close(d.p_v, -1.0, 1e-15));
        assert!(close(d.p_theta, 1.0 + 4.0 / 3.0, 1e-15));
        assert!(close(d.e_v, 1.0, 1e-15));
        assert!(close(d.e_theta, 5.0, 1e-15));
        let d = constitutive_partials(&p, 2.0, 1.0).unwrap();
        assert!(close(d.p_v, -0.25, 1e-15));
        assert!(close(d.p_theta, 0.5 + 4.0 / 3.0, 1e-15));
        assert!(close(d.e_v, 1.0, 1e-15));
        assert!(close(d.e_theta, 9.0, 1e-15));
    }

    #[test]
    fn partials_match_central_differences() {
        let p = unit();
        let h = 1e-6;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let v: f64 = rng.gen_range(0.1..10.0);
            let th: f64 = rng.gen_range(0.1..10.0);
            let d = p.partials(v, th);
            let p_v = (p.p(v + h, th) - p.p(v - h, th)) / (2.0 * h);
            let p_t = (p.p(v, th + h) - p.p(v, th - h)) / (2.0 * h);
            let e_v = (p.e(v + h, th) - p.e(v - h, th)) / (2.0 * h);
            let e_t = (p.e(v, th + h) - p.e(v, th - h)) / (2.0 * h);
            for (fd, exact) in [(p_v, d.p_v), (p_t, d.p_theta), (e_v, d.e_v), (e_t, d.e_theta)] {
                assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1e-3), "{fd} vs {exact}");
            }
            assert!(d.e_theta > 0.0);
            assert!(close(p.theta_p_theta(v, th), th * d.p_theta, 1e-13));
            // e_v + p = theta p_theta
            assert!(close(d.e_v + p.p(v, th), th * d.p_theta, 1e-13));
        }
    }

    #[test]
    fn eta_examples() {
        let p = unit();
        assert_eq!(entropy_eta(&p, 1.0, 1.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        let p7 = GasParameters { a: 7.0, ..unit() };
        assert!(close(entropy_eta(&p7, e, 1.0).unwrap(), e - 2.0, 1e-14));
        let p3 = GasParameters { a: 3.0, ..unit() };
        let expected = 1.0 - 2f64.ln() + 17.0;
        assert!(close(entropy_eta(&p3, 1.0, 2.0).unwrap(), expected, 1e-14));
        assert!((expected - 17.3069).abs() < 1e-4);
    }

    #[test]
    fn eta_nonnegative_on_samples() {
        let p = unit();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let v: f64 = rng.gen_range(0.1..10.0);
            let th: f64 = rng.gen_range(0.1..10.0);
            let eta = p.eta(v, th);
            assert!(eta >= 0.0);
            if (v - 1.0).abs() > 1e-3 || (th - 1.0).abs() > 1e-3 {
                assert!(eta > 0.0);
            }
        }
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut s = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn conduction_potential_examples() {
        let p = unit();
        assert!(close(conduction_potential(&p, 1.0, 1.0).unwrap(), 1.25, 1e-15));
        let p2 = GasParameters {
            kappa1: 2.0,
            kappa2: 4.0,
            b: 1.0,
            ..unit()
        };
        assert!(close(conduction_potential(&p2, 2.0, 1.0).unwrap(), 3.0, 1e-15));
    }

    #[test]
    fn conduction_potential_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = GasParameters {
                b: rng.gen_range(1.0..6.0),
                kappa2: rng.gen_range(0.1..3.0),
                ..unit()
            };
            let v: f64 = rng.gen_range(0.2..5.0);
            let th: f64 = rng.gen_range(0.1..4.0);
            let quad = simpson(|xi| p.kappa(v, xi.max(1e-300)) / v, 0.0, th, 10_000);
            let exact = conduction_potential(&p, v, th).unwrap();
            assert!((quad - exact).abs() <= 1e-8 * exact, "{quad} vs {exact}");
        }
    }

    #[test]
    fn domain_errors() {
        let p = unit();
        assert!(matches!(pressure(&p, 0.0, 1.0), Err(SimError::Domain(_))));
        assert!(matches!(internal_energy(&p, 1.0, -1.0), Err(SimError::Domain(_))));
        assert!(reaction_rate(&p, 0.0).is_err());
        assert!(conductivity(&p, -2.0, 1.0).is_err());
        assert!(constitutive_partials(&p, 1.0, f64::NAN).is_err());
        assert!(entropy_eta(&p, 0.0, 0.0).is_err());
        assert!(conduction_potential(&p, 1.0, 0.0).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(unit().admissible());
        let edge = GasParameters {
            b: 12.0 / 7.0,
            beta: 0.0,
            ..unit()
        };
        assert!(!edge.admissible());
        let steep = GasParameters {
            b: 2.0,
            beta: 11.0,
            ..unit()
        };
        assert!(!steep.admissible());
        let bad = GasParameters { mu: 0.0, ..unit() };
        assert!(bad.check().is_err());
        assert!(unit().check().is_ok());
    }

    #[test]
    fn generic_over_f32() {
        let p = GasParameters::<f32>::default();
        assert!((pressure(&p, 1.0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-6);
        assert!(entropy_eta(&p, 1.0, 1.0).unwrap().abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn laws_positive_on_quadrant(v in 0.01f64..100.0, th in 0.01f64..50.0) {
            let p = unit();
            prop_assert!(p.p(v, th) > 0.0);
            prop_assert!(p.e(v, th) > 0.0);
            prop_assert!(p.kappa(v, th) >= p.kappa1);
            prop_assert!(p.conduction_potential(v, th) > 0.0);
        }

        #[test]
        fn conduction_potential_monotone(v in 0.1f64..10.0, a in 0.05f64..10.0, b in 0.05f64..10.0) {
            let p = unit();
            let diff = p.conduction_potential(v, a) - p.conduction_potential(v, b);
            if a > b { prop_assert!(diff > 0.0); }
            if a < b { prop_assert!(diff < 0.0); }
        }

        #[test]
        fn evaluation_is_pure(v in 0.1f64..10.0, th in 0.1f64..10.0) {
            let p = unit();
            prop_assert_eq!(p.eta(v, th).to_bits(), p.eta(v, th).to_bits());
            prop_assert_eq!(p.kappa(v, th).to_bits(), p.kappa(v, th).to_bits());
        }
    }
}
