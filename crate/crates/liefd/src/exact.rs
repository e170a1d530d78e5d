//! Closed-form Burgers solutions used as initial data, boundary data and
//! error references, plus stencil-based PDE residual probes for Burgers and
//! the compound Burgers–KdV equation.

use thiserror::Error;

use crate::series::Taylor;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("wavy solution requires amplitude parameter A > 1, got {0}")]
    AmplitudeTooSmall(f64),
    #[error("viscosity must be positive, got {0}")]
    NonPositiveViscosity(f64),
    #[error("wavy solution requires a positive period, got {0}")]
    NonPositivePeriod(f64),
}

/// A field u(x, t) evaluable anywhere in its domain.
pub trait Solution {
    fn eval(&self, x: f64, t: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64> Solution for F {
    fn eval(&self, x: f64, t: f64) -> f64 {
        self(x, t)
    }
}

/// A solution with analytic derivative jets in each variable.
pub trait SmoothSolution: Solution {
    /// `[u, u_x, ..., ∂^order u/∂x^order]` at (x, t).
    fn x_jet(&self, x: f64, t: f64, order: usize) -> Vec<f64>;
    /// `[u, u_t, ..., ∂^order u/∂t^order]` at (x, t).
    fn t_jet(&self, x: f64, t: f64, order: usize) -> Vec<f64>;
}

/// Viscous shock profile u = a − b·tanh(b·(x − a·t − x0)/(2ν)),
/// an exact solution of u_t + u u_x − ν u_xx = 0.
#[derive(Clone, Copy, Debug)]
pub struct ShockSolution {
    pub a: f64,
    pub b: f64,
    pub nu: f64,
    pub x0: f64,
}

impl ShockSolution {
    pub fn new(a: f64, b: f64, nu: f64, x0: f64) -> Result<Self, ExactError> {
        if !(nu > 0.0) {
            return Err(ExactError::NonPositiveViscosity(nu));
        }
        Ok(ShockSolution { a, b, nu, x0 })
    }

    fn steepness(&self) -> f64 {
        self.b / (2.0 * self.nu)
    }
}

impl Solution for ShockSolution {
    fn eval(&self, x: f64, t: f64) -> f64 {
        self.a - self.b * (self.steepness() * (x - self.a * t - self.x0)).tanh()
    }
}

impl SmoothSolution for ShockSolution {
    fn x_jet(&self, x: f64, t: f64, order: usize) -> Vec<f64> {
        let c = self.steepness();
        let arg = Taylor::var(x, order)
            .shift0(-self.a * t - self.x0)
            .scale(c);
        arg.tanh().scale(-self.b).shift0(self.a).derivatives()
    }

    fn t_jet(&self, x: f64, t: f64, order: usize) -> Vec<f64> {
        let c = self.steepness();
        let arg = Taylor::var(t, order)
            .scale(-self.a)
            .shift0(x - self.x0)
            .scale(c);
        arg.tanh().scale(-self.b).shift0(self.a).derivatives()
    }
}

/// Decaying periodic solution
/// u = 2νk·e^(−νk²t)·sin(kx) / (A + e^(−νk²t)·cos(kx)), k = 2π/period.
/// A > 1 keeps the denominator away from zero.
#[derive(Clone, Copy, Debug)]
pub struct WavySolution {
    pub amplitude: f64,
    pub nu: f64,
    pub period: f64,
}

impl WavySolution {
    pub fn new(amplitude: f64, nu: f64, period: f64) -> Result<Self, ExactError> {
        if amplitude <= 1.0 {
            return Err(ExactError::AmplitudeTooSmall(amplitude));
        }
        if !(nu > 0.0) {
            return Err(ExactError::NonPositiveViscosity(nu));
        }
        if !(period > 0.0) {
            return Err(ExactError::NonPositivePeriod(period));
        }
        Ok(WavySolution {
            amplitude,
            nu,
            period,
        })
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.period
    }

    /// Peak |u| at t = 0: 2νk/√(A² − 1).
    pub fn initial_peak(&self) -> f64 {
        let k = self.wavenumber();
        2.0 * self.nu * k / (self.amplitude * self.amplitude - 1.0).sqrt()
    }
}

impl Solution for WavySolution {
    fn eval(&self, x: f64, t: f64) -> f64 {
        let k = self.wavenumber();
        let e = (-self.nu * k * k * t).exp();
        2.0 * self.nu * k * e * (k * x).sin() / (self.amplitude + e * (k * x).cos())
    }
}

impl SmoothSolution for WavySolution {
    fn x_jet(&self, x: f64, t: f64, order: usize) -> Vec<f64> {
        let k = self.wavenumber();
        let e = (-self.nu * k * k * t).exp();
        let (sin, cos) = Taylor::var(x, order).scale(k).sin_cos();
        let num = sin.scale(2.0 * self.nu * k * e);
        let den = cos.scale(e).shift0(self.amplitude);
        num.div(&den).derivatives()
    }

    fn t_jet(&self, x: f64, t: f64, order: usize) -> Vec<f64> {
        let k = self.wavenumber();
        let e = Taylor::var(t, order).scale(-self.nu * k * k).exp();
        let num = e.scale(2.0 * self.nu * k * (k * x).sin());
        let den = e.scale((k * x).cos()).shift0(self.amplitude);
        num.div(&den).derivatives()
    }
}

/// Galilean image of a solution: u*(x, t) = base(x − ε·t, t) + ε.
/// If the base field solves Burgers, so does the boosted one.
#[derive(Clone, Copy, Debug)]
pub struct BoostedSolution<S> {
    pub base: S,
    pub boost: f64,
}

impl<S: Solution> Solution for BoostedSolution<S> {
    fn eval(&self, x: f64, t: f64) -> f64 {
        self.base.eval(x - self.boost * t, t) + self.boost
    }
}

/// Coefficients of u_t + α u u_x + β u² u_x + μ u_xx − s u_xxx = 0.
/// Burgers is the particular case (α, β, μ, s) = (1, 0, −ν, 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CbkdvCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub s: f64,
}

impl CbkdvCoefficients {
    pub fn burgers(nu: f64) -> Self {
        CbkdvCoefficients {
            alpha: 1.0,
            beta: 0.0,
            mu: -nu,
            s: 0.0,
        }
    }
}

// Fourth-order centered probe stencils.
fn d1(f: impl Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
}

fn d2(f: impl Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2.0 * h))
        / (12.0 * h * h)
}

fn d3(f: impl Fn(f64) -> f64, z: f64, h: f64) -> f64 {
    (-f(z - 3.0 * h) + 8.0 * f(z - 2.0 * h) - 13.0 * f(z - h) + 13.0 * f(z + h)
        - 8.0 * f(z + 2.0 * h)
        + f(z + 3.0 * h))
        / (8.0 * h * h * h)
}

/// Burgers residual u_t + u·u_x − ν·u_xx probed with fourth-order centered
/// stencils of spacing `probe_h`; O(probe_h⁴) on exact solutions.
pub fn burgers_residual(field: &dyn Solution, nu: f64, x: f64, t: f64, probe_h: f64) -> f64 {
    let u = field.eval(x, t);
    let ut = d1(|s| field.eval(x, s), t, probe_h);
    let ux = d1(|s| field.eval(s, t), x, probe_h);
    let uxx = d2(|s| field.eval(s, t), x, probe_h);
    ut + u * ux - nu * uxx
}

/// CBKDV residual u_t + α u u_x + β u² u_x + μ u_xx − s u_xxx, same probes.
pub fn cbkdv_residual(
    field: &dyn Solution,
    coeffs: &CbkdvCoefficients,
    x: f64,
    t: f64,
    probe_h: f64,
) -> f64 {
    let u = field.eval(x, t);
    let ut = d1(|s| field.eval(x, s), t, probe_h);
    let ux = d1(|s| field.eval(s, t), x, probe_h);
    let uxx = d2(|s| field.eval(s, t), x, probe_h);
    let uxxx = d3(|s| field.eval(s, t), x, probe_h);
    ut + coeffs.alpha * u * ux + coeffs.beta * u * u * ux + coeffs.mu * uxx - coeffs.s * uxxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_shock_is_constant() {
        let s = ShockSolution::new(1.0, 0.0, 0.1, 0.0).unwrap();
        assert_eq!(s.eval(3.7, 2.0), 1.0);
        assert_eq!(s.eval(-5.0, 0.0), 1.0);
    }

    #[test]
    fn shock_center_rides_at_mean_velocity() {
        let s = ShockSolution::new(0.8, 0.3, 0.05, 0.2).unwrap();
        for t in [0.0, 0.5, 2.0] {
            let x = s.a * t + s.x0;
            assert!((s.eval(x, t) - s.a).abs() < 1e-15);
        }
    }

    #[test]
    fn wavy_parameters_are_validated() {
        assert!(matches!(
            WavySolution::new(1.0, 0.1, 2.0),
            Err(ExactError::AmplitudeTooSmall(_))
        ));
        assert!(WavySolution::new(2.0, 0.1, 2.0).is_ok());
    }

    #[test]
    fn wavy_value_cross_checked_by_hand() {
        // A=2, nu=0.1, L=2 -> k=pi; at (0.5, 0): u = 0.2*pi*sin(pi/2)/(2+cos(pi/2)).
        let w = WavySolution::new(2.0, 0.1, 2.0).unwrap();
        let k = std::f64::consts::PI;
        let want = 2.0 * 0.1 * k * (k * 0.5).sin() / (2.0 + (k * 0.5).cos());
        assert!((w.eval(0.5, 0.0) - want).abs() < 1e-15);
        // Second route: evaluate the Cole-Hopf form u = -2 nu phi_x / phi.
        let phi = |x: f64| 2.0 + (k * x).cos();
        let phi_x = |x: f64| -k * (k * x).sin();
        let other = -2.0 * 0.1 * phi_x(0.5) / phi(0.5);
        assert!((w.eval(0.5, 0.0) - other).abs() < 1e-15);
    }

    #[test]
    fn jets_match_probe_derivatives() {
        let s = ShockSolution::new(1.0, 0.5, 0.2, 0.1).unwrap();
        let (x, t) = (0.35, 0.4);
        let xj = s.x_jet(x, t, 3);
        assert!((xj[0] - s.eval(x, t)).abs() < 1e-15);
        assert!((xj[1] - d1(|z| s.eval(z, t), x, 1e-3)).abs() < 1e-10);
        assert!((xj[2] - d2(|z| s.eval(z, t), x, 1e-3)).abs() < 1e-9);
        let tj = s.t_jet(x, t, 2);
        assert!((tj[1] - d1(|z| s.eval(x, z), t, 1e-3)).abs() < 1e-10);

        let w = WavySolution::new(2.0, 0.15, 2.0).unwrap();
        let wj = w.x_jet(x, t, 3);
        assert!((wj[1] - d1(|z| w.eval(z, t), x, 1e-4)).abs() < 1e-9);
        let wt = w.t_jet(x, t, 2);
        assert!((wt[1] - d1(|z| w.eval(x, z), t, 1e-4)).abs() < 1e-9);
    }

    #[test]
    fn constant_field_has_zero_residual() {
        let f = |_x: f64, _t: f64| 2.5;
        assert_eq!(burgers_residual(&f, 0.3, 0.1, 0.2, 1e-3), 0.0);
        let c = CbkdvCoefficients {
            alpha: 0.7,
            beta: 0.2,
            mu: 0.4,
            s: 0.1,
        };
        assert_eq!(cbkdv_residual(&f, &c, 0.1, 0.2, 1e-3), 0.0);
    }

    #[test]
    fn linear_field_residuals_match_hand_values() {
        let f = |x: f64, _t: f64| x;
        // u_t = 0, u u_x = x, u_xx = 0 -> residual = x.
        let r = burgers_residual(&f, 0.4, 0.7, 0.0, 1e-3);
        assert!((r - 0.7).abs() < 1e-9);
        // beta-only CBKDV: residual = u² u_x = x².
        let c = CbkdvCoefficients {
            alpha: 0.0,
            beta: 1.0,
            mu: 0.0,
            s: 0.0,
        };
        let r = cbkdv_residual(&f, &c, 0.7, 0.0, 1e-3);
        assert!((r - 0.49).abs() < 1e-9);
    }

    #[test]
    fn named_solutions_satisfy_burgers_over_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shock = ShockSolution::new(1.0, 0.4, 0.15, 0.0).unwrap();
        let wavy = WavySolution::new(2.0, 0.2, 2.0).unwrap();
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let t: f64 = rng.gen_range(0.0..1.0);
            let r = burgers_residual(&shock, shock.nu, x, t, 1e-3);
            let u = shock.eval(x, t);
            let ux = d1(|z| shock.eval(z, t), x, 1e-3);
            assert!(
                r.abs() <= 1e-6 * (u * ux).abs().max(1.0),
                "shock residual {r} at ({x}, {t})"
            );
            let r = burgers_residual(&wavy, wavy.nu, x, t, 1e-3);
            assert!(r.abs() <= 1e-6, "wavy residual {r} at ({x}, {t})");
        }
    }

    #[test]
    fn burgers_is_a_cbkdv_special_case() {
        let shock = ShockSolution::new(0.9, 0.3, 0.2, 0.05).unwrap();
        let coeffs = CbkdvCoefficients::burgers(shock.nu);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let t: f64 = rng.gen_range(0.0..1.0);
            let a = burgers_residual(&shock, shock.nu, x, t, 1e-3);
            let b = cbkdv_residual(&shock, &coeffs, x, t, 1e-3);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_is_translation_covariant() {
        // Residual of f(x − x0, t − t0) at (x, t) equals the residual of f
        // at (x − x0, t − t0): the executable form of the translation group.
        let shock = ShockSolution::new(1.0, 0.4, 0.2, 0.0).unwrap();
        let (x0, t0) = (0.3, 0.15);
        let shifted = |x: f64, t: f64| shock.eval(x - x0, t - t0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x: f64 = rng.gen_range(-0.5..0.5);
            let t: f64 = rng.gen_range(0.5..1.0);
            let a = burgers_residual(&shifted, shock.nu, x, t, 1e-3);
            let b = burgers_residual(&shock, shock.nu, x - x0, t - t0, 1e-3);
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn boosted_solution_still_solves_burgers() {
        let shock = ShockSolution::new(1.0, 0.4, 0.2, 0.0).unwrap();
        let boosted = BoostedSolution {
            base: shock,
            boost: 0.25,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let t: f64 = rng.gen_range(0.0..1.0);
            let r = burgers_residual(&boosted, shock.nu, x, t, 1e-3);
            assert!(r.abs() < 1e-6, "boosted residual {r}");
        }
    }
}
