//! Von Neumann stability: the printed condition sets per scheme, closed-form
//! amplification factors of the linearized schemes, and empirical |G| scans.

use num_complex::Complex64;

use crate::grid::SchemeParams;
use crate::schemes::SchemeId;

/// One evaluated inequality of a condition set.
#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub name: &'static str,
    /// Value of the left-hand side as evaluated.
    pub lhs: f64,
    /// Bound it is compared against.
    pub bound: f64,
    pub satisfied: bool,
}

/// Verdict of the printed linear stability conditions for one scheme.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub scheme: SchemeId,
    pub cfl: f64,
    pub s: f64,
    pub s_star: f64,
    pub omega_tau: f64,
    pub conditions: Vec<ConditionCheck>,
    pub stable: bool,
}

fn le(name: &'static str, lhs: f64, bound: f64) -> ConditionCheck {
    ConditionCheck {
        name,
        lhs,
        bound,
        satisfied: lhs <= bound,
    }
}

fn ge(name: &'static str, lhs: f64, bound: f64) -> ConditionCheck {
    ConditionCheck {
        name,
        lhs,
        bound,
        satisfied: lhs >= bound,
    }
}

/// Evaluates the printed condition set in the dimensionless numbers.
/// `omega_tau` = Ω·τ enters only the semi-invariant conditions.
pub fn check_conditions_dimensionless(
    scheme: SchemeId,
    cfl: f64,
    s: f64,
    omega_tau: f64,
) -> StabilityReport {
    let s_star = s + cfl * cfl / 2.0;
    let conditions = match scheme {
        SchemeId::Ftcs => vec![
            le("S <= 1/2", s, 0.5),
            le("CFL <= 1", cfl, 1.0),
            le("CFL^2 <= 2S", cfl * cfl, 2.0 * s),
        ],
        SchemeId::LaxWendroff => vec![
            le("S* <= 1/2", s_star, 0.5),
            le("CFL <= 1", cfl, 1.0),
        ],
        SchemeId::CrankNicolson => vec![],
        SchemeId::SemiInvariant => vec![
            le(
                "CFL^2 - 2S - 2*Omega_tau <= 0",
                cfl * cfl - 2.0 * s - 2.0 * omega_tau,
                0.0,
            ),
            ge(
                "4S/3 - 2S^2 + Omega_tau >= 0",
                4.0 * s / 3.0 - 2.0 * s * s + omega_tau,
                0.0,
            ),
            le(
                "4S/3 - 2S^2 + Omega_tau <= 1/2",
                4.0 * s / 3.0 - 2.0 * s * s + omega_tau,
                0.5,
            ),
        ],
    };
    let stable = conditions.iter().all(|c| c.satisfied);
    StabilityReport {
        scheme,
        cfl,
        s,
        s_star,
        omega_tau,
        conditions,
        stable,
    }
}

/// Same, from dimensional parameters.
pub fn check_conditions(
    scheme: SchemeId,
    params: &SchemeParams,
    omega_tau: f64,
) -> StabilityReport {
    check_conditions_dimensionless(scheme, params.cfl(), params.s(), omega_tau)
}

/// Fourier symbol G(θ) of one linearized step (u²/2 linearized to a·u with
/// a the reference velocity, Ω frozen at omega_tau/τ).
pub fn symbol(scheme: SchemeId, cfl: f64, s: f64, omega_tau: f64, theta: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let sin = theta.sin();
    let d2 = 2.0 * theta.cos() - 2.0; // symbol of δ²
    match scheme {
        SchemeId::Ftcs => Complex64::new(1.0 + s * d2, 0.0) - i * cfl * sin,
        SchemeId::LaxWendroff => {
            Complex64::new(1.0 + s * d2, 0.0) - i * cfl * sin
                + Complex64::new(cfl * cfl / 2.0 * d2 + s * s / 2.0 * d2 * d2, 0.0)
                - i * (cfl * s * sin * d2)
        }
        SchemeId::CrankNicolson => {
            let half = (i * cfl * sin - Complex64::new(s * d2, 0.0)) / 2.0;
            (Complex64::new(1.0, 0.0) - half) / (Complex64::new(1.0, 0.0) + half)
        }
        SchemeId::SemiInvariant => {
            // Fourth-order operators: μδ − μδ³/6 -> i sinθ (1 − d2/6),
            // δ² − δ⁴/12 -> d2 − d2²/12.
            Complex64::new(
                1.0 + s * (d2 - d2 * d2 / 12.0) + omega_tau * d2 + s * s / 2.0 * d2 * d2,
                0.0,
            ) - i * (cfl * sin * (1.0 - d2 / 6.0))
                - i * (cfl * s * sin * d2)
        }
    }
}

/// |G| at one phase θ for dimensional parameters.
pub fn amplification_factor(
    scheme: SchemeId,
    params: &SchemeParams,
    omega_tau: f64,
    theta: f64,
) -> f64 {
    symbol(scheme, params.cfl(), params.s(), omega_tau, theta).norm()
}

/// Number of equispaced phases sampled per scan cell; resolves the extrema
/// of the quartic symbols.
pub const THETA_SAMPLES: usize = 257;

/// max over sampled θ of |G|.
pub fn max_amplification(scheme: SchemeId, cfl: f64, s: f64, omega_tau: f64) -> f64 {
    (0..THETA_SAMPLES)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / THETA_SAMPLES as f64;
            symbol(scheme, cfl, s, omega_tau, theta).norm()
        })
        .fold(0.0, f64::max)
}

/// Empirical vs printed stability verdicts over a (CFL, S) grid.
#[derive(Clone, Debug)]
pub struct StabilityMap {
    pub scheme: SchemeId,
    pub cfl_values: Vec<f64>,
    pub s_values: Vec<f64>,
    /// Row-major over (s index, cfl index): max_θ |G| ≤ 1 + 1e-12.
    pub empirical: Vec<bool>,
    /// Printed-condition verdicts on the same cells.
    pub predicted: Vec<bool>,
}

impl StabilityMap {
    pub fn at(&self, si: usize, ci: usize) -> (bool, bool) {
        let k = si * self.cfl_values.len() + ci;
        (self.empirical[k], self.predicted[k])
    }
}

/// Scans cell centers of [0, cfl_max] × [0, s_max]; at least 20 samples per
/// axis.
pub fn scan_stability(
    scheme: SchemeId,
    cfl_max: f64,
    s_max: f64,
    n_cfl: usize,
    n_s: usize,
    omega_tau: f64,
) -> StabilityMap {
    assert!(n_cfl >= 20 && n_s >= 20, "need at least 20 samples per axis");
    let cfl_values: Vec<f64> = (0..n_cfl)
        .map(|i| (i as f64 + 0.5) * cfl_max / n_cfl as f64)
        .collect();
    let s_values: Vec<f64> = (0..n_s)
        .map(|j| (j as f64 + 0.5) * s_max / n_s as f64)
        .collect();
    let mut empirical = Vec::with_capacity(n_cfl * n_s);
    let mut predicted = Vec::with_capacity(n_cfl * n_s);
    for &s in &s_values {
        for &cfl in &cfl_values {
            empirical.push(max_amplification(scheme, cfl, s, omega_tau) <= 1.0 + 1e-12);
            predicted.push(check_conditions_dimensionless(scheme, cfl, s, omega_tau).stable);
        }
    }
    StabilityMap {
        scheme,
        cfl_values,
        s_values,
        empirical,
        predicted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_condition_fixtures() {
        let r = check_conditions_dimensionless(SchemeId::Ftcs, 0.5, 0.25, 0.0);
        assert!(r.stable);
        let r = check_conditions_dimensionless(SchemeId::Ftcs, 0.5, 0.6, 0.0);
        assert!(!r.stable);
        assert!(!r.conditions[0].satisfied, "S <= 1/2 must fail");

        // Direct evaluation of the semi-invariant pair at the spec's numbers.
        let r = check_conditions_dimensionless(SchemeId::SemiInvariant, 0.5, 0.25, 0.125);
        assert!(r.stable);
        assert!((r.conditions[0].lhs - (-0.5)).abs() < 1e-15);
        assert!((r.conditions[1].lhs - (4.0 * 0.25 / 3.0 - 0.125 + 0.125)).abs() < 1e-15);

        assert!(check_conditions_dimensionless(SchemeId::CrankNicolson, 10.0, 40.0, 0.0).stable);
    }

    #[test]
    fn constant_mode_is_preserved_by_every_scheme() {
        for scheme in SchemeId::ALL {
            let g = symbol(scheme, 0.7, 0.3, 0.05, 0.0).norm();
            assert!((g - 1.0).abs() < 1e-14, "{scheme}: |G(0)| = {g}");
        }
    }

    #[test]
    fn symbol_is_symmetric_about_pi() {
        for scheme in SchemeId::ALL {
            for k in 1..8 {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                let a = symbol(scheme, 0.6, 0.2, 0.03, theta).norm();
                let b = symbol(scheme, 0.6, 0.2, 0.03, 2.0 * std::f64::consts::PI - theta).norm();
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn crank_nicolson_diffusion_symbol_is_the_trapezoidal_ratio() {
        for s in [0.1, 0.5, 2.0, 10.0] {
            for k in 0..9 {
                let theta = std::f64::consts::PI * k as f64 / 8.0;
                let want =
                    (1.0 - 2.0 * s * (theta / 2.0).sin().powi(2)).abs()
                        / (1.0 + 2.0 * s * (theta / 2.0).sin().powi(2));
                let got = symbol(SchemeId::CrankNicolson, 0.0, s, 0.0, theta).norm();
                assert!((got - want).abs() < 1e-13, "s={s} theta={theta}");
                assert!(got <= 1.0 + 1e-13);
            }
        }
    }

    #[test]
    fn semi_invariant_symbol_at_pi_reproduces_the_printed_bound() {
        // |G(π)| = |1 − 16S/3 + 8S² − 4Ω_τ|; the second printed condition is
        // exactly |G(π)| ≤ 1.
        for (s, om) in [(0.1, 0.0), (0.4, 0.02), (0.6, 0.01)] {
            let g = symbol(SchemeId::SemiInvariant, 0.5, s, om, std::f64::consts::PI);
            let want = 1.0 - 16.0 * s / 3.0 + 8.0 * s * s - 4.0 * om;
            assert!((g.re - want).abs() < 1e-12 && g.im.abs() < 1e-12);
        }
    }

    #[test]
    fn ftcs_marginal_point_is_neutrally_stable() {
        // CFL² = 2S puts FTCS exactly on its stability boundary.
        let m = max_amplification(SchemeId::Ftcs, 0.5, 0.125, 0.0);
        assert!(m <= 1.0 + 1e-12, "max |G| = {m}");
        let m = max_amplification(SchemeId::Ftcs, 0.6, 0.125, 0.0);
        assert!(m > 1.0 + 1e-9, "just across the boundary: {m}");
    }
}
