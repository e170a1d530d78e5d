//! Differential representations (modified equations) of the schemes: the
//! g₁, g₂, g₃ functions, the per-scheme correction terms, and an empirical
//! check that subtracting those corrections raises the residual order.

use thiserror::Error;

use crate::equations::burgers_lhs;
use crate::exact::SmoothSolution;
use crate::grid::{BoundaryPolicy, Ext, Grid1D, GridError, SchemeParams, State};
use crate::jet::{Coord, Direction, JetError, JetPoint, Poly};
use crate::schemes::{
    step_ftcs, step_lax_wendroff, step_semi_invariant, BoundaryProvider, OmegaRule, SchemeError,
    SchemeId,
};

#[derive(Debug, Error)]
pub enum ModeqError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("residual below round-off floor at h={h}; slope unreliable")]
    DegenerateSample { h: f64 },
    #[error("order study needs at least 3 refinement levels")]
    TooFewLevels,
}

/// g₁ = −(u²/2)_x + ν u_xx and its time-derivative cascade
/// g₂ = (−g₁u)_x + ν(g₁)_xx, g₃ = (−g₂u − g₁²)_x + ν(g₂)_xx, built by
/// nested total derivatives. Along Burgers solutions gₖ = ∂ₜᵏ u.
pub fn g_polys() -> (Poly, Poly, Poly) {
    let u = Poly::var(Coord::u());
    let nu = Poly::var(Coord::Nu);
    let dx = |p: &Poly| p.total_derivative(Direction::X);
    let dxx = |p: &Poly| dx(&dx(p));
    let g1 = dx(&u.mul(&u).scale(0.5))
        .scale(-1.0)
        .add(&nu.mul(&Poly::var(Coord::ux(2))));
    let g2 = dx(&g1.mul(&u).scale(-1.0)).add(&nu.mul(&dxx(&g1)));
    let g3 = dx(&g2.mul(&u).add(&g1.mul(&g1)).scale(-1.0)).add(&nu.mul(&dxx(&g2)));
    (g1, g2, g3)
}

/// Evaluates (g₁, g₂, g₃) at a jet with the given viscosity. The jet must
/// carry pure x-derivatives up to order 6.
pub fn g_functions(jet: &JetPoint, nu: f64) -> Result<(f64, f64, f64), ModeqError> {
    let mut jet = jet.clone();
    jet.nu = Some(nu);
    let (g1, g2, g3) = g_polys();
    Ok((g1.eval(&jet)?, g2.eval(&jet)?, g3.eval(&jet)?))
}

/// A scheme's first differential approximation P as a jet expression, plus
/// the orders of its leading correction terms.
#[derive(Clone, Debug)]
pub struct DifferentialRepresentation {
    pub scheme: SchemeId,
    pub expr: Poly,
    /// Set for the semi-invariant scheme with a Custom Ω rule, whose
    /// dissipation (C u_x)_x = 2 c0 h |u_x| u_xx is not polynomial.
    pub dissipation_c0: Option<f64>,
    /// (order in τ, order in h) of the truncation error.
    pub leading_orders: (u32, u32),
}

impl DifferentialRepresentation {
    pub fn eval(&self, jet: &JetPoint) -> Result<f64, ModeqError> {
        let mut v = self.expr.eval(jet)?;
        if let Some(c0) = self.dissipation_c0 {
            let h = jet.value(Coord::H)?;
            let ux = jet.value(Coord::ux(1))?;
            let uxx = jet.value(Coord::ux(2))?;
            v += 2.0 * c0 * h * ux.abs() * uxx;
        }
        Ok(v)
    }

    /// The correction terms alone: P minus the Burgers left-hand side.
    pub fn correction(&self, jet: &JetPoint) -> Result<f64, ModeqError> {
        Ok(self.eval(jet)? - burgers_lhs().eval(jet)?)
    }
}

/// Assembles the printed differential representation of a scheme. The Ω rule
/// only matters for the semi-invariant scheme, where it fixes C.
pub fn differential_representation(
    scheme: SchemeId,
    omega: &OmegaRule,
) -> DifferentialRepresentation {
    let f = burgers_lhs();
    let (g1, g2, g3) = g_polys();
    let u = Poly::var(Coord::u());
    let nu = Poly::var(Coord::Nu);
    let tau = Poly::var(Coord::Tau);
    let h2 = Poly::var(Coord::H).mul(&Poly::var(Coord::H));
    let dx = |p: &Poly| p.total_derivative(Direction::X);

    // h²/12 (u²)_xxx − ν h²/12 u_xxxx, shared by the three classical schemes.
    let u2_xxx = dx(&dx(&dx(&u.mul(&u))));
    let h_terms = h2
        .mul(&u2_xxx)
        .scale(1.0 / 12.0)
        .sub(&h2.mul(&nu).mul(&Poly::var(Coord::ux(4))).scale(1.0 / 12.0));

    let (expr, dissipation_c0, leading_orders) = match scheme {
        SchemeId::Ftcs => (
            f.add(&tau.mul(&g2).scale(0.5)).add(&h_terms),
            None,
            (1, 2),
        ),
        SchemeId::LaxWendroff => (
            f.add(&tau.mul(&tau).mul(&g3).scale(1.0 / 6.0)).add(&h_terms),
            None,
            (2, 2),
        ),
        SchemeId::CrankNicolson => {
            let tau2 = tau.mul(&tau);
            let inner = g3
                .scale(1.0 / 6.0)
                .add(&dx(&g1.mul(&g1).add(&u.mul(&g2))).scale(0.25))
                .sub(&nu.mul(&dx(&dx(&g2))).scale(0.25));
            (f.add(&tau2.mul(&inner)).add(&h_terms), None, (2, 2))
        }
        SchemeId::SemiInvariant => {
            // P = u_t + u u_x − ν u_xx + (C u_x)_x; CancelLeadingError makes
            // C ≡ 0, Custom(c0) leaves the |u_x| dissipation.
            let c0 = match omega {
                OmegaRule::CancelLeadingError => None,
                OmegaRule::Custom(c0) => Some(*c0),
            };
            (f, c0, (1, 2))
        }
    };
    DifferentialRepresentation {
        scheme,
        expr,
        dissipation_c0,
        leading_orders,
    }
}

/// Jet of a smooth solution at (x, t): pure x-derivatives to `x_order`,
/// pure t-derivatives to `t_order`.
pub fn solution_jet(
    sol: &dyn SmoothSolution,
    x: f64,
    t: f64,
    x_order: usize,
    t_order: usize,
) -> JetPoint {
    let xs = sol.x_jet(x, t, x_order);
    let ts = sol.t_jet(x, t, t_order);
    let mut jet = JetPoint::new(x, t, xs[0]);
    for (k, &v) in xs.iter().enumerate().skip(1) {
        jet.set_deriv(k as u8, 0, v);
    }
    for (k, &v) in ts.iter().enumerate().skip(1) {
        jet.set_deriv(0, k as u8, v);
    }
    jet
}

/// The discrete residual Λ(u_exact) of a scheme at the center of a small
/// patch: exact samples are pushed through the scheme's two-level formula.
fn scheme_residual_on_exact(
    scheme: SchemeId,
    omega: &OmegaRule,
    sol: &dyn SmoothSolution,
    nu: f64,
    x_center: f64,
    t: f64,
    h: f64,
    tau: f64,
) -> Result<f64, ModeqError> {
    let n = 9;
    let center = (n / 2) as usize;
    let grid = Grid1D::new(
        x_center - (center as f64) * h,
        h,
        n,
        BoundaryPolicy::DirichletExact,
    )?;
    let eval = |x: f64, tt: f64| sol.eval(x, tt);
    let values: Vec<f64> = grid.nodes().map(|x| eval(x, t)).collect();
    let state = State::new(values, t, grid.clone())?;
    let params = SchemeParams {
        nu,
        h,
        tau,
        ref_velocity: 1.0,
    };
    let provider = BoundaryProvider::ExactSolution(&eval);
    let boundary = provider.step_boundary(&grid, t, t + tau);

    let exact_new = eval(grid.node(center as isize), t + tau);
    match scheme {
        // For u^{n+1} = u^n − τΦ the residual is (exact_new − predicted)/τ.
        SchemeId::Ftcs => {
            let pred = step_ftcs(&state, &params, &boundary)?;
            Ok((exact_new - pred.values[center]) / tau)
        }
        SchemeId::LaxWendroff => {
            let pred = step_lax_wendroff(&state, &params, &boundary)?;
            Ok((exact_new - pred.values[center]) / tau)
        }
        SchemeId::SemiInvariant => {
            let pred = step_semi_invariant(&state, &params, &boundary, omega)?;
            Ok((exact_new - pred.values[center]) / tau)
        }
        SchemeId::CrankNicolson => {
            // Two-level trapezoidal relation evaluated on exact samples.
            let new_values: Vec<f64> = grid.nodes().map(|x| eval(x, t + tau)).collect();
            let (g_old, g_new) = match boundary {
                crate::schemes::StepBoundary::Dirichlet { old, new } => (old, new),
                crate::schemes::StepBoundary::Periodic => unreachable!(),
            };
            let e_old = Ext::new(&state.values, &grid, Some(&g_old))?;
            let e_new = Ext::new(&new_values, &grid, Some(&g_new))?;
            let w_old = e_old.map(|u| u * u / 2.0);
            let w_new = e_new.map(|u| u * u / 2.0);
            let c = center as isize;
            let d2 = |e: &Ext, i: isize| e.at(i + 1) - 2.0 * e.at(i) + e.at(i - 1);
            let md = |w: &Ext, i: isize| 0.5 * (w.at(i + 1) - w.at(i - 1));
            Ok((e_new.at(c) - e_old.at(c)) / tau
                + 0.5 * (md(&w_new, c) + md(&w_old, c)) / h
                - 0.5 * nu * (d2(&e_new, c) + d2(&e_old, c)) / (h * h))
        }
    }
}

/// Result of a truncation-order study: slopes of the raw scheme residual and
/// of the residual after subtracting the printed correction terms.
#[derive(Clone, Debug)]
pub struct TruncationStudy {
    pub raw_slope: f64,
    pub corrected_slope: f64,
    /// (h, |raw|, |corrected|) per refinement level.
    pub points: Vec<(f64, f64, f64)>,
}

/// Measures how the discrete residual on an exact solution shrinks under
/// joint (h, τ) refinement, before and after subtracting the differential
/// representation's correction terms. A valid representation makes the
/// corrected remainder shrink at a strictly higher order.
pub fn truncation_order_check(
    scheme: SchemeId,
    omega: &OmegaRule,
    sol: &dyn SmoothSolution,
    nu: f64,
    x_center: f64,
    t: f64,
    levels: &[(f64, f64)],
) -> Result<TruncationStudy, ModeqError> {
    if levels.len() < 3 {
        return Err(ModeqError::TooFewLevels);
    }
    let rep = differential_representation(scheme, omega);
    let mut points = Vec::with_capacity(levels.len());
    for &(h, tau) in levels {
        let raw = scheme_residual_on_exact(scheme, omega, sol, nu, x_center, t, h, tau)?;
        let mut jet = solution_jet(sol, x_center, t, 6, 1);
        jet.h = Some(h);
        jet.tau = Some(tau);
        jet.nu = Some(nu);
        let corrected = raw - rep.correction(&jet)?;
        let floor = 100.0 * f64::EPSILON;
        if raw.abs() < floor || corrected.abs() < floor {
            return Err(ModeqError::DegenerateSample { h });
        }
        points.push((h, raw.abs(), corrected.abs()));
    }
    let raw_slope = crate::grid::least_squares_slope(
        &points.iter().map(|p| (p.0.ln(), p.1.ln())).collect::<Vec<_>>(),
    );
    let corrected_slope = crate::grid::least_squares_slope(
        &points.iter().map(|p| (p.0.ln(), p.2.ln())).collect::<Vec<_>>(),
    );
    Ok(TruncationStudy {
        raw_slope,
        corrected_slope,
        points,
    })
}
