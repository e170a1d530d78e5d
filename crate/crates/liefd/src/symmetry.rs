//! Executable Lie group machinery: the catalogued generators with their
//! closed-form finite transformations, generator-flow integration,
//! prolongation to derivative coordinates, and numerical invariance checks
//! for equations and for differential representations of schemes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::equations::Equation;
use crate::grid::State;
use crate::jet::{Coord, Direction, JetError, JetPoint, Poly};

#[derive(Debug, Error, PartialEq)]
pub enum SymmetryError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("transformation parameter leaves the validity domain (1 − ε·t = {0})")]
    ProjectiveSingularity(f64),
    #[error("flow integration needs at least 16 sub-steps, got {0}")]
    TooFewFlowSteps(usize),
}

/// The catalogued one-parameter subgroups.
///
/// L1..L6 act on (x, t, u, ν); the primed generators extend the scaling
/// subgroups to the step sizes (h, τ) for differential-approximation checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeneratorId {
    /// Space translation ∂x.
    L1,
    /// Time translation ∂t.
    L2,
    /// Dilatation x∂x + 2t∂t − u∂u.
    L3,
    /// Projective xt∂x + t²∂t + (x − ut)∂u.
    L4,
    /// Galilean boost t∂x + ∂u.
    L5,
    /// Viscosity dilatation −t∂t + u∂u + ν∂ν.
    L6,
    /// L3 extended by h∂h + 2τ∂τ.
    L3Prime,
    /// L6 extended by −τ∂τ.
    L4Prime,
}

impl GeneratorId {
    pub fn label(self) -> &'static str {
        match self {
            GeneratorId::L1 => "L1",
            GeneratorId::L2 => "L2",
            GeneratorId::L3 => "L3",
            GeneratorId::L4 => "L4",
            GeneratorId::L5 => "L5",
            GeneratorId::L6 => "L6",
            GeneratorId::L3Prime => "L3'",
            GeneratorId::L4Prime => "L4'",
        }
    }
}

/// Infinitesimals of one generator, kept as exact jet polynomials so the
/// prolongation recursion is exact.
#[derive(Clone, Debug)]
pub struct Generator {
    pub id: GeneratorId,
    pub xi_x: Poly,
    pub xi_t: Poly,
    pub eta: Poly,
    pub zeta_h: Poly,
    pub zeta_tau: Poly,
    pub theta: Poly,
}

impl Generator {
    pub fn new(id: GeneratorId) -> Generator {
        let x = Poly::var(Coord::X);
        let t = Poly::var(Coord::T);
        let u = Poly::var(Coord::u());
        let zero = Poly::zero();
        let one = Poly::constant(1.0);
        let (xi_x, xi_t, eta, zeta_h, zeta_tau, theta) = match id {
            GeneratorId::L1 => (one, zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone()),
            GeneratorId::L2 => (zero.clone(), one, zero.clone(), zero.clone(), zero.clone(), zero.clone()),
            GeneratorId::L3 => (
                x,
                t.scale(2.0),
                u.scale(-1.0),
                zero.clone(),
                zero.clone(),
                zero.clone(),
            ),
            GeneratorId::L4 => (
                x.mul(&t),
                t.mul(&t),
                x.sub(&u.mul(&t)),
                zero.clone(),
                zero.clone(),
                zero.clone(),
            ),
            GeneratorId::L5 => (t, zero.clone(), one, zero.clone(), zero.clone(), zero.clone()),
            GeneratorId::L6 => (
                zero.clone(),
                t.scale(-1.0),
                u,
                zero.clone(),
                zero.clone(),
                Poly::var(Coord::Nu),
            ),
            GeneratorId::L3Prime => (
                x,
                t.scale(2.0),
                u.scale(-1.0),
                Poly::var(Coord::H),
                Poly::var(Coord::Tau).scale(2.0),
                zero.clone(),
            ),
            GeneratorId::L4Prime => (
                zero.clone(),
                t.scale(-1.0),
                u,
                zero.clone(),
                Poly::var(Coord::Tau).scale(-1.0),
                Poly::var(Coord::Nu),
            ),
        };
        Generator {
            id,
            xi_x,
            xi_t,
            eta,
            zeta_h,
            zeta_tau,
            theta,
        }
    }

    /// The six-generator algebra of the Burgers equation.
    pub fn burgers_algebra() -> Vec<Generator> {
        [
            GeneratorId::L1,
            GeneratorId::L2,
            GeneratorId::L3,
            GeneratorId::L4,
            GeneratorId::L5,
            GeneratorId::L6,
        ]
        .map(Generator::new)
        .into_iter()
        .collect()
    }

    /// The four-generator algebra of the schemes' differential
    /// approximations: translations plus the two extended dilatations.
    pub fn differential_approximation_algebra() -> Vec<Generator> {
        [
            GeneratorId::L1,
            GeneratorId::L2,
            GeneratorId::L3Prime,
            GeneratorId::L4Prime,
        ]
        .map(Generator::new)
        .into_iter()
        .collect()
    }
}

/// A point of the extended base space (x, t, u, h, τ, ν).
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SymPoint {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub h: f64,
    pub tau: f64,
    pub nu: f64,
}

impl SymPoint {
    pub fn base(x: f64, t: f64, u: f64) -> SymPoint {
        SymPoint {
            x,
            t,
            u,
            h: 0.0,
            tau: 0.0,
            nu: 0.0,
        }
    }

    pub fn with_nu(mut self, nu: f64) -> SymPoint {
        self.nu = nu;
        self
    }

    pub fn with_steps(mut self, h: f64, tau: f64) -> SymPoint {
        self.h = h;
        self.tau = tau;
        self
    }

    fn jet(&self) -> JetPoint {
        let mut j = JetPoint::new(self.x, self.t, self.u);
        j.h = Some(self.h);
        j.tau = Some(self.tau);
        j.nu = Some(self.nu);
        j
    }
}

/// Closed-form finite transformation of one generator in the canonical
/// parameter (ε = 0 is the identity; dilatation factors are e^ε).
pub fn finite_transform(
    id: GeneratorId,
    eps: f64,
    p: SymPoint,
) -> Result<SymPoint, SymmetryError> {
    let mut q = p;
    match id {
        GeneratorId::L1 => q.x += eps,
        GeneratorId::L2 => q.t += eps,
        GeneratorId::L3 => {
            let s = eps.exp();
            q.x *= s;
            q.t *= s * s;
            q.u /= s;
        }
        GeneratorId::L4 => {
            let d = 1.0 - eps * p.t;
            if d == 0.0 {
                return Err(SymmetryError::ProjectiveSingularity(d));
            }
            q.x = p.x / d;
            q.t = p.t / d;
            q.u = p.x * eps + p.u * d;
        }
        GeneratorId::L5 => {
            q.x += eps * p.t;
            q.u += eps;
        }
        GeneratorId::L6 => {
            let s = eps.exp();
            q.t /= s;
            q.u *= s;
            q.nu *= s;
        }
        GeneratorId::L3Prime => {
            let s = eps.exp();
            q.x *= s;
            q.t *= s * s;
            q.u /= s;
            q.h *= s;
            q.tau *= s * s;
        }
        GeneratorId::L4Prime => {
            let s = eps.exp();
            q.t /= s;
            q.u *= s;
            q.tau /= s;
            q.nu *= s;
        }
    }
    Ok(q)
}

/// Integrates the generator flow dp/dε = (ξ₁, ξ₂, η, ζ₁, ζ₂, θ)(p) with the
/// classical fourth-order one-step method; matches the closed forms to
/// O((ε/ode_steps)⁴).
pub fn integrate_generator_flow(
    gen: &Generator,
    eps: f64,
    p: SymPoint,
    ode_steps: usize,
) -> Result<SymPoint, SymmetryError> {
    if ode_steps < 16 {
        return Err(SymmetryError::TooFewFlowSteps(ode_steps));
    }
    let f = |p: &SymPoint| -> Result<[f64; 6], SymmetryError> {
        let j = p.jet();
        Ok([
            gen.xi_x.eval(&j)?,
            gen.xi_t.eval(&j)?,
            gen.eta.eval(&j)?,
            gen.zeta_h.eval(&j)?,
            gen.zeta_tau.eval(&j)?,
            gen.theta.eval(&j)?,
        ])
    };
    let advance = |p: &SymPoint, k: &[f64; 6], s: f64| SymPoint {
        x: p.x + s * k[0],
        t: p.t + s * k[1],
        u: p.u + s * k[2],
        h: p.h + s * k[3],
        tau: p.tau + s * k[4],
        nu: p.nu + s * k[5],
    };
    let de = eps / ode_steps as f64;
    let mut cur = p;
    for _ in 0..ode_steps {
        let k1 = f(&cur)?;
        let k2 = f(&advance(&cur, &k1, de / 2.0))?;
        let k3 = f(&advance(&cur, &k2, de / 2.0))?;
        let k4 = f(&advance(&cur, &k3, de))?;
        cur = SymPoint {
            x: cur.x + de / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            t: cur.t + de / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            u: cur.u + de / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
            h: cur.h + de / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
            tau: cur.tau + de / 6.0 * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]),
            nu: cur.nu + de / 6.0 * (k1[5] + 2.0 * k2[5] + 2.0 * k3[5] + k4[5]),
        };
        if !cur.t.is_finite() || !cur.x.is_finite() || !cur.u.is_finite() {
            return Err(SymmetryError::ProjectiveSingularity(f64::NAN));
        }
    }
    Ok(cur)
}

/// Prolongation coefficients σ as exact polynomials, for every sorted
/// multi-index (dx, dt) with 1 ≤ dx + dt ≤ `max_order`.
///
/// First order: σ_(k) = D_k η − u_x·D_k ξ₁ − u_t·D_k ξ₂; higher orders
/// recurse through the total derivative of the previous coefficient.
pub fn prolongation_polys(gen: &Generator, max_order: u8) -> BTreeMap<(u8, u8), Poly> {
    let mut sigma = BTreeMap::new();
    let dx_of = |p: &Poly| p.total_derivative(Direction::X);
    let dt_of = |p: &Poly| p.total_derivative(Direction::T);
    let u = |dx: u8, dt: u8| Poly::var(Coord::U { dx, dt });

    sigma.insert(
        (1u8, 0u8),
        dx_of(&gen.eta)
            .sub(&u(1, 0).mul(&dx_of(&gen.xi_x)))
            .sub(&u(0, 1).mul(&dx_of(&gen.xi_t))),
    );
    sigma.insert(
        (0u8, 1u8),
        dt_of(&gen.eta)
            .sub(&u(1, 0).mul(&dt_of(&gen.xi_x)))
            .sub(&u(0, 1).mul(&dt_of(&gen.xi_t))),
    );
    for order in 2..=max_order {
        for dx in (0..=order).rev() {
            let dt = order - dx;
            // Extend a sorted prefix by the last index: x if dx > 0 has a
            // prefix ending in x, else extend in t.
            let poly = if dx > 0 {
                let prev = &sigma[&(dx - 1, dt)];
                dx_of(prev)
                    .sub(&u(dx, dt).mul(&dx_of(&gen.xi_x)))
                    .sub(&u(dx - 1, dt + 1).mul(&dx_of(&gen.xi_t)))
            } else {
                let prev = &sigma[&(0, dt - 1)];
                dt_of(prev)
                    .sub(&u(1, dt - 1).mul(&dt_of(&gen.xi_x)))
                    .sub(&u(0, dt).mul(&dt_of(&gen.xi_t)))
            };
            sigma.insert((dx, dt), poly);
        }
    }
    sigma
}

/// Evaluates the σ coefficients at a jet point, for all multi-indices up to
/// `order`. The jet must carry coordinates one order above.
pub fn prolong_coefficients(
    gen: &Generator,
    jet: &JetPoint,
    order: u8,
) -> Result<BTreeMap<(u8, u8), f64>, SymmetryError> {
    if jet.order() < order + 1 {
        return Err(SymmetryError::Jet(JetError::InsufficientOrder {
            have: jet.order(),
            need: order + 1,
        }));
    }
    let polys = prolongation_polys(gen, order);
    let mut out = BTreeMap::new();
    for (idx, p) in polys {
        out.insert(idx, p.eval(jet)?);
    }
    Ok(out)
}

/// Value and magnitude scale of a prolonged-operator application.
#[derive(Clone, Copy, Debug)]
pub struct InvarianceResidual {
    pub value: f64,
    /// Sum of the absolute values of the individual terms; the natural
    /// magnitude against which the residual is compared.
    pub scale: f64,
}

impl InvarianceResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }
}

/// Applies the prolonged operator
/// ξ₁∂x + ξ₂∂t + η∂u + Σ σ_J ∂/∂u_J + ζ₁∂h + ζ₂∂τ + θ∂ν to `expr` at a jet.
pub fn apply_prolonged(
    gen: &Generator,
    expr: &Poly,
    jet: &JetPoint,
) -> Result<InvarianceResidual, SymmetryError> {
    let order = expr.max_derivative_order();
    let sigma = prolongation_polys(gen, order);
    let mut value = 0.0;
    let mut scale = 0.0;
    let mut accumulate = |coeff: f64, partial: f64| {
        let term = coeff * partial;
        value += term;
        scale += term.abs();
    };
    for coord in expr.coords() {
        let partial = expr.partial(coord).eval(jet)?;
        match coord {
            Coord::X => accumulate(gen.xi_x.eval(jet)?, partial),
            Coord::T => accumulate(gen.xi_t.eval(jet)?, partial),
            Coord::U { dx: 0, dt: 0 } => accumulate(gen.eta.eval(jet)?, partial),
            Coord::U { dx, dt } => accumulate(sigma[&(dx, dt)].eval(jet)?, partial),
            Coord::H => accumulate(gen.zeta_h.eval(jet)?, partial),
            Coord::Tau => accumulate(gen.zeta_tau.eval(jet)?, partial),
            Coord::Nu => accumulate(gen.theta.eval(jet)?, partial),
        }
    }
    Ok(InvarianceResidual { value, scale })
}

/// Infinitesimal invariance criterion for a PDE: the prolonged operator
/// applied to F, evaluated on a jet constrained to F = 0. Zero (to round-off
/// in the scale) exactly for true symmetries.
pub fn pde_invariance_residual(
    gen: &Generator,
    equation: &Equation,
    constrained_jet: &JetPoint,
) -> Result<InvarianceResidual, SymmetryError> {
    apply_prolonged(gen, &equation.lhs(), constrained_jet)
}

/// Same criterion for a differential approximation P of a scheme, with the
/// operator extended by ζ₁∂h + ζ₂∂τ + θ∂ν and the jet constrained to P = 0.
pub fn da_invariance_residual(
    gen: &Generator,
    scheme_da: &Poly,
    constrained_jet: &JetPoint,
) -> Result<InvarianceResidual, SymmetryError> {
    apply_prolonged(gen, scheme_da, constrained_jet)
}

/// Galilean frame change of a whole grid level: values shift by ε and the
/// grid origin picks up ε·t, so the uniform level moves rigidly with no
/// interpolation.
pub fn frame_change(state: &State, eps: f64) -> State {
    let mut grid = state.grid.clone();
    grid.origin_offset += eps * state.time;
    State {
        values: state.values.iter().map(|u| u + eps).collect(),
        time: state.time,
        grid,
    }
}
