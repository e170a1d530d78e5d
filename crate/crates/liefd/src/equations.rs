//! The governing equations as jet-space polynomials, plus sampling of jet
//! points constrained to a solution manifold.
//!
//! Invariance residuals are only meaningful on the manifold F = 0, so free
//! coordinates are the pure x-derivatives and everything carrying a time
//! derivative is generated from the evolution form u_t = R(u, u_x, ...) by
//! repeated on-manifold total differentiation.

use rand::Rng;

use crate::exact::CbkdvCoefficients;
use crate::jet::{Coord, Direction, JetError, JetPoint, Poly};

/// Left-hand side of Burgers, u_t + u·u_x − ν·u_xx, with ν a jet coordinate.
pub fn burgers_lhs() -> Poly {
    let u = Poly::var(Coord::u());
    let ux = Poly::var(Coord::ux(1));
    let ut = Poly::var(Coord::U { dx: 0, dt: 1 });
    let uxx = Poly::var(Coord::ux(2));
    ut.add(&u.mul(&ux)).sub(&uxx.mul_var(Coord::Nu))
}

/// Left-hand side of the CBKDV equation
/// u_t + α u u_x + β u² u_x + μ u_xx − s u_xxx.
pub fn cbkdv_lhs(c: &CbkdvCoefficients) -> Poly {
    let u = Poly::var(Coord::u());
    let ux = Poly::var(Coord::ux(1));
    let ut = Poly::var(Coord::U { dx: 0, dt: 1 });
    let uxx = Poly::var(Coord::ux(2));
    let uxxx = Poly::var(Coord::ux(3));
    ut.add(&u.mul(&ux).scale(c.alpha))
        .add(&u.mul(&u).mul(&ux).scale(c.beta))
        .add(&uxx.scale(c.mu))
        .sub(&uxxx.scale(c.s))
}

/// An equation whose invariance is checked.
#[derive(Clone, Debug)]
pub enum Equation {
    Burgers,
    Cbkdv(CbkdvCoefficients),
}

impl Equation {
    pub fn lhs(&self) -> Poly {
        match self {
            Equation::Burgers => burgers_lhs(),
            Equation::Cbkdv(c) => cbkdv_lhs(c),
        }
    }

    /// Evolution form u_t = R with R in pure x-derivative coordinates.
    pub fn evolution_rhs(&self) -> Poly {
        let ut = Poly::var(Coord::U { dx: 0, dt: 1 });
        self.lhs().sub(&ut).scale(-1.0)
    }
}

/// On-manifold time derivative of a polynomial in pure-x coordinates:
/// D_t^on Q = ∂Q/∂t + Σ_j (D_x^j R)·∂Q/∂u_{jx}, staying in pure-x
/// coordinates. `dx_rhs` caches the x-derivative cascade of R.
fn constrained_t_derivative(q: &Poly, dx_rhs: &mut Vec<Poly>) -> Poly {
    let mut out = q.partial(Coord::T);
    for coord in q.coords() {
        if let Coord::U { dx, dt: 0 } = coord {
            while dx_rhs.len() <= dx as usize {
                let next = dx_rhs.last().unwrap().total_derivative(Direction::X);
                dx_rhs.push(next);
            }
            out = out.add(&q.partial(coord).mul(&dx_rhs[dx as usize]));
        }
    }
    out
}

/// Precomputed on-manifold derivative polynomials for one evolution
/// equation, reusable across many sampled jets.
pub struct ConstrainedSampler {
    /// rows[k - 1][j] gives u_{(j, k)} as a polynomial in pure-x coordinates.
    rows: Vec<Vec<Poly>>,
    order: u8,
}

impl ConstrainedSampler {
    pub fn new(rhs: &Poly, order: u8, max_t_order: u8) -> Self {
        let mut dx_rhs = vec![rhs.clone()];
        let mut row: Vec<Poly> = (0..=order).map(|j| Poly::var(Coord::ux(j))).collect();
        let mut rows = Vec::new();
        for k in 1..=max_t_order.min(order) {
            let next: Vec<Poly> = row
                .iter()
                .take((order - k + 1) as usize)
                .map(|p| constrained_t_derivative(p, &mut dx_rhs))
                .collect();
            rows.push(next.clone());
            row = next;
        }
        ConstrainedSampler { rows, order }
    }

    pub fn jet(&self, free: &FreeJet) -> Result<JetPoint, JetError> {
        let base = free.base_jet();
        let mut jet = base.clone();
        for (k, row) in self.rows.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                jet.set_deriv(j as u8, k as u8 + 1, p.eval(&base)?);
            }
        }
        Ok(jet)
    }

    pub fn order(&self) -> u8 {
        self.order
    }
}

/// Free data of a constrained jet: base point, parameters, and the pure
/// x-derivative coordinates (index k holds ∂^k u/∂x^k, k = 0 is u).
#[derive(Clone, Debug)]
pub struct FreeJet {
    pub x: f64,
    pub t: f64,
    pub x_derivs: Vec<f64>,
    pub nu: Option<f64>,
    pub h: Option<f64>,
    pub tau: Option<f64>,
}

impl FreeJet {
    /// Uniform sample: x, t and the x-derivatives from [−1, 1],
    /// ν from [0.05, 1].
    pub fn sample(rng: &mut impl Rng, x_order: usize) -> FreeJet {
        FreeJet {
            x: rng.gen_range(-1.0..1.0),
            t: rng.gen_range(-1.0..1.0),
            x_derivs: (0..=x_order).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            nu: Some(rng.gen_range(0.05..1.0)),
            h: None,
            tau: None,
        }
    }

    pub fn with_steps(mut self, h: f64, tau: f64) -> Self {
        self.h = Some(h);
        self.tau = Some(tau);
        self
    }

    fn base_jet(&self) -> JetPoint {
        let mut jet = JetPoint::new(self.x, self.t, self.x_derivs[0]);
        for (k, &v) in self.x_derivs.iter().enumerate().skip(1) {
            jet.set_deriv(k as u8, 0, v);
        }
        jet.nu = self.nu;
        jet.h = self.h;
        jet.tau = self.tau;
        jet
    }
}

/// Builds a jet on the solution manifold of `u_t = rhs`: every coordinate
/// u_{(j,k)} with j + k ≤ `order` and k ≤ `max_t_order` is filled from the
/// free pure-x data by on-manifold differentiation. For many samples of the
/// same equation, build a `ConstrainedSampler` once instead.
pub fn constrained_jet(
    rhs: &Poly,
    free: &FreeJet,
    order: u8,
    max_t_order: u8,
) -> Result<JetPoint, JetError> {
    ConstrainedSampler::new(rhs, order, max_t_order).jet(free)
}

/// Sampler for an equation at the default orders: free x-derivatives wide
/// enough for two on-manifold t-differentiations.
pub fn equation_sampler(eq: &Equation, order: u8) -> (ConstrainedSampler, usize) {
    let rhs = eq.evolution_rhs();
    let r_order = rhs.max_derivative_order() as usize;
    let x_need = order as usize + 2 * r_order;
    (ConstrainedSampler::new(&rhs, order, 2), x_need)
}

/// Constrained jet for an equation, sampled at the spec's default orders.
pub fn sample_constrained_jet(
    eq: &Equation,
    rng: &mut impl Rng,
    order: u8,
) -> Result<JetPoint, JetError> {
    let (sampler, x_need) = equation_sampler(eq, order);
    sampler.jet(&FreeJet::sample(rng, x_need))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn burgers_is_cbkdv_with_matching_coefficients() {
        let nu = 0.37;
        let mut jet = JetPoint::new(0.2, 0.5, 0.8).with_nu(nu);
        jet.set_deriv(1, 0, 0.3);
        jet.set_deriv(0, 1, -0.4);
        jet.set_deriv(2, 0, 0.9);
        jet.set_deriv(3, 0, -0.2);
        let b = burgers_lhs().eval(&jet).unwrap();
        let c = cbkdv_lhs(&CbkdvCoefficients::burgers(nu)).eval(&jet).unwrap();
        assert!((b - c).abs() < 1e-15);
    }

    #[test]
    fn constrained_jet_satisfies_the_equation_and_its_consequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let eq = Equation::Burgers;
        let lhs = eq.lhs();
        for _ in 0..20 {
            let jet = sample_constrained_jet(&eq, &mut rng, 3).unwrap();
            assert!(lhs.eval(&jet).unwrap().abs() < 1e-13);
            // The x- and t-total derivatives of F also vanish on the manifold.
            for dir in [Direction::X, Direction::T] {
                let v = lhs.total_derivative(dir).eval(&jet).unwrap();
                assert!(v.abs() < 1e-12, "consequence in {dir:?}: {v}");
            }
        }
    }

    #[test]
    fn constrained_jet_matches_exact_solution_derivatives() {
        // u_tt from the constraint equals the analytic u_tt of the shock.
        use crate::exact::{ShockSolution, SmoothSolution};
        let s = ShockSolution::new(0.9, 0.4, 0.3, 0.1).unwrap();
        let (x, t) = (0.25, 0.6);
        let xj = s.x_jet(x, t, 6);
        let tj = s.t_jet(x, t, 2);
        let free = FreeJet {
            x,
            t,
            x_derivs: xj,
            nu: Some(s.nu),
            h: None,
            tau: None,
        };
        let rhs = Equation::Burgers.evolution_rhs();
        let jet = constrained_jet(&rhs, &free, 2, 2).unwrap();
        assert!((jet.deriv(0, 1).unwrap() - tj[1]).abs() < 1e-10);
        assert!((jet.deriv(0, 2).unwrap() - tj[2]).abs() < 1e-9);
    }
}
