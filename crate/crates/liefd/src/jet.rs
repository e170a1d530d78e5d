//! Jet-space coordinates, jet points, and an exact polynomial algebra over them.
//!
//! Symmetry operators, prolongation coefficients and modified-equation
//! expressions are all polynomials in the jet coordinates
//! `(x, t, u, u_x, u_t, u_xx, ..., h, tau, nu)`. Representing them as sparse
//! polynomials keeps partial and total derivatives exact, so invariance
//! residuals are limited only by round-off.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A single jet-space coordinate.
///
/// `U { dx, dt }` is the derivative coordinate ∂^(dx+dt) u / ∂x^dx ∂t^dt,
/// with `U { 0, 0 }` being u itself. Mixed derivatives are stored once per
/// sorted multi-index, so permuted derivative orders share a slot.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coord {
    X,
    T,
    U { dx: u8, dt: u8 },
    /// Mesh spacing h.
    H,
    /// Time step tau.
    Tau,
    /// Viscosity nu.
    Nu,
}

impl Coord {
    pub const fn u() -> Self {
        Coord::U { dx: 0, dt: 0 }
    }

    pub const fn ux(dx: u8) -> Self {
        Coord::U { dx, dt: 0 }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::X => write!(f, "x"),
            Coord::T => write!(f, "t"),
            Coord::U { dx: 0, dt: 0 } => write!(f, "u"),
            Coord::U { dx, dt } => {
                write!(f, "u_")?;
                for _ in 0..*dx {
                    write!(f, "x")?;
                }
                for _ in 0..*dt {
                    write!(f, "t")?;
                }
                Ok(())
            }
            Coord::H => write!(f, "h"),
            Coord::Tau => write!(f, "tau"),
            Coord::Nu => write!(f, "nu"),
        }
    }
}

/// Direction of a total derivative.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    X,
    T,
}

#[derive(Debug, Error, PartialEq)]
pub enum JetError {
    #[error("jet point does not carry coordinate {0} (insufficient jet order)")]
    MissingCoordinate(String),
    #[error("jet order {have} is below the required order {need}")]
    InsufficientOrder { have: u8, need: u8 },
}

/// A point of the jet space: base point, derivative coordinates up to some
/// order, and optional step-size/viscosity coordinates.
#[derive(Clone, Debug, Default)]
pub struct JetPoint {
    pub x: f64,
    pub t: f64,
    derivs: BTreeMap<(u8, u8), f64>,
    pub h: Option<f64>,
    pub tau: Option<f64>,
    pub nu: Option<f64>,
}

impl JetPoint {
    pub fn new(x: f64, t: f64, u: f64) -> Self {
        let mut derivs = BTreeMap::new();
        derivs.insert((0, 0), u);
        JetPoint {
            x,
            t,
            derivs,
            h: None,
            tau: None,
            nu: None,
        }
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn with_steps(mut self, h: f64, tau: f64) -> Self {
        self.h = Some(h);
        self.tau = Some(tau);
        self
    }

    /// Sets the derivative coordinate ∂^(dx+dt) u / ∂x^dx ∂t^dt.
    pub fn set_deriv(&mut self, dx: u8, dt: u8, value: f64) {
        self.derivs.insert((dx, dt), value);
    }

    pub fn deriv(&self, dx: u8, dt: u8) -> Option<f64> {
        self.derivs.get(&(dx, dt)).copied()
    }

    pub fn u(&self) -> f64 {
        self.derivs[&(0, 0)]
    }

    /// Highest total derivative order carried.
    pub fn order(&self) -> u8 {
        self.derivs.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn value(&self, coord: Coord) -> Result<f64, JetError> {
        let missing = || JetError::MissingCoordinate(coord.to_string());
        match coord {
            Coord::X => Ok(self.x),
            Coord::T => Ok(self.t),
            Coord::U { dx, dt } => self.deriv(dx, dt).ok_or_else(missing),
            Coord::H => self.h.ok_or_else(missing),
            Coord::Tau => self.tau.ok_or_else(missing),
            Coord::Nu => self.nu.ok_or_else(missing),
        }
    }
}

/// A monomial: product of coordinates raised to small integer powers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(BTreeMap<Coord, u8>);

impl Monomial {
    fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    fn var(c: Coord) -> Self {
        let mut m = BTreeMap::new();
        m.insert(c, 1);
        Monomial(m)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (&c, &p) in &other.0 {
            *m.entry(c).or_insert(0) += p;
        }
        Monomial(m)
    }

    fn eval(&self, jet: &JetPoint) -> Result<f64, JetError> {
        let mut v = 1.0;
        for (&c, &p) in &self.0 {
            v *= jet.value(c)?.powi(p as i32);
        }
        Ok(v)
    }
}

/// Sparse multivariate polynomial over jet coordinates.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly::zero();
        if c != 0.0 {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(c: Coord) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Monomial::var(c), 1.0);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        if s == 0.0 {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_var(&self, c: Coord) -> Poly {
        self.mul(&Poly::var(c))
    }

    /// Exact partial derivative with respect to one coordinate.
    pub fn partial(&self, coord: Coord) -> Poly {
        let mut out = Poly::zero();
        for (m, &c) in &self.terms {
            if let Some(&p) = m.0.get(&coord) {
                let mut reduced = m.0.clone();
                if p == 1 {
                    reduced.remove(&coord);
                } else {
                    reduced.insert(coord, p - 1);
                }
                out.add_term(Monomial(reduced), c * p as f64);
            }
        }
        out
    }

    /// Coordinates this polynomial actually depends on.
    pub fn coords(&self) -> Vec<Coord> {
        let mut set = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for &c in m.0.keys() {
                set.insert(c);
            }
        }
        set.into_iter().collect()
    }

    /// Highest derivative-coordinate order appearing in the polynomial.
    pub fn max_derivative_order(&self) -> u8 {
        self.coords()
            .iter()
            .filter_map(|c| match c {
                Coord::U { dx, dt } => Some(dx + dt),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Total derivative D/Dx or D/Dt on the full jet space:
    /// D_k P = ∂P/∂k + Σ_J u_{J+k} ∂P/∂u_J over every derivative coordinate
    /// J the polynomial depends on.
    pub fn total_derivative(&self, dir: Direction) -> Poly {
        let base = match dir {
            Direction::X => Coord::X,
            Direction::T => Coord::T,
        };
        let mut out = self.partial(base);
        for coord in self.coords() {
            if let Coord::U { dx, dt } = coord {
                let bumped = match dir {
                    Direction::X => Coord::U { dx: dx + 1, dt },
                    Direction::T => Coord::U { dx, dt: dt + 1 },
                };
                out = out.add(&self.partial(coord).mul_var(bumped));
            }
        }
        out
    }

    pub fn eval(&self, jet: &JetPoint) -> Result<f64, JetError> {
        let mut v = 0.0;
        for (m, &c) in &self.terms {
            v += c * m.eval(jet)?;
        }
        Ok(v)
    }
}

/// Evaluates the total derivative of `expr` at a jet point.
///
/// The jet must carry every coordinate one derivative order above what
/// `expr` depends on in the chosen direction.
pub fn total_derivative(expr: &Poly, jet: &JetPoint, dir: Direction) -> Result<f64, JetError> {
    expr.total_derivative(dir).eval(jet)
}

/// Finite-difference total derivative for black-box jet functions.
///
/// Partials of `f` are taken by central differences with step
/// `1e-6 * max(1, |coordinate|)`; used as an independent cross-check of the
/// polynomial route and for expressions not available in closed form.
pub fn total_derivative_fd<F>(f: F, jet: &JetPoint, dir: Direction) -> Result<f64, JetError>
where
    F: Fn(&JetPoint) -> Result<f64, JetError>,
{
    let partial = |coord: Coord| -> Result<f64, JetError> {
        let v0 = jet.value(coord)?;
        let step = 1e-6 * v0.abs().max(1.0);
        let mut hi = jet.clone();
        let mut lo = jet.clone();
        set_coord(&mut hi, coord, v0 + step);
        set_coord(&mut lo, coord, v0 - step);
        Ok((f(&hi)? - f(&lo)?) / (2.0 * step))
    };

    let base = match dir {
        Direction::X => Coord::X,
        Direction::T => Coord::T,
    };
    let mut out = partial(base)?;
    // Chain over every derivative coordinate the jet carries below top order.
    let coords: Vec<(u8, u8)> = jet.derivs.keys().copied().collect();
    let top = jet.order();
    for (dx, dt) in coords {
        if dx + dt == top {
            continue;
        }
        let bumped = match dir {
            Direction::X => (dx + 1, dt),
            Direction::T => (dx, dt + 1),
        };
        let chained = jet
            .deriv(bumped.0, bumped.1)
            .ok_or_else(|| JetError::MissingCoordinate(Coord::U { dx: bumped.0, dt: bumped.1 }.to_string()))?;
        out += chained * partial(Coord::U { dx, dt })?;
    }
    Ok(out)
}

fn set_coord(jet: &mut JetPoint, coord: Coord, v: f64) {
    match coord {
        Coord::X => jet.x = v,
        Coord::T => jet.t = v,
        Coord::U { dx, dt } => jet.set_deriv(dx, dt, v),
        Coord::H => jet.h = Some(v),
        Coord::Tau => jet.tau = Some(v),
        Coord::Nu => jet.nu = Some(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_jet() -> JetPoint {
        let mut jet = JetPoint::new(0.7, -0.3, 0.4).with_nu(0.2);
        let vals = [
            (1, 0, 0.9),
            (0, 1, -0.5),
            (2, 0, 0.3),
            (1, 1, 0.8),
            (0, 2, -0.1),
            (3, 0, 0.6),
            (2, 1, -0.7),
            (1, 2, 0.2),
            (0, 3, 0.5),
        ];
        for (dx, dt, v) in vals {
            jet.set_deriv(dx, dt, v);
        }
        jet
    }

    #[test]
    fn total_derivative_of_u_is_the_derivative_coordinate() {
        let jet = sample_jet();
        let u = Poly::var(Coord::u());
        assert_eq!(total_derivative(&u, &jet, Direction::X).unwrap(), 0.9);
        assert_eq!(total_derivative(&u, &jet, Direction::T).unwrap(), -0.5);
    }

    #[test]
    fn total_derivative_of_u_squared_is_chain_rule() {
        let jet = sample_jet();
        let u2 = Poly::var(Coord::u()).mul(&Poly::var(Coord::u()));
        let got = total_derivative(&u2, &jet, Direction::X).unwrap();
        assert!((got - 2.0 * 0.4 * 0.9).abs() < 1e-15);
    }

    #[test]
    fn total_derivative_of_g1_expands_by_hand() {
        // g1 = -u u_x + nu u_xx; D_x g1 = -u_x^2 - u u_xx + nu u_xxx.
        let jet = sample_jet();
        let u = Poly::var(Coord::u());
        let ux = Poly::var(Coord::ux(1));
        let uxx = Poly::var(Coord::ux(2));
        let g1 = u.mul(&ux).scale(-1.0).add(&uxx.mul_var(Coord::Nu));
        let got = total_derivative(&g1, &jet, Direction::X).unwrap();
        let want = -0.9 * 0.9 - 0.4 * 0.3 + 0.2 * 0.6;
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn polynomial_and_fd_total_derivatives_agree() {
        let jet = sample_jet();
        let u = Poly::var(Coord::u());
        let ux = Poly::var(Coord::ux(1));
        let uxx = Poly::var(Coord::ux(2));
        // Nonlinear mix exercising several partials.
        let expr = u.mul(&u).mul(&ux).add(&uxx.mul(&ux)).add(&Poly::var(Coord::X).mul(&u));
        for dir in [Direction::X, Direction::T] {
            let exact = total_derivative(&expr, &jet, dir).unwrap();
            let fd = total_derivative_fd(|j| expr.eval(j), &jet, dir).unwrap();
            assert!(
                (exact - fd).abs() < 1e-8 * exact.abs().max(1.0),
                "dir {dir:?}: exact {exact} vs fd {fd}"
            );
        }
    }

    #[test]
    fn missing_coordinate_is_reported() {
        let jet = JetPoint::new(0.0, 0.0, 1.0);
        let ux = Poly::var(Coord::ux(1));
        assert!(matches!(
            ux.eval(&jet),
            Err(JetError::MissingCoordinate(_))
        ));
    }

    #[test]
    fn mixed_derivative_coordinates_share_storage() {
        let mut jet = JetPoint::new(0.0, 0.0, 1.0);
        jet.set_deriv(1, 1, 2.5);
        // u_xt and u_tx are the same slot by construction.
        assert_eq!(jet.deriv(1, 1), Some(2.5));
        assert_eq!(jet.order(), 2);
    }
}
