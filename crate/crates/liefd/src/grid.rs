//! Uniform 1-D grids, grid functions, and the compact difference-operator
//! algebra (δ, μ, δ±, E^α and their composites) shared by every scheme.
//!
//! All operators here are UNDIVIDED: they are pure index arithmetic and the
//! powers of 1/h appear explicitly in the scheme formulas. Half-node values
//! u_{i+1/2} are two-point arithmetic means, so every composite operator
//! (δ², μδ, μδ³, δ⁴) lands back on integer nodes.

use thiserror::Error;

/// Number of ghost nodes each side; δ⁴ is the widest stencil (5 points).
pub const GHOST: usize = 2;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("mesh spacing must be positive, got {0}")]
    NonPositiveSpacing(f64),
    #[error("grid needs at least 5 points (widest stencil is 5 wide), got {0}")]
    TooFewPoints(usize),
    #[error("stencil exceeds a DirichletExact boundary and no boundary data is registered")]
    BoundaryDataMissing,
    #[error("value length {got} does not match grid size {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("shift by {0} half-steps exceeds the registered ghost data")]
    ShiftTooWide(i32),
    #[error("accuracy check needs at least 3 strictly decreasing spacings")]
    BadSpacingSequence,
    #[error("operator error below round-off floor at h={h}; slope unreliable")]
    DegenerateSample { h: f64 },
}

/// Boundary handling policy of a grid.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryPolicy {
    Periodic,
    /// Ghost values are filled from a registered exact solution.
    DirichletExact,
}

/// Ghost values for a DirichletExact boundary: two nodes beyond each end,
/// ordered outward-in on the left (`left[0]` is u_{-2}, `left[1]` is u_{-1})
/// and inward-out on the right (`right[0]` is u_n, `right[1]` is u_{n+1}).
#[derive(Clone, Copy, Debug, Default)]
pub struct DirichletGhosts {
    pub left: [f64; 2],
    pub right: [f64; 2],
}

/// Uniform 1-D mesh. `origin_offset` accumulates the Galilean shift ε·t, so
/// node i sits at `x_min + origin_offset + i·h`.
#[derive(Clone, Debug)]
pub struct Grid1D {
    pub x_min: f64,
    pub h: f64,
    pub n_points: usize,
    pub origin_offset: f64,
    pub boundary: BoundaryPolicy,
}

impl Grid1D {
    pub fn new(
        x_min: f64,
        h: f64,
        n_points: usize,
        boundary: BoundaryPolicy,
    ) -> Result<Self, GridError> {
        if !(h > 0.0) {
            return Err(GridError::NonPositiveSpacing(h));
        }
        if n_points < 5 {
            return Err(GridError::TooFewPoints(n_points));
        }
        Ok(Grid1D {
            x_min,
            h,
            n_points,
            origin_offset: 0.0,
            boundary,
        })
    }

    /// Coordinate of node i; i may be negative or beyond the last node
    /// (ghost positions).
    pub fn node(&self, i: isize) -> f64 {
        self.x_min + self.origin_offset + i as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points as isize).map(|i| self.node(i))
    }
}

/// One time level of a grid function.
#[derive(Clone, Debug)]
pub struct State {
    pub values: Vec<f64>,
    pub time: f64,
    pub grid: Grid1D,
}

impl State {
    pub fn new(values: Vec<f64>, time: f64, grid: Grid1D) -> Result<Self, GridError> {
        if values.len() != grid.n_points {
            return Err(GridError::LengthMismatch {
                got: values.len(),
                expected: grid.n_points,
            });
        }
        Ok(State { values, time, grid })
    }

    /// Index of the first non-finite value, if any. A non-finite value means
    /// blow-up and is reported by the run driver, never propagated silently.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }
}

/// Scheme parameters and the derived dimensionless numbers used by the
/// linearized analysis: CFL = aτ/h, S = ντ/h², S* = (ν + a·h·CFL/2)·τ/h²,
/// Re_h = CFL/S = a·h/ν.
#[derive(Clone, Copy, Debug)]
pub struct SchemeParams {
    pub nu: f64,
    pub h: f64,
    pub tau: f64,
    pub ref_velocity: f64,
}

impl SchemeParams {
    pub fn cfl(&self) -> f64 {
        self.ref_velocity * self.tau / self.h
    }

    pub fn s(&self) -> f64 {
        self.nu * self.tau / (self.h * self.h)
    }

    pub fn s_star(&self) -> f64 {
        (self.nu + self.ref_velocity * self.h * self.cfl() / 2.0) * self.tau / (self.h * self.h)
    }

    /// Cell Reynolds number a·h/ν; defined only for ν > 0.
    pub fn re_h(&self) -> Option<f64> {
        (self.nu > 0.0).then(|| self.ref_velocity * self.h / self.nu)
    }
}

/// Node values extended by `GHOST` ghost nodes on each side.
///
/// `at(i)` accepts i in `-2..n+2`; `half(i)` is the two-point mean at the
/// half node i+1/2 and accepts i in `-2..n+1`.
pub(crate) struct Ext {
    v: Vec<f64>,
    n: usize,
}

impl Ext {
    pub fn new(
        values: &[f64],
        grid: &Grid1D,
        ghosts: Option<&DirichletGhosts>,
    ) -> Result<Self, GridError> {
        if values.len() != grid.n_points {
            return Err(GridError::LengthMismatch {
                got: values.len(),
                expected: grid.n_points,
            });
        }
        let n = values.len();
        let mut v = Vec::with_capacity(n + 2 * GHOST);
        match grid.boundary {
            BoundaryPolicy::Periodic => {
                v.push(values[n - 2]);
                v.push(values[n - 1]);
                v.extend_from_slice(values);
                v.push(values[0]);
                v.push(values[1]);
            }
            BoundaryPolicy::DirichletExact => {
                let g = ghosts.ok_or(GridError::BoundaryDataMissing)?;
                v.push(g.left[0]);
                v.push(g.left[1]);
                v.extend_from_slice(values);
                v.push(g.right[0]);
                v.push(g.right[1]);
            }
        }
        Ok(Ext { v, n })
    }

    #[inline]
    pub fn at(&self, i: isize) -> f64 {
        self.v[(i + GHOST as isize) as usize]
    }

    #[inline]
    pub fn half(&self, i: isize) -> f64 {
        0.5 * (self.at(i) + self.at(i + 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Maps node and ghost values through a pointwise function, e.g. to form
    /// the flux u²/2 with consistent ghost data.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Ext {
        Ext {
            v: self.v.iter().map(|&x| f(x)).collect(),
            n: self.n,
        }
    }
}

fn node_op(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
    f: impl Fn(&Ext, isize) -> f64,
) -> Result<Vec<f64>, GridError> {
    let e = Ext::new(values, grid, ghosts)?;
    Ok((0..e.n() as isize).map(|i| f(&e, i)).collect())
}

/// Shift operator E^α for half-integer α, counted in half-steps.
///
/// Even `half_steps` rotate node values; odd `half_steps` land on the
/// staggered grid, where values come from the two-point mean interpolant.
pub fn shift(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
    half_steps: i32,
) -> Result<Vec<f64>, GridError> {
    let whole = half_steps.div_euclid(2);
    let staggered = half_steps.rem_euclid(2) == 1;
    let reach = whole.abs() + if staggered { 1 } else { 0 };
    if grid.boundary == BoundaryPolicy::DirichletExact && reach > GHOST as i32 {
        return Err(GridError::ShiftTooWide(half_steps));
    }
    if grid.boundary == BoundaryPolicy::Periodic {
        // Arbitrary rotations are fine on a periodic grid.
        let n = values.len() as isize;
        let wrap = |i: isize| values[(i.rem_euclid(n)) as usize];
        return Ok((0..n)
            .map(|i| {
                let j = i + whole as isize;
                if staggered {
                    0.5 * (wrap(j) + wrap(j + 1))
                } else {
                    wrap(j)
                }
            })
            .collect());
    }
    node_op(values, grid, ghosts, |e, i| {
        let j = i + whole as isize;
        if staggered {
            e.half(j)
        } else {
            e.at(j)
        }
    })
}

/// δu on the staggered grid: entry i holds u_{i+1} − u_i, the undivided
/// first difference at the half node i+1/2.
pub fn delta(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| e.at(i + 1) - e.at(i))
}

/// μu on the staggered grid: entry i holds (u_i + u_{i+1})/2 = u_{i+1/2}.
pub fn mu(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| e.half(i))
}

/// δ⁺u_i = u_{i+1} − u_i.
pub fn delta_plus(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| e.at(i + 1) - e.at(i))
}

/// δ⁻u_i = u_i − u_{i−1}.
pub fn delta_minus(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| e.at(i) - e.at(i - 1))
}

/// δ²u_i = u_{i+1} − 2u_i + u_{i−1}.
pub fn delta_sq(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| {
        e.at(i + 1) - 2.0 * e.at(i) + e.at(i - 1)
    })
}

/// μδu_i = (u_{i+1} − u_{i−1})/2.
pub fn mu_delta(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| 0.5 * (e.at(i + 1) - e.at(i - 1)))
}

/// δ⁴u_i = u_{i+2} − 4u_{i+1} + 6u_i − 4u_{i−1} + u_{i−2}.
pub fn delta4(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| {
        e.at(i + 2) - 4.0 * e.at(i + 1) + 6.0 * e.at(i) - 4.0 * e.at(i - 1) + e.at(i - 2)
    })
}

/// μδ³u_i = (u_{i+2} − 2u_{i+1} + 2u_{i−1} − u_{i−2})/2.
pub fn mu_delta3(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
) -> Result<Vec<f64>, GridError> {
    node_op(values, grid, ghosts, |e, i| {
        0.5 * (e.at(i + 2) - 2.0 * e.at(i + 1) + 2.0 * e.at(i - 1) - e.at(i - 2))
    })
}

/// δ^k for k = 2, 3, 4. Even powers land on integer nodes; δ³ lands on the
/// staggered grid (entry i is the value at i+1/2).
pub fn delta_pow(
    values: &[f64],
    grid: &Grid1D,
    ghosts: Option<&DirichletGhosts>,
    k: u8,
) -> Result<Vec<f64>, GridError> {
    match k {
        2 => delta_sq(values, grid, ghosts),
        3 => node_op(values, grid, ghosts, |e, i| {
            // δ applied to δ²u: difference of neighbouring second differences.
            let d2 = |j: isize| e.at(j + 1) - 2.0 * e.at(j) + e.at(j - 1);
            d2(i + 1) - d2(i)
        }),
        4 => delta4(values, grid, ghosts),
        _ => panic!("delta_pow supports k in {{2, 3, 4}}, got {k}"),
    }
}

/// Discrete L² error sqrt(h · Σ_i (u_i − u_exact(x_i, t))²).
pub fn l2_error(state: &State, exact: impl Fn(f64, f64) -> f64) -> f64 {
    let g = &state.grid;
    let sum: f64 = state
        .values
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let d = u - exact(g.node(i as isize), state.time);
            d * d
        })
        .sum();
    (g.h * sum).sqrt()
}

/// Divided operators whose convergence order the accuracy check measures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DividedOp {
    /// μδ/h, second-order first derivative.
    MuDelta,
    /// δ²/h², second-order second derivative.
    DeltaSq,
    /// (μδ − μδ³/6)/h, fourth-order first derivative.
    FourthOrderFirst,
    /// (δ² − δ⁴/12)/h², fourth-order second derivative.
    FourthOrderSecond,
}

impl DividedOp {
    pub fn derivative_order(self) -> u32 {
        match self {
            DividedOp::MuDelta | DividedOp::FourthOrderFirst => 1,
            DividedOp::DeltaSq | DividedOp::FourthOrderSecond => 2,
        }
    }

    /// Applies the operator to samples of `f` around `x0` at spacing `h` and
    /// returns the divided value at `x0`.
    fn apply_at(self, f: &dyn Fn(f64) -> f64, x0: f64, h: f64) -> f64 {
        let grid = Grid1D::new(x0 - 4.0 * h, h, 9, BoundaryPolicy::DirichletExact).unwrap();
        let values: Vec<f64> = (0..9).map(|i| f(grid.node(i))).collect();
        let ghosts = DirichletGhosts {
            left: [f(grid.node(-2)), f(grid.node(-1))],
            right: [f(grid.node(9)), f(grid.node(10))],
        };
        let center = 4;
        let out = match self {
            DividedOp::MuDelta => {
                let v = mu_delta(&values, &grid, Some(&ghosts)).unwrap();
                v[center] / h
            }
            DividedOp::DeltaSq => {
                let v = delta_sq(&values, &grid, Some(&ghosts)).unwrap();
                v[center] / (h * h)
            }
            DividedOp::FourthOrderFirst => {
                let a = mu_delta(&values, &grid, Some(&ghosts)).unwrap();
                let b = mu_delta3(&values, &grid, Some(&ghosts)).unwrap();
                (a[center] - b[center] / 6.0) / h
            }
            DividedOp::FourthOrderSecond => {
                let a = delta_sq(&values, &grid, Some(&ghosts)).unwrap();
                let b = delta4(&values, &grid, Some(&ghosts)).unwrap();
                (a[center] - b[center] / 12.0) / (h * h)
            }
        };
        out
    }
}

/// Least-squares slope of log(error) against log(h) for a divided operator
/// applied to a smooth function with known derivative.
///
/// Errors out with `DegenerateSample` when any sampled error sits below
/// 100× machine epsilon of the derivative scale (slope would be noise).
pub fn operator_accuracy_check(
    op: DividedOp,
    f: &dyn Fn(f64) -> f64,
    exact_derivative: &dyn Fn(f64) -> f64,
    x0: f64,
    h_sequence: &[f64],
) -> Result<f64, GridError> {
    if h_sequence.len() < 3 || h_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(GridError::BadSpacingSequence);
    }
    let target = exact_derivative(x0);
    let floor = 100.0 * f64::EPSILON * target.abs().max(1.0);
    let mut pts = Vec::with_capacity(h_sequence.len());
    for &h in h_sequence {
        let err = (op.apply_at(f, x0, h) - target).abs();
        if err < floor {
            return Err(GridError::DegenerateSample { h });
        }
        pts.push((h.ln(), err.ln()));
    }
    Ok(least_squares_slope(&pts))
}

/// Slope of the least-squares line through (x, y) points.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgrid(n: usize) -> Grid1D {
        Grid1D::new(0.0, 0.5, n, BoundaryPolicy::Periodic).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            Grid1D::new(0.0, 0.0, 16, BoundaryPolicy::Periodic),
            Err(GridError::NonPositiveSpacing(_))
        ));
        assert!(matches!(
            Grid1D::new(0.0, 0.1, 4, BoundaryPolicy::Periodic),
            Err(GridError::TooFewPoints(4))
        ));
    }

    #[test]
    fn node_coordinates_include_origin_offset() {
        let mut g = pgrid(8);
        g.origin_offset = 0.25;
        assert_eq!(g.node(3), 0.25 + 1.5);
    }

    #[test]
    fn shift_rotates_on_periodic_grid() {
        let g = Grid1D::new(0.0, 1.0, 5, BoundaryPolicy::Periodic).unwrap();
        let u = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(shift(&u, &g, None, 2).unwrap(), vec![2.0, 3.0, 4.0, 5.0, 1.0]);
        assert_eq!(shift(&u, &g, None, 0).unwrap(), u.to_vec());
    }

    #[test]
    fn half_shift_is_staggered_average() {
        let g = Grid1D::new(0.0, 1.0, 5, BoundaryPolicy::Periodic).unwrap();
        let u = [0.0, 1.0, 4.0, 9.0, 16.0];
        let got = shift(&u, &g, None, 1).unwrap();
        assert_eq!(got, vec![0.5, 2.5, 6.5, 12.5, 8.0]);
    }

    #[test]
    fn operators_annihilate_constants() {
        let g = pgrid(8);
        let u = vec![3.25; 8];
        for v in [
            delta(&u, &g, None).unwrap(),
            mu_delta(&u, &g, None).unwrap(),
            delta_sq(&u, &g, None).unwrap(),
            delta4(&u, &g, None).unwrap(),
            mu_delta3(&u, &g, None).unwrap(),
            delta_plus(&u, &g, None).unwrap(),
            delta_minus(&u, &g, None).unwrap(),
            delta_pow(&u, &g, None, 3).unwrap(),
        ] {
            assert!(v.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn linear_and_quadratic_profiles() {
        // Dirichlet data so u_i = i and u_i = i² extend exactly.
        let g = Grid1D::new(0.0, 1.0, 8, BoundaryPolicy::DirichletExact).unwrap();
        let lin: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let ghosts_lin = DirichletGhosts {
            left: [-2.0, -1.0],
            right: [8.0, 9.0],
        };
        assert!(delta_plus(&lin, &g, Some(&ghosts_lin))
            .unwrap()
            .iter()
            .all(|&x| x == 1.0));
        assert!(delta_sq(&lin, &g, Some(&ghosts_lin))
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));

        let quad: Vec<f64> = (0..8).map(|i| (i * i) as f64).collect();
        let ghosts_quad = DirichletGhosts {
            left: [4.0, 1.0],
            right: [64.0, 81.0],
        };
        assert!(delta_pow(&quad, &g, Some(&ghosts_quad), 2)
            .unwrap()
            .iter()
            .all(|&x| x == 2.0));
        assert!(delta4(&quad, &g, Some(&ghosts_quad))
            .unwrap()
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn missing_dirichlet_data_is_an_error() {
        let g = Grid1D::new(0.0, 1.0, 8, BoundaryPolicy::DirichletExact).unwrap();
        let u = vec![0.0; 8];
        assert_eq!(delta_sq(&u, &g, None), Err(GridError::BoundaryDataMissing));
    }

    #[test]
    fn l2_error_of_exact_data_is_zero_and_offset_scales() {
        let g = Grid1D::new(-1.0, 2.0 / 8.0, 8, BoundaryPolicy::Periodic).unwrap();
        let f = |x: f64, _t: f64| x.sin();
        let values: Vec<f64> = g.nodes().map(|x| f(x, 0.0)).collect();
        let state = State::new(values, 0.0, g.clone()).unwrap();
        assert_eq!(l2_error(&state, f), 0.0);

        // Constant offset c over domain length L gives |c|·sqrt(L).
        let c = 0.3;
        let shifted: Vec<f64> = state.values.iter().map(|v| v + c).collect();
        let state2 = State::new(shifted, 0.0, state.grid.clone()).unwrap();
        let want = c * (8.0 * state2.grid.h).sqrt();
        assert!((l2_error(&state2, f) - want).abs() < 1e-14);
    }

    #[test]
    fn fourth_order_operator_is_exact_on_cubics_hence_degenerate() {
        let f = |x: f64| 1.0 + x + x * x;
        let d2 = |_x: f64| 2.0;
        let hs = [0.1, 0.05, 0.025];
        let got = operator_accuracy_check(DividedOp::FourthOrderSecond, &f, &d2, 0.3, &hs);
        assert!(matches!(got, Err(GridError::DegenerateSample { .. })));
    }

    #[test]
    fn accuracy_orders_on_sin_and_exp() {
        let hs: Vec<f64> = (4..=9).map(|k| 2f64.powi(-k)).collect();
        let sin = |x: f64| x.sin();
        let cos = |x: f64| x.cos();
        let neg_sin = |x: f64| -x.sin();
        let exp = |x: f64| x.exp();

        let s = operator_accuracy_check(DividedOp::MuDelta, &sin, &cos, 0.4, &hs).unwrap();
        assert!((s - 2.0).abs() < 0.2, "mu-delta slope {s}");
        let s = operator_accuracy_check(DividedOp::DeltaSq, &sin, &neg_sin, 0.4, &hs).unwrap();
        assert!((s - 2.0).abs() < 0.2, "delta-sq slope {s}");
        let s =
            operator_accuracy_check(DividedOp::FourthOrderFirst, &sin, &cos, 0.4, &hs).unwrap();
        assert!((s - 4.0).abs() < 0.2, "fourth-order first slope {s}");
        // The second-derivative stencil amplifies value round-off by 1/h²,
        // so its O(h⁴) error sinks under the noise floor below h = 2⁻⁶; the
        // study stops there.
        let hs_coarse: Vec<f64> = (4..=6).map(|k| 2f64.powi(-k)).collect();
        let s = operator_accuracy_check(DividedOp::FourthOrderSecond, &exp, &exp, 0.4, &hs_coarse)
            .unwrap();
        assert!((s - 4.0).abs() < 0.2, "fourth-order second slope {s}");
    }

    proptest! {
        #[test]
        fn mu_delta_is_mean_of_one_sided_differences(
            u in proptest::collection::vec(-100.0f64..100.0, 8..32)
        ) {
            let g = pgrid(u.len());
            let md = mu_delta(&u, &g, None).unwrap();
            let dp = delta_plus(&u, &g, None).unwrap();
            let dm = delta_minus(&u, &g, None).unwrap();
            for i in 0..u.len() {
                let mean = 0.5 * (dp[i] + dm[i]);
                prop_assert!((md[i] - mean).abs() <= 1e-12 * md[i].abs().max(1.0));
            }
        }

        #[test]
        fn delta_sq_composes_from_one_sided_differences(
            u in proptest::collection::vec(-100.0f64..100.0, 8..32)
        ) {
            let g = pgrid(u.len());
            let d2 = delta_sq(&u, &g, None).unwrap();
            let dm = delta_minus(&u, &g, None).unwrap();
            let composed = delta_plus(&dm, &g, None).unwrap();
            for i in 0..u.len() {
                prop_assert!((d2[i] - composed[i]).abs() <= 1e-12 * d2[i].abs().max(1.0));
            }
        }

        #[test]
        fn periodic_forward_differences_telescope(
            u in proptest::collection::vec(-10.0f64..10.0, 8..64)
        ) {
            let g = pgrid(u.len());
            let dp = delta_plus(&u, &g, None).unwrap();
            let total: f64 = dp.iter().sum();
            let max = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(total.abs() <= u.len() as f64 * f64::EPSILON * max.max(1.0));
        }
    }
}
