//! Time stepping: FTCS, Lax–Wendroff, Crank–Nicolson and the semi-invariant
//! scheme, plus a trajectory driver with per-step observers.

use std::fmt;

use thiserror::Error;

use crate::exact::Solution;
use crate::grid::{DirichletGhosts, Ext, Grid1D, GridError, SchemeParams, State};
use crate::linalg::{solve_cyclic_const, solve_tridiagonal_const, LinalgError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchemeId {
    Ftcs,
    LaxWendroff,
    CrankNicolson,
    SemiInvariant,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::Ftcs,
        SchemeId::LaxWendroff,
        SchemeId::CrankNicolson,
        SchemeId::SemiInvariant,
    ];

    pub fn parse(s: &str) -> Option<SchemeId> {
        match s {
            "ftcs" => Some(SchemeId::Ftcs),
            "lw" => Some(SchemeId::LaxWendroff),
            "cn" => Some(SchemeId::CrankNicolson),
            "semi" => Some(SchemeId::SemiInvariant),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            SchemeId::Ftcs => "ftcs",
            SchemeId::LaxWendroff => "lw",
            SchemeId::CrankNicolson => "cn",
            SchemeId::SemiInvariant => "semi",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Closure rule for the artificial-viscosity coefficient Ω of the
/// semi-invariant scheme, evaluated at half nodes with the two-point mean.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum OmegaRule {
    /// Ω = τ u²/(2h²), which makes C = τ/2·u² − h²Ω vanish identically.
    CancelLeadingError,
    /// Ω = τ u²/(2h²) − c0·|δu|/h·(1/h), adding the Galilean-invariant
    /// dissipation C = c0·h·|δu/h| (|δu| is unchanged under u → u + ε).
    Custom(f64),
}

impl OmegaRule {
    /// Ω at a half node from the mean value and the undivided jump there.
    pub fn at_half(&self, u_half: f64, du: f64, params: &SchemeParams) -> f64 {
        let h2 = params.h * params.h;
        let base = params.tau * u_half * u_half / (2.0 * h2);
        match *self {
            OmegaRule::CancelLeadingError => base,
            OmegaRule::Custom(c0) => base - c0 * du.abs() / h2,
        }
    }
}

/// Ghost data for one step. Explicit schemes use the old level only;
/// Crank–Nicolson also needs the new level.
#[derive(Clone, Copy, Debug)]
pub enum StepBoundary {
    Periodic,
    Dirichlet {
        old: DirichletGhosts,
        new: DirichletGhosts,
    },
}

impl StepBoundary {
    fn old_ghosts(&self) -> Option<&DirichletGhosts> {
        match self {
            StepBoundary::Periodic => None,
            StepBoundary::Dirichlet { old, .. } => Some(old),
        }
    }

    fn new_ghosts(&self) -> Option<&DirichletGhosts> {
        match self {
            StepBoundary::Periodic => None,
            StepBoundary::Dirichlet { new, .. } => Some(new),
        }
    }
}

/// Supplies ghost data ahead of each step of a run.
pub enum BoundaryProvider<'a> {
    Periodic,
    /// Ghost values filled from an exact solution at the grid's ghost
    /// coordinates (DirichletExact policy).
    ExactSolution(&'a dyn Solution),
}

impl BoundaryProvider<'_> {
    pub fn step_boundary(&self, grid: &Grid1D, t_old: f64, t_new: f64) -> StepBoundary {
        match self {
            BoundaryProvider::Periodic => StepBoundary::Periodic,
            BoundaryProvider::ExactSolution(sol) => {
                let n = grid.n_points as isize;
                let ghosts = |t: f64| DirichletGhosts {
                    left: [sol.eval(grid.node(-2), t), sol.eval(grid.node(-1), t)],
                    right: [sol.eval(grid.node(n), t), sol.eval(grid.node(n + 1), t)],
                };
                StepBoundary::Dirichlet {
                    old: ghosts(t_old),
                    new: ghosts(t_new),
                }
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("Picard iteration did not converge within {iterations} iterations (last change {last_change:e})")]
    ConvergenceFailure { last_change: f64, iterations: usize },
    #[error("a run needs at least one step")]
    ZeroSteps,
}

/// Forward-time centered-space step:
/// u^{n+1}_i = u^n_i − τ·[ μδ(u²/2)_i/h − ν·δ²u_i/h² ].
pub fn step_ftcs(
    state: &State,
    params: &SchemeParams,
    boundary: &StepBoundary,
) -> Result<State, SchemeError> {
    let grid = &state.grid;
    let e = Ext::new(&state.values, grid, boundary.old_ghosts())?;
    let w = e.map(|u| u * u / 2.0);
    let (h, tau, nu) = (params.h, params.tau, params.nu);
    let values = (0..grid.n_points as isize)
        .map(|i| {
            let conv = 0.5 * (w.at(i + 1) - w.at(i - 1)) / h;
            let visc = nu * (e.at(i + 1) - 2.0 * e.at(i) + e.at(i - 1)) / (h * h);
            e.at(i) - tau * (conv - visc)
        })
        .collect();
    Ok(State {
        values,
        time: state.time + tau,
        grid: grid.clone(),
    })
}

/// Lax–Wendroff step: the FTCS update plus the second-order correction
/// A^n_i (convective pair, ν²τ/2·δ⁴/h⁴ part, E^{±1/2} viscous pair, and
/// ντ/2·μδ³/h³ flux part), with half-node values as two-point means.
pub fn step_lax_wendroff(
    state: &State,
    params: &SchemeParams,
    boundary: &StepBoundary,
) -> Result<State, SchemeError> {
    let grid = &state.grid;
    let e = Ext::new(&state.values, grid, boundary.old_ghosts())?;
    let w = e.map(|u| u * u / 2.0);
    let (h, tau, nu) = (params.h, params.tau, params.nu);
    let h2 = h * h;
    let values = (0..grid.n_points as isize)
        .map(|i| {
            let conv = 0.5 * (w.at(i + 1) - w.at(i - 1)) / h;
            let visc = nu * (e.at(i + 1) - 2.0 * e.at(i) + e.at(i - 1)) / h2;
            // δ² of the half-node array, centered at half node i+1/2.
            let d2h = |j: isize| e.half(j + 1) - 2.0 * e.half(j) + e.half(j - 1);
            let d4 = e.at(i + 2) - 4.0 * e.at(i + 1) + 6.0 * e.at(i) - 4.0 * e.at(i - 1)
                + e.at(i - 2);
            let md3w = 0.5 * (w.at(i + 2) - 2.0 * w.at(i + 1) + 2.0 * w.at(i - 1) - w.at(i - 2));
            let a = -tau / (2.0 * h2)
                * (e.half(i) * (w.at(i + 1) - w.at(i)) - e.half(i - 1) * (w.at(i) - w.at(i - 1)))
                - nu * nu * tau / 2.0 * d4 / (h2 * h2)
                + nu * tau / (2.0 * h2 * h)
                    * (e.half(i) * d2h(i) - e.half(i - 1) * d2h(i - 1))
                + nu * tau / (2.0 * h2 * h) * md3w;
            e.at(i) - tau * (conv - visc + a)
        })
        .collect();
    Ok(State {
        values,
        time: state.time + tau,
        grid: grid.clone(),
    })
}

/// Crank–Nicolson step with trapezoidal weighting, solved by Picard
/// iteration: the flux u²/2 at the new level is lagged to the previous
/// iterate and the remaining linear system is solved exactly each pass.
pub fn step_crank_nicolson(
    state: &State,
    params: &SchemeParams,
    boundary: &StepBoundary,
    tol: f64,
    max_iter: usize,
) -> Result<State, SchemeError> {
    assert!(tol > 0.0 && max_iter >= 1, "tol > 0 and max_iter >= 1");
    let grid = &state.grid;
    let n = grid.n_points;
    let e = Ext::new(&state.values, grid, boundary.old_ghosts())?;
    let w = e.map(|u| u * u / 2.0);
    let (h, tau) = (params.h, params.tau);
    let s = params.s();

    // Old-level part of the right-hand side.
    let rhs_base: Vec<f64> = (0..n as isize)
        .map(|i| {
            e.at(i) + 0.5 * s * (e.at(i + 1) - 2.0 * e.at(i) + e.at(i - 1))
                - tau / (4.0 * h) * (w.at(i + 1) - w.at(i - 1))
        })
        .collect();

    let mut current = state.values.clone();
    let mut last_change = f64::INFINITY;
    for _ in 0..max_iter {
        // Flux of the previous iterate at the new level; ghost values of u
        // there come from the new-level boundary data.
        let z = Ext::new(&current, grid, boundary.new_ghosts())?.map(|u| u * u / 2.0);
        let mut rhs: Vec<f64> = (0..n as isize)
            .map(|i| rhs_base[i as usize] - tau / (4.0 * h) * (z.at(i + 1) - z.at(i - 1)))
            .collect();
        let next = match boundary {
            StepBoundary::Periodic => {
                solve_cyclic_const(-0.5 * s, 1.0 + s, -0.5 * s, &rhs)?
            }
            StepBoundary::Dirichlet { new, .. } => {
                rhs[0] += 0.5 * s * new.left[1];
                rhs[n - 1] += 0.5 * s * new.right[0];
                solve_tridiagonal_const(-0.5 * s, 1.0 + s, -0.5 * s, &rhs)?
            }
        };
        last_change = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = next;
        if last_change <= tol {
            return Ok(State {
                values: current,
                time: state.time + tau,
                grid: grid.clone(),
            });
        }
    }
    Err(SchemeError::ConvergenceFailure {
        last_change,
        iterations: max_iter,
    })
}

/// Semi-invariant step: fourth-order convective and viscous operators, the
/// Ω dissipation written in conservation form, and the three ντ/2 correction
/// terms that cancel the remaining first-order error.
pub fn step_semi_invariant(
    state: &State,
    params: &SchemeParams,
    boundary: &StepBoundary,
    omega: &OmegaRule,
) -> Result<State, SchemeError> {
    let grid = &state.grid;
    let e = Ext::new(&state.values, grid, boundary.old_ghosts())?;
    let w = e.map(|u| u * u / 2.0);
    let (h, tau, nu) = (params.h, params.tau, params.nu);
    let h2 = h * h;
    let values = (0..grid.n_points as isize)
        .map(|i| {
            let mdw = 0.5 * (w.at(i + 1) - w.at(i - 1));
            let md3w = 0.5 * (w.at(i + 2) - 2.0 * w.at(i + 1) + 2.0 * w.at(i - 1) - w.at(i - 2));
            let d2 = e.at(i + 1) - 2.0 * e.at(i) + e.at(i - 1);
            let d4 = e.at(i + 2) - 4.0 * e.at(i + 1) + 6.0 * e.at(i) - 4.0 * e.at(i - 1)
                + e.at(i - 2);
            let conv4 = (mdw - md3w / 6.0) / h;
            let visc4 = nu * (d2 - d4 / 12.0) / h2;
            // Ω flux h·(Ω₊ δ⁺u/h − Ω₋ δ⁻u/h) with Ω at half nodes.
            let om_p = omega.at_half(e.half(i), e.at(i + 1) - e.at(i), params);
            let om_m = omega.at_half(e.half(i - 1), e.at(i) - e.at(i - 1), params);
            let omega_term = om_p * (e.at(i + 1) - e.at(i)) - om_m * (e.at(i) - e.at(i - 1));
            let d2h = |j: isize| e.half(j + 1) - 2.0 * e.half(j) + e.half(j - 1);
            let pair = e.half(i) * d2h(i) - e.half(i - 1) * d2h(i - 1);
            let corr = nu * tau / (2.0 * h2 * h) * pair - nu * nu * tau / 2.0 * d4 / (h2 * h2)
                + nu * tau / (2.0 * h2 * h) * md3w;
            e.at(i) - tau * (conv4 - visc4 - omega_term + corr)
        })
        .collect();
    Ok(State {
        values,
        time: state.time + tau,
        grid: grid.clone(),
    })
}

/// Scheme selection plus the knobs a run needs.
#[derive(Clone, Copy, Debug)]
pub struct SchemeConfig {
    pub id: SchemeId,
    pub omega: OmegaRule,
    pub cn_tol: f64,
    pub cn_max_iter: usize,
}

impl SchemeConfig {
    pub fn new(id: SchemeId) -> Self {
        SchemeConfig {
            id,
            omega: OmegaRule::CancelLeadingError,
            cn_tol: 1e-12,
            cn_max_iter: 50,
        }
    }
}

/// One step of whichever scheme the config selects.
pub fn step_once(
    cfg: &SchemeConfig,
    state: &State,
    params: &SchemeParams,
    boundary: &StepBoundary,
) -> Result<State, SchemeError> {
    match cfg.id {
        SchemeId::Ftcs => step_ftcs(state, params, boundary),
        SchemeId::LaxWendroff => step_lax_wendroff(state, params, boundary),
        SchemeId::CrankNicolson => {
            step_crank_nicolson(state, params, boundary, cfg.cn_tol, cfg.cn_max_iter)
        }
        SchemeId::SemiInvariant => step_semi_invariant(state, params, boundary, &cfg.omega),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlowupInfo {
    /// 1-based step at which the first non-finite value appeared.
    pub step: usize,
    /// First offending node index.
    pub node: usize,
}

#[derive(Debug)]
pub struct RunSummary {
    pub final_state: State,
    pub steps_completed: usize,
    pub blowup: Option<BlowupInfo>,
}

/// Advances `n_steps` or stops at the first blow-up. The observer sees every
/// produced state, including a non-finite one, so error recorders can flag
/// the offending step.
pub fn run(
    cfg: &SchemeConfig,
    initial: State,
    params: &SchemeParams,
    n_steps: usize,
    boundary: &BoundaryProvider<'_>,
    mut observer: impl FnMut(usize, &State),
) -> Result<RunSummary, SchemeError> {
    if n_steps == 0 {
        return Err(SchemeError::ZeroSteps);
    }
    let mut state = initial;
    for step in 1..=n_steps {
        let b = boundary.step_boundary(&state.grid, state.time, state.time + params.tau);
        state = step_once(cfg, &state, params, &b)?;
        observer(step, &state);
        if let Some(node) = state.first_non_finite() {
            return Ok(RunSummary {
                final_state: state,
                steps_completed: step,
                blowup: Some(BlowupInfo { step, node }),
            });
        }
    }
    Ok(RunSummary {
        final_state: state,
        steps_completed: n_steps,
        blowup: None,
    })
}
