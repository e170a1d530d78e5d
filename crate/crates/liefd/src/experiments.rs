//! Config-driven experiment harness: run each scheme on shock or wavy
//! initial data in a list of Galilean frames, record the L² error history
//! against the boosted exact solution, and emit deterministic CSV.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::exact::{BoostedSolution, ExactError, ShockSolution, Solution, WavySolution};
use crate::grid::{
    l2_error, BoundaryPolicy, DirichletGhosts, Grid1D, GridError, SchemeParams, State,
};
use crate::schemes::{
    run, step_once, BoundaryProvider, OmegaRule, SchemeConfig, SchemeError, SchemeId,
    StepBoundary,
};
use crate::stability::{check_conditions, StabilityReport};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {msg}")]
    BadValue {
        line: usize,
        key: String,
        msg: String,
    },
    #[error("line {line}: `{key}` must be positive")]
    NonPositive { line: usize, key: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("exactly one of `nu` and `re_h` may be set")]
    BothViscosityKeys,
    #[error("the wavy initial condition determines re_h by itself; set `nu` instead")]
    WavyNeedsNu,
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("writing `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot write CSV for an empty series list")]
    EmptySeries,
    #[error("{scheme} blew up at step {step} during an order study")]
    UnexpectedBlowup { scheme: SchemeId, step: usize },
}

/// Initial condition selector with its solution parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialCondition {
    Shock { a: f64, b: f64 },
    Wavy { amplitude: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ViscositySpec {
    Nu(f64),
    ReH(f64),
}

/// Parsed experiment configuration (see the config format in the README).
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub schemes: Vec<SchemeId>,
    pub ic: InitialCondition,
    pub x_min: f64,
    pub length: f64,
    pub n_points: usize,
    pub cfl: f64,
    pub viscosity: ViscositySpec,
    pub t_end: f64,
    pub frames: Vec<f64>,
    pub omega: OmegaRule,
    pub output: String,
    pub merged: bool,
}

/// The exact reference an experiment runs against.
#[derive(Clone, Copy, Debug)]
pub enum ReferenceSolution {
    Shock(ShockSolution),
    Wavy(WavySolution),
}

impl Solution for ReferenceSolution {
    fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            ReferenceSolution::Shock(s) => s.eval(x, t),
            ReferenceSolution::Wavy(w) => w.eval(x, t),
        }
    }
}

/// Config with every derived quantity resolved:
/// h = L/n, a = max|u₀| in frame F1, τ = CFL·h/a, ν ↔ Re_h = a·h/ν.
#[derive(Clone, Debug)]
pub struct ResolvedExperiment {
    pub config: ExperimentConfig,
    pub h: f64,
    pub nu: f64,
    pub re_h: f64,
    pub a_ref: f64,
    pub tau: f64,
    pub n_steps: usize,
    pub boundary: BoundaryPolicy,
    pub reference: ReferenceSolution,
}

fn parse_num(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>().map_err(|e| ConfigError::BadValue {
        line,
        key: key.to_string(),
        msg: e.to_string(),
    })
}

fn require_positive(line: usize, key: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::NonPositive {
            line,
            key: key.to_string(),
        })
    }
}

/// Parses the line-based `key = value` config format; `#` starts a comment
/// and unknown keys are rejected with their line number.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut schemes: Option<Vec<SchemeId>> = None;
    let mut ic_kind: Option<&str> = None;
    let mut ic_line = 0usize;
    let (mut ic_a, mut ic_b, mut ic_amp) = (1.0f64, 0.25f64, 2.0f64);
    let mut x_min = -1.0f64;
    let mut length = 2.0f64;
    let mut n_points: Option<usize> = None;
    let mut cfl: Option<f64> = None;
    let mut nu: Option<f64> = None;
    let mut re_h: Option<f64> = None;
    let mut t_end: Option<f64> = None;
    let mut frames = vec![0.0, 0.25, 0.5];
    let mut omega = OmegaRule::CancelLeadingError;
    let mut output = "series".to_string();
    let mut merged = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or(ConfigError::Malformed { line })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "scheme" => {
                let mut list = Vec::new();
                for tok in value.split(',') {
                    let tok = tok.trim();
                    let id = SchemeId::parse(tok).ok_or_else(|| ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        msg: format!("`{tok}` is not one of ftcs|lw|cn|semi"),
                    })?;
                    list.push(id);
                }
                if list.is_empty() {
                    return Err(ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        msg: "empty scheme list".to_string(),
                    });
                }
                schemes = Some(list);
            }
            "ic" => {
                if value != "shock" && value != "wavy" {
                    return Err(ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        msg: format!("`{value}` is not shock|wavy"),
                    });
                }
                ic_kind = Some(if value == "shock" { "shock" } else { "wavy" });
                ic_line = line;
            }
            "ic.a" => ic_a = parse_num(line, key, value)?,
            "ic.b" => ic_b = parse_num(line, key, value)?,
            "ic.A" => ic_amp = parse_num(line, key, value)?,
            "x_min" => x_min = parse_num(line, key, value)?,
            "length" => length = require_positive(line, key, parse_num(line, key, value)?)?,
            "n_points" => {
                let v = value.parse::<usize>().map_err(|e| ConfigError::BadValue {
                    line,
                    key: key.to_string(),
                    msg: e.to_string(),
                })?;
                if v < 5 {
                    return Err(ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        msg: "needs at least 5 points".to_string(),
                    });
                }
                n_points = Some(v);
            }
            "cfl" => cfl = Some(require_positive(line, key, parse_num(line, key, value)?)?),
            "nu" => nu = Some(require_positive(line, key, parse_num(line, key, value)?)?),
            "re_h" => re_h = Some(require_positive(line, key, parse_num(line, key, value)?)?),
            "t_end" => t_end = Some(require_positive(line, key, parse_num(line, key, value)?)?),
            "frames" => {
                let mut list = Vec::new();
                for tok in value.split(',') {
                    list.push(parse_num(line, key, tok.trim())?);
                }
                frames = list;
            }
            "omega" => {
                omega = if value == "cancel" {
                    OmegaRule::CancelLeadingError
                } else if let Some(c0) = value.strip_prefix("custom:") {
                    OmegaRule::Custom(parse_num(line, key, c0)?)
                } else {
                    return Err(ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        msg: format!("`{value}` is not cancel|custom:<c0>"),
                    });
                };
            }
            "output" => output = value.to_string(),
            "merged" => {
                merged = match value {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(ConfigError::BadValue {
                            line,
                            key: key.to_string(),
                            msg: format!("`{value}` is not true|false"),
                        })
                    }
                }
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }

    let schemes = schemes.ok_or(ConfigError::MissingKey("scheme"))?;
    let ic_kind = ic_kind.ok_or(ConfigError::MissingKey("ic"))?;
    let n_points = n_points.ok_or(ConfigError::MissingKey("n_points"))?;
    let cfl = cfl.ok_or(ConfigError::MissingKey("cfl"))?;
    let t_end = t_end.ok_or(ConfigError::MissingKey("t_end"))?;
    let viscosity = match (nu, re_h) {
        (Some(_), Some(_)) => return Err(ConfigError::BothViscosityKeys),
        (Some(nu), None) => ViscositySpec::Nu(nu),
        (None, Some(re)) => ViscositySpec::ReH(re),
        (None, None) => return Err(ConfigError::MissingKey("nu | re_h")),
    };
    let ic = if ic_kind == "shock" {
        InitialCondition::Shock { a: ic_a, b: ic_b }
    } else {
        if let ViscositySpec::ReH(_) = viscosity {
            let _ = ic_line;
            return Err(ConfigError::WavyNeedsNu);
        }
        InitialCondition::Wavy { amplitude: ic_amp }
    };
    Ok(ExperimentConfig {
        schemes,
        ic,
        x_min,
        length,
        n_points,
        cfl,
        viscosity,
        t_end,
        frames,
        omega,
        output,
        merged,
    })
}

/// Resolves the derived quantities. The reference velocity `a` is the peak
/// |u₀| of the frame-F1 initial condition (|a| + |b| for the shock profile,
/// 2νk/√(A²−1) for the wavy one) and is reused in every frame, keeping CFL
/// and Re_h frame-invariant.
pub fn resolve(config: ExperimentConfig) -> Result<ResolvedExperiment, ConfigError> {
    let h = config.length / config.n_points as f64;
    // The shock starts 3/8 into the domain, leaving room to travel right.
    let shock_x0 = config.x_min + 0.375 * config.length;
    let (nu, a_ref, reference, boundary) = match (config.ic, config.viscosity) {
        (InitialCondition::Shock { a, b }, ViscositySpec::Nu(nu)) => {
            let s = ShockSolution::new(a, b, nu, shock_x0)?;
            (
                nu,
                a.abs() + b.abs(),
                ReferenceSolution::Shock(s),
                BoundaryPolicy::DirichletExact,
            )
        }
        (InitialCondition::Shock { a, b }, ViscositySpec::ReH(re)) => {
            let a_ref = a.abs() + b.abs();
            let nu = a_ref * h / re;
            let s = ShockSolution::new(a, b, nu, shock_x0)?;
            (
                nu,
                a_ref,
                ReferenceSolution::Shock(s),
                BoundaryPolicy::DirichletExact,
            )
        }
        (InitialCondition::Wavy { amplitude }, ViscositySpec::Nu(nu)) => {
            let w = WavySolution::new(amplitude, nu, config.length)?;
            (
                nu,
                w.initial_peak(),
                ReferenceSolution::Wavy(w),
                BoundaryPolicy::Periodic,
            )
        }
        (InitialCondition::Wavy { .. }, ViscositySpec::ReH(_)) => {
            return Err(ConfigError::WavyNeedsNu)
        }
    };
    let re_h = a_ref * h / nu;
    let tau = config.cfl * h / a_ref;
    let n_steps = (config.t_end / tau).ceil().max(1.0) as usize;
    Ok(ResolvedExperiment {
        config,
        h,
        nu,
        re_h,
        a_ref,
        tau,
        n_steps,
        boundary,
        reference,
    })
}

/// L² error history of one (scheme, frame) run.
#[derive(Clone, Debug)]
pub struct ErrorSeries {
    pub scheme: SchemeId,
    /// 1-based frame index: F1 is the first configured frame.
    pub frame: usize,
    pub boost: f64,
    /// One row per completed step; a non-finite error is recorded as inf.
    pub rows: Vec<(f64, f64)>,
    pub blowup_step: Option<usize>,
    pub cfl: f64,
    pub re_h: f64,
    pub stability: StabilityReport,
}

impl ErrorSeries {
    /// Largest finite error seen, if any.
    pub fn max_finite(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.1)
            .filter(|e| e.is_finite())
            .fold(None, |m, e| Some(m.map_or(e, |m: f64| m.max(e))))
    }

    /// Last finite error of the series.
    pub fn final_finite(&self) -> Option<f64> {
        self.rows.iter().rev().map(|r| r.1).find(|e| e.is_finite())
    }

    /// Median of the finite errors.
    pub fn median_finite(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.1).filter(|e| e.is_finite()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(v[v.len() / 2])
    }
}

/// Runs every configured scheme in every frame. Blow-ups truncate and flag
/// the series; they are not fatal.
pub fn run_frame_experiment(r: &ResolvedExperiment) -> Result<Vec<ErrorSeries>, ExperimentError> {
    let cfg = &r.config;
    let mut out = Vec::new();
    for &scheme in &cfg.schemes {
        let scheme_cfg = SchemeConfig {
            id: scheme,
            omega: cfg.omega,
            ..SchemeConfig::new(scheme)
        };
        let params = SchemeParams {
            nu: r.nu,
            h: r.h,
            tau: r.tau,
            ref_velocity: r.a_ref,
        };
        // Ω_τ at the reference velocity, for the stability verdict.
        let omega_tau = cfg.omega.at_half(r.a_ref, 0.0, &params) * r.tau;
        for (fi, &boost) in cfg.frames.iter().enumerate() {
            let stability = check_conditions(scheme, &params, omega_tau);
            // The boosted field solves the same equation, so the run keeps
            // the mesh of frame F1 and simply advances the shifted data; the
            // reference and the ghost values are the boosted solution at the
            // static node coordinates.
            let boosted = BoostedSolution {
                base: r.reference,
                boost,
            };
            let grid = Grid1D::new(cfg.x_min, r.h, cfg.n_points, r.boundary)?;
            let values: Vec<f64> = grid.nodes().map(|x| boosted.eval(x, 0.0)).collect();
            let mut state = State::new(values, 0.0, grid)?;

            let mut rows = Vec::with_capacity(r.n_steps);
            let mut blowup_step = None;
            for step in 1..=r.n_steps {
                let t_old = state.time;
                let t_new = t_old + r.tau;
                let boundary = match r.boundary {
                    BoundaryPolicy::Periodic => StepBoundary::Periodic,
                    BoundaryPolicy::DirichletExact => {
                        let n = cfg.n_points as isize;
                        let at = |t: f64| DirichletGhosts {
                            left: [
                                boosted.eval(state.grid.node(-2), t),
                                boosted.eval(state.grid.node(-1), t),
                            ],
                            right: [
                                boosted.eval(state.grid.node(n), t),
                                boosted.eval(state.grid.node(n + 1), t),
                            ],
                        };
                        StepBoundary::Dirichlet {
                            old: at(t_old),
                            new: at(t_new),
                        }
                    }
                };
                match step_once(&scheme_cfg, &state, &params, &boundary) {
                    Ok(next) => state = next,
                    Err(SchemeError::ConvergenceFailure { .. }) => {
                        // A diverging implicit solve is a blow-up in disguise.
                        rows.push((t_new, f64::INFINITY));
                        blowup_step = Some(step);
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                let err = l2_error(&state, |x, t| boosted.eval(x, t));
                rows.push((state.time, if err.is_finite() { err } else { f64::INFINITY }));
                if state.first_non_finite().is_some() || !err.is_finite() {
                    blowup_step = Some(step);
                    break;
                }
            }
            out.push(ErrorSeries {
                scheme,
                frame: fi + 1,
                boost,
                rows,
                blowup_step,
                cfl: cfg.cfl,
                re_h: r.re_h,
                stability,
            });
        }
    }
    Ok(out)
}

fn write_file(path: &Path, content: &str) -> Result<(), ExperimentError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| ExperimentError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, content).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn fmt_err(e: f64) -> String {
    if e.is_finite() {
        format!("{e}")
    } else {
        "inf".to_string()
    }
}

/// Writes one CSV per (scheme, frame), or one wide file per scheme when
/// `merged` is set. Returns the paths written.
pub fn write_csv(
    series: &[ErrorSeries],
    prefix: &str,
    merged: bool,
) -> Result<Vec<PathBuf>, ExperimentError> {
    if series.is_empty() {
        return Err(ExperimentError::EmptySeries);
    }
    let mut paths = Vec::new();
    if !merged {
        for s in series {
            let mut text = String::from("t,err\n");
            for &(t, e) in &s.rows {
                let _ = writeln!(text, "{t},{}", fmt_err(e));
            }
            if let Some(k) = s.blowup_step {
                let _ = writeln!(text, "# blowup_step={k}");
            }
            let path = PathBuf::from(format!("{prefix}_{}_F{}.csv", s.scheme.token(), s.frame));
            write_file(&path, &text)?;
            paths.push(path);
        }
        return Ok(paths);
    }

    // Merged: group per scheme in first-appearance order.
    let mut scheme_order: Vec<SchemeId> = Vec::new();
    for s in series {
        if !scheme_order.contains(&s.scheme) {
            scheme_order.push(s.scheme);
        }
    }
    for scheme in scheme_order {
        let group: Vec<&ErrorSeries> = series.iter().filter(|s| s.scheme == scheme).collect();
        let mut text = String::from("t");
        for s in &group {
            let _ = write!(text, ",err_F{}", s.frame);
        }
        text.push('\n');
        let longest = group.iter().max_by_key(|s| s.rows.len()).unwrap();
        for row in 0..longest.rows.len() {
            let _ = write!(text, "{}", longest.rows[row].0);
            for s in &group {
                match s.rows.get(row) {
                    Some(&(_, e)) => {
                        let _ = write!(text, ",{}", fmt_err(e));
                    }
                    None => text.push(','),
                }
            }
            text.push('\n');
        }
        for s in &group {
            if let Some(k) = s.blowup_step {
                let _ = writeln!(text, "# blowup_step_F{}={k}", s.frame);
            }
        }
        let path = PathBuf::from(format!("{prefix}_{}.csv", scheme.token()));
        write_file(&path, &text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Sidecar metadata: the frame-invariant parameters and the stability
/// verdict per (scheme, frame). CFL and Re_h are identical across frames by
/// construction.
pub fn write_metadata(series: &[ErrorSeries], prefix: &str) -> Result<PathBuf, ExperimentError> {
    if series.is_empty() {
        return Err(ExperimentError::EmptySeries);
    }
    let mut text = String::new();
    for s in series {
        let blow = s
            .blowup_step
            .map(|k| k.to_string())
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            text,
            "scheme={} frame=F{} boost={} cfl={} re_h={} s={} s_star={} omega_tau={} stability={} blowup_step={}",
            s.scheme.token(),
            s.frame,
            s.boost,
            s.cfl,
            s.re_h,
            s.stability.s,
            s.stability.s_star,
            s.stability.omega_tau,
            if s.stability.stable { "pass" } else { "fail" },
            blow
        );
    }
    let path = PathBuf::from(format!("{prefix}_meta.txt"));
    write_file(&path, &text)?;
    Ok(path)
}

/// Parses, resolves, runs and writes a whole experiment; returns the series
/// and the files written.
pub fn run_from_config_text(
    text: &str,
) -> Result<(ResolvedExperiment, Vec<ErrorSeries>, Vec<PathBuf>), ExperimentError> {
    let resolved = resolve(parse_config(text)?)?;
    let series = run_frame_experiment(&resolved)?;
    let mut paths = write_csv(&series, &resolved.config.output, resolved.config.merged)?;
    paths.push(write_metadata(&series, &resolved.config.output)?);
    Ok((resolved, series, paths))
}

/// Observed convergence orders of one scheme against the exact shock
/// solution with DirichletExact boundaries.
#[derive(Clone, Debug)]
pub struct OrderStudy {
    pub scheme: SchemeId,
    pub tau_slope: f64,
    pub h_slope: f64,
    /// (τ, error vs a small-τ reference at fixed h).
    pub tau_points: Vec<(f64, f64)>,
    /// (h, error vs the exact solution under joint refinement).
    pub h_points: Vec<(f64, f64)>,
}

struct StudySetup {
    shock: ShockSolution,
    x_min: f64,
    length: f64,
    t_end: f64,
}

fn study_setup(nu: f64, b: f64) -> StudySetup {
    StudySetup {
        shock: ShockSolution::new(1.0, b, nu, -0.5).expect("valid shock"),
        x_min: -2.0,
        length: 4.0,
        t_end: 0.25,
    }
}

fn run_shock(
    scheme: SchemeId,
    setup: &StudySetup,
    n: usize,
    m_steps: usize,
) -> Result<State, ExperimentError> {
    let h = setup.length / n as f64;
    let tau = setup.t_end / m_steps as f64;
    let grid = Grid1D::new(setup.x_min, h, n, BoundaryPolicy::DirichletExact)?;
    let shock = setup.shock;
    let eval = move |x: f64, t: f64| shock.eval(x, t);
    let values: Vec<f64> = grid.nodes().map(|x| eval(x, 0.0)).collect();
    let state = State::new(values, 0.0, grid)?;
    let params = SchemeParams {
        nu: setup.shock.nu,
        h,
        tau,
        ref_velocity: setup.shock.a + setup.shock.b,
    };
    let cfg = SchemeConfig::new(scheme);
    let provider = BoundaryProvider::ExactSolution(&eval);
    let summary = run(&cfg, state, &params, m_steps, &provider, |_, _| {})?;
    if let Some(b) = summary.blowup {
        return Err(ExperimentError::UnexpectedBlowup {
            scheme,
            step: b.step,
        });
    }
    Ok(summary.final_state)
}

enum Refinement {
    /// τ = S·h²/ν, balancing a first-order time error against second-order
    /// space error.
    FixedS(f64),
    /// τ = CFL·h/a, balancing second-order time and space errors.
    FixedCfl(f64),
}

/// Joint (h, τ) sweep against the exact solution, returning
/// (h, τ, error) triples.
fn joint_sweep(
    scheme: SchemeId,
    setup: &StudySetup,
    n_list: &[usize],
    refinement: &Refinement,
) -> Result<Vec<(f64, f64, f64)>, ExperimentError> {
    let mut points = Vec::new();
    for &n in n_list {
        let h = setup.length / n as f64;
        let tau_target = match refinement {
            Refinement::FixedS(s) => s * h * h / setup.shock.nu,
            Refinement::FixedCfl(c) => c * h / (setup.shock.a + setup.shock.b),
        };
        let m = (setup.t_end / tau_target).ceil() as usize;
        let state = run_shock(scheme, setup, n, m)?;
        let shock = setup.shock;
        let err = l2_error(&state, |x, t| shock.eval(x, t));
        points.push((h, setup.t_end / m as f64, err));
    }
    Ok(points)
}

fn fit(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    crate::grid::least_squares_slope(&points.map(|(x, y)| (x.ln(), y.ln())).collect::<Vec<_>>())
}

/// Convergence study producing the observed orders in τ and in h.
///
/// Each slope is measured along a refinement path where the corresponding
/// leading error term dominates: FTCS refines with τ ∝ h² (fixed S), the
/// second-order-in-time schemes with τ ∝ h (fixed CFL), and both slopes are
/// read off the same sweep. The semi-invariant scheme's first-order time
/// term is a τ·h² cross term, so its τ slope comes from a fixed-h study
/// against a small-τ reference, and its h slope from a fixed-CFL sweep.
pub fn scheme_order_study(scheme: SchemeId) -> Result<OrderStudy, ExperimentError> {
    match scheme {
        SchemeId::Ftcs => {
            let setup = study_setup(0.1, 0.4);
            let pts = joint_sweep(scheme, &setup, &[40, 56, 80, 112, 160], &Refinement::FixedS(0.2))?;
            Ok(OrderStudy {
                scheme,
                tau_slope: fit(pts.iter().map(|p| (p.1, p.2))),
                h_slope: fit(pts.iter().map(|p| (p.0, p.2))),
                tau_points: pts.iter().map(|p| (p.1, p.2)).collect(),
                h_points: pts.iter().map(|p| (p.0, p.2)).collect(),
            })
        }
        SchemeId::LaxWendroff | SchemeId::CrankNicolson => {
            let setup = study_setup(0.05, 0.4);
            let pts =
                joint_sweep(scheme, &setup, &[40, 56, 80, 112, 160], &Refinement::FixedCfl(0.3))?;
            Ok(OrderStudy {
                scheme,
                tau_slope: fit(pts.iter().map(|p| (p.1, p.2))),
                h_slope: fit(pts.iter().map(|p| (p.0, p.2))),
                tau_points: pts.iter().map(|p| (p.1, p.2)).collect(),
                h_points: pts.iter().map(|p| (p.0, p.2)).collect(),
            })
        }
        SchemeId::SemiInvariant => {
            // τ slope: fixed grid, error against a small-τ reference run;
            // τ ≪ h² keeps the τh² cross term dominant.
            let setup_tau = study_setup(0.05, 0.4);
            let n_fixed = 64;
            let h_fixed = setup_tau.length / n_fixed as f64;
            let reference = run_shock(scheme, &setup_tau, n_fixed, 16384)?;
            let mut tau_points = Vec::new();
            for m in [256usize, 512, 1024, 2048] {
                let s = run_shock(scheme, &setup_tau, n_fixed, m)?;
                let err = (h_fixed
                    * s.values
                        .iter()
                        .zip(&reference.values)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>())
                .sqrt();
                tau_points.push((setup_tau.t_end / m as f64, err));
            }
            // h slope: fixed CFL, grids fine enough for the asymptotic range
            // and coarse enough to respect the S ≤ 2/3 diffusive limit.
            let setup_h = study_setup(0.05, 0.3);
            let pts =
                joint_sweep(scheme, &setup_h, &[80, 112, 160, 224], &Refinement::FixedCfl(0.3))?;
            Ok(OrderStudy {
                scheme,
                tau_slope: fit(tau_points.iter().copied()),
                h_slope: fit(pts.iter().map(|p| (p.0, p.2))),
                tau_points,
                h_points: pts.iter().map(|p| (p.0, p.2)).collect(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
scheme = ftcs
ic = shock
n_points = 128
cfl = 0.5
re_h = 4.0
t_end = 1.0
";

    #[test]
    fn minimal_config_resolves_derived_quantities() {
        let cfg = parse_config(MINIMAL).unwrap();
        let r = resolve(cfg).unwrap();
        assert_eq!(r.h, 2.0 / 128.0);
        // a = |a| + |b| = 1.25, nu = a·h/Re_h, tau = CFL·h/a.
        assert!((r.a_ref - 1.25).abs() < 1e-15);
        assert!((r.nu - 1.25 * r.h / 4.0).abs() < 1e-15);
        assert!((r.tau - 0.5 * r.h / 1.25).abs() < 1e-15);
        assert!((r.re_h - 4.0).abs() < 1e-12);
        assert_eq!(r.boundary, BoundaryPolicy::DirichletExact);
    }

    #[test]
    fn config_errors_are_named_and_carry_lines() {
        assert!(matches!(
            parse_config(""),
            Err(ConfigError::MissingKey("scheme"))
        ));
        let bad = MINIMAL.replace("cfl = 0.5", "cfl = 0");
        assert!(matches!(
            parse_config(&bad),
            Err(ConfigError::NonPositive { line: 4, .. })
        ));
        let both = format!("{MINIMAL}nu = 0.1\n");
        assert!(matches!(parse_config(&both), Err(ConfigError::BothViscosityKeys)));
        let unknown = format!("{MINIMAL}colour = blue\n");
        assert!(matches!(
            parse_config(&unknown),
            Err(ConfigError::UnknownKey { line: 7, .. })
        ));
        let wavy_re = MINIMAL.replace("ic = shock", "ic = wavy");
        assert!(matches!(parse_config(&wavy_re), Err(ConfigError::WavyNeedsNu)));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header\n\n{MINIMAL}  # trailing\nmerged = true # flag\n");
        let cfg = parse_config(&text).unwrap();
        assert!(cfg.merged);
    }

    #[test]
    fn zero_boost_frame_matches_a_plain_run() {
        let text = MINIMAL.replace("t_end = 1.0", "t_end = 0.02\nframes = 0\n");
        let r = resolve(parse_config(&text).unwrap()).unwrap();
        let series = run_frame_experiment(&r).unwrap();
        assert_eq!(series.len(), 1);
        let s = &series[0];
        assert_eq!(s.rows.len(), r.n_steps);
        assert!(s.blowup_step.is_none());
        // Times increase by τ.
        for (k, &(t, _)) in s.rows.iter().enumerate() {
            assert!((t - (k + 1) as f64 * r.tau).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_line_counts_and_merged_header() {
        let dir = std::env::temp_dir().join("liefd_csv_test");
        let prefix = dir.join("series").to_string_lossy().to_string();
        let report = crate::stability::check_conditions_dimensionless(
            SchemeId::Ftcs,
            0.5,
            0.25,
            0.0,
        );
        let mk = |frame: usize, rows: Vec<(f64, f64)>, blow: Option<usize>| ErrorSeries {
            scheme: SchemeId::Ftcs,
            frame,
            boost: 0.0,
            rows,
            blowup_step: blow,
            cfl: 0.5,
            re_h: 4.0,
            stability: report.clone(),
        };
        let one = vec![mk(1, vec![(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)], None)];
        let paths = write_csv(&one, &prefix, false).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        assert_eq!(text.lines().count(), 4, "header + 3 rows");
        assert!(text.starts_with("t,err\n"));

        // Blow-up at step 2: two data rows plus the trailing comment.
        let blown = vec![mk(1, vec![(0.1, 1.0), (0.2, f64::INFINITY)], Some(2))];
        let paths = write_csv(&blown, &prefix, false).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2], "0.2,inf");
        assert_eq!(lines[3], "# blowup_step=2");

        let merged = vec![
            mk(1, vec![(0.1, 1.0), (0.2, 2.0)], None),
            mk(2, vec![(0.1, 1.5), (0.2, 2.5)], None),
            mk(3, vec![(0.1, 9.0)], Some(1)),
        ];
        let paths = write_csv(&merged, &prefix, true).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,err_F1,err_F2,err_F3");
        assert_eq!(lines[1], "0.1,1,1.5,9");
        assert_eq!(lines[2], "0.2,2,2.5,");
        assert_eq!(lines[3], "# blowup_step_F3=1");

        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn gentle_wavy_run_is_stable_for_every_scheme() {
        // A barely-supercritical amplitude raises Re_h enough that even the
        // explicit schemes sit inside their printed stability regions.
        let text = "\
scheme = ftcs,lw,cn,semi
ic = wavy
ic.A = 1.05
n_points = 64
cfl = 0.2
nu = 0.05
t_end = 0.3
frames = 0
";
        let r = resolve(parse_config(text).unwrap()).unwrap();
        assert_eq!(r.boundary, BoundaryPolicy::Periodic);
        let series = run_frame_experiment(&r).unwrap();
        assert_eq!(series.len(), 4);
        for s in &series {
            assert!(s.stability.stable, "{} flagged unstable", s.scheme);
            assert!(s.blowup_step.is_none(), "{} blew up", s.scheme);
            let max = s.max_finite().unwrap();
            assert!(
                max < 0.1 * r.a_ref,
                "{}: error {max} too large vs peak {}",
                s.scheme,
                r.a_ref
            );
        }
    }

    #[test]
    fn intentionally_unstable_run_truncates_with_flag() {
        // CFL² > 2S violates the FTCS condition set; the run must blow up,
        // truncate, and flag the step.
        let text = "\
scheme = ftcs
ic = shock
n_points = 64
cfl = 0.9
re_h = 50
t_end = 2.0
frames = 0
";
        let r = resolve(parse_config(text).unwrap()).unwrap();
        let series = run_frame_experiment(&r).unwrap();
        let s = &series[0];
        assert!(!s.stability.stable);
        let k = s.blowup_step.expect("expected a blow-up");
        assert_eq!(s.rows.len(), k);
        assert!(!s.rows.last().unwrap().1.is_finite());
    }
}
