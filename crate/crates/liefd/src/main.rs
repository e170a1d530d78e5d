//! Command-line front end: run experiments from a config file, query the
//! stability conditions, scan amplification factors, verify symmetry groups,
//! and measure convergence orders.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use liefd::equations::{sample_constrained_jet, Equation};
use liefd::exact::CbkdvCoefficients;
use liefd::experiments::{run_from_config_text, scheme_order_study, ExperimentError};
use liefd::grid::SchemeParams;
use liefd::schemes::SchemeId;
use liefd::stability::{check_conditions, max_amplification, scan_stability};
use liefd::symmetry::{pde_invariance_residual, Generator};

#[derive(Parser)]
#[command(name = "liefd", about = "Finite-difference schemes with symmetry diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config-driven frame experiment and write CSV series.
    Run {
        /// Path to the key = value config file.
        config: std::path::PathBuf,
        /// Exit with code 3 if any series blows up.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate the printed stability conditions at one parameter point.
    Stability(StabilityArgs),
    /// Compare empirical |G| scans against the printed conditions.
    Scan(ScanArgs),
    /// Check the invariance criterion for the catalogued generators.
    VerifySymmetries {
        #[arg(long, default_value = "burgers")]
        equation: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Measure convergence orders of one scheme against the exact shock.
    Orders {
        /// One of ftcs|lw|cn|semi.
        scheme: String,
    },
}

#[derive(Args)]
struct StabilityArgs {
    /// One of ftcs|lw|cn|semi.
    scheme: String,
    #[arg(long)]
    cfl: f64,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value_t = 0.0)]
    omega_tau: f64,
}

#[derive(Args)]
struct ScanArgs {
    /// One of ftcs|lw|cn|semi.
    scheme: String,
    #[arg(long, default_value_t = 1.5)]
    cfl_max: f64,
    #[arg(long, default_value_t = 1.0)]
    s_max: f64,
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    omega_tau: f64,
}

fn parse_scheme(s: &str) -> Result<SchemeId> {
    SchemeId::parse(s).ok_or_else(|| anyhow!("`{s}` is not one of ftcs|lw|cn|semi"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { config, strict } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            match run_from_config_text(&text) {
                Ok((resolved, series, paths)) => {
                    println!(
                        "h={} nu={} re_h={} tau={} steps={}",
                        resolved.h, resolved.nu, resolved.re_h, resolved.tau, resolved.n_steps
                    );
                    let mut blew_up = false;
                    for s in &series {
                        let status = match s.blowup_step {
                            Some(k) => {
                                blew_up = true;
                                format!("blowup at step {k}")
                            }
                            None => format!(
                                "final err {}",
                                s.final_finite().map_or("inf".to_string(), |e| e.to_string())
                            ),
                        };
                        println!(
                            "{} F{} (boost {}): {} [stability {}]",
                            s.scheme,
                            s.frame,
                            s.boost,
                            status,
                            if s.stability.stable { "pass" } else { "fail" }
                        );
                    }
                    for p in paths {
                        println!("wrote {}", p.display());
                    }
                    if strict && blew_up {
                        return Ok(ExitCode::from(3));
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(ExperimentError::Config(e)) => {
                    eprintln!("config error: {e}");
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Stability(args) => {
            let scheme = parse_scheme(&args.scheme)?;
            let params = SchemeParams {
                nu: args.s,
                h: 1.0,
                tau: 1.0,
                ref_velocity: args.cfl,
            };
            let report = check_conditions(scheme, &params, args.omega_tau);
            println!(
                "{}: CFL={} S={} S*={} omega_tau={}",
                scheme, report.cfl, report.s, report.s_star, report.omega_tau
            );
            if report.conditions.is_empty() {
                println!("  unconditionally stable");
            }
            for c in &report.conditions {
                println!(
                    "  {}: value {} vs bound {} -> {}",
                    c.name,
                    c.lhs,
                    c.bound,
                    if c.satisfied { "ok" } else { "violated" }
                );
            }
            println!("verdict: {}", if report.stable { "stable" } else { "unstable" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan(args) => {
            let scheme = parse_scheme(&args.scheme)?;
            let map = scan_stability(scheme, args.cfl_max, args.s_max, args.n, args.n, args.omega_tau);
            println!(
                "{} scan on [0,{}] x [0,{}], {} cells/axis, omega_tau={}",
                scheme, args.cfl_max, args.s_max, args.n, args.omega_tau
            );
            println!("legend: '#' stable (empirical), '.' unstable, '!' disagrees with printed conditions");
            for si in (0..map.s_values.len()).rev() {
                let mut row = String::new();
                for ci in 0..map.cfl_values.len() {
                    let (emp, pred) = map.at(si, ci);
                    row.push(if emp != pred {
                        '!'
                    } else if emp {
                        '#'
                    } else {
                        '.'
                    });
                }
                println!("S={:6.3} {row}", map.s_values[si]);
            }
            let disagreements = map
                .empirical
                .iter()
                .zip(&map.predicted)
                .filter(|(a, b)| a != b)
                .count();
            println!("{disagreements} disagreeing cells of {}", map.empirical.len());
            let worst = max_amplification(scheme, args.cfl_max, args.s_max, args.omega_tau);
            println!("|G| at the far corner: {worst}");
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifySymmetries {
            equation,
            samples,
            seed,
        } => {
            let (eq, gens, order): (Equation, Vec<Generator>, u8) = match equation.as_str() {
                "burgers" => (Equation::Burgers, Generator::burgers_algebra(), 2),
                "cbkdv" => (
                    Equation::Cbkdv(CbkdvCoefficients {
                        alpha: 0.8,
                        beta: 0.5,
                        mu: 0.3,
                        s: 0.4,
                    }),
                    Generator::burgers_algebra(),
                    3,
                ),
                other => return Err(anyhow!("`{other}` is not burgers|cbkdv")),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            println!("{equation}: max relative residual over {samples} constrained jets");
            for gen in &gens {
                let mut worst: f64 = 0.0;
                for _ in 0..samples {
                    let jet = sample_constrained_jet(&eq, &mut rng, order)?;
                    let r = pde_invariance_residual(gen, &eq, &jet)?;
                    worst = worst.max(r.relative());
                }
                let verdict = if worst <= 1e-8 { "symmetry" } else { "broken" };
                println!("  {:3}  {:9.2e}  {}", gen.id.label(), worst, verdict);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Orders { scheme } => {
            let scheme = parse_scheme(&scheme)?;
            let study = scheme_order_study(scheme)?;
            println!("{scheme}: tau slope {:.3}, h slope {:.3}", study.tau_slope, study.h_slope);
            println!("  tau refinement (tau, err):");
            for (t, e) in &study.tau_points {
                println!("    {t:12.6e}  {e:12.6e}");
            }
            println!("  h refinement (h, err):");
            for (h, e) in &study.h_points {
                println!("    {h:12.6e}  {e:12.6e}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
