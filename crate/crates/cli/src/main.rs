//! `sbt`: coefficient tables, identity verification, transform evaluation
//! and convergence tables.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error.

mod input;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sbt_core::combinatorics::{generalized_factorial, touchard, touchard_scaled};
use sbt_core::orthogonal::{charlier_recurrence, hermite_recurrence, hermite_tilde};
use sbt_core::rational::int;
use sbt_core::transform::{centered_char_function, transform_apply};
use sbt_core::verify::{self, Suite, VerifyConfig, DEFAULT_SEED};
use sbt_core::{ModelParams, Poly, Rational};

use input::{parse_complex, parse_grid_file, parse_list, parse_rational_arg, parse_real};
use output::{ConvergeRow, ConvergeSummary, Format, TransformRow};

const MAX_CAP: usize = 64;

#[derive(Parser)]
#[command(name = "sbt", version, about = "Exact umbral calculus and the Segal-Bargmann transform for the Poisson-type law")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Lattice spacing alpha > 0 (p/q, integer or decimal).
    #[arg(long, global = true, value_parser = parse_rational_arg)]
    alpha: Option<Rational>,

    /// Variance sigma > 0 (p/q, integer or decimal).
    #[arg(long, global = true, value_parser = parse_rational_arg)]
    sigma: Option<Rational>,

    /// Highest degree or operator cap (at most 64).
    #[arg(long, visible_alias = "degree", global = true)]
    cap: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient table of a polynomial family, rows n = 0..=degree.
    Coeffs {
        #[arg(value_enum)]
        family: FamilyArg,
    },
    /// Run an identity verification suite.
    Verify {
        #[arg(default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Evaluate the transform of a grid function at complex points.
    Transform {
        /// JSON file {"alpha": "p/q", "sigma": "p/q", "values": [[re, im], ...]}.
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated points such as "0.5,1+2i,-i".
        #[arg(long, default_value = "")]
        points: String,
    },
    /// Characteristic-function gap to the Gaussian limit.
    Converge {
        #[arg(long, default_value = "1,1/2,1/4,1/8")]
        alphas: String,
        #[arg(long, default_value = "0,0.25,0.5,0.75,1,1.25,1.5,1.75,2,2.25,2.5,2.75,3")]
        ys: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Charlier,
    Hermite,
    Touchard,
    Factorial,
    TouchardScaled,
    HermiteTilde,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: sbt_core::Error| e.to_string())
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    Ok((name.trim().to_string(), parse_real(value)?))
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<sbt_core::Error> for Failure {
    fn from(e: sbt_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("sbt: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("sbt: error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if let Some(cap) = g.cap {
        if cap > MAX_CAP {
            return Err(Failure::Usage(format!("cap {cap} exceeds the limit {MAX_CAP}")));
        }
    }
    let (text, verdict) = match &cli.command {
        Command::Coeffs { family } => (coeffs(g, *family)?, Ok(())),
        Command::Verify { suite } => verify_cmd(g, *suite)?,
        Command::Transform { input, points } => (transform_cmd(g, input, points)?, Ok(())),
        Command::Converge { alphas, ys } => (converge(g, alphas, ys)?, Ok(())),
    };
    match &g.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    verdict
}

fn params(g: &GlobalArgs) -> Result<ModelParams, Failure> {
    Ok(ModelParams::new(
        g.alpha.clone().unwrap_or_else(|| int(1)),
        g.sigma.clone().unwrap_or_else(|| int(1)),
    )?)
}

fn coeffs(g: &GlobalArgs, family: FamilyArg) -> Result<String, Failure> {
    let p = params(g)?;
    let degree = g.cap.unwrap_or(8);
    let (name, polys): (&str, Vec<Poly>) = match family {
        FamilyArg::Charlier => ("charlier", charlier_recurrence(&p, degree).polys().to_vec()),
        FamilyArg::Hermite => ("hermite", hermite_recurrence(p.sigma(), degree)?.polys().to_vec()),
        FamilyArg::Touchard => ("touchard", (0..=degree).map(touchard).collect()),
        FamilyArg::Factorial => (
            "factorial",
            (0..=degree).map(|n| generalized_factorial(n, p.alpha())).collect(),
        ),
        FamilyArg::TouchardScaled => (
            "touchard-scaled",
            (0..=degree).map(|n| touchard_scaled(n, p.alpha())).collect(),
        ),
        FamilyArg::HermiteTilde => (
            "hermite-tilde",
            (0..=degree)
                .map(|n| hermite_tilde(p.sigma(), n))
                .collect::<sbt_core::Result<_>>()?,
        ),
    };
    Ok(output::coeff_table(name, p.alpha(), p.sigma(), &polys, g.format))
}

fn verify_cmd(g: &GlobalArgs, suite: Suite) -> Result<(String, Result<(), Failure>), Failure> {
    let mut config = VerifyConfig {
        seed: g.seed,
        ..VerifyConfig::default()
    };
    if g.alpha.is_some() || g.sigma.is_some() {
        config.params = vec![params(g)?];
    }
    if let Some(cap) = g.cap {
        config.katriel_cap = cap;
    }
    for (name, value) in &g.tolerances {
        config.tolerances.set(name, *value)?;
    }
    let report = verify::run(suite, &config);
    let text = output::verify_report(&report, g.format);
    let verdict = if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} of {} checks failed",
            report.failed,
            report.checks.len()
        )))
    };
    Ok((text, verdict))
}

fn transform_cmd(g: &GlobalArgs, path: &PathBuf, points: &str) -> Result<String, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let (p, grid) =
        parse_grid_file(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    for (flag, given, stored) in [("alpha", &g.alpha, p.alpha()), ("sigma", &g.sigma, p.sigma())] {
        if let Some(v) = given {
            if v != stored {
                return Err(Failure::Usage(format!(
                    "--{flag} {v} disagrees with {flag} {stored} in {}",
                    path.display()
                )));
            }
        }
    }
    let zs = parse_list(points, parse_complex)
        .map_err(|e| Failure::Usage(format!("--points: {e}")))?;
    let rows: Vec<TransformRow> = zs
        .iter()
        .map(|&z| {
            let v = transform_apply(&grid, &p, z);
            TransformRow {
                z: [z.re, z.im],
                value: [v.value.re, v.value.im],
                tail_bound: v.tail_bound,
                rounding_bound: v.rounding_bound,
            }
        })
        .collect();
    Ok(output::transform_table(
        p.alpha(),
        p.sigma(),
        grid.support().unwrap_or(0),
        &rows,
        g.format,
    ))
}

fn converge(g: &GlobalArgs, alphas: &str, ys: &str) -> Result<String, Failure> {
    let sigma = g.sigma.clone().unwrap_or_else(|| int(1));
    let alphas = parse_list(alphas, parse_rational_arg)
        .map_err(|e| Failure::Usage(format!("--alphas: {e}")))?;
    let ys = parse_list(ys, parse_real).map_err(|e| Failure::Usage(format!("--ys: {e}")))?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for a in alphas {
        let p = ModelParams::new(a.clone(), sigma.clone())?;
        let mut max_modulus_gap: f64 = 0.0;
        let mut max_gap: f64 = 0.0;
        for &y in &ys {
            let v = centered_char_function(&p, y);
            max_modulus_gap = max_modulus_gap.max(v.modulus_gap());
            max_gap = max_gap.max(v.gap());
            rows.push(ConvergeRow {
                alpha: a.clone(),
                y,
                phi_modulus: v.centered.norm(),
                gaussian: v.gaussian,
                modulus_gap: v.modulus_gap(),
                gap: v.gap(),
            });
        }
        summary.push(ConvergeSummary {
            alpha: a,
            max_modulus_gap,
            max_gap,
        });
    }
    Ok(output::converge_table(&sigma, &rows, &summary, g.format))
}
