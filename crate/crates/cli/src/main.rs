//! Command-line front end: `axes` recovers the principal axes of an
//! ellipsoid from three conjugate semi-diameters (construction vs
//! spectral ground truth), `verify` batch-checks the conjugate-system and
//! confocal identities, `constructible` decides the ruler-and-compass
//! question in exact arithmetic, and `figure` renders construction SVGs.
//!
//! Exit codes: 0 success, 1 geometric degeneracy, 2 input error.

mod figure;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadric_axes::chasles::{chasles_axes_with, Tolerances};
use quadric_axes::confocal::{
    lambda_roots, norm_square_identity, orthogonality_residual, recover_coordinates,
};
use quadric_axes::conjugate::{
    axes_oracle, check_conjugacy, random_system, sum_of_squares, volume, Ellipsoid,
};
use quadric_axes::exact::{self, parse_exact, RatPoly};
use quadric_axes::Error as GeomError;

use report::{AxesInputs, AxesOut, AxesReport, AxesResiduals, AxesResults, InvariantCheck};

/// Error with the exit code it maps to (1 = geometry, 2 = input).
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    fn input(message: String) -> Self {
        CliError {
            message,
            exit_code: 2,
        }
    }

    fn geometry(e: GeomError) -> Self {
        CliError {
            message: e.to_string(),
            exit_code: 1,
        }
    }

    fn geometry_msg(message: &str) -> Self {
        CliError {
            message: message.to_string(),
            exit_code: 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "quadric-axes",
    about = "Ellipsoid axes from conjugate semi-diameters, with exact constructibility verdicts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover the axes from an input file of semi-diameter rows.
    Axes(AxesArgs),
    /// Batch-verify the conjugate and confocal invariants.
    Verify(VerifyArgs),
    /// Decide constructibility of the conic-intersection step (exact).
    Constructible(ConstructibleArgs),
    /// Render a construction figure as SVG.
    Figure(FigureArgs),
}

#[derive(Args)]
struct AxesArgs {
    /// Input file: one semi-diameter per line, whitespace-separated.
    input: PathBuf,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Pipeline residual tolerance (QUADRIC_AXES_TOL overrides default 1e-8).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Optional input file with one system to verify.
    input: Option<PathBuf>,
    /// Generate this many random systems/points instead.
    #[arg(long, default_value_t = 1000)]
    random: usize,
    /// Ellipsoid semi-axes, comma-separated, decreasing (e.g. 3,2,1).
    #[arg(long, default_value = "3,2,1")]
    ellipsoid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ConstructibleArgs {
    /// Exact fractions p/q (floats rejected).
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    zsq: Option<String>,
    /// Alternatively: quartic coefficients c4,c3,c2,c1,c0 (exact).
    #[arg(long)]
    quartic: Option<String>,
}

#[derive(Args)]
struct FigureArgs {
    input: PathBuf,
    /// Which construction to draw.
    #[arg(long, value_parser = ["rytz", "focal", "projection", "axes"])]
    which: String,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Axes(args) => cmd_axes(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Constructible(args) => cmd_constructible(args),
        Command::Figure(args) => cmd_figure(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code)
        }
    }
}

fn pipeline_tolerances(explicit: Option<f64>) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Ok(v) = std::env::var("QUADRIC_AXES_TOL") {
        let parsed: f64 = v
            .parse()
            .map_err(|_| CliError::input(format!("QUADRIC_AXES_TOL: invalid value '{v}'")))?;
        if parsed <= 0.0 {
            return Err(CliError::input(
                "QUADRIC_AXES_TOL must be positive".to_string(),
            ));
        }
        tol.residual = parsed;
    }
    if let Some(v) = explicit {
        if v <= 0.0 {
            return Err(CliError::input("--tol must be positive".to_string()));
        }
        tol.residual = v;
    }
    Ok(tol)
}

fn emit_report<T: serde::Serialize>(report: &T, path: Option<&PathBuf>) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::input(format!("serialising report: {e}")))?;
    println!("{json}");
    if let Some(p) = path {
        std::fs::write(p, &json).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_axes(args: AxesArgs) -> Result<(), CliError> {
    let tol = pipeline_tolerances(args.tol)?;
    let rows = input::read_rows(&args.input)?;
    let sys = rows.as_system()?;
    let oracle = axes_oracle(&sys).map_err(CliError::geometry)?;
    let (constructed, trace) = chasles_axes_with(&sys, &tol).map_err(CliError::geometry)?;

    let residuals = AxesResiduals {
        direction_angle_rad: constructed.max_direction_angle(&oracle, 1e-6),
        length_rel_err: constructed.max_length_rel_err(&oracle),
        intercept_spread: trace.intercept_spread,
        edge_residual: trace.edges.as_ref().map_or(0.0, |e| e.worst_residual),
    };
    let report = AxesReport {
        command: "axes".to_string(),
        inputs: AxesInputs {
            diameters: rows.rows.clone(),
            tolerance: tol.residual,
        },
        results: AxesResults {
            oracle: AxesOut::from(&oracle),
            construction: AxesOut::from(&constructed),
        },
        residuals,
        trace,
    };
    emit_report(&report, args.report.as_ref())
}

fn parse_ellipsoid(s: &str) -> Result<Ellipsoid, CliError> {
    let axes: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let axes = axes.map_err(|_| CliError::input(format!("--ellipsoid: invalid list '{s}'")))?;
    Ellipsoid::new(axes).map_err(CliError::geometry)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let ell = parse_ellipsoid(&args.ellipsoid)?;
    let n = ell.dim();
    let sum_sq_expected: f64 = (0..n).map(|i| ell.squared(i)).sum();
    let vol_expected: f64 = (0..n).map(|i| ell.semi_axis(i)).product();

    let mut checks: Vec<InvariantCheck> = Vec::new();
    let mut push = |name: &str, max_residual: f64, tolerance: f64, cases: usize| {
        checks.push(InvariantCheck {
            name: name.to_string(),
            pass: max_residual <= tolerance,
            max_residual,
            tolerance,
            cases,
        });
    };

    if let Some(path) = &args.input {
        let rows = input::read_rows(path)?;
        let sys = rows.as_system()?;
        let mut conj: f64 = 0.0;
        for i in 0..sys.dim() {
            for j in i + 1..sys.dim() {
                let r = check_conjugacy(&sys.diameter(i), &sys.diameter(j), &ell)
                    .map_err(CliError::geometry)?;
                conj = conj.max(r.abs());
            }
        }
        push("pairwise conjugacy", conj, 1e-10, 1);
        push(
            "sum of squared semi-diameters",
            (sum_of_squares(&sys) - sum_sq_expected).abs() / sum_sq_expected,
            1e-9,
            1,
        );
        push(
            "spanned volume",
            (volume(&sys).abs() - vol_expected).abs() / vol_expected,
            1e-9,
            1,
        );
    } else {
        let count = args.random.max(1);
        let (mut r_conj, mut r_sum, mut r_vol): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for k in 0..count {
            let sys = random_system(&ell, args.seed.wrapping_add(k as u64));
            for i in 0..n {
                for j in i + 1..n {
                    let r = check_conjugacy(&sys.diameter(i), &sys.diameter(j), &ell)
                        .map_err(CliError::geometry)?;
                    r_conj = r_conj.max(r.abs());
                }
            }
            r_sum = r_sum.max((sum_of_squares(&sys) - sum_sq_expected).abs() / sum_sq_expected);
            r_vol = r_vol.max((volume(&sys).abs() - vol_expected).abs() / vol_expected);
        }
        push("pairwise conjugacy", r_conj, 1e-10, count);
        push("sum of squared semi-diameters", r_sum, 1e-9, count);
        push("spanned volume", r_vol, 1e-9, count);

        // confocal identities at random points with nonzero coordinates
        if ell.is_strict() {
            let (mut r_coord, mut r_norm, mut r_orth): (f64, f64, f64) = (0.0, 0.0, 0.0);
            for k in 0..count {
                let p = quadric_axes::conjugate::random_nonzero_point(
                    &ell,
                    args.seed ^ 0x5eed ^ (k as u64).wrapping_mul(0x9e3779b97f4a7c15),
                );
                let t = lambda_roots(&ell, &p).map_err(CliError::geometry)?;
                let sq = recover_coordinates(&t).map_err(CliError::geometry)?;
                for i in 0..n {
                    r_coord = r_coord.max((sq[i] - p[i] * p[i]).abs() / (p[i] * p[i]));
                }
                let (lhs, rhs) = norm_square_identity(&t);
                r_norm = r_norm.max((lhs - rhs).abs() / lhs.abs().max(1e-300));
                for j in 0..n {
                    for k2 in j + 1..n {
                        r_orth = r_orth.max(orthogonality_residual(&t, j, k2).abs());
                    }
                }
            }
            push("coordinate recovery round-trip", r_coord, 1e-9, count);
            push("norm-square identity", r_norm, 1e-10, count);
            push("confocal orthogonality", r_orth, 1e-9, count);
        }
    }

    let report = report::VerifyReport {
        command: "verify".to_string(),
        inputs: serde_json::json!({
            "ellipsoid": ell.semi_axes(),
            "random": args.input.is_none().then_some(args.random),
            "seed": args.seed,
            "input": args.input.as_ref().map(|p| p.display().to_string()),
        }),
        results: checks,
        residuals: serde_json::json!({}),
        trace: serde_json::Value::Null,
    };
    let ok = report.all_pass();
    emit_report(&report, None)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::geometry_msg(
            "one or more invariant checks failed",
        ))
    }
}

fn cmd_constructible(args: ConstructibleArgs) -> Result<(), CliError> {
    let to_cli = |e: GeomError| match e {
        GeomError::InconsistentInput(_) | GeomError::UnsupportedQuarticShape(_) => {
            CliError::input(e.to_string())
        }
        other => CliError::geometry(other),
    };
    let (inputs, results) = if let Some(q) = &args.quartic {
        let coeffs: Result<Vec<_>, _> = q.split(',').map(parse_exact).collect();
        let coeffs = coeffs.map_err(to_cli)?;
        if coeffs.len() != 5 {
            return Err(CliError::input(
                "--quartic expects 5 comma-separated exact coefficients c4,c3,c2,c1,c0".into(),
            ));
        }
        let poly = RatPoly::from_descending(&coeffs);
        let standard = exact::quartic_constructibility(&poly).map_err(to_cli)?;
        let surd = match exact::surd_route_constructibility(&poly) {
            Ok(rep) => Some(rep),
            Err(GeomError::UnsupportedQuarticShape(_)) => None,
            Err(e) => return Err(to_cli(e)),
        };
        let routes_agree = surd
            .as_ref()
            .is_none_or(|s| s.verdict.is_planar() == standard.verdict.is_planar());
        let verdict = standard.verdict;
        (
            serde_json::json!({ "quartic": q }),
            exact::ParamConstructibility {
                quartic_descending: coeffs.iter().map(|c| c.to_string()).collect(),
                surd_route: surd,
                standard_route: standard,
                routes_agree,
                verdict,
                notes: vec![],
            },
        )
    } else {
        let need = |v: &Option<String>, name: &str| -> Result<exact::Rat, CliError> {
            let s = v
                .as_ref()
                .ok_or_else(|| CliError::input(format!("missing --{name} (exact fraction)")))?;
            parse_exact(s).map_err(to_cli)
        };
        let a = need(&args.a, "a")?;
        let b = need(&args.b, "b")?;
        let x = need(&args.x, "x")?;
        let y = need(&args.y, "y")?;
        let zsq = need(&args.zsq, "zsq")?;
        let rep = exact::constructibility_from_parameters(&a, &b, &x, &y, &zsq).map_err(to_cli)?;
        (
            serde_json::json!({
                "a": a.to_string(), "b": b.to_string(), "x": x.to_string(),
                "y": y.to_string(), "zsq": zsq.to_string(),
            }),
            rep,
        )
    };
    let report = report::ConstructibleReport {
        command: "constructible".to_string(),
        inputs,
        trace: serde_json::to_value(&results.standard_route.witness)
            .unwrap_or(serde_json::Value::Null),
        results,
        residuals: serde_json::json!({}),
    };
    emit_report(&report, None)
}

fn cmd_figure(args: FigureArgs) -> Result<(), CliError> {
    let tol = pipeline_tolerances(None)?;
    let rows = input::read_rows(&args.input)?;
    let spec = match args.which.as_str() {
        "rytz" => {
            let (p, q) = if rows.width() == 2 {
                rows.as_pair()?
            } else {
                let sys = rows.as_system()?;
                let ([pj, pk], _) =
                    quadric_axes::rytz::section_ellipse(&sys, 1, 2).map_err(CliError::geometry)?;
                (pj, pk)
            };
            let tr = quadric_axes::rytz::rytz_axes(p, q).map_err(CliError::geometry)?;
            figure::rytz_figure(&tr)
        }
        "focal" => figure::focal_figure(&rows.as_system()?, &tol)?,
        "projection" => figure::projection_figure(&rows.as_system()?, &tol)?,
        "axes" => figure::axes_figure(&rows.as_system()?, &tol)?,
        other => return Err(CliError::input(format!("unknown figure '{other}'"))),
    };
    let svg = spec.render();
    std::fs::write(&args.out, svg)
        .map_err(|e| CliError::input(format!("{}: {e}", args.out.display())))?;
    println!("wrote {}", args.out.display());
    Ok(())
}
