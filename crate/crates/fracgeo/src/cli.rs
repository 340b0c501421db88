//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when a computation fails (domain errors,
//! non-convergence, unwritable output) and 2 on usage errors.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use fracgeo_core::derivatives::{self, DerivativeResult};
use fracgeo_core::fractional::{self, FractionalIntegralSpec};
use fracgeo_core::geometry::{self, FenceScene};
use fracgeo_core::quadrature::{self, QuadratureResult, Tolerance};
use fracgeo_core::special::Order;
use fracgeo_core::RealFunction;
use serde::Serialize;

use crate::numfmt::human;
use crate::scene_file::Num;
use crate::verify::{self, Level};
use crate::{mesh, report, scene_file, TOOL_VERSION};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fracgeo",
    version,
    about = "Fractional and Stieltjes calculus with fence/shadow geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riemann, Stieltjes or Riemann-Liouville integrals.
    Integrate(IntegrateArgs),
    /// Classical, Stieltjes, along-the-path or fractal derivatives.
    Derive(DeriveArgs),
    /// Fence of f along tau = g(t) with its two shadows and three tangents.
    Scene(SceneArgs),
    /// Self-scaling fence frames for a fractional integral.
    Animate(AnimateArgs),
    /// Run the built-in consistency suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IntegralKind {
    Riemann,
    Stieltjes,
    Rl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RlMethod {
    Kernel,
    Stieltjes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DerivativeKind {
    Classical,
    Stieltjes,
    Path,
    Fractal,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative tolerance.
    #[arg(long, default_value = "1e-8", value_parser = finite, allow_negative_numbers = true)]
    rel: f64,
    /// Absolute tolerance.
    #[arg(long, default_value = "1e-12", value_parser = finite, allow_negative_numbers = true)]
    abs: f64,
    /// Panel budget for the quadratures.
    #[arg(long, default_value_t = Tolerance::default().max_panels())]
    max_panels: usize,
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[arg(long, value_enum)]
    kind: IntegralKind,
    /// Route for `--kind rl`.
    #[arg(long, value_enum, default_value_t = RlMethod::Stieltjes)]
    method: RlMethod,
    /// Integrand f(t).
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    f: Option<RealFunction>,
    /// Integrator g(t) for `--kind stieltjes`.
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    g: Option<RealFunction>,
    #[arg(long, value_parser = order, allow_negative_numbers = true)]
    alpha: Option<Order>,
    /// Lower limit.
    #[arg(long, default_value = "0", value_parser = finite, allow_negative_numbers = true)]
    a: f64,
    /// Upper limit for `riemann` and `stieltjes`.
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Evaluation point for `rl`.
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    t: Option<f64>,
    #[command(flatten)]
    tol: TolArgs,
    /// Write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DeriveArgs {
    #[arg(long, value_enum)]
    kind: DerivativeKind,
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    f: Option<RealFunction>,
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    g: Option<RealFunction>,
    #[arg(long, value_parser = order, allow_negative_numbers = true)]
    alpha: Option<Order>,
    /// Start of the arc length for `--kind path`.
    #[arg(long, default_value = "0", value_parser = finite, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Convergence tolerance of the shrinking-step sequence.
    #[arg(long, default_value = "1e-8", value_parser = positive)]
    tol: f64,
    /// Write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SceneArgs {
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    f: RealFunction,
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    g: RealFunction,
    #[arg(long, default_value = "0", value_parser = finite, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    b: f64,
    /// Number of strips.
    #[arg(long, default_value_t = 256, value_parser = strips)]
    n: usize,
    /// Point where the tangents are drawn (default: midpoint).
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    t_star: Option<f64>,
    /// `.json` scene or `.obj` mesh.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnimateArgs {
    #[arg(long, value_parser = expression, allow_hyphen_values = true)]
    f: RealFunction,
    #[arg(long, value_parser = order, allow_negative_numbers = true)]
    alpha: Order,
    #[arg(long, default_value = "0", value_parser = finite, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    frames: u32,
    /// Strips per frame.
    #[arg(long, default_value_t = 256, value_parser = strips)]
    n: usize,
    #[command(flatten)]
    tol: TolArgs,
    /// `.json` frames, `.obj` meshes or `.csv` areas.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Reduced grids (default).
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Complete grids.
    #[arg(long)]
    full: bool,
}

fn finite(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err("value must be finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match finite(s)? {
        x if x > 0.0 => Ok(x),
        _ => Err("value must be positive".into()),
    }
}

fn order(s: &str) -> Result<Order, String> {
    Order::new(finite(s)?).map_err(|e| e.to_string())
}

fn strips(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < geometry::MIN_SAMPLES {
        return Err(format!("at least {} strips are needed", geometry::MIN_SAMPLES));
    }
    Ok(n)
}

fn expression(s: &str) -> Result<RealFunction, String> {
    RealFunction::parse(s).map_err(|e| e.to_string())
}

/// Failure after argument parsing: either a usage problem (exit 2) or a
/// failed computation or write (exit 1).
enum Failure {
    Usage(clap::Error),
    Runtime(String),
}

impl<E: fmt::Display> From<E> for Failure
where
    E: Into<Box<dyn std::error::Error>>,
{
    fn from(e: E) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(subcommand: &str, message: impl fmt::Display) -> Failure {
    let mut cmd = Cli::command();
    cmd.build();
    let cmd = cmd
        .find_subcommand_mut(subcommand)
        .cloned()
        .unwrap_or_else(Cli::command);
    let mut cmd = cmd.bin_name(format!("fracgeo {subcommand}"));
    Failure::Usage(cmd.error(ErrorKind::ArgumentConflict, message))
}

fn require<T: Clone>(value: &Option<T>, subcommand: &str, flag: &str, kind: &str) -> Result<T, Failure> {
    value
        .clone()
        .ok_or_else(|| usage(subcommand, format!("`{flag}` is required for this kind ({kind})")))
}

fn tolerance(args: &TolArgs, subcommand: &str) -> Result<Tolerance, Failure> {
    Tolerance::new(args.rel, args.abs, args.max_panels).map_err(|e| usage(subcommand, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Obj,
    Csv,
}

fn output_format(path: &Path, allowed: &[Format], subcommand: &str) -> Result<Format, Failure> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let format = match ext.as_deref() {
        Some("json") => Some(Format::Json),
        Some("obj") => Some(Format::Obj),
        Some("csv") => Some(Format::Csv),
        _ => None,
    };
    match format {
        Some(f) if allowed.contains(&f) => Ok(f),
        _ => {
            let names: Vec<&str> = allowed
                .iter()
                .map(|f| match f {
                    Format::Json => ".json",
                    Format::Obj => ".obj",
                    Format::Csv => ".csv",
                })
                .collect();
            Err(usage(
                subcommand,
                format!(
                    "cannot infer output format of `{}`; expected {}",
                    path.display(),
                    names.join(", ")
                ),
            ))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Runtime(format!("cannot write `{}`: {e}", path.display())))
}

#[derive(Serialize)]
struct IntegralDoc {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<&'static str>,
    value: Num,
    error_estimate: Num,
    panels: usize,
    tool_version: &'static str,
}

#[derive(Serialize)]
struct DerivativeDoc {
    kind: &'static str,
    value: Num,
    step_used: Num,
    converged: bool,
    stencil: &'static str,
    sequence: Vec<[Num; 2]>,
    tool_version: &'static str,
}

fn to_json<T: Serialize>(doc: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

fn integrate(args: IntegrateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    const CMD: &str = "integrate";
    let tol = tolerance(&args.tol, CMD)?;
    let format = match &args.out {
        Some(p) => Some(output_format(p, &[Format::Json], CMD)?),
        None => None,
    };
    let kind_name = args
        .kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_owned();
    let f = require(&args.f, CMD, "--f", &kind_name)?;
    let (kind, method, result): (_, _, QuadratureResult) = match args.kind {
        IntegralKind::Riemann | IntegralKind::Stieltjes => {
            let b = require(&args.b, CMD, "--b", &kind_name)?;
            if b < args.a {
                return Err(usage(CMD, "`--a` must not exceed `--b`"));
            }
            if args.kind == IntegralKind::Riemann {
                ("riemann", None, quadrature::riemann_integral(&f, args.a, b, &tol)?)
            } else {
                let g = require(&args.g, CMD, "--g", &kind_name)?;
                (
                    "stieltjes",
                    None,
                    quadrature::stieltjes_integral(&f, &g, args.a, b, &tol)?,
                )
            }
        }
        IntegralKind::Rl => {
            let alpha = require(&args.alpha, CMD, "--alpha", &kind_name)?;
            let t = require(&args.t, CMD, "--t", &kind_name)?;
            if t <= args.a {
                return Err(usage(CMD, "`--t` must be greater than `--a`"));
            }
            let spec = FractionalIntegralSpec::new(alpha, args.a, t, f)?;
            match args.method {
                RlMethod::Stieltjes => ("rl", Some("stieltjes"), fractional::rl_integral_stieltjes(&spec, &tol)?),
                RlMethod::Kernel => ("rl", Some("kernel"), fractional::rl_integral_kernel(&spec, &tol)?),
            }
        }
    };
    match (format, &args.out) {
        (Some(_), Some(path)) => write_file(
            path,
            &to_json(&IntegralDoc {
                kind,
                method,
                value: Num(result.value),
                error_estimate: Num(result.error_estimate),
                panels: result.panels,
                tool_version: TOOL_VERSION,
            })?,
        ),
        _ => {
            writeln!(out, "value           {}", human(result.value))?;
            writeln!(out, "error estimate  {}", human(result.error_estimate))?;
            writeln!(out, "panels          {}", result.panels)?;
            Ok(())
        }
    }
}

fn stencil_name(r: &DerivativeResult) -> &'static str {
    match r.stencil {
        derivatives::Stencil::Central => "central",
        derivatives::Stencil::Forward => "forward",
        derivatives::Stencil::Backward => "backward",
    }
}

fn derive(args: DeriveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    const CMD: &str = "derive";
    let format = match &args.out {
        Some(p) => Some(output_format(p, &[Format::Json], CMD)?),
        None => None,
    };
    let kind_name = args
        .kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_owned();
    let f = require(&args.f, CMD, "--f", &kind_name)?;
    let t = require(&args.t, CMD, "--t", &kind_name)?;
    let (kind, result) = match args.kind {
        DerivativeKind::Classical => ("classical", derivatives::classical_derivative(&f, t, args.tol)?),
        DerivativeKind::Stieltjes => {
            let g = require(&args.g, CMD, "--g", &kind_name)?;
            ("stieltjes", derivatives::stieltjes_derivative(&f, &g, t, args.tol)?)
        }
        DerivativeKind::Path => {
            let g = require(&args.g, CMD, "--g", &kind_name)?;
            if t < args.a {
                return Err(usage(CMD, "`--t` must not be less than `--a`"));
            }
            ("path", derivatives::path_derivative(&f, &g, args.a, t, args.tol)?)
        }
        DerivativeKind::Fractal => {
            let alpha = require(&args.alpha, CMD, "--alpha", &kind_name)?;
            ("fractal", derivatives::fractal_derivative(&f, alpha, t, args.tol)?)
        }
    };
    match (format, &args.out) {
        (Some(_), Some(path)) => write_file(
            path,
            &to_json(&DerivativeDoc {
                kind,
                value: Num(result.value),
                step_used: Num(result.step_used),
                converged: result.converged,
                stencil: stencil_name(&result),
                sequence: result.sequence.iter().map(|&(h, v)| [Num(h), Num(v)]).collect(),
                tool_version: TOOL_VERSION,
            })?,
        ),
        _ => {
            writeln!(out, "value    {}", human(result.value))?;
            writeln!(out, "step     {}", human(result.step_used))?;
            writeln!(out, "stencil  {}", stencil_name(&result))?;
            Ok(())
        }
    }
}

fn describe_scene(scene: &FenceScene, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "interval        [{}, {}], {} strips",
        human(scene.a),
        human(scene.b),
        scene.n
    )?;
    writeln!(out, "area (t, y)     {}", human(scene.shadow_ty_area()))?;
    writeln!(out, "area (tau, y)   {}", human(scene.shadow_tau_y_area()))?;
    writeln!(out, "tangents at t = {}", human(scene.t_star))?;
    for tangent in &scene.tangents {
        let slope = tangent.slope.map_or_else(|| "none (degenerate)".to_owned(), human);
        writeln!(out, "  {:<6} slope {slope}", tangent.plane.name())?;
    }
    Ok(())
}

fn scene(args: SceneArgs, out: &mut dyn Write) -> Result<(), Failure> {
    const CMD: &str = "scene";
    if args.b <= args.a {
        return Err(usage(CMD, "`--a` must be less than `--b`"));
    }
    if let Some(ts) = args.t_star {
        if !(args.a..=args.b).contains(&ts) {
            return Err(usage(CMD, "`--t-star` must lie in [a, b]"));
        }
    }
    let format = match &args.out {
        Some(p) => Some(output_format(p, &[Format::Json, Format::Obj], CMD)?),
        None => None,
    };
    let scene = geometry::build_scene(&args.f, &args.g, args.a, args.b, args.n, args.t_star)?;
    match (format, &args.out) {
        (Some(Format::Json), Some(path)) => write_file(path, &scene_file::scene_to_json(&scene, None)?),
        (Some(_), Some(path)) => write_file(path, &mesh::scene_to_obj(&scene)),
        _ => Ok(describe_scene(&scene, out)?),
    }
}

fn animate(args: AnimateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    const CMD: &str = "animate";
    let tol = tolerance(&args.tol, CMD)?;
    if args.b <= args.a {
        return Err(usage(CMD, "`--a` must be less than `--b`"));
    }
    let format = match &args.out {
        Some(p) => Some(output_format(p, &[Format::Json, Format::Obj, Format::Csv], CMD)?),
        None => None,
    };
    let anim = geometry::build_rl_animation(&args.f, args.alpha, args.a, args.b, args.frames as usize, args.n, &tol)?;
    match (format, &args.out) {
        (Some(Format::Json), Some(path)) => write_file(path, &scene_file::animation_to_json(&anim)?),
        (Some(Format::Obj), Some(path)) => write_file(path, &mesh::animation_to_obj(&anim)),
        (Some(_), Some(path)) => write_file(path, &report::animation_to_csv(&anim)?),
        _ => {
            writeln!(
                out,
                "{:>5}  {:>16}  {:>16}  {:>16}",
                "frame", "t", "area (tau, y)", "rl value"
            )?;
            for (i, frame) in anim.frames.iter().enumerate() {
                writeln!(
                    out,
                    "{i:>5}  {:>16}  {:>16}  {:>16}",
                    human(frame.t),
                    human(frame.scene.shadow_tau_y_area()),
                    human(frame.rl.value)
                )?;
            }
            Ok(())
        }
    }
}

fn run_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<bool, Failure> {
    let level = if args.full { Level::Full } else { Level::Quick };
    let reports = verify::run_suites(level);
    write!(out, "{}", verify::render_table(&reports))?;
    let passed = verify::all_passed(&reports);
    writeln!(
        out,
        "{}",
        if passed {
            "all suites passed"
        } else {
            "some suites FAILED"
        }
    )?;
    Ok(passed)
}

/// `Usage: ...` for the subcommand named in `args`, or for the tool.
fn usage_line(args: &[OsString]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = args
        .iter()
        .skip(1)
        .find_map(|a| cmd.find_subcommand(a.to_str()?).map(|c| c.get_name().to_owned()));
    let usage = match sub.and_then(|name| cmd.find_subcommand_mut(&name).cloned()) {
        Some(mut sub) => sub.render_usage(),
        None => cmd.render_usage(),
    };
    usage.to_string()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    if !text.contains("Usage:") {
                        let _ = writeln!(stderr, "{}", usage_line(&args));
                    }
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Integrate(a) => integrate(a, stdout).map(|()| true),
        Command::Derive(a) => derive(a, stdout).map(|()| true),
        Command::Scene(a) => scene(a, stdout).map(|()| true),
        Command::Animate(a) => animate(a, stdout).map(|()| true),
        Command::Verify(a) => run_verify(a, stdout),
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(Failure::Usage(e)) => {
            let _ = write!(stderr, "{}", e.render());
            EXIT_USAGE
        }
        Err(Failure::Runtime(message)) => {
            let _ = writeln!(stderr, "fracgeo: error: {message}");
            EXIT_FAILURE
        }
    }
}
