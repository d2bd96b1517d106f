use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use jost_forge::exact::scalar::parse_rational;
use jost_forge::exact::Gq;
use jost_forge::harness::{run_suite, SUITES};
use jost_forge::io::{
    coefficients_csv, load_potential, load_spectral, parse_potential, potential_csv, record_to_json, PotentialSpec,
};
use jost_forge::kovacic::{analyze, solvability_scan, KSet};
use jost_forge::scattering::{
    analyze as analyze_scattering, linear_grid, scan_reflection, Contour, SearchBox, DEFAULT_CLEARANCE,
    DEFAULT_REFLECTIONLESS_THRESHOLD,
};
use jost_forge::synthesis::{render, render_psi, synthesize, Style};
use jost_forge::DEFAULT_TOL;

const TOL_ENV: &str = "JOSTFORGE_TOL";

#[derive(Parser)]
#[command(name = "jost-forge", version, about = "Spectral and quadrature analysis of the Schrödinger equation v'' + (k² + u)v = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solvability by quadrature for a rational potential.
    Kovacic {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Exact k², e.g. 4/3.
        #[arg(long, conflicts_with = "k_grid", required_unless_present = "k_grid", allow_hyphen_values = true)]
        k2: Option<String>,
        /// Real k grid `lo:hi:n`.
        #[arg(long, allow_hyphen_values = true)]
        k_grid: Option<String>,
        /// Write output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scattering coefficients on a real k grid.
    Scatter {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Real k grid `lo:hi:n`; k = 0 is not allowed.
        #[arg(long, allow_hyphen_values = true)]
        k_grid: String,
        /// Height c of the path ξ + ic·sech ξ; chosen automatically when omitted.
        #[arg(long)]
        contour_height: Option<f64>,
        /// Half-length of the integration interval.
        #[arg(long = "L", visible_alias = "half-length")]
        half_length: Option<f64>,
        /// Relative integration tolerance; overrides JOSTFORGE_TOL
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = ScatterEmit::Csv)]
        emit: ScatterEmit,
        /// Also locate bound states and their jets (JSON output only).
        #[arg(long)]
        bound_states: bool,
        /// Write output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form reflectionless potential from spectral data.
    Synth {
        /// Spectral data file (JSON)
        #[arg(long)]
        spectral: PathBuf,
        #[arg(long, value_enum, default_value_t = SynthEmit::Text)]
        emit: SynthEmit,
        /// Which expression to emit as text or LaTeX.
        #[arg(long, value_enum, default_value_t = Field::U)]
        field: Field,
        /// Real sample grid `lo:hi:n` for CSV output.
        #[arg(long, default_value = "-5:5:201", allow_hyphen_values = true)]
        samples: String,
        /// Write output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Relative integration tolerance; overrides JOSTFORGE_TOL
        #[arg(long)]
        tol: Option<f64>,
        /// Write output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct PotentialArgs {
    /// Potential file (JSON).
    #[arg(long, required_unless_present = "expr", conflicts_with = "expr")]
    potential: Option<PathBuf>,
    /// Potential given inline in the expression grammar.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScatterEmit {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthEmit {
    Text,
    Latex,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    U,
    Psi,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

/// Errors sorted by exit status.
enum Failure {
    /// Malformed input: exit 2.
    Input(anyhow::Error),
    /// A computation or verification failed: exit 1.
    Check(anyhow::Error),
}

type Outcome = Result<bool, Failure>;

trait InputContext<T> {
    fn input(self) -> Result<T, Failure>;
    fn check(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> InputContext<T> for Result<T, E> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(e.into()))
    }
    fn check(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Check(e.into()))
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{}\n", text) };
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())).check(),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn parse_grid(s: &str) -> anyhow::Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        bail!("grid `{}` must have the form lo:hi:n", s);
    };
    let lo: f64 = lo.trim().parse().with_context(|| format!("bad grid start `{}`", lo))?;
    let hi: f64 = hi.trim().parse().with_context(|| format!("bad grid end `{}`", hi))?;
    let n: usize = n.trim().parse().with_context(|| format!("bad grid size `{}`", n))?;
    if !lo.is_finite() || !hi.is_finite() || n == 0 {
        bail!("grid `{}` must have finite ends and at least one point", s);
    }
    Ok((lo, hi, n))
}

/// `--tol` wins over the environment, which wins over the built-in default.
fn tolerance(flag: Option<f64>) -> anyhow::Result<f64> {
    let t = match (flag, std::env::var(TOL_ENV)) {
        (Some(t), _) => t,
        (None, Ok(v)) => v.trim().parse().with_context(|| format!("{}=`{}` is not a number", TOL_ENV, v))?,
        (None, Err(_)) => DEFAULT_TOL,
    };
    if !(t > 0.0 && t < 1.0) {
        bail!("tolerance {} must lie in (0, 1)", t);
    }
    Ok(t)
}

fn load(p: &PotentialArgs) -> anyhow::Result<PotentialSpec> {
    match (&p.potential, &p.expr) {
        (Some(path), _) => Ok(load_potential(&read(path)?).with_context(|| format!("in {}", path.display()))?),
        (None, Some(e)) => Ok(PotentialSpec::from_parsed(parse_potential(e, None)?)),
        (None, None) => bail!("a potential is required"),
    }
}

fn kovacic(potential: &PotentialArgs, k2: &Option<String>, k_grid: &Option<String>, out: &Option<PathBuf>) -> Outcome {
    let spec = load(potential).input()?;
    let u = spec.rational().input()?.clone();
    let report = match (k2, k_grid) {
        (Some(k2), _) => {
            let k2 = Gq::real(parse_rational(k2).input()?);
            analyze(&u, &k2).input()?.to_json()
        }
        (None, Some(g)) => {
            let (lo, hi, n) = parse_grid(g).input()?;
            solvability_scan(&u, &KSet::Grid { lo, hi, n }).input()?.to_json()
        }
        (None, None) => return Err(Failure::Input(anyhow!("give --k2 or --k-grid"))),
    };
    let doc = json!({ "potential": u.to_string(), "report": report });
    emit(out, &serde_json::to_string_pretty(&doc).check()?)?;
    Ok(true)
}

struct ScatterOpts {
    k_grid: String,
    contour_height: Option<f64>,
    half_length: Option<f64>,
    tol: Option<f64>,
    emit: ScatterEmit,
    bound_states: bool,
}

fn scatter(potential: &PotentialArgs, o: &ScatterOpts, out: &Option<PathBuf>) -> Outcome {
    let tol = tolerance(o.tol).input()?;
    let spec = load(potential).input()?;
    let (lo, hi, n) = parse_grid(&o.k_grid).input()?;
    let grid = linear_grid(lo, hi, n);
    if grid.iter().any(|k| *k == 0.0) {
        return Err(Failure::Input(anyhow!("the k grid contains k = 0")));
    }
    let u = spec.to_eval(20.0).input()?;
    if let Some(l) = o.half_length {
        if !(l.is_finite() && l > 0.0) {
            return Err(Failure::Input(anyhow!("--L must be positive")));
        }
    }
    let contour = match o.contour_height {
        Some(c) => {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Failure::Input(anyhow!("--contour-height must be nonnegative")));
            }
            let l = o.half_length.unwrap_or_else(|| u.default_half_length());
            let ct = if c == 0.0 { Contour::real_line(l) } else { Contour::deformed(c, l) };
            ct.check_clearance(&u, DEFAULT_CLEARANCE).input()?;
            ct
        }
        None => Contour::auto(&u, o.half_length).input()?,
    };
    let th = DEFAULT_REFLECTIONLESS_THRESHOLD;
    let rec = if o.bound_states {
        analyze_scattering(&u, &grid, &contour, SearchBox::default(), tol, th).check()?
    } else {
        scan_reflection(&u, &grid, &contour, tol, th).check()?
    };
    let text = match o.emit {
        ScatterEmit::Csv => coefficients_csv(&rec),
        ScatterEmit::Json => {
            let mut v = record_to_json(&rec);
            v["potential"] = json!(u.label);
            v["tolerance"] = json!(tol);
            serde_json::to_string_pretty(&v).check()?
        }
    };
    emit(out, &text)?;
    Ok(true)
}

fn synth(spectral: &Path, em: SynthEmit, field: Field, samples: &str, out: &Option<PathBuf>) -> Outcome {
    let data = load_spectral(&read(spectral).input()?).with_context(|| format!("in {}", spectral.display())).input()?;
    let s = synthesize(&data).check()?;
    let expr = |style| match field {
        Field::U => render(&s.potential, style),
        Field::Psi => render_psi(&s.psi, style),
    };
    let text = match em {
        SynthEmit::Text => expr(Style::Text),
        SynthEmit::Latex => expr(Style::Latex),
        SynthEmit::Csv => {
            let (lo, hi, n) = parse_grid(samples).input()?;
            let u = jost_forge::scattering::PotentialEval::from_exp_rational(&s.potential, lo.abs().max(hi.abs()))
                .check()?;
            potential_csv(&u, &linear_grid(lo, hi, n))
        }
        SynthEmit::Json => serde_json::to_string_pretty(&json!({
            "u": render(&s.potential, Style::Text),
            "u_latex": render(&s.potential, Style::Latex),
            "psi": render_psi(&s.psi, Style::Text),
            "psi_latex": render_psi(&s.psi, Style::Latex),
        }))
        .check()?,
    };
    emit(out, &text)?;
    Ok(true)
}

fn verify(suite: &str, format: ReportFormat, tol: Option<f64>, out: &Option<PathBuf>) -> Outcome {
    let tol = tolerance(tol).input()?;
    let rep = run_suite(suite, tol).check()?;
    let text = match format {
        ReportFormat::Text => rep.to_text(),
        ReportFormat::Json => serde_json::to_string_pretty(&rep.to_json()).check()?,
    };
    emit(out, &text)?;
    Ok(rep.passed())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Kovacic { potential, k2, k_grid, out } => kovacic(&potential, &k2, &k_grid, &out),
        Command::Scatter { potential, k_grid, contour_height, half_length, tol, emit, bound_states, out } => {
            let o = ScatterOpts { k_grid, contour_height, half_length, tol, emit, bound_states };
            scatter(&potential, &o, &out)
        }
        Command::Synth { spectral, emit, field, samples, out } => synth(&spectral, emit, field, &samples, &out),
        Command::Verify { suite, format, tol, out } => verify(&suite, format, tol, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(e)) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("input error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
