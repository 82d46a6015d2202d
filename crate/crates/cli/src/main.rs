//! `fpcube`: small-cancellation checks, generators, cubical presentation
//! builds and dual cube complexes from the command line.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fpcube::presentation::{torus_example, Presentation, PRESENTATION_HEADER};
use fpcube::word::{FactorDescriptor, FactorKind};
use fpcube::Error;

use report::{Envelope, Failure};

#[derive(Parser, Debug)]
#[command(name = "fpcube", version, about = "Small cancellation over free products and cubical presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// C'_*(1/n) in the syllable metric.
    CheckStar(CheckArgs),
    /// Classical C'(1/n) over a free group (rank-1 free factors).
    CheckClassical(CheckArgs),
    /// Generate a presentation.
    GenPride(GenArgs),
    /// Build the cubical presentation and check its hypotheses.
    Build(BuildArgs),
    /// Dual cube complexes of cone wallspaces, or of a wallspace file.
    Dual(DualArgs),
    /// Every check in one report.
    Report(BuildArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of stdout (a directory for `build`).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave the timestamp out of reports.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Presentation file.
    input: PathBuf,
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum GenMode {
    /// The two-generator free group.
    Remark,
    /// Pride relators for every generator pair across factors.
    Corollary,
    /// Two tori with relators a^1 c^1 .. a^m c^m and b^1 d^1 .. b^m d^m.
    Example,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    mode: GenMode,
    #[arg(long)]
    n: Option<u64>,
    /// Size of the two-tori example.
    #[arg(long)]
    m: Option<usize>,
    /// For `corollary`: take the factors from this presentation file
    /// (default: two free-abelian factors of rank 2).
    factors: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verify {
    /// Certified bounds only.
    Bounds,
    /// Also exact piece diameters where they are computed.
    Exact,
}

#[derive(Args, Debug)]
struct BuildArgs {
    input: PathBuf,
    #[arg(long)]
    n: u64,
    /// Subdivision override (default: the least passing q).
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum, default_value_t = Verify::Bounds)]
    mode: Verify,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DualArgs {
    /// Presentation or wallspace file.
    input: PathBuf,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u32>,
    #[command(flatten)]
    common: Common,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    Presentation::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn check_n(n: u64) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure::input(format!("--n must be at least 2, got {n}")));
    }
    Ok(())
}

fn emit(common: &Common, body: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(common: &Common, command: &str, passed: bool, result: T) -> Result<String, Failure> {
    let env = Envelope::new(command, !common.no_timestamp, passed, result);
    serde_json::to_string_pretty(&env).map(|s| s + "\n").map_err(|e| Failure::internal(e.to_string()))
}

fn outcome(passed: bool) -> ExitCode {
    ExitCode::from(if passed { 0 } else { 1 })
}

fn check(args: CheckArgs, classical: bool) -> Result<ExitCode, Failure> {
    check_n(args.n)?;
    let p = read_presentation(&args.input)?;
    let rep = if classical {
        fpcube::pieces::check_classical_cprime(&p, args.n)
    } else {
        fpcube::pieces::check_cstar(&p, args.n)
    }
    .map_err(Failure::from)?;
    let name = if classical { "check-classical" } else { "check-star" };
    let body = match args.common.format {
        Format::Json => json(&args.common, name, rep.passed, report::star(&p, &rep))?,
        Format::Text => format!(
            "{} n={} worst={}/{}{}\n",
            if rep.passed { "PASS" } else { "FAIL" },
            args.n,
            rep.worst_ratio.num,
            rep.worst_ratio.den,
            rep.worst_piece.as_ref().map(|w| format!(" piece: {}", w.word.display(&p.factors))).unwrap_or_default()
        ),
        Format::Dot => return Err(Failure::input(format!("{name} has no dot output"))),
    };
    emit(&args.common, &body)?;
    Ok(outcome(rep.passed))
}

fn default_corollary_factors() -> Vec<FactorDescriptor> {
    ["A", "B"]
        .iter()
        .map(|name| FactorDescriptor::with_rank(name, FactorKind::Abelian, 2).expect("valid descriptor"))
        .collect()
}

fn gen_pride(args: GenArgs) -> Result<ExitCode, Failure> {
    if args.common.format == Format::Dot {
        return Err(Failure::input("gen-pride writes presentations (text or json)"));
    }
    let need_n = || args.n.ok_or_else(|| Failure::input("--n is required for this mode"));
    let p = match args.mode {
        GenMode::Remark => {
            let n = need_n()?;
            check_n(n)?;
            let p = fpcube::pride::remark_presentation(n).map_err(Failure::from)?;
            let rep = fpcube::pieces::check_classical_cprime(&p, n).map_err(Failure::from)?;
            if !rep.passed {
                return Err(Failure::internal(format!("generated presentation fails C'(1/{n})")));
            }
            p
        }
        GenMode::Corollary => {
            let n = need_n()?;
            check_n(n)?;
            let factors = match &args.factors {
                Some(path) => read_presentation(path)?.factors,
                None => default_corollary_factors(),
            };
            let p = fpcube::pride::gen_corollary_presentation(&factors, n).map_err(Failure::from)?;
            let rep = fpcube::pieces::check_cstar(&p, n).map_err(Failure::from)?;
            if !rep.passed {
                return Err(Failure::internal(format!("generated presentation fails C'_*(1/{n})")));
            }
            p
        }
        GenMode::Example => {
            let m = args.m.ok_or_else(|| Failure::input("--m is required for the example"))?;
            if m == 0 || m > 10_000 {
                return Err(Failure::input("--m must be in 1..=10000"));
            }
            torus_example(m)
        }
    };
    let body = match args.common.format {
        Format::Text => p.to_text(),
        _ => json(&args.common, "gen-pride", true, &p)?,
    };
    emit(&args.common, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn build(args: BuildArgs, full: bool) -> Result<ExitCode, Failure> {
    check_n(args.n)?;
    if args.q == Some(0) {
        return Err(Failure::input("--q must be at least 1"));
    }
    if args.common.format != Format::Json {
        return Err(Failure::input("build and report write json"));
    }
    let p = read_presentation(&args.input)?;
    let exact = args.mode == Verify::Exact;
    let (passed, body) = if full {
        let rep = report::full(&p, args.n, args.q, exact)?;
        (rep.passed, json(&args.common, "report", rep.passed, &rep)?)
    } else {
        let rep = report::build(&p, args.n, args.q, exact)?;
        let body = json(&args.common, "build", rep.passed, &rep)?;
        if let Some(dir) = &args.common.output {
            report::write_complexes(&p, rep.q, dir)?;
            fs::write(dir.join("report.json"), &body).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
            return Ok(outcome(rep.passed));
        }
        (rep.passed, body)
    };
    emit(&args.common, &body)?;
    Ok(outcome(passed))
}

fn dual(args: DualArgs) -> Result<ExitCode, Failure> {
    let text = read(&args.input)?;
    let header = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
    if header == Some(fpcube::wallspace::WALLSPACE_HEADER) {
        let w = fpcube::wallspace::parse_wallspace(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", args.input.display())))?;
        let d = fpcube::wallspace::dual_cube_complex(&w).map_err(Failure::from)?;
        let s = d.summary();
        let passed = s.median.passed;
        let body = match args.common.format {
            Format::Json => json(&args.common, "dual", passed, &s)?,
            Format::Dot => w.crossing_graph().to_dot(),
            Format::Text => {
                format!("walls={} vertices={} edges={} dimension={} median={}\n", s.walls, s.vertices, s.edges, s.dimension, s.median.passed)
            }
        };
        emit(&args.common, &body)?;
        return Ok(outcome(passed));
    }
    if header != Some(PRESENTATION_HEADER) {
        return Err(Failure::input(format!("{}: not a presentation or wallspace file", args.input.display())));
    }
    let p = read_presentation(&args.input)?;
    let q = match (args.q, args.n) {
        (Some(0), _) => return Err(Failure::input("--q must be at least 1")),
        (Some(q), _) => q,
        (None, Some(n)) => {
            check_n(n)?;
            fpcube::cubical::choose_subdivision(&p, n).map_err(Failure::from)?.q
        }
        (None, None) => return Err(Failure::input("give --q, or --n to choose the subdivision")),
    };
    let rep = report::duals(&p, q)?;
    let body = match args.common.format {
        Format::Json => json(&args.common, "dual", rep.passed, &rep)?,
        Format::Dot => report::duals_dot(&p, q)?,
        Format::Text => rep
            .cones
            .iter()
            .map(|c| {
                format!(
                    "relator {}: letter walls {} (pairwise crossing: {}), walls at q={} {}, dimension {}\n",
                    c.relator,
                    c.letter.walls,
                    c.letter.pairwise_crossing,
                    q,
                    c.subdivided.walls,
                    c.subdivided.dual.as_ref().map(|d| d.dimension.to_string()).unwrap_or_else(|| "-".into())
                )
            })
            .collect(),
    };
    emit(&args.common, &body)?;
    Ok(outcome(rep.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::CheckStar(a) => check(a, false),
        Command::CheckClassical(a) => check(a, true),
        Command::GenPride(a) => gen_pride(a),
        Command::Build(a) => build(a, false),
        Command::Dual(a) => dual(a),
        Command::Report(a) => build(a, true),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("fpcube: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => 3,
            Error::Precondition(_) | Error::Generation(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}
