//! Command-line front end: generate hypergraphs, build schemes, share,
//! reconstruct, audit and report.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperlss::hypergraph::{random_dense, random_sparse};
use hyperlss::oracle::audit_msp;
use hyperlss::scheme::{
    build_dense_partite, build_dense_uniform, build_sparse_partite, build_sparse_uniform, FieldChoice, Structure,
};
use hyperlss::{AccessStructure, BuiltScheme, Error, Hypergraph, MonotoneSpanProgram, PartiteHypergraph, RandomTape, ShareBundle};

#[derive(Parser, Debug)]
#[command(name = "hyperlss", version, about = "Linear secret sharing for k-uniform access structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random k-uniform hypergraph.
    Gen(GenArgs),
    /// Build a scheme for a hypergraph and write it with its report.
    Build(BuildArgs),
    /// Share a secret under a built scheme.
    Share(ShareArgs),
    /// Recover the secret from the shares of a set of participants.
    Reconstruct(ReconstructArgs),
    /// Compare a scheme with its access structure on every small subset.
    Audit(AuditArgs),
    /// Rebuild a scheme and print its share-size report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sparse,
    Dense,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = Mode::Sparse)]
    mode: Mode,
    #[arg(long)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// Hypergraph file (`kuniform` or `kpartite`).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Sparse)]
    mode: Mode,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long)]
    seed: u64,
    /// `auto` or a prime modulus.
    #[arg(long, default_value = "auto", value_parser = parse_field)]
    field: FieldChoice,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Scheme output file.
    #[arg(long)]
    out: PathBuf,
    /// Report output file; defaults to `<out>.report`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShareArgs {
    /// Scheme file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    secret: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    /// Scheme file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    shares: PathBuf,
    /// Comma-separated participant ids.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    subset: Vec<usize>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// Hypergraph file the scheme was built for.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    scheme: PathBuf,
    /// Largest subset size examined; defaults to `k + 1` for k-uniform
    /// input and `k` for k-partite input.
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    if s == "auto" {
        return Ok(FieldChoice::Auto);
    }
    s.parse::<u64>()
        .map(FieldChoice::Fixed)
        .map_err(|_| format!("expected `auto` or a prime, got `{s}`"))
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) => e.exit_code() as u8,
            Failure::Io(..) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

/// Writes through a temporary sibling file and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Failure::Io(tmp.clone(), e))?;
    fs::rename(&tmp, path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

enum Input {
    Uniform(Hypergraph),
    Partite(PartiteHypergraph),
}

fn load_input(path: &Path) -> Result<Input, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with("kpartite") {
        Ok(Input::Partite(PartiteHypergraph::parse(&text)?))
    } else {
        Ok(Input::Uniform(Hypergraph::parse(&text)?))
    }
}

fn structure_of(input: Input) -> Structure {
    match input {
        Input::Uniform(h) => Structure::Uniform(AccessStructure::new(h)),
        Input::Partite(h) => Structure::Partite(h),
    }
}

fn load_program(path: &Path) -> Result<MonotoneSpanProgram, Failure> {
    Ok(MonotoneSpanProgram::from_text(&read(path)?)?)
}

fn build(args: &SchemeArgs) -> Result<BuiltScheme, Failure> {
    let tape = RandomTape::new(args.seed);
    let scheme = match (load_input(&args.input)?, args.mode) {
        (Input::Uniform(h), Mode::Sparse) => build_sparse_uniform(&h, args.beta, &tape, args.field)?,
        (Input::Uniform(h), Mode::Dense) => build_dense_uniform(&h, args.beta, &tape, args.field)?,
        (Input::Partite(h), Mode::Sparse) => build_sparse_partite(&h, args.field)?,
        (Input::Partite(h), Mode::Dense) => build_dense_partite(&h, args.field, &mut tape.split("target"))?,
    };
    Ok(scheme)
}

fn cmd_gen(args: &GenArgs) -> Outcome {
    if args.k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()).into());
    }
    if !(0.0..1.0).contains(&args.beta) {
        return Err(Error::InvalidArgument(format!("beta {} outside [0, 1)", args.beta)).into());
    }
    let mut tape = RandomTape::new(args.seed).split("gen");
    let h = match args.mode {
        Mode::Sparse => random_sparse(args.n, args.k, args.beta, &mut tape)?,
        Mode::Dense => random_dense(args.n, args.k, args.beta, &mut tape)?,
    };
    emit(args.out.as_deref(), &h.serialize())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_build(args: &BuildArgs) -> Outcome {
    let scheme = build(&args.scheme)?;
    let report_path = args.report.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".report");
        PathBuf::from(p)
    });
    write_atomic(&args.out, &scheme.to_text())?;
    write_atomic(&report_path, &scheme.report.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: &ReportArgs) -> Outcome {
    let scheme = build(&args.scheme)?;
    emit(args.out.as_deref(), &scheme.report.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_share(args: &ShareArgs) -> Outcome {
    let msp = load_program(&args.input)?;
    let mut tape = RandomTape::new(args.seed).split("share");
    let shares = msp.distribute(args.secret, &mut tape);
    write_atomic(&args.out, &shares.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reconstruct(args: &ReconstructArgs) -> Outcome {
    let msp = load_program(&args.input)?;
    let shares = ShareBundle::from_text(&read(&args.shares)?)?;
    let secret = msp.reconstruct(&args.subset, &shares)?;
    println!("{secret}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_audit(args: &AuditArgs) -> Outcome {
    let structure = structure_of(load_input(&args.input)?);
    let msp = load_program(&args.scheme)?;
    let k = structure.k();
    let default_size = match structure {
        Structure::Partite(_) => k,
        _ => k + 1,
    };
    let max_size = args.max_size.unwrap_or(default_size);
    let report = audit_msp(&msp, &structure.universe(), |s| structure.is_qualified(s), max_size)?;
    emit(args.out.as_deref(), &report.to_text())?;
    let bad = !report.failures.is_empty() || (k == 2 && !report.violations.is_empty());
    Ok(if bad { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Share(a) => cmd_share(a),
        Command::Reconstruct(a) => cmd_reconstruct(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
