//! Command-line front end: input parsing, subcommands and exit codes.

pub mod emit;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use vecpart_core::arith::IntVector;
use vecpart_core::cones::fmt_vector;
use vecpart_core::oracle::CountTable;
use vecpart_core::{compute, evaluate_result, identity_check, root_system, Algorithm, Error, Result, Strategy};

use crate::emit::{emit, Format};

/// Number of random points used by the decomposition identity check.
pub const IDENTITY_POINTS: usize = 5;

#[derive(Parser, Debug)]
#[command(name = "vecpart", version, about = "Exact quasipolynomial formulas for vector partition functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Chambers and their quasipolynomials.
    Formula(FormulaArgs),
    /// The partition function at one point.
    Eval(EvalArgs),
    /// Compare the formulas with brute-force counts on a grid.
    Verify(VerifyArgs),
    /// The fully reduced partial fraction decomposition.
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Positive roots of a root system such as A3, B2 or G2.
    #[arg(long, conflicts_with = "roots", required_unless_present = "roots")]
    pub root_system: Option<String>,
    /// Vectors as "1,0;0,1;1,1".
    #[arg(long)]
    pub roots: Option<String>,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    /// arbitrary, proper or amalgamated.
    #[arg(long, default_value = "proper", value_parser = parse_with::<Strategy>)]
    pub chambers: Strategy,
    /// pf or elementary.
    #[arg(long, default_value = "pf", value_parser = parse_with::<Algorithm>)]
    pub algorithm: Algorithm,
}

#[derive(Args, Debug)]
pub struct FormulaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub compute: ComputeArgs,
    /// text, json or latex.
    #[arg(long, default_value = "text", value_parser = parse_with::<Format>)]
    pub format: Format,
    /// Write the document to FILE instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub compute: ComputeArgs,
    /// Point as "c1,...,cn".
    #[arg(long, visible_alias = "eval", allow_hyphen_values = true)]
    pub point: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub compute: ComputeArgs,
    /// Check every point with coordinates 0..=N.
    #[arg(long = "box", visible_alias = "verify", value_name = "N")]
    pub bound: usize,
    /// Also check the decomposition identity at random points from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// text or latex.
    #[arg(long, default_value = "text", value_parser = parse_with::<Format>)]
    pub format: Format,
    /// Check the decomposition identity at random points from this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_with<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses "1,0;0,1;1,1" into vectors; whitespace is ignored.
pub fn parse_vectors(s: &str) -> Result<Vec<IntVector>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let vectors: Vec<IntVector> =
        compact.split(';').filter(|part| !part.is_empty()).map(parse_point).collect::<Result<_>>()?;
    if vectors.is_empty() {
        return Err(Error::Parse("no vectors given".into()));
    }
    Ok(vectors)
}

/// Parses "2,3" into a vector; whitespace is ignored.
pub fn parse_point(s: &str) -> Result<IntVector> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .split(',')
        .map(|x| x.parse::<BigInt>().map_err(|_| Error::Parse(format!("invalid integer {x:?} in {s:?}"))))
        .collect()
}

fn read_input(input: &InputArgs) -> Result<Vec<IntVector>> {
    match (&input.root_system, &input.roots) {
        (Some(name), _) => root_system(name),
        (None, Some(roots)) => parse_vectors(roots),
        (None, None) => Err(Error::Parse("either --root-system or --roots is required".into())),
    }
}

/// Failure of a command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::InternalInconsistency(_)) { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", path.display()) }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure { code: 1, message: e.to_string() })
        }
    }
}

/// Compares the formulas with brute-force counts on [0, bound]^n and returns
/// the number of points checked.
pub fn verify_grid(result: &vecpart_core::VpfResult, bound: usize) -> Result<usize> {
    let n = result.dim();
    let table = CountTable::new(&result.delta, &vec![bound; n]);
    let mut point = vec![0usize; n];
    let mut count = 0;
    loop {
        let gamma: IntVector = point.iter().map(|&x| BigInt::from(x)).collect();
        let got = evaluate_result(result, &gamma)?;
        let want = table.get(&gamma).expect("inside the table");
        if got != want {
            return Err(Error::InternalInconsistency(format!(
                "mismatch at {}: formula gives {got}, oracle gives {want}",
                fmt_vector(&gamma)
            )));
        }
        count += 1;
        let mut i = 0;
        while i < n {
            point[i] += 1;
            if point[i] <= bound {
                break;
            }
            point[i] = 0;
            i += 1;
        }
        if i == n {
            return Ok(count);
        }
    }
}

fn execute(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Formula(a) => {
            let delta = read_input(&a.input)?;
            let r = compute(&delta, a.compute.chambers, a.compute.algorithm)?;
            write_output(&a.out, &emit(&r, a.format)?)
        }
        Command::Eval(a) => {
            let delta = read_input(&a.input)?;
            let gamma = parse_point(&a.point)?;
            let r = compute(&delta, a.compute.chambers, a.compute.algorithm)?;
            let v = evaluate_result(&r, &gamma)?;
            write_output(&a.out, &format!("{v}\n"))
        }
        Command::Verify(a) => {
            let delta = read_input(&a.input)?;
            let mut report = String::new();
            if let Some(seed) = a.seed {
                identity_check(&delta, seed, IDENTITY_POINTS)?;
                report.push_str(&format!("decomposition identity holds at {IDENTITY_POINTS} random points\n"));
            }
            let r = compute(&delta, a.compute.chambers, a.compute.algorithm)?;
            let count = verify_grid(&r, a.bound)?;
            report.push_str(&format!("all {count} grid points match oracle\n"));
            write_output(&a.out, &report)
        }
        Command::Decompose(a) => {
            let delta = read_input(&a.input)?;
            let full = vecpart_core::engine::fully_reduced(&delta)?;
            let mut text = match a.format {
                Format::Latex => full.to_latex(),
                Format::Text => full.to_text(),
                Format::Json => return Err(Failure { code: 1, message: "decompose supports text and latex".into() }),
            };
            text.push('\n');
            if let Some(seed) = a.seed {
                identity_check(&delta, seed, IDENTITY_POINTS)?;
                text.push_str(&format!("decomposition identity holds at {IDENTITY_POINTS} random points\n"));
            }
            write_output(&a.out, &text)
        }
    }
}

/// Runs the command line and returns the process exit code: 0 on success, 1
/// on invalid input, 2 when a computed value disagrees with a check.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
