//! File formats, reports and the `equihf` command line.
//!
//! Exit codes: 0 when every verdict passes, 1 when a mathematical verdict
//! fails, 2 for unreadable or malformed input and unmet preconditions.

mod commands;
pub mod format;
pub mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::Error;
pub use format::{complex_file_to_text, parse_complex_file, AnyComplex, ComplexFile};
pub use report::{Report, Table, Verdict, SCHEMA};

/// Seed used by randomized checks unless `--seed` or `EQUIHF_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Parser, Debug)]
#[command(name = "equihf", version, about = "Exact checks for Z/2-equivariant Floer complexes")]
pub struct Cli {
    /// Emit the JSON mirror of the report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Seed for randomized checks; defaults to EQUIHF_SEED or a fixed value.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input file, `-` for standard input, or `builtin:NAME` for a built-in datum.
    #[arg(default_value = "-")]
    pub file: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check `d² = 0`, degrees and action filtration of a complex.
    Check(Input),
    /// Cohomology of a complex over its ring.
    Cohomology(Input),
    /// Group cohomology of a complex with an involution.
    Equivariant {
        #[command(flatten)]
        input: Input,
        /// Largest truncation `h^N` used for the cross-check.
        #[arg(long, default_value_t = 6)]
        max_truncation: usize,
    },
    /// Tate cohomology dimension of a complex with an involution.
    Tate(Input),
    /// The squaring map into the Tate cohomology of the swap square.
    Kaledin(Input),
    /// The Smith inequality for a complex with an involution.
    SmithBound(Input),
    /// Krein index of a symplectic matrix or block direct sum.
    Krein {
        /// Row-major matrix, rows separated by `;`, entries by `,` or spaces.
        #[arg(long, conflicts_with = "blocks")]
        matrix: Option<String>,
        /// Blocks such as `i+:a=0.5;iii:a1=0.3,a2=0.1`.
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Conley-Zehnder index of a symbolic path.
    Cz {
        #[arg(long)]
        path: String,
        /// Pad the path to this many planes.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compare `κ(A) - n` with `μ(Ã²) - 2μ(Ã)`.
    CzKrein {
        #[arg(long)]
        blocks: String,
        /// Lift of the matrix; the default lift of each block when omitted.
        #[arg(long)]
        lift: Option<String>,
    },
    /// Standard representatives of the components of `Sp**`.
    Blocks {
        /// Sign of `det(I - A)`.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<i64>,
        #[arg(long)]
        n: usize,
    },
    /// Strata of the compactified flow spaces.
    Strata {
        #[arg(long)]
        space: String,
        #[arg(long)]
        i: usize,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long)]
        codim: Option<usize>,
    },
    /// Codimension one faces of `P̄^{i,σ}` and their terms.
    Faces {
        #[arg(long)]
        i: usize,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Every structural and relation check on a Floer datum.
    FloerValidate(Input),
    /// Localization of the pants product and the two spectral sequences.
    FloerLocalize(Input),
    /// Smith inequalities and the equivariant Floer cohomology.
    FloerSmith(Input),
    /// Transfer to one generator per orbit for a free involution.
    FloerTransfer {
        #[command(flatten)]
        input: Input,
        /// Comma-separated generators, one from each orbit.
        #[arg(long)]
        plus: Option<String>,
    },
    /// Print a built-in datum.
    Example {
        /// morse_pair, twisted_pair, annulus, clifford or point.
        name: String,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<i64>,
    },
    /// Run every line `FILE COMMAND [FLAGS]` of a manifest.
    Batch { manifest: PathBuf },
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub(crate) struct Context<'a> {
    pub seed: u64,
    pub base: &'a Path,
    pub stdin: &'a (dyn Fn() -> std::io::Result<String> + Sync),
}

pub(crate) fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotNilpotent(_) => 1,
        _ => 2,
    }
}

fn seed_from_env(flag: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("EQUIHF_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("EQUIHF_SEED is not an unsigned integer: '{v}'")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Run with explicit arguments (without the program name) and a lazy standard input.
pub fn run_with(args: &[String], stdin: &(dyn Fn() -> std::io::Result<String> + Sync)) -> Outcome {
    let cli = match Cli::try_parse_from(std::iter::once("equihf".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let seed = match seed_from_env(cli.seed) {
        Ok(s) => s,
        Err(msg) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    let ctx = Context { seed, base: Path::new("."), stdin };
    let echo = echo_of(args);
    let started = Instant::now();
    match &cli.command {
        Command::Example { name, i, n, kappa } => match commands::example(name, *i, *n, *kappa) {
            Ok(text) => Outcome { code: 0, stdout: text, stderr: String::new() },
            Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
        },
        Command::Batch { manifest } => {
            let (mut report, code) = match batch(manifest, &ctx) {
                Ok(r) => r,
                Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
            };
            if cli.timing {
                report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
            }
            Outcome { code, stdout: render(&report, cli.json), stderr: String::new() }
        }
        cmd => match commands::execute(cmd, &echo, &ctx) {
            Ok(mut report) => {
                if cli.timing {
                    report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
                }
                let code = if report.passed() { 0 } else { 1 };
                Outcome { code, stdout: render(&report, cli.json), stderr: String::new() }
            }
            Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
        },
    }
}

fn render(report: &Report, json: bool) -> String {
    if json {
        report.to_json()
    } else {
        report.to_text()
    }
}

/// The command line as echoed in reports, without flags that do not change the result.
fn echo_of(args: &[String]) -> String {
    args.iter().filter(|a| !matches!(a.as_str(), "--json" | "--timing")).cloned().collect::<Vec<_>>().join(" ")
}

struct Entry {
    line: usize,
    args: Vec<String>,
}

fn parse_manifest(text: &str) -> Vec<Entry> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| Entry { line: i + 1, args: content.split_whitespace().map(str::to_string).collect() })
        })
        .collect()
}

/// Runs the entries in parallel and reports them in manifest order.
fn batch(manifest: &Path, ctx: &Context<'_>) -> crate::error::Result<(Report, i32)> {
    let text =
        std::fs::read_to_string(manifest).map_err(|e| Error::Precondition(format!("cannot read manifest {}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text);
    let no_stdin = || Err(std::io::Error::other("standard input is not available inside a batch"));
    let results: Vec<(String, i32, Vec<String>)> = entries
        .par_iter()
        .map(|entry| {
            let label = format!("line {}: {}", entry.line, entry.args.join(" "));
            if entry.args.len() < 2 {
                return (label, 2, vec!["an entry needs a file and a command".to_string()]);
            }
            let mut args = vec![entry.args[1].clone()];
            if entry.args[0] != "-" {
                args.push(entry.args[0].clone());
            }
            args.extend(entry.args[2..].iter().cloned());
            let parsed = Cli::try_parse_from(std::iter::once("equihf".to_string()).chain(args.iter().cloned()));
            let cli = match parsed {
                Ok(c) => c,
                Err(e) => return (label, 2, vec![e.to_string().lines().next().unwrap_or("bad command").to_string()]),
            };
            if matches!(cli.command, Command::Batch { .. } | Command::Example { .. }) {
                return (label, 2, vec!["batch entries must be report commands".to_string()]);
            }
            let sub = Context { seed: cli.seed.unwrap_or(ctx.seed), base, stdin: &no_stdin };
            match commands::execute(&cli.command, &echo_of(&args), &sub) {
                Ok(r) if r.passed() => (label, 0, vec![]),
                Ok(r) => (label, 1, r.failed_verdicts().iter().map(|v| format!("failed: {v}")).collect()),
                Err(e) => (label, exit_code(&e), vec![e.to_string()]),
            }
        })
        .collect();
    let mut report = Report::new(format!("batch {}", manifest.display()), text.as_bytes());
    report.value("entries", results.len());
    let code = results.iter().map(|r| r.1).fold(0, |acc, c| if acc == 2 || c == 2 { 2 } else { acc.max(c) });
    for (label, c, diags) in results {
        report.verdict(label, c == 0, diags);
    }
    Ok((report, code))
}

pub(crate) fn read_input(file: &str, ctx: &Context<'_>) -> crate::error::Result<String> {
    if file == "-" {
        return (ctx.stdin)().map_err(|e| Error::Precondition(format!("cannot read standard input: {e}")));
    }
    let path = ctx.base.join(file);
    std::fs::read_to_string(&path).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdin = || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    };
    let out = run_with(&args, &stdin);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
