//! The `terwilliger` command line: `analyze`, `sweep`, `audit-corollaries`
//! and `char-table`, with text, CSV and JSON output.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use terwilliger_core::analysis::{analyze, sweep, AnalysisOptions, GeneratorOrder};
use terwilliger_core::character::char_table;
use terwilliger_core::group::{build_group, conjugacy_classes, BRUTE_FORCE_MAX_N};
use terwilliger_core::linalg::{is_prime, DEFAULT_PRIME_1, DEFAULT_PRIME_2};
use terwilliger_core::terwilliger::{CertificateOptions, ClosureStrategy};
use terwilliger_core::wedderburn::corollary_audit;
use terwilliger_core::{Error, GroupParams};

pub mod report;

#[derive(Debug, Parser)]
#[command(name = "terwilliger", version, about = "Terwilliger algebras of the group schemes of D_{n,s}")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report for one group
    Analyze {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// One row per valid (n, s) in a range
    Sweep {
        #[arg(long)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        closure: ClosureArgs,
    },
    /// Compare the printed dihedral corollaries with the derived blocks
    AuditCorollaries {
        #[arg(long)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Character table with exponents of w = exp(2 pi i / n)
    CharTable {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClosureArgs {
    /// Also saturate over the rationals
    #[arg(long)]
    exact_rational: bool,
    /// Two primes for the modular closure, as p1,p2
    #[arg(long, value_parser = parse_primes)]
    primes: Option<[u64; 2]>,
    /// Run the closure only for n up to this bound
    #[arg(long, default_value_t = terwilliger_core::analysis::CLOSURE_MAX_N)]
    closure_max_n: u64,
    /// Run the closure for every n
    #[arg(long)]
    force_closure: bool,
    /// Multiply the frontier by the whole basis instead of the generators
    #[arg(long)]
    full_basis: bool,
    /// Generator order: natural, reversed, or rotate:<k>
    #[arg(long, default_value = "natural", value_parser = parse_generator_order)]
    generator_order: GeneratorOrder,
}

fn parse_primes(s: &str) -> Result<[u64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok([a.parse().map_err(|e| format!("{a}: {e}"))?, b.parse().map_err(|e| format!("{b}: {e}"))?]),
        _ => Err(format!("expected two comma-separated primes, got {s:?}")),
    }
}

fn parse_generator_order(s: &str) -> Result<GeneratorOrder, String> {
    match s {
        "natural" => Ok(GeneratorOrder::Natural),
        "reversed" => Ok(GeneratorOrder::Reversed),
        _ => s
            .strip_prefix("rotate:")
            .and_then(|k| k.parse().ok())
            .map(GeneratorOrder::Rotated)
            .ok_or_else(|| format!("expected natural, reversed or rotate:<k>, got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Verdict(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams { .. } | Error::NotPrime(_) => Failure::Usage(e.to_string()),
            other => Failure::Verdict(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn env_prime(var: &str, default: u64) -> Result<u64, Failure> {
    match std::env::var(var) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{var}: not an integer: {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn options(args: &ClosureArgs) -> Result<AnalysisOptions, Failure> {
    let primes = match &args.primes {
        Some(p) => *p,
        None => {
            [env_prime("TERWILLIGER_PRIME_1", DEFAULT_PRIME_1)?, env_prime("TERWILLIGER_PRIME_2", DEFAULT_PRIME_2)?]
        }
    };
    for p in primes {
        if !is_prime(p) {
            return Err(Failure::Usage(format!("{p} is not prime")));
        }
    }
    if primes[0] == primes[1] {
        return Err(Failure::Usage("the two primes must differ".into()));
    }
    let mut certificate = CertificateOptions { primes, rational: args.exact_rational, ..CertificateOptions::default() };
    if args.full_basis {
        certificate.closure.strategy = ClosureStrategy::FullBasis;
    }
    Ok(AnalysisOptions {
        closure: args.force_closure.then_some(true),
        closure_max_n: args.closure_max_n,
        certificate,
        generator_order: args.generator_order,
        ..AnalysisOptions::default()
    })
}

fn sink<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool, Failure> {
    match cli.command {
        Command::Analyze { n, s, common, closure } => {
            let params = GroupParams::new(n, s)?;
            let opts = options(&closure)?;
            let analysis = analyze(params, &opts)?;
            let mut out = sink(&common.output, stdout)?;
            match common.format {
                Format::Json => report::analysis_json(&mut out, &analysis)?,
                Format::Csv => report::analysis_csv(&mut out, &analysis)?,
                Format::Text => report::analysis_text(&mut out, &analysis)?,
            }
            out.flush()?;
            Ok(analysis.passed())
        }
        Command::Sweep { n_min, n_max, threads, common, closure } => {
            if n_min < 3 || n_min > n_max {
                return Err(Failure::Usage(format!("need 3 <= n-min <= n-max, got {n_min}..{n_max}")));
            }
            let opts = options(&closure)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let report = pool.install(|| sweep(n_min, n_max, &opts));
            let mut out = sink(&common.output, stdout)?;
            match common.format {
                Format::Json => report::sweep_json(&mut out, &report)?,
                Format::Csv => {
                    report::sweep_csv(&mut out, &report)?;
                    writeln!(stderr, "{}", report::sweep_summary(&report))?;
                }
                Format::Text => report::sweep_text(&mut out, &report)?,
            }
            out.flush()?;
            Ok(report.failed == 0)
        }
        Command::AuditCorollaries { n_min, n_max, common } => {
            if n_min < 3 || n_min > n_max {
                return Err(Failure::Usage(format!("need 3 <= n-min <= n-max, got {n_min}..{n_max}")));
            }
            let audits = (n_min..=n_max).map(corollary_audit).collect::<Result<Vec<_>, _>>()?;
            let mut out = sink(&common.output, stdout)?;
            match common.format {
                Format::Json => report::audit_json(&mut out, &audits)?,
                Format::Csv => {
                    report::audit_csv(&mut out, &audits)?;
                    writeln!(stderr, "{}", report::audit_summary(&audits))?;
                }
                Format::Text => report::audit_text(&mut out, &audits)?,
            }
            out.flush()?;
            Ok(true)
        }
        Command::CharTable { n, s, common } => {
            let params = GroupParams::new(n, s)?;
            let group = build_group(params);
            let classes = conjugacy_classes(&group, n <= BRUTE_FORCE_MAX_N)?;
            let table = char_table(&params, &classes);
            let mut out = sink(&common.output, stdout)?;
            match common.format {
                Format::Json => report::char_table_json(&mut out, &table)?,
                Format::Csv => report::char_table_csv(&mut out, &table)?,
                Format::Text => report::char_table_text(&mut out, &table)?,
            }
            out.flush()?;
            Ok(true)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 pass, 1 verdict failure, 2 usage error.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{rendered}") } else { write!(stderr, "{rendered}") };
            return code;
        }
    };
    match run(cli, stdout, stderr) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Verdict(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
