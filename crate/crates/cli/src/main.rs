use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polar_spectrum::code::{CodeSpec, ReliabilitySequence};
use polar_spectrum::enumerator::DEFAULT_BRUTE_CAP;
use polar_spectrum::io::{log2, plan_json, read_plan_json, report_json, spectrum_csv, spectrum_json};
use polar_spectrum::planner::{self, count_all, Method};
use polar_spectrum::spectrum::{
    compute_from_plan, compute_spectrum, sanity_check, SpectrumOptions, SpectrumResult,
};
use polar_spectrum::verifier::{verify_code, VerifyOptions, DEFAULT_GROUP_CAP};
use polar_spectrum::Error;
use serde::Serialize;

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_GATE: u8 = 3;
const EXIT_SANITY: u8 = 4;
const EXIT_VERIFY: u8 = 5;

/// Exact weight distributions of polar and decreasing monomial codes.
#[derive(Parser, Debug)]
#[command(name = "polarwd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the complete weight distribution.
    Spectrum {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "enhanced")]
        method: MethodArg,
        /// Evaluate a plan previously written by `plan` instead of building one.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "k", "sequence", "info_set", "method"])]
        plan: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Print the number of cosets each method evaluates.
    Count {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "text")]
        format: CountFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Write the coset plan (representatives and multiplicities) as JSON.
    Plan {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "enhanced")]
        method: MethodArg,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check the group-action lemmas and equal-weight claims for every
    /// eligible monomial pair of the code.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Largest subgroup enumerated exhaustively; larger ones are sampled.
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        group_cap: u64,
        /// Largest number of free rows swept by brute force.
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        brute_cap: usize,
        /// Collapsed-bit patterns sampled per class.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// Block length N (a power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Dimension K for the 5G construction.
    #[arg(long)]
    k: Option<usize>,
    /// Reliability sequence file replacing the built-in TS 38.212 sequence.
    #[arg(long, value_name = "FILE", conflicts_with = "info_set")]
    sequence: Option<PathBuf>,
    /// Information set, one row index per line; bypasses the 5G construction.
    #[arg(long, value_name = "FILE")]
    info_set: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Naive,
    Ovd,
    Enhanced,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Naive => Method::Naive,
            MethodArg::Ovd => Method::Ovd,
            MethodArg::Enhanced => Method::Enhanced,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct CountCell {
    cosets: String,
    log2: String,
}

#[derive(Serialize)]
struct CountDoc {
    n: usize,
    k: usize,
    tau: Option<usize>,
    mf: usize,
    decreasing: bool,
    naive: CountCell,
    ovd: CountCell,
    enhanced: CountCell,
    ratio: String,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Gate { .. } | Error::NotDecreasing | Error::CapExceeded { .. } => EXIT_GATE,
            Error::Io(_) => EXIT_RUNTIME,
            _ => EXIT_CONFIG,
        };
        let mut message = e.to_string();
        if matches!(e, Error::NotDecreasing) {
            message.push_str(
                "; the ovd and enhanced reductions and the verifier need a decreasing code (naive and oracle still run)",
            );
        }
        Self { code, message }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))
}

impl CodeArgs {
    fn build(&self) -> CliResult<CodeSpec> {
        let n = self.n.ok_or_else(|| Failure::config("--n is required"))?;
        if let Some(path) = &self.info_set {
            let code = CodeSpec::parse_info_set(&read_file(path)?, n)?;
            if let Some(k) = self.k {
                if k != code.k() {
                    return Err(Failure::config(format!(
                        "--k {k} disagrees with {} indices in {}",
                        code.k(),
                        path.display()
                    )));
                }
            }
            return Ok(code);
        }
        let k = self
            .k
            .ok_or_else(|| Failure::config("--k is required unless --info-set is given"))?;
        let seq = match &self.sequence {
            Some(path) => {
                // A full-length file serves every N; a shorter one must match N exactly.
                let text = read_file(path)?;
                let full = text.split_whitespace().count() == ReliabilitySequence::NR_LEN;
                ReliabilitySequence::parse(&text, if full { None } else { Some(n) })?
            }
            None => ReliabilitySequence::nr(),
        };
        Ok(CodeSpec::construct_5g(n, k, &seq)?)
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| Failure {
                    code: EXIT_RUNTIME,
                    message: e.to_string(),
                })
        }
    }
}

fn report_sanity(result: &SpectrumResult) -> CliResult<()> {
    let code = &result.code;
    let violations = sanity_check(code, &result.spectrum);
    eprintln!(
        "{code} via {}: {} cosets, sum of A_d = {} (2^{}), {:.2?}",
        result.method,
        result.cosets_computed,
        result.spectrum.mass(),
        code.k(),
        result.elapsed
    );
    if code.is_info(code.len() - 1) {
        let ok = violations
            .iter()
            .all(|v| !matches!(v, polar_spectrum::spectrum::SanityViolation::Asymmetric { .. }));
        eprintln!("symmetry A_d = A_(N-d): {}", if ok { "ok" } else { "broken" });
    }
    if violations.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
    Err(Failure {
        code: EXIT_SANITY,
        message: format!("sanity check failed: {}", lines.join("; ")),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum {
            code,
            method,
            plan,
            format,
            out,
            workers,
        } => {
            let opts = SpectrumOptions { workers };
            let result = match plan {
                Some(path) => {
                    let (code, plan) = read_plan_json(&read_file(&path)?)?;
                    compute_from_plan(&code, &plan, &opts)?
                }
                None => compute_spectrum(&code.build()?, method.into(), &opts)?,
            };
            let text = match format {
                Format::Json => spectrum_json(&result)?,
                Format::Csv => spectrum_csv(&result.spectrum),
            };
            emit(out.as_deref(), &text)?;
            report_sanity(&result)
        }
        Command::Count { code, format, out } => {
            let code = code.build()?;
            let counts = count_all(&code)?;
            let profile = code.profile();
            let rows = [
                ("naive", &counts.naive),
                ("ovd", &counts.ovd),
                ("enhanced", &counts.enhanced),
            ];
            let ratio = (log2(&counts.ovd) - log2(&counts.enhanced)).exp2();
            let text = match format {
                CountFormat::Text => {
                    let mut s = format!(
                        "{code}  tau = {}  MF = {}{}\n",
                        profile.tau.map_or("-".to_string(), |t| t.to_string()),
                        profile.mf(),
                        if code.is_decreasing() {
                            ""
                        } else {
                            "  (not decreasing)"
                        }
                    );
                    s.push_str(&format!("{:<10}{:>36}  {:>7}\n", "method", "cosets", "log2"));
                    for (name, c) in rows {
                        s.push_str(&format!("{name:<10}{c:>36}  {:>7.2}\n", log2(c)));
                    }
                    s.push_str(&format!("ratio ovd/enhanced: {ratio:.2}\n"));
                    s
                }
                CountFormat::Json => {
                    let pair = |c: &num_bigint::BigUint| CountCell {
                        cosets: c.to_string(),
                        log2: format!("{:.2}", log2(c)),
                    };
                    let doc = CountDoc {
                        n: code.len(),
                        k: code.k(),
                        tau: profile.tau,
                        mf: profile.mf(),
                        decreasing: code.is_decreasing(),
                        naive: pair(&counts.naive),
                        ovd: pair(&counts.ovd),
                        enhanced: pair(&counts.enhanced),
                        ratio: format!("{ratio:.2}"),
                    };
                    serde_json::to_string_pretty(&doc).map_err(Error::from)?
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::Plan { code, method, out } => {
            let code = code.build()?;
            let plan = planner::plan(&code, method.into())?;
            emit(out.as_deref(), &plan_json(&code, &plan)?)?;
            eprintln!("{code}: {} entries ({})", plan.entries.len(), plan.method);
            Ok(())
        }
        Command::Verify {
            code,
            seed,
            group_cap,
            brute_cap,
            samples,
            out,
        } => {
            let code = code.build()?;
            if code.n() > 6 {
                return Err(Failure {
                    code: EXIT_GATE,
                    message: format!("verify supports n <= 6 (N <= 64), got N = {}", code.len()),
                });
            }
            let opts = VerifyOptions {
                group_cap,
                samples,
                seed,
                brute_cap,
            };
            let reports = verify_code(&code, &opts)?;
            emit(out.as_deref(), &report_json(&code, &reports)?)?;
            let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
            eprintln!("{code}: {} checks, {} failed", reports.len(), failed.len());
            if failed.is_empty() {
                return Ok(());
            }
            for r in &failed {
                eprintln!(
                    "  {} {}: {} violations, e.g. {}",
                    r.lemma,
                    r.subject,
                    r.violation_count,
                    r.violations.first().map_or("", String::as_str)
                );
            }
            Err(Failure {
                code: EXIT_VERIFY,
                message: "verification found violations".into(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
