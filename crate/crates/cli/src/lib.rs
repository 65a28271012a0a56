//! Batch verification CLI for the `{2}^m ⧢ {3,1}^n` shuffle relation.

pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mzv_shuffle::exact::certificate::Certificate;
use mzv_shuffle::exact::identities::Family;
use mzv_shuffle::{shuffle, Word};

use report::VerificationReport;
use suites::{RecurrenceConfig, SuiteError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mzv-verify",
    version,
    about = "Verify the {2}^m / {3,1}^n shuffle relation and its proof identities"
)]
pub struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Seed for certificate sample points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print only failing cells and the summary.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    PowerOdd,
    PowerEven,
    BinomOdd,
    BinomEven,
    All,
}

impl FamilyArg {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyArg::PowerOdd => vec![Family::PowerOdd],
            FamilyArg::PowerEven => vec![Family::PowerEven],
            FamilyArg::BinomOdd => vec![Family::BinomOdd],
            FamilyArg::BinomEven => vec![Family::BinomEven],
            FamilyArg::All => Family::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the shuffle product of two words.
    Shuffle { w1: String, w2: String },
    /// Check the T-class decomposition of (AB)^p ⧢ (AB)^q.
    VerifyLemma2 {
        #[arg(long, default_value_t = 5)]
        p_max: usize,
        #[arg(long, default_value_t = 5)]
        q_max: usize,
    },
    /// Check the weighted T-sum identity for 1 <= m <= n <= N, both parities.
    VerifyLemma3 {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Check the binomial identity families on an m x n grid.
    VerifyIdentities {
        #[arg(long, value_enum, default_value_t = FamilyArg::All)]
        family: FamilyArg,
        #[arg(long, default_value_t = 20)]
        m_max: i64,
        #[arg(long, default_value_t = 20)]
        n_max: i64,
    },
    /// Check the Chu-Vandermonde inner-sum reduction.
    VerifyReduction {
        #[arg(long, default_value_t = 15)]
        k_max: i64,
        #[arg(long, default_value_t = 15)]
        m_max: i64,
    },
    /// Check the closed double sum against the binomial right-hand side.
    VerifyRclosed {
        #[arg(long, default_value_t = 8)]
        m_max: i64,
        #[arg(long, default_value_t = 15)]
        n_max: i64,
    },
    /// Check the tabulated initial values for n = 1, 2, 3.
    VerifyInitial,
    /// Compare the shuffle MZV sum with its closed form for one (m, n).
    VerifyTheorem {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        rtol: f64,
    },
    /// Compare the shuffle MZV sum with its closed form for all m, n >= 1 with 4n + 2m <= W.
    VerifyTheoremGrid {
        #[arg(long, default_value_t = 14)]
        weight_max: usize,
        #[arg(long, default_value_t = 1e-8)]
        rtol: f64,
    },
    /// Compare ∫T with ζ of the matching shuffle.
    VerifyX {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-8)]
        rtol: f64,
    },
    /// Fit a recurrence to L(m, n) and check it on L and R.
    DiscoverRecurrence {
        #[arg(long, value_enum, default_value_t = FamilyArg::BinomOdd)]
        family: FamilyArg,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 20)]
        fit_max: i64,
        #[arg(long, default_value_t = 30)]
        check_max: i64,
    },
    /// Verify a WZ-style certificate file.
    CheckCertificate {
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

/// Runs the CLI with the given arguments, writing text to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, RunError> {
    let report = match &cli.command {
        Command::Shuffle { w1, w2 } => {
            let u: Word = w1.parse().map_err(|e| RunError::Usage(format!("{e}")))?;
            let v: Word = w2.parse().map_err(|e| RunError::Usage(format!("{e}")))?;
            writeln!(out, "{}", shuffle(&u, &v))?;
            return Ok(EXIT_PASS);
        }
        Command::VerifyLemma2 { p_max, q_max } => suites::lemma2(*p_max, *q_max),
        Command::VerifyLemma3 { n_max } => suites::lemma3(*n_max)?,
        Command::VerifyIdentities {
            family,
            m_max,
            n_max,
        } => suites::identities(&family.families(), *m_max, *n_max)?,
        Command::VerifyReduction { k_max, m_max } => suites::reduction(*k_max, *m_max),
        Command::VerifyRclosed { m_max, n_max } => suites::rclosed(*m_max, *n_max)?,
        Command::VerifyInitial => suites::initial()?,
        Command::VerifyTheorem { m, n, rtol } => {
            if m + n == 0 {
                return Err(RunError::Usage("need m + n >= 1".into()));
            }
            suites::theorem(*m, *n, check_rtol(*rtol)?)?
        }
        Command::VerifyTheoremGrid { weight_max, rtol } => {
            suites::theorem_grid(*weight_max, check_rtol(*rtol)?)?
        }
        Command::VerifyX { n_max, rtol } => suites::x_identities(*n_max, check_rtol(*rtol)?)?,
        Command::DiscoverRecurrence {
            family,
            m,
            order,
            degree,
            fit_max,
            check_max,
        } => {
            let family = match family {
                FamilyArg::All => {
                    return Err(RunError::Usage("--family all is not valid here".into()))
                }
                f => f.families()[0],
            };
            if *m < 1 || *fit_max < 1 {
                return Err(RunError::Usage("--m and --fit-max must be positive".into()));
            }
            let cfg = RecurrenceConfig {
                family,
                m: *m,
                order: *order,
                degree: *degree,
                fit_max: *fit_max,
                check_max: *check_max,
            };
            suites::discover(cfg)?.0
        }
        Command::CheckCertificate { file, samples } => {
            let cert = Certificate::from_file(file).map_err(SuiteError::from)?;
            suites::certificate(&cert, *samples, cli.seed, &file.display().to_string())?
        }
    };
    emit(cli, &report, out)?;
    Ok(if report.all_passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn check_rtol(rtol: f64) -> Result<f64, RunError> {
    if rtol.is_finite() && rtol > 0.0 {
        Ok(rtol)
    } else {
        Err(RunError::Usage(format!(
            "--rtol must be positive, got {rtol}"
        )))
    }
}

fn emit(cli: &Cli, report: &VerificationReport, out: &mut dyn Write) -> Result<(), RunError> {
    report.write_text(out, cli.quiet)?;
    if let Some(path) = &cli.json {
        report.write_json(path)?;
    }
    Ok(())
}
