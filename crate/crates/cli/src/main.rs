//! The `qtetra` binary: exact computations and verification suites for
//! quantum shuffle, Hall, and cluster algebras over valued quivers.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtetra_cli::data::DataSet;
use qtetra_cli::json;
use qtetra_cli::suites::{render_line, run_suites, ReportJson, SuiteConfig, SUITE_NAMES};
use qtetra_cli::compute;

#[derive(Parser)]
#[command(
    name = "qtetra",
    version,
    about = "Exact computations in quantum shuffle, Hall, and cluster algebras",
    long_about = "Exact computations in quantum shuffle, Hall, and cluster algebras \
                  over valued quivers, with verification suites for the identities \
                  connecting them.  All arithmetic is exact; all output is \
                  deterministic.  Bundled quivers: a2, a3, b2, g2, kronecker."
)]
struct Cli {
    /// Worker threads inside enumeration kernels (default 1 for
    /// deterministic timing; results never depend on this).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Directory of `<name>.json` quiver files that override or extend
    /// the bundled data.
    #[arg(long, global = true, value_name = "DIR")]
    seed_data: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print a pass/fail report.
    Verify(VerifyArgs),
    /// Run one computation and print its JSON document.
    #[command(subcommand)]
    Compute(ComputeOp),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); default: all suites.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,

    /// Restrict the suites to one named quiver.
    #[arg(long, value_name = "NAME")]
    quiver: Option<String>,

    /// Emit the report as a JSON document instead of text lines.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ComputeOp {
    /// Shuffle product of two basis words (letters are vertex labels).
    ShuffleMul {
        #[arg(long)]
        quiver: String,
        /// First word, e.g. `1,2,1`; empty for the unit.
        #[arg(long, default_value = "")]
        x: String,
        /// Second word.
        #[arg(long, default_value = "")]
        y: String,
    },
    /// Image of a basis word in the quantum polynomial ring for the
    /// word `i`.
    Feigin {
        #[arg(long)]
        quiver: String,
        /// The word `i` as vertex labels (default: doubled adapted word).
        #[arg(long)]
        word: Option<String>,
        /// The basis word to map.
        #[arg(long, default_value = "")]
        x: String,
    },
    /// Dual Hall image of the rigid class with a given dimension vector
    /// in the shuffle algebra.
    Omega {
        #[arg(long)]
        quiver: String,
        /// Dimension vector, e.g. `1,1`.
        #[arg(long)]
        dim: String,
        /// Fixed field size (prime power).
        #[arg(long)]
        q: Option<u64>,
        /// Compute exactly in the field-size variable instead.
        #[arg(long)]
        symbolic: bool,
    },
    /// Quantum character of the rigid class with a given dimension
    /// vector, through the Hall algebra.
    PsiTilde {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        dim: String,
        /// The word `i` as vertex labels (default: doubled adapted word).
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        symbolic: bool,
    },
    /// Product of two rescaled dual classes at a fixed field size.
    HallMul {
        #[arg(long)]
        quiver: String,
        /// Field size (prime power).
        #[arg(long)]
        q: u64,
        /// First class as `dims` or `dims@index`, e.g. `1,1@0`.
        #[arg(long)]
        x: String,
        /// Second class.
        #[arg(long)]
        y: String,
    },
    /// Apply a mutation sequence to the initial quantum seed for the
    /// word `i` and print the resulting seed.
    Mutate {
        #[arg(long)]
        quiver: String,
        /// The word `i` as vertex labels (default: doubled adapted word).
        #[arg(long)]
        word: Option<String>,
        /// Mutation directions, e.g. `0,1,0`; empty for the initial seed.
        #[arg(long, default_value = "")]
        directions: String,
    },
    /// Quantum cluster character of the rigid class with a given
    /// dimension vector.
    Character {
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        dim: String,
        /// The word `i` as vertex labels (default: doubled adapted word).
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        symbolic: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    // Cap kernel parallelism for the whole process.  This runs before any
    // parallel work, so the build cannot race an implicit pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let data = DataSet::with_overrides(cli.seed_data.as_deref())?;
    match &cli.command {
        Command::Verify(args) => {
            if let Some(name) = &args.quiver {
                data.get(name)?;
            }
            let names: Vec<String> = if args.suites.is_empty() {
                SUITE_NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                args.suites.clone()
            };
            let cfg = SuiteConfig { data: &data, quiver: args.quiver.as_deref() };
            let checks = run_suites(&names, &cfg)?;
            let passed = checks.iter().all(|c| c.passed);
            if args.json {
                println!("{}", json::render(&ReportJson { checks, passed }));
            } else {
                for check in &checks {
                    println!("{}", render_line(check));
                }
                let ok = checks.iter().filter(|c| c.passed).count();
                println!(
                    "{}: {ok} of {} suites passed",
                    if passed { "ok" } else { "FAILED" },
                    checks.len()
                );
            }
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Compute(op) => {
            let doc = match op {
                ComputeOp::ShuffleMul { quiver, x, y } => {
                    compute::shuffle_mul_op(&data, quiver, x, y)?
                }
                ComputeOp::Feigin { quiver, word, x } => {
                    compute::feigin_op(&data, quiver, word.as_deref(), x)?
                }
                ComputeOp::Omega { quiver, dim, q, symbolic } => {
                    compute::omega_op(&data, quiver, dim, *q, *symbolic)?
                }
                ComputeOp::PsiTilde { quiver, dim, word, q, symbolic } => {
                    compute::psi_tilde_op(&data, quiver, dim, word.as_deref(), *q, *symbolic)?
                }
                ComputeOp::HallMul { quiver, q, x, y } => {
                    compute::hall_mul_op(&data, quiver, *q, x, y)?
                }
                ComputeOp::Mutate { quiver, word, directions } => {
                    compute::mutate_op(&data, quiver, word.as_deref(), directions)?
                }
                ComputeOp::Character { quiver, dim, word, q, symbolic } => {
                    compute::character_op(&data, quiver, dim, word.as_deref(), *q, *symbolic)?
                }
            };
            println!("{doc}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
