use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use qchaos::commands::{self, SolveOptions, TraceOptions, TraceSource};
use qchaos::report::{render_bounds_table, BoundsReport, Method};
use qchaos_core::amplifier::DEFAULT_A;
use qchaos_core::dimacs::Diagnostic;

/// Decide CNF satisfiability by simulating a quantum oracle step and
/// amplifying the measured probability with a chaotic logistic map.
#[derive(Parser)]
#[command(name = "qchaos", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a DIMACS CNF file (exit 10 SAT, 20 UNSAT)
    Solve {
        /// DIMACS CNF input
        file: PathBuf,
        /// Logistic-map coefficient in [0, 4]
        #[arg(long, default_value_t = DEFAULT_A)]
        a: f64,
        /// Amplifier steps to run (default: 2n)
        #[arg(long)]
        max_steps: Option<usize>,
        /// How q^2 is computed
        #[arg(long, value_enum, default_value_t = Method::Counting)]
        method: Method,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Print the amplification trajectory as CSV (header: m,M_m)
    Trace {
        /// DIMACS CNF input; alternatively give --q2
        file: Option<PathBuf>,
        /// Iterate from this probability instead of a file
        #[arg(long)]
        q2: Option<f64>,
        /// Logistic-map coefficient in [0, 4]
        #[arg(long, default_value_t = DEFAULT_A)]
        a: f64,
        /// Steps to record (required with --q2; default 2n for files)
        #[arg(long)]
        max_steps: Option<usize>,
        /// How q^2 is computed for file input
        #[arg(long, value_enum, default_value_t = Method::Counting)]
        method: Method,
    },
    /// Count satisfying assignments exhaustively (exit 10 SAT, 20 UNSAT)
    Oracle {
        /// DIMACS CNF input
        file: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Check the crossing-index bounds over a range of n (exit 0 iff all pass)
    VerifyBounds {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 60)]
        n_max: u32,
        /// Start value numerator: the sweep iterates from k/2^n
        #[arg(long, default_value_t = 1)]
        k: u64,
        /// Logistic-map coefficient; bounds apply at 3.71 only
        #[arg(long, default_value_t = DEFAULT_A)]
        a: f64,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Generate a uniform random k-CNF instance in DIMACS form
    Gen {
        /// Number of variables
        #[arg(long)]
        n: u32,
        /// Number of clauses
        #[arg(long)]
        m: usize,
        /// Literals per clause (distinct variables, random polarity)
        #[arg(long)]
        k_literals: u32,
        /// RNG seed; identical arguments give identical output
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn print_warnings(warnings: &[Diagnostic]) {
    for warning in warnings {
        eprintln!("{warning}");
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Solve {
            file,
            a,
            max_steps,
            method,
            json,
        } => {
            let opts = SolveOptions {
                a,
                max_steps,
                method,
                enum_limit: commands::enum_limit_from_env()?,
            };
            let (report, warnings) = commands::solve_file(&file, &opts)?;
            print_warnings(&warnings);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render_human());
            }
            Ok(report.decision.exit_code())
        }
        Command::Trace {
            file,
            q2,
            a,
            max_steps,
            method,
        } => {
            let source = match (file, q2) {
                (Some(path), None) => TraceSource::File(path),
                (None, Some(q_squared)) => TraceSource::Probability(q_squared),
                _ => anyhow::bail!("give exactly one input: a FILE or --q2"),
            };
            let opts = TraceOptions {
                a,
                max_steps,
                method,
                enum_limit: commands::enum_limit_from_env()?,
            };
            let (trace, warnings) = commands::run_trace(&source, &opts)?;
            print_warnings(&warnings);
            print!("{}", commands::trace_csv(&trace));
            Ok(0)
        }
        Command::Oracle { file, json } => {
            let (report, warnings) =
                commands::oracle_file(&file, commands::enum_limit_from_env()?)?;
            print_warnings(&warnings);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render_human());
            }
            Ok(report.decision.exit_code())
        }
        Command::VerifyBounds {
            n_min,
            n_max,
            k,
            a,
            json,
        } => {
            let report = commands::bounds_sweep(n_min, n_max, k, a)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&BoundsReport::from(&report))?
                );
            } else {
                print!("{}", render_bounds_table(&report));
            }
            Ok(u8::from(!report.all_passed()))
        }
        Command::Gen {
            n,
            m,
            k_literals,
            seed,
        } => {
            print!("{}", commands::generate_kcnf(n, m, k_literals, seed)?);
            Ok(0)
        }
    }
}
