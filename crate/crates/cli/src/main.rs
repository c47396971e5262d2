//! Command-line front end: newform data, twist tables, single-twist verification, prime
//! scans, property checks and the numeric oracle.

mod cache;
mod commands;
mod output;
mod select;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadtwist::Error;

use output::Format;
use select::CurveArgs;

#[derive(Parser, Debug)]
#[command(name = "quadtwist", version, about = "2-adic valuations of quadratic-twist central L-values via modular symbols")]
struct Cli {
    /// Worker threads; defaults to the number of cores. 1 runs serially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rational newforms at a level: eigenvalues, lattice shape, T_1 and T_4.
    Newform {
        #[command(flatten)]
        curve: CurveArgs,
        /// Number of coefficients a_n to print.
        #[arg(long, default_value_t = 20)]
        bound: usize,
    },
    /// Single-prime table of valuations and bounds for M = 4^n q.
    Table {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        n: u8,
        #[arg(long, default_value_t = 3)]
        min_q: u64,
        #[arg(long)]
        max_q: u64,
    },
    /// Valuation and bounds for one modulus M = 4^n m.
    Verify {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        n: u8,
        #[arg(long)]
        m: u64,
    },
    /// First primes of a class such as S0+.
    Scan {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "S0+")]
        class: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Exact checks of the twisted-sum identities and bounds.
    CheckLemmas {
        #[command(flatten)]
        curve: CurveArgs,
        /// Largest odd part of the moduli swept.
        #[arg(long, default_value_t = 1500)]
        max_m: u64,
        /// Random k/M samples for the integrality check.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// Numeric twisted central value against the exact symbol sum.
    Oracle {
        #[command(flatten)]
        curve: CurveArgs,
        /// Character conductor: 1, odd square-free m, or 4m.
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
}

fn run(cli: &Cli) -> quadtwist::Result<ExitCode> {
    let f = cli.format;
    match &cli.command {
        Command::Newform { curve, bound } => commands::newform(curve, *bound, f),
        Command::Table { curve, n, min_q, max_q } => commands::table(curve, *n, *min_q, *max_q, f),
        Command::Verify { curve, n, m } => commands::verify(curve, *n, *m, f),
        Command::Scan { curve, class, count } => commands::scan(curve, class, *count, f),
        Command::CheckLemmas { curve, max_m, samples, seed } => {
            commands::check_lemmas(curve, *max_m, *samples, *seed, f)
        }
        Command::Oracle { curve, m } => commands::oracle(curve, *m, f),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(Error::HypothesisNotMet(why)) => {
            eprintln!("HYPOTHESIS_NOT_MET: {why}");
            ExitCode::from(2)
        }
        Err(Error::NoRationalNewform(n)) => {
            eprintln!("error: no cusp forms with rational eigenvalues at level {n}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
