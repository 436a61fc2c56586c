use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ssm_core::bench::{
    self, parse_spec, run_sweep, run_trace, run_validation, ExperimentSpec, Scheme,
};
use ssm_core::select::binomial;
use ssm_core::Error;

#[derive(Parser)]
#[command(name = "ssmbench", version, about = "Secrecy-rate experiments for secure spatial modulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ergodic SNR sweep described by an experiment file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Override the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Rayon worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Output CSV path (default: the spec's output_path, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump one scheme's per-iteration trace at a single SNR point.
    Trace {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = parse_scheme)]
        scheme: Scheme,
        #[arg(long)]
        snr_db: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in property checks.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the group-enumeration size and guards for an experiment file.
    Enumerate {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    match s {
        "es-gd" => Ok(Scheme::EsGd),
        "joint-sa" => Ok(Scheme::JointSa),
        "separate-sa" => Ok(Scheme::SeparateSa),
        "max-r-sinr" => Ok(Scheme::MaxRSinr),
        "nsp-baseline" => Ok(Scheme::NspBaseline),
        other => Err(format!("unknown scheme `{other}` (expected es-gd, joint-sa, separate-sa, max-r-sinr, nsp-baseline)")),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_) | Error::InvalidAag(_) | Error::Spec { .. } | Error::EnumerationGuard { .. } => 2,
        Error::Numeric(_) => 3,
        Error::Io(_) => 4,
    }
}

fn load(spec: &Path, seed: Option<u64>) -> Result<ExperimentSpec, Error> {
    let mut parsed = parse_spec(spec)?;
    if let Some(s) = seed {
        parsed.seed = s;
    }
    Ok(parsed)
}

fn install_workers(workers: Option<usize>) -> Result<Option<rayon::ThreadPool>, Error> {
    match workers {
        None => Ok(None),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(Some)
            .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}"))),
    }
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { spec, seed, workers, out } => {
            let spec = load(&spec, seed)?;
            let pool = install_workers(workers)?;
            let result = match &pool {
                Some(p) => p.install(|| run_sweep(&spec)),
                None => run_sweep(&spec),
            }?;
            let target = out.or_else(|| spec.output_path.as_ref().map(PathBuf::from));
            match target {
                Some(path) => {
                    bench::emit_csv(&result, &path)?;
                    eprintln!("wrote {} rows to {}", result.rows.len(), path.display());
                }
                None => print!("{}", bench::csv_string(&result)?),
            }
            Ok(())
        }
        Command::Trace { spec, scheme, snr_db, seed, out } => {
            let spec = load(&spec, seed)?;
            let dump = run_trace(&spec, scheme, snr_db)?;
            let text = bench::trace_csv_string(&dump)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    eprintln!("wrote {} steps to {}", dump.rows.len(), path.display());
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Validate { seed, workers } => {
            let _pool = install_workers(workers)?;
            let results = run_validation(seed);
            let mut failed = 0usize;
            for r in &results {
                let status = if r.pass { "ok  " } else { "FAIL" };
                println!("{status} {:<24} {}", r.name, r.detail);
                if !r.pass {
                    failed += 1;
                }
            }
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", results.len());
                std::process::exit(5);
            }
            println!("all {} checks passed", results.len());
            Ok(())
        }
        Command::Enumerate { spec } => {
            let spec = parse_spec(&spec)?;
            let n_tx = spec.system.n_tx;
            let n_active = spec.system.n_active.expect("resolved spec");
            let combos = binomial(n_tx, n_active);
            println!("n_tx = {n_tx}");
            println!("n_active = {n_active}");
            println!("aag_combinations = {combos}");
            println!("neighborhood_size = {}", n_active * (n_tx - n_active));
            println!(
                "es_gd_guard = {} ({})",
                ssm_core::anopt::DEFAULT_ES_GUARD,
                if combos <= ssm_core::anopt::DEFAULT_ES_GUARD { "within guard" } else { "exceeds guard" }
            );
            println!(
                "max_r_sinr_es_limit = 10000 ({})",
                if combos <= 10_000 { "exhaustive selection available" } else { "annealing only" }
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
