use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bench::{ExperimentSpec, Scheme};
use crate::bench::sweep::run_scheme;
use crate::error::{Error, Result};
use crate::model::{build_super_alphabet, sample_channel};

/// One optimizer step in a trace dump.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    /// Which solver phase produced the row (`sa`, `sca`, `dinkelbach`, ...).
    pub phase: &'static str,
    pub step: usize,
    /// Current objective: selection score during annealing, closed-form rate
    /// for the surrogate loop, ratio estimate for the fractional solver.
    pub value: f64,
    /// Best value seen so far within the phase.
    pub best: f64,
    /// Solver control at that step (mutation parameter, improvement, ratio).
    pub control: f64,
}

/// Single-realization optimization trace for one scheme at one SNR point.
#[derive(Debug, Clone)]
pub struct TraceDump {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub seed: u64,
    pub rows: Vec<TraceRow>,
}

/// Runs realization 0 of the spec at `snr_db` and captures every recorded
/// iteration of the chosen scheme.
pub fn run_trace(spec: &ExperimentSpec, scheme: Scheme, snr_db: f64) -> Result<TraceDump> {
    let config = spec.system_config_at(snr_db)?;
    let alphabet = build_super_alphabet(&config)?;
    let sa = spec.sa_params();
    let mut channel_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    channel_rng.set_stream(0);
    let ch = sample_channel(&config, &mut channel_rng);
    let mut scheme_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    scheme_rng.set_stream(2 << 32);
    let outcome = run_scheme(scheme, &ch, &config, &alphabet, &sa, spec.mc_samples, &mut scheme_rng)?;
    let mut rows = Vec::new();
    for (phase, trace) in &outcome.phases {
        for p in &trace.points {
            rows.push(TraceRow { phase, step: p.step, value: p.value, best: p.best, control: p.control });
        }
    }
    if rows.is_empty() {
        return Err(Error::Numeric("scheme returned an empty trace".into()));
    }
    Ok(TraceDump { scheme, snr_db, seed: spec.seed, rows })
}

/// CSV layout mirrors the sweep output: `#` metadata, header, fixed columns.
pub fn write_trace_csv<W: Write>(dump: &TraceDump, mut out: W) -> Result<()> {
    writeln!(out, "# ssmbench trace")?;
    writeln!(out, "# version = {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# scheme = {}", dump.scheme.name())?;
    writeln!(out, "# snr_db = {}", dump.snr_db)?;
    writeln!(out, "# seed = {}", dump.seed)?;
    writeln!(out, "phase,step,value,best,control")?;
    for row in &dump.rows {
        writeln!(out, "{},{},{},{},{}", row.phase, row.step, row.value, row.best, row.control)?;
    }
    Ok(())
}

pub fn trace_csv_string(dump: &TraceDump) -> Result<String> {
    let mut buf = Vec::new();
    write_trace_csv(dump, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Numeric(format!("csv not utf-8: {e}")))
}
