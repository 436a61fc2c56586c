use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bench::{ExperimentSpec, RateMetric, Scheme};
use crate::error::{Error, Result};
use crate::model::{build_super_alphabet, sample_channel, select_subchannel, ChannelRealization, SuperAlphabet, SystemConfig};
use crate::rates::{asr_closed, instantaneous_sr, mi_bob_exact, mi_eve_exact};
use crate::select::{
    es_gd_scheme, joint_sa_max_asr, max_r_sinr_scheme, nsp_scheme, separate_sa_max_asr, SaParams,
    SchemeOutcome,
};

const STREAM_CHANNEL: u64 = 0;
const STREAM_METRIC: u64 = 1;
const STREAM_SCHEME_BASE: u64 = 2;
const ES_GD_RESTARTS: usize = 5;

/// Generator stream for `(seed, domain, index)`: every realization and scheme
/// owns an independent stream, so results do not depend on scheduling order.
fn stream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((domain << 32) | index);
    rng
}

/// Runs one scheme on one realization.
pub fn run_scheme<R: rand::Rng + ?Sized>(
    scheme: Scheme,
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    sa: &SaParams,
    mc_samples: usize,
    rng: &mut R,
) -> Result<SchemeOutcome> {
    match scheme {
        Scheme::EsGd => es_gd_scheme(ch, config, alphabet, ES_GD_RESTARTS, mc_samples, rng),
        Scheme::JointSa => joint_sa_max_asr(ch, config, alphabet, sa, rng),
        Scheme::SeparateSa => separate_sa_max_asr(ch, config, alphabet, sa, rng),
        Scheme::MaxRSinr => max_r_sinr_scheme(ch, config, sa, rng, true),
        Scheme::NspBaseline => nsp_scheme(ch, config, alphabet),
    }
}

fn score_outcome(
    metric: RateMetric,
    outcome: &SchemeOutcome,
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    mc_samples: usize,
    metric_rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let (h_l, g_l) = select_subchannel(ch, &outcome.aag)?;
    let sr = match metric {
        RateMetric::ExactMc => {
            let i_b = mi_bob_exact(&h_l, &outcome.q, alphabet, config, mc_samples, metric_rng);
            let i_e = mi_eve_exact(&g_l, &outcome.q, alphabet, config, mc_samples, metric_rng);
            instantaneous_sr(i_b, i_e).sr
        }
        RateMetric::AsrClosed => {
            let r_a = asr_closed(&h_l, &g_l, &outcome.q, config, alphabet).r_a;
            if r_a > 0.0 {
                r_a
            } else {
                0.0
            }
        }
    };
    Ok(sr)
}

/// One aggregated sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub ergodic_sr_bits: f64,
    pub std_error: f64,
    pub mean_iterations: f64,
    pub wall_time_s: f64,
}

/// Deterministic run description stamped into every output file.
#[derive(Debug, Clone)]
pub struct SweepMeta {
    pub version: String,
    pub seed: u64,
    pub snr_definition: String,
    pub rate_metric: RateMetric,
    pub spec_toml: String,
    /// Per-scheme skipped-realization counts.
    pub failures: Vec<(Scheme, usize)>,
}

/// Ergodic sweep output: per-(scheme, SNR) rows plus run metadata.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub meta: SweepMeta,
}

struct CellSample {
    sr: f64,
    iterations: usize,
    seconds: f64,
}

/// Runs the full ergodic sweep described by a resolved spec.
///
/// Realization `r` draws its channel from stream `(seed, r)`, shared by every
/// scheme and SNR point (paired comparisons); scheme-internal randomness and
/// the metric's Monte-Carlo draws use their own per-realization streams.
/// Realizations run in parallel and are reduced in index order, so the output
/// is a function of `(spec, seed)` alone, wall-clock columns aside. A scheme
/// failing on a realization drops that sample with a warning; more than 5%
/// failures for any scheme aborts the sweep.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepResult> {
    let metric = spec.rate_metric.ok_or_else(|| Error::Spec {
        key: "rate_metric".into(),
        reason: "spec not resolved".into(),
    })?;
    let sa = spec.sa_params();
    let realizations = spec.n_realizations;
    let allowed_failures = (realizations as f64 * 0.05).floor() as usize;

    let mut rows = Vec::new();
    let mut failures: Vec<(Scheme, usize)> = spec.schemes.iter().map(|s| (*s, 0)).collect();

    for &snr_db in &spec.snr_grid_db {
        let config = spec.system_config_at(snr_db)?;
        let alphabet = build_super_alphabet(&config)?;

        let samples: Vec<Vec<Result<CellSample>>> = (0..realizations)
            .into_par_iter()
            .map(|r| {
                let ch = sample_channel(&config, &mut stream(spec.seed, STREAM_CHANNEL, r as u64));
                spec.schemes
                    .iter()
                    .enumerate()
                    .map(|(k, &scheme)| {
                        let started = Instant::now();
                        let mut scheme_rng = stream(spec.seed, STREAM_SCHEME_BASE + k as u64, r as u64);
                        let outcome = run_scheme(scheme, &ch, &config, &alphabet, &sa, spec.mc_samples, &mut scheme_rng)?;
                        let mut metric_rng = stream(spec.seed, STREAM_METRIC, r as u64);
                        let sr = score_outcome(metric, &outcome, &ch, &config, &alphabet, spec.mc_samples, &mut metric_rng)?;
                        Ok(CellSample { sr, iterations: outcome.iterations(), seconds: started.elapsed().as_secs_f64() })
                    })
                    .collect()
            })
            .collect();

        for (k, &scheme) in spec.schemes.iter().enumerate() {
            let mut srs = Vec::with_capacity(realizations);
            let mut iter_sum = 0usize;
            let mut seconds = 0.0;
            let mut failed = 0usize;
            for per_real in &samples {
                match &per_real[k] {
                    Ok(cell) => {
                        srs.push(cell.sr);
                        iter_sum += cell.iterations;
                        seconds += cell.seconds;
                    }
                    Err(e) => {
                        failed += 1;
                        eprintln!("warning: {} failed on a realization at {snr_db} dB: {e}", scheme.name());
                    }
                }
            }
            failures[k].1 += failed;
            if failed > allowed_failures {
                return Err(Error::Numeric(format!(
                    "{} failed on {failed} of {realizations} realizations at {snr_db} dB (over the 5% budget)",
                    scheme.name()
                )));
            }
            let n = srs.len().max(1) as f64;
            let mean = srs.iter().sum::<f64>() / n;
            let var = srs.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0).max(1.0);
            rows.push(SweepRow {
                scheme,
                snr_db,
                ergodic_sr_bits: mean,
                std_error: (var / n).sqrt(),
                mean_iterations: iter_sum as f64 / n,
                wall_time_s: seconds,
            });
        }
    }

    Ok(SweepResult {
        rows,
        meta: SweepMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: spec.seed,
            snr_definition: "snr_db = 10*log10(total_power / noise_var_bob); noise_var_eve = noise_var_bob".into(),
            rate_metric: metric,
            spec_toml: spec.to_toml()?,
            failures,
        },
    })
}

fn metric_name(metric: RateMetric) -> &'static str {
    match metric {
        RateMetric::ExactMc => "exact-mc",
        RateMetric::AsrClosed => "asr-closed",
    }
}

/// CSV layout: `#`-prefixed metadata lines, one header row, then data rows in
/// a fixed column order with full-precision (shortest round-trip) numbers.
/// Only the trailing wall-time column varies between identically seeded runs.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> Result<()> {
    writeln!(out, "# ssmbench sweep")?;
    writeln!(out, "# version = {}", result.meta.version)?;
    writeln!(out, "# seed = {}", result.meta.seed)?;
    writeln!(out, "# snr_definition = {}", result.meta.snr_definition)?;
    writeln!(out, "# rate_metric = {}", metric_name(result.meta.rate_metric))?;
    for line in result.meta.spec_toml.lines() {
        writeln!(out, "# spec: {line}")?;
    }
    let failure_list: Vec<String> =
        result.meta.failures.iter().map(|(s, n)| format!("{}={n}", s.name())).collect();
    writeln!(out, "# failures: {}", failure_list.join(" "))?;
    writeln!(out, "scheme,snr_db,ergodic_sr_bits,std_error,mean_iterations,wall_time_s")?;
    for row in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.scheme.name(),
            row.snr_db,
            row.ergodic_sr_bits,
            row.std_error,
            row.mean_iterations,
            row.wall_time_s
        )?;
    }
    Ok(())
}

/// [`write_csv`] into a string.
pub fn csv_string(result: &SweepResult) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Numeric(format!("csv not utf-8: {e}")))
}

/// Writes the sweep CSV to `path`.
pub fn emit_csv(result: &SweepResult, path: &std::path::Path) -> Result<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    write_csv(result, std::io::BufWriter::new(file))
}
