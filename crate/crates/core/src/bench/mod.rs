//! Experiment driver: TOML experiment specs, seeded ergodic SNR sweeps with
//! paired channel realizations across schemes, per-iteration optimizer traces,
//! and deterministic CSV output.

mod spec;
pub mod sweep;
mod trace;
pub mod validate;

pub use spec::{parse_spec, ExperimentSpec, RateMetric, SaSection, Scheme, SystemSection};
pub use sweep::{csv_string, emit_csv, run_sweep, write_csv, SweepMeta, SweepResult, SweepRow};
pub use trace::{run_trace, trace_csv_string, write_trace_csv, TraceDump, TraceRow};
pub use validate::{run_validation, CheckOutcome};
