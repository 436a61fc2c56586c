//! Secure spatial modulation workbench.
//!
//! Models a multi-antenna transmitter talking to a single-antenna receiver
//! while a single-antenna eavesdropper with imperfectly known channel listens
//! in, and implements the secrecy-rate machinery around that link:
//!
//! - **`model`** — system configuration, Rayleigh channels with estimated
//!   eavesdropper CSI, active antenna groups, the SM super-alphabet, and ML
//!   detection.
//! - **`rates`** — exact mutual information by Monte Carlo, the closed-form
//!   approximate secrecy rate, its concave surrogate, triangular-table rates
//!   for the two-stage scheme, and the large-array SINR-ratio objective.
//! - **`anopt`** — artificial-noise design for a fixed antenna group: gradient
//!   ascent on the exact rate, successive convex approximation on the
//!   surrogate, a Dinkelbach fractional-programming solver, and a null-space
//!   baseline.
//! - **`select`** — the 0-1 antenna-group search: exhaustive enumeration,
//!   simulated annealing with Metropolis acceptance and integer sampling, and
//!   the composed selection schemes.
//! - **`bench`** — experiment driver: TOML experiment specs, seeded ergodic
//!   SNR sweeps, optimizer traces, and CSV emission.
//!
//! ```
//! use ssm_core::model::{build_super_alphabet, sample_channel, SystemConfig};
//! use ssm_core::select::{nsp_scheme};
//! use rand::SeedableRng;
//!
//! let mut cfg = SystemConfig::with_defaults(7, 4).unwrap();
//! cfg.csi_err_var = 0.25;
//! let alphabet = build_super_alphabet(&cfg).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let ch = sample_channel(&cfg, &mut rng);
//! let out = nsp_scheme(&ch, &cfg, &alphabet).unwrap();
//! assert_eq!(out.aag.n_active(), 4);
//! ```

pub mod anopt;
pub mod bench;
pub mod error;
pub mod linalg;
pub mod model;
pub mod rates;
pub mod select;

pub use error::{Error, Result};
