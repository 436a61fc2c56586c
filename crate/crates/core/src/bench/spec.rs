use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{derive_n_active, SystemConfig};
use crate::select::SaParams;

/// Rate metric used when scoring a scheme's output on a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMetric {
    /// Monte-Carlo exact mutual information difference, clamped at zero.
    ExactMc,
    /// Closed-form approximate secrecy rate, clamped at zero.
    AsrClosed,
}

/// The five runnable schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    EsGd,
    JointSa,
    SeparateSa,
    MaxRSinr,
    NspBaseline,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::EsGd => "es-gd",
            Scheme::JointSa => "joint-sa",
            Scheme::SeparateSa => "separate-sa",
            Scheme::MaxRSinr => "max-r-sinr",
            Scheme::NspBaseline => "nsp-baseline",
        }
    }
}

/// `[system]` section of an experiment file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub n_tx: usize,
    /// Defaults to the largest power of two not exceeding `n_tx`.
    #[serde(default)]
    pub n_active: Option<usize>,
    #[serde(default = "default_mod_order")]
    pub mod_order: usize,
    /// Defaults to `n_active` so the per-antenna power is one.
    #[serde(default)]
    pub total_power: Option<f64>,
    #[serde(default = "default_beta")]
    pub power_split: f64,
    #[serde(default = "default_csi_err")]
    pub csi_err_var: f64,
}

fn default_mod_order() -> usize {
    4
}
fn default_beta() -> f64 {
    0.5
}
fn default_csi_err() -> f64 {
    0.25
}

/// `[sa]` section; unset sizes are resolved against the group size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaSection {
    #[serde(default = "default_cf")]
    pub cf: f64,
    #[serde(default = "default_alpha")]
    pub cooling_alpha: f64,
    #[serde(default)]
    pub sample_size: Option<usize>,
    #[serde(default)]
    pub equilibrium_len: Option<usize>,
    #[serde(default = "default_max_mutations")]
    pub max_mutations: usize,
}

fn default_cf() -> f64 {
    1e-3
}
fn default_alpha() -> f64 {
    0.95
}
fn default_max_mutations() -> usize {
    10_000
}

impl Default for SaSection {
    fn default() -> Self {
        SaSection {
            cf: default_cf(),
            cooling_alpha: default_alpha(),
            sample_size: None,
            equilibrium_len: None,
            max_mutations: default_max_mutations(),
        }
    }
}

/// A full experiment: system parameters, the SNR grid, scheme list, annealing
/// controls, and seeding. Parsing resolves every default so a parsed spec
/// serializes back to an equivalent file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub system: SystemSection,
    pub snr_grid_db: Vec<f64>,
    #[serde(default = "default_realizations")]
    pub n_realizations: usize,
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub sa: SaSection,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    /// Defaults to `exact-mc` up to 64 super-alphabet symbols, `asr-closed` above.
    #[serde(default)]
    pub rate_metric: Option<RateMetric>,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_realizations() -> usize {
    500
}
fn default_mc_samples() -> usize {
    500
}
fn default_seed() -> u64 {
    1
}

impl ExperimentSpec {
    /// Fills every optional field and validates the result.
    pub fn resolve(mut self) -> Result<Self> {
        let n_active = match self.system.n_active {
            Some(n) => n,
            None => derive_n_active(self.system.n_tx)?,
        };
        self.system.n_active = Some(n_active);
        if self.system.total_power.is_none() {
            self.system.total_power = Some(n_active as f64);
        }
        if self.sa.sample_size.is_none() {
            self.sa.sample_size = Some(n_active);
        }
        if self.sa.equilibrium_len.is_none() {
            self.sa.equilibrium_len = Some(10 * n_active);
        }
        if self.rate_metric.is_none() {
            let symbols = n_active * self.system.mod_order;
            self.rate_metric = Some(if symbols <= 64 { RateMetric::ExactMc } else { RateMetric::AsrClosed });
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.snr_grid_db.is_empty() {
            return Err(Error::Spec { key: "snr_grid_db".into(), reason: "must be nonempty".into() });
        }
        if self.n_realizations == 0 {
            return Err(Error::Spec { key: "n_realizations".into(), reason: "must be >= 1".into() });
        }
        if self.schemes.is_empty() {
            return Err(Error::Spec { key: "schemes".into(), reason: "need at least one scheme".into() });
        }
        if self.mc_samples == 0 {
            return Err(Error::Spec { key: "mc_samples".into(), reason: "must be >= 1".into() });
        }
        // materialize one config to trip any system-section violation
        self.system_config_at(self.snr_grid_db[0])
            .map_err(|e| Error::Spec { key: "system".into(), reason: e.to_string() })?;
        self.sa_params().validate().map_err(|e| Error::Spec { key: "sa".into(), reason: e.to_string() })?;
        Ok(())
    }

    /// Concrete system configuration for one grid point. The sweep axis is
    /// `snr_db = 10 log10(total_power / noise_var)` with both receivers at the
    /// same noise level, so the noise variance is
    /// `total_power * 10^(-snr_db / 10)`.
    pub fn system_config_at(&self, snr_db: f64) -> Result<SystemConfig> {
        let n_active = self.system.n_active.ok_or_else(|| Error::Spec {
            key: "system.n_active".into(),
            reason: "spec not resolved".into(),
        })?;
        let total_power = self.system.total_power.unwrap_or(n_active as f64);
        let noise = total_power * 10f64.powf(-snr_db / 10.0);
        let cfg = SystemConfig {
            n_tx: self.system.n_tx,
            n_active,
            mod_order: self.system.mod_order,
            total_power,
            power_split: self.system.power_split,
            noise_var_bob: noise,
            noise_var_eve: noise,
            csi_err_var: self.system.csi_err_var,
            rng_seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Annealing controls with sizes resolved; `c0` is recomputed per search.
    pub fn sa_params(&self) -> SaParams {
        let n_active = self.system.n_active.unwrap_or(1);
        let mut p = SaParams::for_group_size(n_active);
        p.cf = self.sa.cf;
        p.cooling_alpha = self.sa.cooling_alpha;
        if let Some(s) = self.sa.sample_size {
            p.sample_size = s;
        }
        if let Some(e) = self.sa.equilibrium_len {
            p.equilibrium_len = e;
        }
        p.max_mutations = self.sa.max_mutations;
        p
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| Error::Spec { key: "<serialize>".into(), reason: e.to_string() })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| Error::Spec {
            key: "<parse>".into(),
            reason: e.to_string(),
        })?;
        spec.resolve()
    }
}

/// Reads and fully resolves an experiment file.
pub fn parse_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)?;
    ExperimentSpec::from_toml(&text)
}
