use crate::error::{Error, Result};

/// System-level parameters shared by every computation.
///
/// Power is split as `p1 = power_split * total_power` for the information
/// symbol and `p2 = total_power - p1` for the artificial noise, so the two
/// always sum to `total_power` exactly. Noise and estimation-error variances
/// are linear (not dB). `csi_err_var` may be zero (perfectly known
/// eavesdropper channel); the receiver noise variances must be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Number of transmit antennas.
    pub n_tx: usize,
    /// Size of the active antenna group.
    pub n_active: usize,
    /// Constellation size M.
    pub mod_order: usize,
    /// Total transmit power (linear).
    pub total_power: f64,
    /// Fraction of `total_power` assigned to the information symbol, in (0, 1).
    pub power_split: f64,
    /// Receiver noise variance at the legitimate receiver.
    pub noise_var_bob: f64,
    /// Receiver noise variance at the eavesdropper.
    pub noise_var_eve: f64,
    /// Per-entry variance of the eavesdropper channel estimation error.
    pub csi_err_var: f64,
    /// Seed for derived generator streams.
    pub rng_seed: u64,
}

/// Default active-group size: the largest power of two not exceeding `n_tx`.
pub fn derive_n_active(n_tx: usize) -> Result<usize> {
    if n_tx < 2 {
        return Err(Error::InvalidConfig(format!("n_tx must be >= 2, got {n_tx}")));
    }
    Ok(1usize << n_tx.ilog2())
}

impl SystemConfig {
    /// Convenience constructor: derived `n_active`, `total_power = n_active`,
    /// even power split, unit noise variances, no estimation error.
    pub fn with_defaults(n_tx: usize, mod_order: usize) -> Result<Self> {
        let n_active = derive_n_active(n_tx)?;
        let cfg = SystemConfig {
            n_tx,
            n_active,
            mod_order,
            total_power: n_active as f64,
            power_split: 0.5,
            noise_var_bob: 1.0,
            noise_var_eve: 1.0,
            csi_err_var: 0.0,
            rng_seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tx < 2 {
            return Err(Error::InvalidConfig(format!("n_tx must be >= 2, got {}", self.n_tx)));
        }
        if self.n_active < 1 || self.n_active > self.n_tx {
            return Err(Error::InvalidConfig(format!(
                "n_active must satisfy 1 <= n_active <= n_tx, got {} with n_tx {}",
                self.n_active, self.n_tx
            )));
        }
        if !(self.power_split > 0.0 && self.power_split < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "power_split must lie strictly inside (0, 1), got {}",
                self.power_split
            )));
        }
        if !(self.total_power > 0.0) {
            return Err(Error::InvalidConfig(format!("total_power must be > 0, got {}", self.total_power)));
        }
        if !(self.noise_var_bob > 0.0) || !(self.noise_var_eve > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "noise variances must be > 0, got bob {} eve {}",
                self.noise_var_bob, self.noise_var_eve
            )));
        }
        if !(self.csi_err_var >= 0.0) {
            return Err(Error::InvalidConfig(format!("csi_err_var must be >= 0, got {}", self.csi_err_var)));
        }
        crate::model::alphabet::check_mod_order(self.mod_order)?;
        Ok(())
    }

    /// Information-symbol power.
    pub fn p1(&self) -> f64 {
        self.power_split * self.total_power
    }

    /// Artificial-noise power; `p1() + p2() == total_power` exactly.
    pub fn p2(&self) -> f64 {
        self.total_power - self.p1()
    }

    /// Number of super-alphabet symbols `n_active * mod_order`.
    pub fn alphabet_len(&self) -> usize {
        self.n_active * self.mod_order
    }

    /// `log2` of the super-alphabet size, the per-use rate ceiling.
    pub fn max_bits(&self) -> f64 {
        (self.alphabet_len() as f64).log2()
    }

    /// Effective eavesdropper noise once the estimation error is folded in:
    /// `csi_err_var * p2 + noise_var_eve`.
    pub fn eve_effective_noise(&self) -> f64 {
        self.csi_err_var * self.p2() + self.noise_var_eve
    }
}
