use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::ChannelRealization;

/// An active antenna group: a 0-1 mask over the transmit antennas with exactly
/// `n_active` ones, kept consistent with the sorted list of active indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Aag {
    mask: Vec<bool>,
    active: Vec<usize>,
}

impl Aag {
    pub fn from_mask(mask: Vec<bool>) -> Result<Self> {
        let active: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        if active.is_empty() {
            return Err(Error::InvalidAag("mask selects no antennas".into()));
        }
        Ok(Aag { mask, active })
    }

    pub fn from_active(n_tx: usize, active_indices: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n_tx];
        for &i in active_indices {
            if i >= n_tx {
                return Err(Error::InvalidAag(format!("active index {i} out of range for n_tx {n_tx}")));
            }
            if mask[i] {
                return Err(Error::InvalidAag(format!("duplicate active index {i}")));
            }
            mask[i] = true;
        }
        Self::from_mask(mask)
    }

    /// The first `n_active` antennas; used as a deterministic fallback seed.
    pub fn first_k(n_tx: usize, n_active: usize) -> Result<Self> {
        if n_active == 0 || n_active > n_tx {
            return Err(Error::InvalidAag(format!("cannot activate {n_active} of {n_tx} antennas")));
        }
        Self::from_active(n_tx, &(0..n_active).collect::<Vec<_>>())
    }

    /// Uniformly random group of `n_active` antennas.
    pub fn random<R: Rng + ?Sized>(n_tx: usize, n_active: usize, rng: &mut R) -> Result<Self> {
        if n_active == 0 || n_active > n_tx {
            return Err(Error::InvalidAag(format!("cannot activate {n_active} of {n_tx} antennas")));
        }
        // partial Fisher-Yates over the index pool
        let mut pool: Vec<usize> = (0..n_tx).collect();
        for i in 0..n_active {
            let j = rng.gen_range(i..n_tx);
            pool.swap(i, j);
        }
        Self::from_active(n_tx, &pool[..n_active])
    }

    pub fn n_tx(&self) -> usize {
        self.mask.len()
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.mask[i]
    }

    /// Entries of `v` at the active indices, in ascending index order.
    pub fn select(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_iterator(self.active.len(), self.active.iter().map(|&i| v[i]))
    }
}

/// Sub-channels `(h_l, g_est_l)` seen through the group's selection matrix.
pub fn select_subchannel(
    ch: &ChannelRealization,
    aag: &Aag,
) -> Result<(DVector<Complex64>, DVector<Complex64>)> {
    if aag.n_tx() != ch.h.len() {
        return Err(Error::InvalidAag(format!(
            "group is over {} antennas but channel has {}",
            aag.n_tx(),
            ch.h.len()
        )));
    }
    Ok((aag.select(&ch.h), aag.select(&ch.g_est)))
}
