use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::log2_sum_exp;
use crate::model::{Aag, ChannelRealization, SuperAlphabet, SystemConfig};
use crate::rates::RatePairs;

/// AN-free approximate rates used by the two-stage scheme, evaluated directly
/// from their double sums. Returns `(i_b, i_e)`; the stage-one objective is
/// `i_e - i_b`.
pub fn separate_rate_direct(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
) -> (f64, f64) {
    let pairs = RatePairs::new(h_l, g_l, config, alphabet);
    let den_b = 4.0 * config.noise_var_bob;
    let den_e = 4.0 * config.noise_var_eve;
    let i_b = log2_sum_exp(&pairs.bob_quads().iter().map(|a| -a / den_b).collect::<Vec<_>>());
    let i_e = log2_sum_exp(&pairs.eve_quads().iter().map(|a| -a / den_e).collect::<Vec<_>>());
    (i_b, i_e)
}

/// Upper-triangular per-antenna-pair tabulation of the AN-free rate sums over
/// all transmit antennas, so any antenna group's stage-one objective is a sum
/// of its active sub-triangle.
///
/// Entry `(u, v)` for `u < v` holds the full constellation-pair sum for that
/// antenna pair; the diagonal holds the distinct-symbol half-sum for a single
/// antenna. The eavesdropper table is built from the estimated channel with
/// the estimation-error energy folded into the numerators and its receiver
/// noise in the denominators.
#[derive(Debug, Clone)]
pub struct TriangularTables {
    pub u_bob: DMatrix<f64>,
    pub u_eve: DMatrix<f64>,
}

pub fn build_triangular_tables(
    ch: &ChannelRealization,
    config: &SystemConfig,
    constellation: &[Complex64],
) -> TriangularTables {
    let n_t = ch.h.len();
    let m = constellation.len();
    let p1 = config.p1();
    let den_b = 4.0 * config.noise_var_bob;
    let den_e = 4.0 * config.noise_var_eve;
    let se = config.csi_err_var;
    let mut u_bob = DMatrix::zeros(n_t, n_t);
    let mut u_eve = DMatrix::zeros(n_t, n_t);
    for u in 0..n_t {
        // diagonal: same antenna, distinct symbol pairs with m > n
        let hu2 = ch.h[u].norm_sqr();
        let gu2 = ch.g_est[u].norm_sqr() + se;
        let mut diag_b = 0.0;
        let mut diag_e = 0.0;
        for a in 0..m {
            for b in 0..a {
                let d2 = (constellation[a] - constellation[b]).norm_sqr();
                diag_b += (-p1 * hu2 * d2 / den_b).exp();
                diag_e += (-p1 * gu2 * d2 / den_e).exp();
            }
        }
        u_bob[(u, u)] = diag_b;
        u_eve[(u, u)] = diag_e;
        for v in (u + 1)..n_t {
            let mut cell_b = 0.0;
            let mut cell_e = 0.0;
            for a in 0..m {
                for b in 0..m {
                    let hb = (ch.h[u] * constellation[a] - ch.h[v] * constellation[b]).norm_sqr();
                    cell_b += (-p1 * hb / den_b).exp();
                    let ge = (ch.g_est[u] * constellation[a] - ch.g_est[v] * constellation[b]).norm_sqr()
                        + se * (constellation[a].norm_sqr() + constellation[b].norm_sqr());
                    cell_e += (-p1 * ge / den_e).exp();
                }
            }
            u_bob[(u, v)] = cell_b;
            u_eve[(u, v)] = cell_e;
        }
    }
    TriangularTables { u_bob, u_eve }
}

/// Stage-one objective `log2 D_E - log2 D_B` from the tables: each `D` is the
/// diagonal identical-pair count `N_s * M` plus twice the active sub-triangle
/// sum (symmetry doubles both the cross-antenna blocks and the distinct-symbol
/// diagonal half-sums).
pub fn separate_rate_from_tables(
    tables: &TriangularTables,
    aag: &Aag,
    config: &SystemConfig,
) -> Result<f64> {
    if aag.n_tx() != tables.u_bob.nrows() {
        return Err(Error::InvalidAag(format!(
            "group over {} antennas but tables cover {}",
            aag.n_tx(),
            tables.u_bob.nrows()
        )));
    }
    let base = (aag.n_active() * config.mod_order) as f64;
    let mut d_b = base;
    let mut d_e = base;
    let active = aag.active();
    for (s, &u) in active.iter().enumerate() {
        d_b += 2.0 * tables.u_bob[(u, u)];
        d_e += 2.0 * tables.u_eve[(u, u)];
        for &v in &active[s + 1..] {
            d_b += 2.0 * tables.u_bob[(u, v)];
            d_e += 2.0 * tables.u_eve[(u, v)];
        }
    }
    Ok(d_e.log2() - d_b.log2())
}
