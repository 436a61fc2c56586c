use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{complex_gaussian, complex_gaussian_vec, log2_sum_exp, quad_form};
use crate::model::{SuperAlphabet, SystemConfig};
use crate::rates::AnCovariance;

/// Exact mutual information of the legitimate link by Monte Carlo.
///
/// Outer average over the transmitted super-alphabet symbols, inner
/// expectation over `n_mc` receiver-noise draws; the artificial-noise power
/// `p2 * h_l Q h_l^H` enters through the exponent denominator. The estimate is
/// clamped to `[0, log2 N]`.
pub fn mi_bob_exact<R: Rng + ?Sized>(
    h_l: &DVector<Complex64>,
    q: &AnCovariance,
    alphabet: &SuperAlphabet,
    config: &SystemConfig,
    n_mc: usize,
    rng: &mut R,
) -> f64 {
    let n = alphabet.len();
    let den = config.p2() * quad_form(h_l, q.matrix()) + config.noise_var_bob;
    let z = alphabet.effective_symbols(h_l, config.p1());
    let mut acc = 0.0;
    let mut terms = vec![0.0; n];
    for _ in 0..n_mc.max(1) {
        let noise = complex_gaussian(rng, config.noise_var_bob);
        let noise_energy = noise.norm_sqr();
        for i in 0..n {
            for j in 0..n {
                let f = (z[i] - z[j] + noise).norm_sqr() - noise_energy;
                terms[j] = -f / den;
            }
            acc += log2_sum_exp(&terms);
        }
    }
    let max_bits = config.max_bits();
    let mi = max_bits - acc / (n * n_mc.max(1)) as f64;
    mi.clamp(0.0, max_bits)
}

/// Exact mutual information of the eavesdropper link by Monte Carlo, with the
/// expectation taken jointly over the channel estimation error and the
/// receiver noise. Each draw perturbs the estimated sub-channel, so the
/// exponent denominator `p2 * g Q g^H + noise_var_eve` is per-draw.
pub fn mi_eve_exact<R: Rng + ?Sized>(
    g_l: &DVector<Complex64>,
    q: &AnCovariance,
    alphabet: &SuperAlphabet,
    config: &SystemConfig,
    n_mc: usize,
    rng: &mut R,
) -> f64 {
    let n = alphabet.len();
    let n_s = g_l.len();
    let mut acc = 0.0;
    let mut terms = vec![0.0; n];
    for _ in 0..n_mc.max(1) {
        let g_draw = if config.csi_err_var > 0.0 {
            g_l + complex_gaussian_vec(rng, n_s, config.csi_err_var)
        } else {
            g_l.clone()
        };
        let noise = complex_gaussian(rng, config.noise_var_eve);
        let noise_energy = noise.norm_sqr();
        let den = config.p2() * quad_form(&g_draw, q.matrix()) + config.noise_var_eve;
        let z = alphabet.effective_symbols(&g_draw, config.p1());
        for m in 0..n {
            for k in 0..n {
                let f = (z[m] - z[k] + noise).norm_sqr() - noise_energy;
                terms[k] = -f / den;
            }
            acc += log2_sum_exp(&terms);
        }
    }
    let max_bits = config.max_bits();
    let mi = max_bits - acc / (n * n_mc.max(1)) as f64;
    mi.clamp(0.0, max_bits)
}
