use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::{log2_sum_exp, quad_form};
use crate::model::{SuperAlphabet, SystemConfig};
use crate::rates::AnCovariance;

/// Precomputed pairwise symbol-difference energies for one (channel pair,
/// antenna group). Both closed-form rate terms depend on the covariance only
/// through the scalar quadratic forms `h_l Q h_l^H` and `g_l Q g_l^H`, so a
/// single precompute of the `N^2` numerators makes repeated evaluations cheap.
#[derive(Debug, Clone)]
pub struct RatePairs {
    n: usize,
    /// `p1 * |h_l (x_i - x_j)|^2`, row-major.
    bob_quad: Vec<f64>,
    /// `p1 * (x_m - x_k)^H (g_l^H g_l + csi_err_var I) (x_m - x_k)`, row-major.
    eve_quad: Vec<f64>,
}

impl RatePairs {
    pub fn new(
        h_l: &DVector<Complex64>,
        g_l: &DVector<Complex64>,
        config: &SystemConfig,
        alphabet: &SuperAlphabet,
    ) -> Self {
        let n = alphabet.len();
        let p1 = config.p1();
        let zh = alphabet.effective_symbols(h_l, 1.0);
        let zg = alphabet.effective_symbols(g_l, 1.0);
        let mut bob_quad = Vec::with_capacity(n * n);
        let mut eve_quad = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                bob_quad.push(p1 * (zh[i] - zh[j]).norm_sqr());
                let gd = (zg[i] - zg[j]).norm_sqr();
                eve_quad.push(p1 * (gd + config.csi_err_var * alphabet.diff_norm_sqr(i, j)));
            }
        }
        RatePairs { n, bob_quad, eve_quad }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub(crate) fn bob_quads(&self) -> &[f64] {
        &self.bob_quad
    }

    pub(crate) fn eve_quads(&self) -> &[f64] {
        &self.eve_quad
    }

    /// `log2 sum_ij exp(-bob_quad_ij / (4 (p2 x + noise_var_bob)))` where
    /// `x = h_l Q h_l^H`.
    pub fn b_term_at(&self, x: f64, config: &SystemConfig) -> f64 {
        let denom = 4.0 * (config.p2() * x + config.noise_var_bob);
        let terms: Vec<f64> = self.bob_quad.iter().map(|a| -a / denom).collect();
        log2_sum_exp(&terms)
    }

    /// `log2 sum_mk exp(-eve_quad_mk / (4 (p2 y + csi_err_var p2 + noise_var_eve)))`
    /// where `y = g_l Q g_l^H`.
    pub fn e_tilde_at(&self, y: f64, config: &SystemConfig) -> f64 {
        let denom = 4.0 * (config.p2() * y + config.eve_effective_noise());
        let terms: Vec<f64> = self.eve_quad.iter().map(|a| -a / denom).collect();
        log2_sum_exp(&terms)
    }

    pub fn b_term(&self, h_l: &DVector<Complex64>, q: &AnCovariance, config: &SystemConfig) -> f64 {
        self.b_term_at(quad_form(h_l, q.matrix()), config)
    }

    pub fn e_tilde(&self, g_l: &DVector<Complex64>, q: &AnCovariance, config: &SystemConfig) -> f64 {
        self.e_tilde_at(quad_form(g_l, q.matrix()), config)
    }
}
