use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::quad_form;
use crate::model::{SuperAlphabet, SystemConfig};
use crate::rates::{AnCovariance, RatePairs};

/// Closed-form approximate secrecy rate and its two log-sum terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedAsr {
    /// `e_tilde - b_term`.
    pub r_a: f64,
    /// Eavesdropper-side log-sum with the estimation error folded in.
    pub e_tilde: f64,
    /// Legitimate-side log-sum.
    pub b_term: f64,
}

/// Approximate mutual information of the legitimate link:
/// `2 log2(N) - b_term`, which lands in `[0, log2 N]` because the double sum
/// contains `N` unit diagonal terms.
pub fn ami_bob(
    h_l: &DVector<Complex64>,
    q: &AnCovariance,
    alphabet: &SuperAlphabet,
    config: &SystemConfig,
) -> f64 {
    let pairs = RatePairs::new(h_l, &DVector::zeros(h_l.len()), config, alphabet);
    let zeta = 2.0 * config.max_bits();
    zeta - pairs.b_term(h_l, q, config)
}

/// Closed-form approximate secrecy rate for a fixed antenna group and
/// covariance. The eavesdropper term takes the expectation over the
/// estimation error in closed form: the pairwise numerators gain a
/// `csi_err_var * ||d||^2` term and the denominator noise becomes
/// `csi_err_var * p2 + noise_var_eve`.
pub fn asr_closed(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    q: &AnCovariance,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
) -> ClosedAsr {
    let pairs = RatePairs::new(h_l, g_l, config, alphabet);
    asr_closed_with_pairs(&pairs, h_l, g_l, q, config)
}

pub(crate) fn asr_closed_with_pairs(
    pairs: &RatePairs,
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    q: &AnCovariance,
    config: &SystemConfig,
) -> ClosedAsr {
    let b_term = pairs.b_term(h_l, q, config);
    let e_tilde = pairs.e_tilde(g_l, q, config);
    ClosedAsr { r_a: e_tilde - b_term, e_tilde, b_term }
}

/// Large-array objective: the ratio of the legitimate SINR to the
/// eavesdropper SINR that the approximate secrecy rate converges to (in
/// `log2`) as the array grows.
pub fn large_scale_ratio(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    q: &AnCovariance,
    config: &SystemConfig,
) -> f64 {
    let n_s = h_l.len() as f64;
    let p2 = config.p2();
    let num = h_l.norm_squared() * (p2 * quad_form(g_l, q.matrix()) + config.eve_effective_noise());
    let den = (g_l.norm_squared() + n_s * config.csi_err_var)
        * (p2 * quad_form(h_l, q.matrix()) + config.noise_var_bob);
    num / den
}

/// Log-domain determinant-ratio score used to pre-select the antenna group
/// before any covariance design. Evaluated from the sub-channel norms; the
/// trailing `(N_s - 1)(ln psi_E - ln psi_B)` term is group-independent but
/// kept so values match the plain formula.
pub fn det_ratio_logscore(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
) -> f64 {
    det_ratio_logscore_from_norms(h_l.norm_squared(), g_l.norm_squared(), config)
}

/// Same score from precomputed `||h_l||^2` and `||g_l||^2`, used by the
/// annealing search where the norms are running sums over the active set.
pub fn det_ratio_logscore_from_norms(h_norm_sq: f64, g_norm_sq: f64, config: &SystemConfig) -> f64 {
    let p2 = config.p2();
    let psi_e = config.eve_effective_noise() / p2;
    let psi_b = config.noise_var_bob / p2;
    let n_s = config.n_active as f64;
    h_norm_sq.ln() + (psi_e + g_norm_sq).ln()
        - (g_norm_sq + config.csi_err_var * n_s).ln()
        - (psi_b + h_norm_sq).ln()
        + (n_s - 1.0) * (psi_e.ln() - psi_b.ln())
}
