use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::anopt::{AnProjection, OptimTrace, StopReason};
use crate::error::{Error, Result};
use crate::linalg::{complex_gaussian, complex_gaussian_vec, gram, log2_sum_exp, row_times_mat, LN_2};
use crate::model::{select_subchannel, Aag, ChannelRealization, SuperAlphabet, SystemConfig};
use crate::select::enumerate_aags;

/// Default cap on the enumerated group count for the exhaustive-search
/// benchmark; desk-scale arrays pass, anything larger must raise it
/// explicitly.
pub const DEFAULT_ES_GUARD: u128 = 1000;

/// Monte-Carlo noise realizations frozen for the duration of one gradient
/// search, so accept/reject comparisons and gradient checks see a
/// deterministic objective. The estimation-error draws are stored at full
/// antenna width so one set serves every candidate group.
#[derive(Debug, Clone)]
pub struct FrozenDraws {
    bob_noise: Vec<Complex64>,
    eve_noise: Vec<Complex64>,
    eve_err: Vec<DVector<Complex64>>,
}

impl FrozenDraws {
    pub fn sample<R: Rng + ?Sized>(dim: usize, n_mc: usize, config: &SystemConfig, rng: &mut R) -> Self {
        let n_mc = n_mc.max(1);
        let mut bob_noise = Vec::with_capacity(n_mc);
        let mut eve_noise = Vec::with_capacity(n_mc);
        let mut eve_err = Vec::with_capacity(n_mc);
        for _ in 0..n_mc {
            bob_noise.push(complex_gaussian(rng, config.noise_var_bob));
            eve_noise.push(complex_gaussian(rng, config.noise_var_eve));
            eve_err.push(if config.csi_err_var > 0.0 {
                complex_gaussian_vec(rng, dim, config.csi_err_var)
            } else {
                DVector::zeros(dim)
            });
        }
        FrozenDraws { bob_noise, eve_noise, eve_err }
    }

    /// Restriction of full-width draws to one antenna group.
    pub fn select(&self, aag: &Aag) -> FrozenDraws {
        FrozenDraws {
            bob_noise: self.bob_noise.clone(),
            eve_noise: self.eve_noise.clone(),
            eve_err: self.eve_err.iter().map(|e| aag.select(e)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bob_noise.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bob_noise.is_empty()
    }
}

fn average_inner_term(effective: &[Complex64], noise: Complex64, denom: f64, terms: &mut [f64]) -> f64 {
    let n = effective.len();
    let noise_energy = noise.norm_sqr();
    let mut acc = 0.0;
    for i in 0..n {
        for (j, slot) in terms.iter_mut().enumerate() {
            let f = (effective[i] - effective[j] + noise).norm_sqr() - noise_energy;
            *slot = -f / denom;
        }
        acc += log2_sum_exp(terms);
    }
    acc
}

/// Secrecy rate estimate `I_bob - I_eve` (not clamped) under frozen draws; the
/// artificial noise enters through the per-link denominators
/// `p2 ||channel T||^2 + receiver variance`.
pub fn mc_secrecy_rate(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    t: &AnProjection,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    draws: &FrozenDraws,
) -> f64 {
    mc_secrecy_rate_raw(h_l, g_l, t.matrix(), config, alphabet, draws)
}

/// [`mc_secrecy_rate`] on a raw, possibly unnormalized projection matrix;
/// finite-difference probes of the gradient need to step off the unit-energy
/// constraint surface.
pub fn mc_secrecy_rate_raw(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    t: &DMatrix<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    draws: &FrozenDraws,
) -> f64 {
    let n = alphabet.len();
    let samples = draws.len() as f64;
    let mut terms = vec![0.0; n];

    let den_b = config.p2() * row_times_mat(h_l, t).norm_squared() + config.noise_var_bob;
    let zh = alphabet.effective_symbols(h_l, config.p1());
    let mut bob_acc = 0.0;
    for &noise in &draws.bob_noise {
        bob_acc += average_inner_term(&zh, noise, den_b, &mut terms);
    }
    let i_bob = config.max_bits() - bob_acc / (n as f64 * samples);

    let mut eve_acc = 0.0;
    for (err, &noise) in draws.eve_err.iter().zip(&draws.eve_noise) {
        let g_draw = g_l + err;
        let den_e = config.p2() * row_times_mat(&g_draw, t).norm_squared() + config.noise_var_eve;
        let zg = alphabet.effective_symbols(&g_draw, config.p1());
        eve_acc += average_inner_term(&zg, noise, den_e, &mut terms);
    }
    let i_eve = config.max_bits() - eve_acc / (n as f64 * samples);

    i_bob - i_eve
}

fn softmax_weighted_f_sum(effective: &[Complex64], noise: Complex64, denom: f64) -> f64 {
    // sum_i [ sum_j f_j exp(-f_j/denom) / sum_j exp(-f_j/denom) ]
    let n = effective.len();
    let noise_energy = noise.norm_sqr();
    let mut acc = 0.0;
    let mut f_buf = vec![0.0; n];
    for i in 0..n {
        let mut m = f64::NEG_INFINITY;
        for j in 0..n {
            let f = (effective[i] - effective[j] + noise).norm_sqr() - noise_energy;
            f_buf[j] = f;
            m = m.max(-f / denom);
        }
        let mut wsum = 0.0;
        let mut fsum = 0.0;
        for &f in &f_buf {
            let w = (-f / denom - m).exp();
            wsum += w;
            fsum += f * w;
        }
        acc += fsum / wsum;
    }
    acc
}

/// Monte-Carlo gradient of the secrecy rate with respect to the projection
/// matrix under frozen draws, in the conjugate (Wirtinger) convention: a real
/// perturbation of entry `(a, b)` moves the rate by twice the entry's real
/// part. The eavesdropper term pushes AN energy toward the (error-perturbed)
/// wiretap channel, the legitimate term pulls it away.
pub fn grad_sr_frozen(
    t: &AnProjection,
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    draws: &FrozenDraws,
) -> DMatrix<Complex64> {
    let n = alphabet.len() as f64;
    let p2 = config.p2();
    let samples = draws.len() as f64;

    let den_b = p2 * row_times_mat(h_l, t.matrix()).norm_squared() + config.noise_var_bob;
    let zh = alphabet.effective_symbols(h_l, config.p1());
    let mut bob_scalar = 0.0;
    for &noise in &draws.bob_noise {
        bob_scalar += softmax_weighted_f_sum(&zh, noise, den_b) * p2 / (den_b * den_b);
    }
    let bob_matrix = gram(h_l).scale(bob_scalar / samples);

    let dim = t.dim();
    let mut eve_matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for (err, &noise) in draws.eve_err.iter().zip(&draws.eve_noise) {
        let g_draw = g_l + err;
        let den_e = p2 * row_times_mat(&g_draw, t.matrix()).norm_squared() + config.noise_var_eve;
        let zg = alphabet.effective_symbols(&g_draw, config.p1());
        let scalar = softmax_weighted_f_sum(&zg, noise, den_e) * p2 / (den_e * den_e);
        eve_matrix += gram(&g_draw).scale(scalar);
    }
    eve_matrix /= Complex64::new(samples, 0.0);

    ((eve_matrix - bob_matrix) * t.matrix()).scale(1.0 / (LN_2 * n))
}

/// Gradient with fresh draws from `rng`; see [`grad_sr_frozen`] for the
/// convention.
pub fn grad_sr_wrt_t<R: Rng + ?Sized>(
    t: &AnProjection,
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    n_mc: usize,
    rng: &mut R,
) -> DMatrix<Complex64> {
    let draws = FrozenDraws::sample(h_l.len(), n_mc, config, rng);
    grad_sr_frozen(t, h_l, g_l, config, alphabet, &draws)
}

// accepted ascent steps are capped so a pathological landscape cannot spin forever
const GD_STEP_CAP: usize = 10_000;

/// Backtracking gradient ascent on the frozen-draw secrecy rate: candidate
/// `T + mu * grad` renormalized to unit energy, accepted when the rate does
/// not drop, otherwise `mu` halves; stops when `mu` falls below `mu_min`.
/// The step size is never restored within a run.
#[allow(clippy::too_many_arguments)]
pub fn gd_anpm_frozen(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    t0: &AnProjection,
    mu0: f64,
    mu_min: f64,
    draws: &FrozenDraws,
) -> Result<(AnProjection, f64, OptimTrace)> {
    if !(mu0 > 0.0 && mu_min > 0.0) {
        return Err(Error::InvalidConfig(format!("step sizes must be positive, got mu0 {mu0} mu_min {mu_min}")));
    }
    let mut t = t0.clone();
    let mut rate = mc_secrecy_rate(h_l, g_l, &t, config, alphabet, draws);
    let mut trace = OptimTrace::new();
    let mut mu = mu0;
    let mut step = 0usize;
    trace.push(step, rate, rate, mu);
    while mu >= mu_min && step < GD_STEP_CAP {
        let grad = grad_sr_frozen(&t, h_l, g_l, config, alphabet, draws);
        if grad.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("gradient has non-finite entries".into()));
        }
        let candidate = match AnProjection::normalized(t.matrix() + grad.scale(mu)) {
            Ok(c) => c,
            Err(_) => {
                mu *= 0.5;
                continue;
            }
        };
        let cand_rate = mc_secrecy_rate(h_l, g_l, &candidate, config, alphabet, draws);
        if cand_rate >= rate {
            t = candidate;
            rate = cand_rate;
            step += 1;
            trace.push(step, rate, rate, mu);
        } else {
            mu *= 0.5;
        }
    }
    trace.converged = mu < mu_min;
    trace.reason = if trace.converged { StopReason::Tolerance } else { StopReason::MaxIter };
    Ok((t, rate, trace))
}

/// [`gd_anpm_frozen`] with draws sampled once from `rng` at entry.
#[allow(clippy::too_many_arguments)]
pub fn gd_anpm<R: Rng + ?Sized>(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    t0: &AnProjection,
    mu0: f64,
    mu_min: f64,
    n_mc: usize,
    rng: &mut R,
) -> Result<(AnProjection, f64, OptimTrace)> {
    let draws = FrozenDraws::sample(h_l.len(), n_mc, config, rng);
    gd_anpm_frozen(h_l, g_l, config, alphabet, t0, mu0, mu_min, &draws)
}

/// Exhaustive search over antenna groups with restarted gradient ascent per
/// group. One full-width draw set is shared by every group and restart so the
/// final argmax compares estimates under common random numbers. Refuses to
/// enumerate more than `l_guard` (default [`DEFAULT_ES_GUARD`]) groups.
#[allow(clippy::too_many_arguments)]
pub fn es_plus_gd<R: Rng + ?Sized>(
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    restarts: usize,
    n_mc: usize,
    l_guard: Option<u128>,
    rng: &mut R,
) -> Result<(Aag, AnProjection, f64, OptimTrace)> {
    let guard = l_guard.unwrap_or(DEFAULT_ES_GUARD);
    let combinations = crate::select::binomial(config.n_tx, config.n_active);
    if combinations > guard {
        return Err(Error::EnumerationGuard { combinations, guard });
    }
    let draws = FrozenDraws::sample(config.n_tx, n_mc, config, rng);
    let groups = enumerate_aags(config.n_tx, config.n_active)?;
    let mut best: Option<(Aag, AnProjection, f64, OptimTrace)> = None;
    for aag in groups {
        let (h_l, g_l) = select_subchannel(ch, &aag)?;
        let sub = draws.select(&aag);
        for _ in 0..restarts.max(1) {
            let t0 = AnProjection::random(config.n_active, rng);
            let (t, rate, trace) = gd_anpm_frozen(&h_l, &g_l, config, alphabet, &t0, 0.5, 1e-4, &sub)?;
            if best.as_ref().is_none_or(|(_, _, r, _)| rate > *r) {
                best = Some((aag.clone(), t, rate, trace));
            }
        }
    }
    best.ok_or_else(|| Error::Numeric("no antenna group evaluated".into()))
}
