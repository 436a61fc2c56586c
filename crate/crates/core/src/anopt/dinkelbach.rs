use nalgebra::DVector;
use num_complex::Complex64;

use crate::anopt::{OptimTrace, StopReason};
use crate::error::{Error, Result};
use crate::linalg::{gram, quad_form, top_eigpair};
use crate::model::SystemConfig;
use crate::rates::AnCovariance;

/// Large-array SINR numerator and denominator for a candidate covariance:
/// `(S_E, S_B)` with `S_E = p2 g_l Q g_l^H + (csi_err_var p2 + noise_var_eve)`
/// and `S_B = p2 h_l Q h_l^H + noise_var_bob`.
pub fn sinr_terms(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    q: &AnCovariance,
    config: &SystemConfig,
) -> (f64, f64) {
    let p2 = config.p2();
    let s_e = p2 * quad_form(g_l, q.matrix()) + config.eve_effective_noise();
    let s_b = p2 * quad_form(h_l, q.matrix()) + config.noise_var_bob;
    (s_e, s_b)
}

/// Dinkelbach iteration for `max S_E(Q) / S_B(Q)` over unit-trace PSD
/// covariances. For a fixed ratio estimate the subproblem
/// `max S_E - lambda S_B` is linear in `Q`, so its optimum is the rank-one
/// outer product of the top eigenvector of `g_l^H g_l - lambda h_l^H h_l`;
/// the ratio update makes `lambda` nondecreasing until the fixed point
/// `lambda = S_E(Q) / S_B(Q)`.
pub fn dinkelbach_ancm(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    eps: f64,
    max_iter: usize,
) -> Result<(AnCovariance, f64, OptimTrace)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidConfig(format!("eps must be positive, got {eps}")));
    }
    let n = h_l.len();
    if g_l.len() != n {
        return Err(Error::InvalidConfig("sub-channel lengths differ".into()));
    }
    let g_gram = gram(g_l);
    let h_gram = gram(h_l);

    let mut q = AnCovariance::uniform(n);
    let (s_e, s_b) = sinr_terms(h_l, g_l, &q, config);
    let mut lambda = s_e / s_b;
    let mut trace = OptimTrace::new();
    trace.push(0, lambda, lambda, lambda);
    for step in 1..=max_iter.max(1) {
        let objective = &g_gram - h_gram.scale(lambda);
        let (_, u) = top_eigpair(&objective)?;
        q = AnCovariance::from_unit_vector(&u)?;
        let (s_e, s_b) = sinr_terms(h_l, g_l, &q, config);
        let next = s_e / s_b;
        trace.push(step, next, next, next);
        let done = (next - lambda).abs() < eps;
        lambda = next;
        if done {
            trace.converged = true;
            trace.reason = StopReason::Tolerance;
            return Ok((q, lambda, trace));
        }
    }
    trace.reason = StopReason::MaxIter;
    Ok((q, lambda, trace))
}
