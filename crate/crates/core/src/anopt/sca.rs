use nalgebra::DVector;
use num_complex::Complex64;

use crate::anopt::{project_feasible, OptimTrace, StopReason};
use crate::error::{Error, Result};
use crate::model::{SuperAlphabet, SystemConfig};
use crate::rates::{AnCovariance, RatePairs, SurrogateModel};

const MAX_INNER_STEPS: usize = 400;
const MIN_BACKTRACK_STEP: f64 = 1e-14;

/// Maximizes the concave surrogate around the current iterate by projected
/// gradient ascent with backtracking; monotone by construction since only
/// improving candidates are accepted.
fn inner_ascent(model: &SurrogateModel, start: &AnCovariance, tol: f64) -> Result<AnCovariance> {
    let mut q = start.clone();
    let mut value = model.objective(&q);
    if value == f64::NEG_INFINITY {
        return Err(Error::Numeric("surrogate is -inf at its own expansion point".into()));
    }
    let mut step = 1.0;
    for _ in 0..MAX_INNER_STEPS {
        let grad = model.gradient(&q);
        let mut local = step;
        let mut accepted = false;
        while local > MIN_BACKTRACK_STEP {
            let candidate = project_feasible(&(q.matrix() + grad.scale(local)))?;
            let cand_value = model.objective(&candidate);
            if cand_value > value {
                let gain = cand_value - value;
                q = candidate;
                value = cand_value;
                step = (local * 1.5).min(1e3);
                accepted = true;
                if gain < tol {
                    return Ok(q);
                }
                break;
            }
            local *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(q)
}

/// Successive convex approximation on the closed-form approximate secrecy
/// rate: rebuild the tangent surrogate at the current covariance, maximize it
/// over the unit-trace PSD set to tolerance `eps / 10`, and stop once the true
/// objective moves by less than `eps` between outer rounds. The recorded
/// objective sequence is nondecreasing because the surrogate is tight at its
/// expansion point and never exceeds the true objective.
pub fn sca_max_asr(
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    q_init: &AnCovariance,
    eps: f64,
    max_outer: usize,
) -> Result<(AnCovariance, OptimTrace)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidConfig(format!("eps must be positive, got {eps}")));
    }
    let pairs = RatePairs::new(h_l, g_l, config, alphabet);
    let mut q = q_init.clone();

    // the surrogate is tight at its expansion point, so -inf there means the
    // starting covariance itself is unusable; retry once from uniform
    let at_init = SurrogateModel::with_pairs(&pairs, &q, h_l, g_l, config).objective(&q);
    if at_init == f64::NEG_INFINITY || at_init.is_nan() {
        q = AnCovariance::uniform(q.dim());
        let retry = SurrogateModel::with_pairs(&pairs, &q, h_l, g_l, config).objective(&q);
        if retry == f64::NEG_INFINITY || retry.is_nan() {
            return Err(Error::Numeric("surrogate undefined at both the given and uniform starts".into()));
        }
    }

    let rate_at = |q: &AnCovariance| {
        let x = crate::linalg::quad_form(h_l, q.matrix());
        let y = crate::linalg::quad_form(g_l, q.matrix());
        pairs.e_tilde_at(y, config) - pairs.b_term_at(x, config)
    };

    let mut trace = OptimTrace::new();
    let mut prev = rate_at(&q);
    let mut best = prev;
    trace.push(0, prev, best, 0.0);
    for outer in 1..=max_outer.max(1) {
        let model = SurrogateModel::with_pairs(&pairs, &q, h_l, g_l, config);
        q = inner_ascent(&model, &q, eps / 10.0)?;
        let rate = rate_at(&q);
        best = best.max(rate);
        trace.push(outer, rate, best, rate - prev);
        if (rate - prev).abs() < eps {
            trace.converged = true;
            trace.reason = StopReason::Tolerance;
            return Ok((q, trace));
        }
        prev = rate;
    }
    trace.reason = StopReason::MaxIter;
    Ok((q, trace))
}
