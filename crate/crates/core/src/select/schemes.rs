use std::cell::RefCell;

use rand::Rng;

use crate::anopt::{dinkelbach_ancm, es_plus_gd, nsp_baseline, sca_max_asr, OptimTrace};
use crate::error::{Error, Result};
use crate::linalg::quad_form;
use crate::model::{select_subchannel, Aag, ChannelRealization, SuperAlphabet, SystemConfig};
use crate::rates::{asr_closed, det_ratio_logscore_from_norms, AnCovariance};
use crate::select::{enumerate_aags, initial_temperature, sa_search, ObjectiveHandle, SaParams};

/// Convergence tolerance shared by the iterative solvers.
pub const DEFAULT_EPS: f64 = 1e-4;
/// Outer-iteration cap for the surrogate maximization.
pub const DEFAULT_MAX_OUTER: usize = 200;
/// Iteration cap for the ratio solver.
pub const DEFAULT_MAX_DINKELBACH: usize = 50;
/// Probe count for the initial mutation parameter.
const TEMPERATURE_PROBES: usize = 16;
const TEMPERATURE_CHI0: f64 = 0.8;

/// Result of one composed selection scheme on one channel realization.
#[derive(Debug, Clone)]
pub struct SchemeOutcome {
    pub aag: Aag,
    pub q: AnCovariance,
    /// The scheme's native objective at the returned point: the closed-form
    /// approximate secrecy rate for the surrogate-based schemes and the
    /// baseline, the SINR ratio for the large-array scheme, and the
    /// Monte-Carlo rate estimate for the exhaustive benchmark.
    pub value: f64,
    /// Per-phase iteration logs, in execution order.
    pub phases: Vec<(&'static str, OptimTrace)>,
    /// Invocations of the inner covariance solver.
    pub solver_calls: usize,
}

impl SchemeOutcome {
    pub fn iterations(&self) -> usize {
        self.phases.iter().map(|(_, t)| t.len()).sum()
    }
}

fn annealing_params(params: &SaParams, c0: f64) -> SaParams {
    // keep enough cooling levels to matter even when the probed scale is tiny
    params.clone().with_c0(c0.max(params.cf * 50.0))
}

/// Joint selection: anneal over groups with the inner covariance solver as the
/// objective, memoized so each distinct group is solved once. The winner's
/// covariance is recovered by rerunning the (deterministic) inner solve.
pub fn joint_sa_max_asr<R: Rng + ?Sized>(
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    params: &SaParams,
    rng: &mut R,
) -> Result<SchemeOutcome> {
    let first_error: RefCell<Option<Error>> = RefCell::new(None);
    let mut handle = ObjectiveHandle::new(|aag: &Aag| {
        match joint_objective(ch, config, alphabet, aag) {
            Ok(v) => v,
            Err(e) => {
                first_error.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    });
    let seed = Aag::random(config.n_tx, config.n_active, rng)?;
    let c0 = initial_temperature(&mut handle, &seed, TEMPERATURE_PROBES, TEMPERATURE_CHI0, rng)?;
    let tuned = annealing_params(params, c0);
    let (aag, value, trace) = sa_search(&mut handle, &seed, &tuned, rng)?;
    let solver_calls = handle.evaluations();
    drop(handle);
    if let Some(e) = first_error.into_inner() {
        return Err(e);
    }
    let (h_l, g_l) = select_subchannel(ch, &aag)?;
    let (q, _) = sca_max_asr(&h_l, &g_l, config, alphabet, &AnCovariance::uniform(config.n_active), DEFAULT_EPS, DEFAULT_MAX_OUTER)?;
    Ok(SchemeOutcome { aag, q, value, phases: vec![("sa", trace)], solver_calls: solver_calls + 1 })
}

fn joint_objective(
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    aag: &Aag,
) -> Result<f64> {
    let (h_l, g_l) = select_subchannel(ch, aag)?;
    let init = AnCovariance::uniform(config.n_active);
    let (q, _) = sca_max_asr(&h_l, &g_l, config, alphabet, &init, DEFAULT_EPS, DEFAULT_MAX_OUTER)?;
    Ok(asr_closed(&h_l, &g_l, &q, config, alphabet).r_a)
}

/// Two-stage selection: anneal over the triangular-table objective (no
/// covariance design anywhere in stage one), then one inner solve on the
/// winning group.
pub fn separate_sa_max_asr<R: Rng + ?Sized>(
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    params: &SaParams,
    rng: &mut R,
) -> Result<SchemeOutcome> {
    let tables = crate::rates::build_triangular_tables(ch, config, &alphabet.constellation);
    let mut handle = ObjectiveHandle::new(|aag: &Aag| {
        crate::rates::separate_rate_from_tables(&tables, aag, config).unwrap_or(f64::NEG_INFINITY)
    });
    let seed = Aag::random(config.n_tx, config.n_active, rng)?;
    let c0 = initial_temperature(&mut handle, &seed, TEMPERATURE_PROBES, TEMPERATURE_CHI0, rng)?;
    let tuned = annealing_params(params, c0);
    let (aag, _, stage_one) = sa_search(&mut handle, &seed, &tuned, rng)?;
    drop(handle);

    let (h_l, g_l) = select_subchannel(ch, &aag)?;
    let (q, stage_two) = sca_max_asr(&h_l, &g_l, config, alphabet, &AnCovariance::uniform(config.n_active), DEFAULT_EPS, DEFAULT_MAX_OUTER)?;
    let value = asr_closed(&h_l, &g_l, &q, config, alphabet).r_a;
    Ok(SchemeOutcome {
        aag,
        q,
        value,
        phases: vec![("sa", stage_one), ("sca", stage_two)],
        solver_calls: 1,
    })
}

/// Large-array selection: pick the group by the determinant-ratio score
/// (exhaustively when allowed and small enough, otherwise steepest-mode
/// annealing), then solve the ratio problem on the winner. Returns the
/// converged ratio as `value`.
pub fn max_r_sinr_scheme<R: Rng + ?Sized>(
    ch: &ChannelRealization,
    config: &SystemConfig,
    params: &SaParams,
    rng: &mut R,
    use_es: bool,
) -> Result<SchemeOutcome> {
    let abs_h: Vec<f64> = ch.h.iter().map(|z| z.norm_sqr()).collect();
    let abs_g: Vec<f64> = ch.g_est.iter().map(|z| z.norm_sqr()).collect();
    let score = |aag: &Aag| {
        let mut h2 = 0.0;
        let mut g2 = 0.0;
        for &i in aag.active() {
            h2 += abs_h[i];
            g2 += abs_g[i];
        }
        det_ratio_logscore_from_norms(h2, g2, config)
    };

    let combos = crate::select::binomial(config.n_tx, config.n_active);
    let (aag, select_trace) = if use_es && combos <= 10_000 {
        let mut trace = OptimTrace::new();
        let mut best: Option<(Aag, f64)> = None;
        for (k, cand) in enumerate_aags(config.n_tx, config.n_active)?.into_iter().enumerate() {
            let s = score(&cand);
            if best.as_ref().is_none_or(|(_, v)| s > *v) {
                best = Some((cand, s));
            }
            let running = best.as_ref().unwrap().1;
            trace.push(k, s, running, 0.0);
        }
        trace.converged = true;
        trace.reason = crate::anopt::StopReason::Tolerance;
        let (aag, _) = best.expect("enumeration is nonempty");
        (aag, trace)
    } else {
        let mut handle = ObjectiveHandle::new(|aag: &Aag| score(aag));
        let seed = Aag::random(config.n_tx, config.n_active, rng)?;
        let c0 = initial_temperature(&mut handle, &seed, TEMPERATURE_PROBES, TEMPERATURE_CHI0, rng)?;
        let mut tuned = annealing_params(params, c0);
        tuned.steepest = true;
        let (aag, _, trace) = sa_search(&mut handle, &seed, &tuned, rng)?;
        (aag, trace)
    };

    let (h_l, g_l) = select_subchannel(ch, &aag)?;
    let (q, lambda, ratio_trace) = dinkelbach_ancm(&h_l, &g_l, config, DEFAULT_EPS, DEFAULT_MAX_DINKELBACH)?;
    Ok(SchemeOutcome {
        aag,
        q,
        value: lambda,
        phases: vec![("select", select_trace), ("dinkelbach", ratio_trace)],
        solver_calls: 1,
    })
}

/// Documented baseline: activate the antennas with the largest legitimate
/// channel gains, then spread the artificial noise uniformly over the
/// null space of the resulting sub-channel.
pub fn nsp_scheme(
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
) -> Result<SchemeOutcome> {
    let mut order: Vec<usize> = (0..config.n_tx).collect();
    order.sort_by(|&a, &b| {
        ch.h[b].norm_sqr().partial_cmp(&ch.h[a].norm_sqr()).unwrap().then(a.cmp(&b))
    });
    let aag = Aag::from_active(config.n_tx, &order[..config.n_active])?;
    let (h_l, g_l) = select_subchannel(ch, &aag)?;
    let q = nsp_baseline(&h_l)?;
    let value = asr_closed(&h_l, &g_l, &q, config, alphabet).r_a;
    let mut trace = OptimTrace::new();
    trace.push(0, value, value, 0.0);
    trace.converged = true;
    trace.reason = crate::anopt::StopReason::Tolerance;
    Ok(SchemeOutcome { aag, q, value, phases: vec![("nsp", trace)], solver_calls: 0 })
}

/// Exhaustive-search benchmark wrapper: restarted gradient ascent per group,
/// winner by the common-random-numbers rate estimate.
pub fn es_gd_scheme<R: Rng + ?Sized>(
    ch: &ChannelRealization,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
    restarts: usize,
    n_mc: usize,
    rng: &mut R,
) -> Result<SchemeOutcome> {
    let (aag, t, rate, trace) = es_plus_gd(ch, config, alphabet, restarts, n_mc, None, rng)?;
    let q = t.covariance();
    debug_assert!(quad_form(&ch.h, q.matrix()).is_finite());
    Ok(SchemeOutcome { aag, q, value: rate, phases: vec![("gd", trace)], solver_calls: 0 })
}
