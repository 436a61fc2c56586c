use std::collections::HashSet;

use rand::Rng;

use crate::anopt::{OptimTrace, StopReason};
use crate::error::{Error, Result};
use crate::model::Aag;
use crate::select::{ObjectiveHandle, SaParams};

/// Binomial coefficient in wide arithmetic; saturates at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `C(n_tx, n_active)` groups in lexicographic order of their sorted
/// active-index lists.
pub fn enumerate_aags(n_tx: usize, n_active: usize) -> Result<Vec<Aag>> {
    if n_active == 0 || n_active > n_tx {
        return Err(Error::InvalidAag(format!("cannot choose {n_active} of {n_tx} antennas")));
    }
    let mut out = Vec::new();
    let mut indices: Vec<usize> = (0..n_active).collect();
    loop {
        out.push(Aag::from_active(n_tx, &indices)?);
        // advance the combination
        let mut i = n_active;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if indices[i] != i + n_tx - n_active {
                break;
            }
        }
        indices[i] += 1;
        for j in i + 1..n_active {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

/// Uniformly random neighbor: deactivate one active antenna, activate one
/// silent antenna (Hamming distance two, group size preserved).
pub fn neighbor<R: Rng + ?Sized>(aag: &Aag, rng: &mut R) -> Result<Aag> {
    let n_tx = aag.n_tx();
    let n_active = aag.n_active();
    if n_active >= n_tx {
        return Err(Error::InvalidAag("a full group has no neighbors".into()));
    }
    let silent: Vec<usize> = (0..n_tx).filter(|&i| !aag.is_active(i)).collect();
    let out = aag.active()[rng.gen_range(0..n_active)];
    let inn = silent[rng.gen_range(0..silent.len())];
    let mut mask = aag.mask().to_vec();
    mask[out] = false;
    mask[inn] = true;
    Aag::from_mask(mask)
}

/// The full neighborhood, `n_active * (n_tx - n_active)` groups.
pub fn all_neighbors(aag: &Aag) -> Vec<Aag> {
    let silent: Vec<usize> = (0..aag.n_tx()).filter(|&i| !aag.is_active(i)).collect();
    let mut out = Vec::with_capacity(aag.n_active() * silent.len());
    for &a in aag.active() {
        for &s in &silent {
            let mut mask = aag.mask().to_vec();
            mask[a] = false;
            mask[s] = true;
            out.push(Aag::from_mask(mask).expect("swap preserves the active count"));
        }
    }
    out
}

/// Metropolis criterion: accept when `min(1, exp(delta / c))` beats a uniform
/// draw from `[0, 1)`; improvements always pass, a `-inf` delta never does.
pub fn metropolis_accept<R: Rng + ?Sized>(delta: f64, c: f64, rng: &mut R) -> bool {
    debug_assert!(c > 0.0);
    if delta >= 0.0 {
        return true;
    }
    if delta == f64::NEG_INFINITY || delta.is_nan() {
        return false;
    }
    (delta / c).exp() > rng.gen::<f64>()
}

/// Initial mutation parameter from a short random walk: the mean objective
/// drop over deteriorating transitions, scaled so their initial acceptance
/// ratio is roughly `chi0`. Falls back to the largest observed |delta|, or to
/// 1 when the probed landscape is flat.
pub fn initial_temperature<R: Rng + ?Sized>(
    objective: &mut ObjectiveHandle<'_>,
    seed_aag: &Aag,
    probes: usize,
    chi0: f64,
    rng: &mut R,
) -> Result<f64> {
    if probes < 10 {
        return Err(Error::InvalidConfig(format!("need at least 10 probes, got {probes}")));
    }
    if !(chi0 > 0.0 && chi0 < 1.0) {
        return Err(Error::InvalidConfig(format!("chi0 must be in (0,1), got {chi0}")));
    }
    if seed_aag.n_active() == seed_aag.n_tx() {
        return Ok(1.0);
    }
    let mut current = seed_aag.clone();
    let mut f_current = objective.value(&current);
    let mut drops = Vec::new();
    let mut largest = 0.0f64;
    for _ in 0..probes {
        let cand = neighbor(&current, rng)?;
        let f_cand = objective.value(&cand);
        let delta = f_cand - f_current;
        if delta.is_finite() {
            largest = largest.max(delta.abs());
            if delta < 0.0 {
                drops.push(-delta);
            }
        }
        current = cand;
        f_current = f_cand;
    }
    if !drops.is_empty() {
        let mean = drops.iter().sum::<f64>() / drops.len() as f64;
        Ok(mean / (1.0 / chi0).ln())
    } else if largest > 0.0 {
        Ok(largest)
    } else {
        Ok(1.0)
    }
}

fn draw_unvisited_neighbor<R: Rng + ?Sized>(
    current: &Aag,
    visited: &HashSet<Vec<bool>>,
    rng: &mut R,
) -> Option<Aag> {
    let hood = current.n_active() * (current.n_tx() - current.n_active());
    for _ in 0..4 * hood {
        let cand = neighbor(current, rng).ok()?;
        if !visited.contains(cand.mask()) {
            return Some(cand);
        }
    }
    // rejection stalled; fall back to explicit enumeration of the remainder
    let pool: Vec<Aag> = all_neighbors(current).into_iter().filter(|a| !visited.contains(a.mask())).collect();
    if pool.is_empty() {
        None
    } else {
        let k = rng.gen_range(0..pool.len());
        Some(pool[k].clone())
    }
}

/// Annealing search over antenna groups.
///
/// Each temperature level runs three phases: a fixed budget of Metropolis
/// mutations, then integer-sampling rounds that draw up to `sample_size`
/// distinct unvisited neighbors and hill-climb on strict improvement
/// (repeating while a round improves on its entry value), then geometric
/// cooling. Stops when the mutation parameter falls to `cf` or the level cap
/// is hit; returns the best group seen anywhere, not the final state. Trace
/// rows record the current and best objective with the mutation parameter as
/// control.
pub fn sa_search<R: Rng + ?Sized>(
    objective: &mut ObjectiveHandle<'_>,
    seed_aag: &Aag,
    params: &SaParams,
    rng: &mut R,
) -> Result<(Aag, f64, OptimTrace)> {
    params.validate()?;
    let n_tx = seed_aag.n_tx();
    let n_active = seed_aag.n_active();
    let mut trace = OptimTrace::new();

    let mut current = seed_aag.clone();
    let mut f_current = objective.value(&current);
    if f_current == f64::NEG_INFINITY {
        // one deterministic fallback before giving up
        current = Aag::first_k(n_tx, n_active)?;
        f_current = objective.value(&current);
        if f_current == f64::NEG_INFINITY {
            return Err(Error::Numeric("objective is -inf at both the seed and fallback groups".into()));
        }
    }
    let mut best = current.clone();
    let mut f_best = f_current;
    let mut step = 0usize;
    trace.push(step, f_current, f_best, params.c0);

    if n_active == n_tx {
        trace.converged = true;
        trace.reason = StopReason::Tolerance;
        return Ok((current, f_current, trace));
    }

    let hood = n_active * (n_tx - n_active);
    let budget = if params.steepest { hood } else { params.sample_size.min(hood) };

    let mut c = params.c0;
    let mut level = 0usize;
    while c > params.cf && level < params.max_mutations {
        // mutation phase
        for _ in 0..params.equilibrium_len {
            let cand = neighbor(&current, rng)?;
            let f_cand = objective.value(&cand);
            let delta = if f_cand == f64::NEG_INFINITY { f64::NEG_INFINITY } else { f_cand - f_current };
            if metropolis_accept(delta, c, rng) {
                current = cand;
                f_current = f_cand;
            }
            if f_current > f_best {
                best = current.clone();
                f_best = f_current;
            }
            step += 1;
            trace.push(step, f_current, f_best, c);
        }
        // integer sampling phase
        loop {
            let f_entry = f_current;
            let mut visited: HashSet<Vec<bool>> = HashSet::with_capacity(budget + 1);
            visited.insert(current.mask().to_vec());
            let mut drawn = 0usize;
            while drawn < budget {
                let Some(cand) = draw_unvisited_neighbor(&current, &visited, rng) else {
                    break;
                };
                visited.insert(cand.mask().to_vec());
                drawn += 1;
                let f_cand = objective.value(&cand);
                if f_cand > f_current {
                    current = cand;
                    f_current = f_cand;
                }
                if f_current > f_best {
                    best = current.clone();
                    f_best = f_current;
                }
                step += 1;
                trace.push(step, f_current, f_best, c);
            }
            if !(f_current > f_entry) {
                break;
            }
        }
        // annealing
        c *= params.cooling_alpha;
        level += 1;
    }

    trace.converged = c <= params.cf;
    trace.reason = if trace.converged { StopReason::Tolerance } else { StopReason::MaxIter };
    Ok((best, f_best, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_aags(7, 4).unwrap().len(), 35);
        assert_eq!(enumerate_aags(15, 8).unwrap().len(), 6435);
        let single = enumerate_aags(4, 4).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].active(), &[0, 1, 2, 3]);
        assert_eq!(binomial(7, 4), 35);
        assert_eq!(binomial(15, 8), 6435);
        assert_eq!(binomial(100, 64), 1977204582144932989443770175); // checked against Pascal recurrence below
        let mut row = vec![1u128];
        for n in 1..=100 {
            let mut next = vec![1u128];
            for k in 1..n {
                next.push(row[k - 1] + *row.get(k).unwrap_or(&0));
            }
            next.push(1);
            row = next;
        }
        assert_eq!(binomial(100, 64), row[64]);
    }

    #[test]
    fn enumeration_is_lexicographic_and_unique() {
        let groups = enumerate_aags(6, 3).unwrap();
        assert_eq!(groups.len(), 20);
        for w in groups.windows(2) {
            assert!(w[0].active() < w[1].active(), "not lexicographic: {:?} then {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn neighbor_preserves_count_at_distance_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let aag = Aag::first_k(7, 4).unwrap();
        for _ in 0..200 {
            let n = neighbor(&aag, &mut rng).unwrap();
            assert_eq!(n.n_active(), 4);
            let dist: usize =
                aag.mask().iter().zip(n.mask()).filter(|(a, b)| a != b).count();
            assert_eq!(dist, 2);
        }
        assert_eq!(all_neighbors(&aag).len(), 12);
    }

    #[test]
    fn full_group_has_no_neighbors() {
        let aag = Aag::first_k(4, 4).unwrap();
        assert!(neighbor(&aag, &mut ChaCha8Rng::seed_from_u64(2)).is_err());
    }

    #[test]
    fn metropolis_always_accepts_improvements() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert!(metropolis_accept(0.0, 0.5, &mut rng));
            assert!(metropolis_accept(1.3, 0.5, &mut rng));
        }
        for _ in 0..1000 {
            assert!(!metropolis_accept(f64::NEG_INFINITY, 0.5, &mut rng));
        }
    }

    #[test]
    fn metropolis_half_rate_at_ln2() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = 0.37;
        let delta = -c * std::f64::consts::LN_2;
        let trials = 10_000;
        let accepted = (0..trials).filter(|_| metropolis_accept(delta, c, &mut rng)).count();
        let rate = accepted as f64 / trials as f64;
        assert!((rate - 0.5).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn initial_temperature_formula_and_fallbacks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // flat landscape -> 1.0
        let mut flat = ObjectiveHandle::new(|_: &Aag| 2.5);
        let seed = Aag::first_k(7, 4).unwrap();
        assert_eq!(initial_temperature(&mut flat, &seed, 20, 0.8, &mut rng).unwrap(), 1.0);
        // single-magnitude drops: c0 = d / ln(1/chi0)
        let d = 0.7;
        let mut alternating = ObjectiveHandle::new(|a: &Aag| if a.is_active(0) { d } else { 0.0 });
        let c0 = initial_temperature(&mut alternating, &seed, 40, 0.8, &mut rng).unwrap();
        assert!((c0 - d / (1.0f64 / 0.8).ln()).abs() < 1e-12, "c0 {c0}");
        assert!(initial_temperature(&mut flat, &seed, 5, 0.8, &mut rng).is_err());
    }

    #[test]
    fn single_group_returns_seed_immediately() {
        let mut handle = ObjectiveHandle::new(|_: &Aag| 1.0);
        let seed = Aag::first_k(4, 4).unwrap();
        let params = SaParams::for_group_size(4);
        let (aag, value, trace) = sa_search(&mut handle, &seed, &params, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
        assert_eq!(aag.active(), seed.active());
        assert_eq!(value, 1.0);
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn best_seen_is_nondecreasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let target = Aag::from_active(10, &[1, 3, 5, 7]).unwrap();
        let mut handle = ObjectiveHandle::new(|a: &Aag| {
            -(a.mask().iter().zip(target.mask()).filter(|(x, y)| x != y).count() as f64)
        });
        let seed = Aag::first_k(10, 4).unwrap();
        let params = SaParams::for_group_size(4);
        let (_, _, trace) = sa_search(&mut handle, &seed, &params, &mut rng).unwrap();
        for w in trace.points.windows(2) {
            assert!(w[1].best >= w[0].best);
        }
    }

    #[test]
    fn sentinel_seed_falls_back_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fallback = Aag::first_k(6, 3).unwrap();
        let mut handle = ObjectiveHandle::new(|a: &Aag| {
            if a.active() == fallback.active() || a.is_active(5) {
                1.0
            } else {
                f64::NEG_INFINITY
            }
        });
        let seed = Aag::from_active(6, &[1, 2, 3]).unwrap();
        let params = SaParams::for_group_size(3);
        let (aag, value, _) = sa_search(&mut handle, &seed, &params, &mut rng).unwrap();
        assert!(value >= 1.0);
        assert!(aag.n_active() == 3);
    }
}
