//! Statistical oracles for the annealing search and the composed schemes:
//! uniformity of the neighbor sampler, recovery of planted optima, exhaustive
//! scans with the identical inner solver, and the asymptotic-visit surrogates
//! for the convergence claims.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssm_core::model::{
    build_super_alphabet, sample_channel, select_subchannel, Aag, SystemConfig,
};
use ssm_core::rates::{asr_closed, det_ratio_logscore, AnCovariance};
use ssm_core::select::{
    all_neighbors, enumerate_aags, initial_temperature, joint_sa_max_asr, metropolis_accept, neighbor,
    sa_search, separate_sa_max_asr, ObjectiveHandle, SaParams,
};

fn desk_config() -> SystemConfig {
    let mut cfg = SystemConfig::with_defaults(7, 4).unwrap();
    cfg.csi_err_var = 0.25;
    let noise = cfg.total_power * 10f64.powf(-1.0); // 10 dB
    cfg.noise_var_bob = noise;
    cfg.noise_var_eve = noise;
    cfg
}

#[test]
fn neighbor_draws_are_uniform_chi_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let base = Aag::first_k(7, 4).unwrap();
    let hood = all_neighbors(&base);
    assert_eq!(hood.len(), 12);
    let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
    let draws = 12_000;
    for _ in 0..draws {
        let n = neighbor(&base, &mut rng).unwrap();
        *counts.entry(n.mask().to_vec()).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 12);
    let expected = draws as f64 / 12.0;
    let stat: f64 = counts.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // chi-square inverse CDF at 0.99 with 11 dof
    assert!(stat < 24.725, "chi-square statistic {stat}");
}

#[test]
fn planted_optimum_recovered_on_ten_choose_four() {
    let target = Aag::from_active(10, &[1, 3, 5, 7]).unwrap();
    let mut hits = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let mut handle = ObjectiveHandle::new(|a: &Aag| {
            -(a.mask().iter().zip(target.mask()).filter(|(x, y)| x != y).count() as f64)
        });
        let seed_aag = Aag::random(10, 4, &mut rng).unwrap();
        let params = SaParams::for_group_size(4);
        let (best, value, _) = sa_search(&mut handle, &seed_aag, &params, &mut rng).unwrap();
        if value == 0.0 && best.active() == target.active() {
            hits += 1;
        }
    }
    assert!(hits >= 95, "planted optimum found in only {hits}/100 runs");
}

#[test]
fn initial_temperature_hits_requested_acceptance_ratio() {
    let mut cfg = SystemConfig::with_defaults(15, 4).unwrap();
    cfg.n_active = 8;
    cfg.total_power = 8.0;
    cfg.csi_err_var = 0.25;
    let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(21));
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut handle = ObjectiveHandle::new(|aag: &Aag| {
        let (h_l, g_l) = select_subchannel(&ch, aag).unwrap();
        det_ratio_logscore(&h_l, &g_l, &cfg)
    });
    let seed_aag = Aag::random(15, 8, &mut rng).unwrap();
    let c0 = initial_temperature(&mut handle, &seed_aag, 40, 0.8, &mut rng).unwrap();
    let mut current = seed_aag;
    let mut worse = 0usize;
    let mut accepted = 0usize;
    for _ in 0..40_000 {
        let cand = neighbor(&current, &mut rng).unwrap();
        let delta = handle.value(&cand) - handle.value(&current);
        if delta < 0.0 {
            worse += 1;
            if metropolis_accept(delta, c0, &mut rng) {
                accepted += 1;
                current = cand;
            }
        } else {
            current = cand;
        }
    }
    let ratio = accepted as f64 / worse as f64;
    assert!((ratio - 0.8).abs() <= 0.1, "acceptance ratio {ratio} for c0 {c0}");
}

#[test]
fn final_state_reaches_optimum_more_often_as_threshold_drops() {
    // asymptotic-convergence surrogate: lowering the stop threshold cannot
    // make the chain end at the optimum less often
    let cfg = desk_config();
    let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(33));
    let score = |aag: &Aag| {
        let (h_l, g_l) = select_subchannel(&ch, aag).unwrap();
        det_ratio_logscore(&h_l, &g_l, &cfg)
    };
    let optimum = enumerate_aags(7, 4)
        .unwrap()
        .iter()
        .map(score)
        .fold(f64::NEG_INFINITY, f64::max);
    let runs = 100;
    let mut ended_at_opt = [0usize; 2];
    for (which, cf) in [0.1, 0.001].into_iter().enumerate() {
        for seed in 0..runs {
            let mut rng = ChaCha8Rng::seed_from_u64(4000 + seed);
            let mut handle = ObjectiveHandle::new(score);
            let seed_aag = Aag::random(7, 4, &mut rng).unwrap();
            let mut params = SaParams::for_group_size(4).with_c0(1.0);
            params.cf = cf;
            let (_, _, trace) = sa_search(&mut handle, &seed_aag, &params, &mut rng).unwrap();
            // final *current* state, not the best-seen tracker
            if (trace.final_value().unwrap() - optimum).abs() <= 1e-12 {
                ended_at_opt[which] += 1;
            }
        }
    }
    assert!(
        ended_at_opt[1] >= ended_at_opt[0],
        "ending frequency dropped: cf=0.1 -> {}, cf=0.001 -> {}",
        ended_at_opt[0],
        ended_at_opt[1]
    );
    assert!(ended_at_opt[1] >= 60, "chain rarely ends at the optimum: {}", ended_at_opt[1]);
}

#[test]
fn fixed_temperature_chain_visits_optimum_most() {
    // homogeneous-chain surrogate on (6,4): the stationary weight of the best
    // group dominates every other group's
    let mut cfg = SystemConfig::with_defaults(6, 4).unwrap();
    cfg.csi_err_var = 0.25;
    let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(44));
    let score = |aag: &Aag| {
        let (h_l, g_l) = select_subchannel(&ch, aag).unwrap();
        det_ratio_logscore(&h_l, &g_l, &cfg)
    };
    let groups = enumerate_aags(6, 4).unwrap();
    let values: Vec<f64> = groups.iter().map(score).collect();
    let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().cloned().fold(f64::INFINITY, f64::min);
    let c = 0.25 * spread;
    let best_idx = (0..groups.len()).max_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap()).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut current = Aag::random(6, 4, &mut rng).unwrap();
    let mut visits: HashMap<Vec<bool>, usize> = HashMap::new();
    for _ in 0..10_000 {
        let cand = neighbor(&current, &mut rng).unwrap();
        let delta = score(&cand) - score(&current);
        if metropolis_accept(delta, c, &mut rng) {
            current = cand;
        }
        *visits.entry(current.mask().to_vec()).or_insert(0) += 1;
    }
    let opt_visits = visits.get(groups[best_idx].mask()).copied().unwrap_or(0);
    for (idx, group) in groups.iter().enumerate() {
        if idx != best_idx {
            let v = visits.get(group.mask()).copied().unwrap_or(0);
            assert!(opt_visits > v, "optimum visited {opt_visits} times but group {idx} got {v}");
        }
    }
}

#[test]
fn joint_search_matches_exhaustive_scan_with_shared_solver() {
    let cfg = desk_config();
    let alph = build_super_alphabet(&cfg).unwrap();
    let params = SaParams::for_group_size(4);
    let mut hits = 0;
    let runs = 100;
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
        let ch = sample_channel(&cfg, &mut rng);
        let out = joint_sa_max_asr(&ch, &cfg, &alph, &params, &mut rng).unwrap();
        // exhaustive rescan with the identical deterministic inner solver
        let es_best = enumerate_aags(7, 4)
            .unwrap()
            .iter()
            .map(|aag| {
                let (h_l, g_l) = select_subchannel(&ch, aag).unwrap();
                let (q, _) = ssm_core::anopt::sca_max_asr(
                    &h_l,
                    &g_l,
                    &cfg,
                    &alph,
                    &AnCovariance::uniform(4),
                    1e-4,
                    200,
                )
                .unwrap();
                asr_closed(&h_l, &g_l, &q, &cfg, &alph).r_a
            })
            .fold(f64::NEG_INFINITY, f64::max);
        if (out.value - es_best).abs() <= 1e-6 {
            hits += 1;
        }
    }
    assert!(hits >= 90, "joint search matched the exhaustive scan in only {hits}/{runs} runs");
}

#[test]
fn separate_stage_one_matches_exhaustive_table_scan() {
    let cfg = desk_config();
    let alph = build_super_alphabet(&cfg).unwrap();
    let mut hits = 0;
    let runs = 100;
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
        let ch = sample_channel(&cfg, &mut rng);
        let tables = ssm_core::rates::build_triangular_tables(&ch, &cfg, &alph.constellation);
        let mut handle = ObjectiveHandle::new(|aag: &Aag| {
            ssm_core::rates::separate_rate_from_tables(&tables, aag, &cfg).unwrap()
        });
        let seed_aag = Aag::random(7, 4, &mut rng).unwrap();
        let c0 = initial_temperature(&mut handle, &seed_aag, 16, 0.8, &mut rng).unwrap();
        let params = SaParams::for_group_size(4).with_c0(c0.max(0.05));
        let (_, found, _) = sa_search(&mut handle, &seed_aag, &params, &mut rng).unwrap();
        let es_best = enumerate_aags(7, 4)
            .unwrap()
            .iter()
            .map(|a| handle.value(a))
            .fold(f64::NEG_INFINITY, f64::max);
        if (found - es_best).abs() <= 1e-12 {
            hits += 1;
        }
    }
    assert!(hits >= 90, "stage one matched the table scan in only {hits}/{runs} runs");
}

#[test]
fn joint_dominates_separate_on_most_realizations() {
    let cfg = desk_config();
    let alph = build_super_alphabet(&cfg).unwrap();
    let params = SaParams::for_group_size(4);
    let runs = 50;
    let mut joint_wins = 0usize;
    let mut joint_sum = 0.0;
    let mut separate_sum = 0.0;
    for seed in 0..runs {
        let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(7000 + seed));
        let joint = joint_sa_max_asr(&ch, &cfg, &alph, &params, &mut ChaCha8Rng::seed_from_u64(7100 + seed)).unwrap();
        let separate =
            separate_sa_max_asr(&ch, &cfg, &alph, &params, &mut ChaCha8Rng::seed_from_u64(7200 + seed)).unwrap();
        if joint.value >= separate.value - 1e-12 {
            joint_wins += 1;
        }
        joint_sum += joint.value;
        separate_sum += separate.value;
        // every covariance coming back is feasible
        joint.q.validate().unwrap();
        separate.q.validate().unwrap();
    }
    assert!(joint_wins * 100 >= 80 * runs as usize, "joint won only {joint_wins}/{runs}");
    let joint_mean = joint_sum / runs as f64;
    let separate_mean = separate_sum / runs as f64;
    assert!(
        separate_mean <= joint_mean + 0.05,
        "two-stage mean {separate_mean} not within 0.05 of joint mean {joint_mean}"
    );
}

#[test]
fn ratio_scheme_exhaustive_and_annealed_selection_agree() {
    let cfg = desk_config();
    let params = SaParams::for_group_size(4);
    let mut agreements = 0usize;
    let runs = 100;
    for seed in 0..runs {
        let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(8000 + seed));
        let es = ssm_core::select::max_r_sinr_scheme(&ch, &cfg, &params, &mut ChaCha8Rng::seed_from_u64(8100 + seed), true)
            .unwrap();
        let sa = ssm_core::select::max_r_sinr_scheme(&ch, &cfg, &params, &mut ChaCha8Rng::seed_from_u64(8200 + seed), false)
            .unwrap();
        if es.aag.mask() == sa.aag.mask() {
            agreements += 1;
        }
    }
    assert!(agreements >= 95, "exhaustive and annealed selection agreed on only {agreements}/{runs} runs");
}

#[test]
fn ratio_scheme_beats_random_groups_at_large_array() {
    let mut cfg = SystemConfig::with_defaults(100, 4).unwrap();
    cfg.csi_err_var = 0.25;
    cfg.noise_var_bob = 0.64;
    cfg.noise_var_eve = 0.64;
    let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(91));
    let params = SaParams::for_group_size(64);
    let mut rng = ChaCha8Rng::seed_from_u64(92);
    let out = ssm_core::select::max_r_sinr_scheme(&ch, &cfg, &params, &mut rng, true).unwrap();
    let (h_l, g_l) = select_subchannel(&ch, &out.aag).unwrap();
    let chosen = det_ratio_logscore(&h_l, &g_l, &cfg);
    for _ in 0..100 {
        let aag = Aag::random(100, 64, &mut rng).unwrap();
        let (h_r, g_r) = select_subchannel(&ch, &aag).unwrap();
        let random_score = det_ratio_logscore(&h_r, &g_r, &cfg);
        assert!(chosen >= random_score, "chosen {chosen} lost to a random group {random_score}");
    }
}

#[test]
fn joint_inner_solver_runs_once_per_distinct_group() {
    let cfg = desk_config();
    let alph = build_super_alphabet(&cfg).unwrap();
    let ch = sample_channel(&cfg, &mut ChaCha8Rng::seed_from_u64(88));
    let mut rng = ChaCha8Rng::seed_from_u64(89);
    let mut solver_calls = 0usize;
    let mut handle = ObjectiveHandle::new(|aag: &Aag| {
        solver_calls += 1;
        let (h_l, g_l) = select_subchannel(&ch, aag).unwrap();
        let (q, _) =
            ssm_core::anopt::sca_max_asr(&h_l, &g_l, &cfg, &alph, &AnCovariance::uniform(4), 1e-4, 200).unwrap();
        asr_closed(&h_l, &g_l, &q, &cfg, &alph).r_a
    });
    let seed_aag = Aag::random(7, 4, &mut rng).unwrap();
    let params = SaParams::for_group_size(4);
    let (_, _, trace) = sa_search(&mut handle, &seed_aag, &params, &mut rng).unwrap();
    let distinct = handle.distinct();
    let evals = handle.evaluations();
    drop(handle);
    assert_eq!(solver_calls, evals, "solver ran {solver_calls} times for {evals} cache misses");
    assert_eq!(evals, distinct, "some mask was solved twice");
    assert!(trace.len() > distinct, "search visited fewer moves than distinct groups");
    assert!(distinct <= 35);
}
