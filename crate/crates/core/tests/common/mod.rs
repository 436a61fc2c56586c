//! Shared oracle helpers for the integration and acceptance suites.

use nalgebra::DVector;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use ssm_core::anopt::sinr_terms;
use ssm_core::linalg::complex_gaussian;
use ssm_core::model::SystemConfig;
use ssm_core::rates::AnCovariance;

/// Random search over rank-one covariances for the SINR ratio: global samples
/// over a three-direction basis (the eavesdropper direction, the legitimate
/// complement inside the span, and one representative of the orthogonal
/// complement), then shrinking perturbations around the incumbent. The ratio
/// depends on a unit vector only through its projections onto the two
/// channels, so this basis reaches every achievable value; the search never
/// consults the solver under test.
pub fn rank_one_ratio_search(
    h: &DVector<Complex64>,
    g: &DVector<Complex64>,
    cfg: &SystemConfig,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let n = h.len();
    let ghat = g.conjugate() / Complex64::new(g.norm(), 0.0);
    let hconj = h.conjugate();
    let mut perp = &hconj - &ghat * ghat.dotc(&hconj);
    let pn = perp.norm();
    if pn > 1e-9 {
        perp /= Complex64::new(pn, 0.0);
    }
    let mut ortho = DVector::<Complex64>::zeros(n);
    let mut best_norm = 0.0;
    for k in 0..n {
        let mut e = DVector::<Complex64>::zeros(n);
        e[k] = Complex64::new(1.0, 0.0);
        let mut r = e.clone();
        r -= &ghat * ghat.dotc(&e);
        r -= &perp * perp.dotc(&e);
        let rn = r.norm();
        if rn > best_norm {
            best_norm = rn;
            ortho = r / Complex64::new(rn, 0.0);
        }
    }

    let ratio_of = |coeffs: &[Complex64; 3]| -> f64 {
        let mut u = &ghat * coeffs[0] + &perp * coeffs[1];
        if best_norm > 1e-9 {
            u += &ortho * coeffs[2];
        }
        let norm = u.norm();
        if norm < 1e-12 {
            return f64::NEG_INFINITY;
        }
        u /= Complex64::new(norm, 0.0);
        let q = AnCovariance::from_unit_vector(&u).unwrap();
        let (s_e, s_b) = sinr_terms(h, g, &q, cfg);
        s_e / s_b
    };

    let global = 3 * budget / 10;
    let mut best = f64::NEG_INFINITY;
    let mut best_coeffs = [Complex64::new(1.0, 0.0); 3];
    for _ in 0..global {
        let coeffs = [
            complex_gaussian(rng, 1.0),
            complex_gaussian(rng, 1.0),
            complex_gaussian(rng, 1.0),
        ];
        let r = ratio_of(&coeffs);
        if r > best {
            best = r;
            best_coeffs = coeffs;
        }
    }
    let stages = [0.3, 0.1, 0.03, 0.01, 0.003, 0.001, 0.0003];
    let per_stage = (budget - global) / stages.len();
    for &scale in &stages {
        for _ in 0..per_stage {
            let coeffs = [
                best_coeffs[0] + complex_gaussian(rng, scale * scale),
                best_coeffs[1] + complex_gaussian(rng, scale * scale),
                best_coeffs[2] + complex_gaussian(rng, scale * scale),
            ];
            let r = ratio_of(&coeffs);
            if r > best {
                best = r;
                best_coeffs = coeffs;
            }
        }
    }
    best
}
