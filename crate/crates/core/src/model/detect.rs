use nalgebra::DVector;
use num_complex::Complex64;

use crate::model::SuperAlphabet;

/// Maximum-likelihood joint detection of (active antenna slot, symbol index):
/// the super-alphabet entry minimising `|y - sqrt(p1) h_l x_k|^2`, with ties
/// broken toward the lowest alphabet ordinal.
pub fn ml_detect(
    y: Complex64,
    h_l: &DVector<Complex64>,
    alphabet: &SuperAlphabet,
    p1: f64,
) -> (usize, usize) {
    let effective = alphabet.effective_symbols(h_l, p1);
    let mut best = 0usize;
    let mut best_metric = f64::INFINITY;
    for (k, z) in effective.iter().enumerate() {
        let metric = (y - z).norm_sqr();
        if metric < best_metric {
            best_metric = metric;
            best = k;
        }
    }
    (alphabet.antenna_of(best), alphabet.constellation_of(best))
}
