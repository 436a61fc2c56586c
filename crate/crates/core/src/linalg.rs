//! Complex-vector and Hermitian-matrix helpers shared by the rate and optimizer code.
//!
//! Channel vectors are stored as [`DVector`]s but carry the semantics of the
//! row vectors they represent: `quad_form(x, q)` is the scalar `x Q x^H` and
//! `gram(x)` is the matrix `x^H x`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub const LN_2: f64 = std::f64::consts::LN_2;

/// `(m + m^H) / 2`.
pub fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entry-wise deviation from Hermitian symmetry.
pub fn hermitian_residual(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Real quadratic form `x Q x^H` for a row vector `x` and Hermitian `Q`.
///
/// The imaginary residue is discarded; it vanishes up to round-off for
/// Hermitian `Q`, which the debug assertion below enforces.
pub fn quad_form(x: &DVector<Complex64>, q: &DMatrix<Complex64>) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for b in 0..q.ncols() {
        let mut col = Complex64::new(0.0, 0.0);
        for a in 0..q.nrows() {
            col += x[a] * q[(a, b)];
        }
        acc += col * x[b].conj();
    }
    debug_assert!(
        acc.im.abs() <= 1e-9 * (1.0 + acc.re.abs()),
        "quadratic form has non-negligible imaginary part {:e}; Q not Hermitian?",
        acc.im
    );
    acc.re
}

/// Gram matrix `x^H x` of a row vector: entry `(a, b)` is `conj(x_a) x_b`.
pub fn gram(x: &DVector<Complex64>) -> DMatrix<Complex64> {
    let n = x.len();
    DMatrix::from_fn(n, n, |a, b| x[a].conj() * x[b])
}

/// Row-vector times matrix: `(x M)_b = sum_a x_a M_ab`.
pub fn row_times_mat(x: &DVector<Complex64>, m: &DMatrix<Complex64>) -> DVector<Complex64> {
    m.tr_mul(x)
}

/// `log2(sum_i exp(t_i))` with a max shift; `-inf` inputs are transparent and
/// an empty or all-`-inf` input yields `-inf`.
pub fn log2_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|t| (t - m).exp()).sum();
    (m + sum.ln()) / LN_2
}

/// One draw of a circularly symmetric complex Gaussian with variance `var`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var * 0.5).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// i.i.d. complex Gaussian vector with per-entry variance `var`.
pub fn complex_gaussian_vec<R: Rng + ?Sized>(rng: &mut R, n: usize, var: f64) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| complex_gaussian(rng, var))
}

/// Uniformly random unit-norm complex vector.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<Complex64> {
    loop {
        let v = complex_gaussian_vec(rng, n, 1.0);
        let norm = v.norm();
        if norm > 1e-12 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// Eigenvalue/eigenvector pair with the largest eigenvalue of a Hermitian matrix.
pub fn top_eigpair(m: &DMatrix<Complex64>) -> Result<(f64, DVector<Complex64>)> {
    let se = hermitize(m).symmetric_eigen();
    let mut best = 0usize;
    for k in 1..se.eigenvalues.len() {
        if se.eigenvalues[k] > se.eigenvalues[best] {
            best = k;
        }
    }
    let val = se.eigenvalues[best];
    if !val.is_finite() {
        return Err(Error::Numeric("eigendecomposition produced non-finite eigenvalue".into()));
    }
    Ok((val, se.eigenvectors.column(best).into_owned()))
}
