use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitize;
use crate::rates::AnCovariance;

/// Maps an arbitrary matrix onto the feasible covariance set: Hermitian
/// symmetrize, eigendecompose, clamp the eigenvalues at zero, then Euclidean
/// projection of the eigenvalue vector onto the unit simplex before
/// reconstruction. Feasible inputs pass through unchanged.
pub fn project_feasible(m: &DMatrix<Complex64>) -> Result<AnCovariance> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("projection input has non-finite entries".into()));
    }
    let herm = hermitize(m);
    let n = herm.nrows();
    let se = herm.symmetric_eigen();
    if se.eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numeric("eigendecomposition failed during projection".into()));
    }
    let mut eigs: Vec<f64> = se.eigenvalues.iter().map(|l| l.max(0.0)).collect();
    project_simplex(&mut eigs);
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for (k, &lambda) in eigs.iter().enumerate() {
        if lambda > 0.0 {
            let v = se.eigenvectors.column(k);
            out += (v * v.adjoint()).scale(lambda);
        }
    }
    AnCovariance::from_psd_parts(out)
}

/// In-place Euclidean projection onto `{ v : v_i >= 0, sum v_i = 1 }`.
pub(crate) fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}
