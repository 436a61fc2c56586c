//! Every rate quantity in the workbench: exact mutual information by Monte
//! Carlo, the closed-form approximate secrecy rate and its concave surrogate,
//! the AN-free two-stage rates with their triangular tables, and the
//! large-array SINR-ratio objective.

mod asr;
mod exact;
mod pairs;
mod separate;
mod surrogate;

pub use asr::{ami_bob, asr_closed, det_ratio_logscore, det_ratio_logscore_from_norms, large_scale_ratio, ClosedAsr};
pub use exact::{mi_bob_exact, mi_eve_exact};
pub use pairs::RatePairs;
pub use separate::{
    build_triangular_tables, separate_rate_direct, separate_rate_from_tables, TriangularTables,
};
pub use surrogate::{surrogate_objective, surrogate_parts, SurrogateModel, SurrogateParts};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;

/// Artificial-noise covariance: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct AnCovariance {
    q: DMatrix<Complex64>,
}

impl AnCovariance {
    /// Validates all three invariants (Hermitian symmetry, PSD up to `-1e-10`,
    /// unit trace) before accepting the matrix.
    pub fn new(q: DMatrix<Complex64>) -> Result<Self> {
        if q.nrows() != q.ncols() {
            return Err(Error::InvalidConfig(format!("covariance must be square, got {}x{}", q.nrows(), q.ncols())));
        }
        let herm = linalg::hermitian_residual(&q);
        if herm > 1e-12 {
            return Err(Error::Numeric(format!("covariance not Hermitian: max residual {herm:e}")));
        }
        let tr = q.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::Numeric(format!("covariance trace {tr} != 1")));
        }
        let eigs = linalg::hermitize(&q).symmetric_eigen().eigenvalues;
        let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::Numeric(format!("covariance has negative eigenvalue {min:e}")));
        }
        Ok(AnCovariance { q })
    }

    /// Constructor for matrices PSD by construction (projections, outer
    /// products); checks only symmetry and trace.
    pub(crate) fn from_psd_parts(q: DMatrix<Complex64>) -> Result<Self> {
        let q = linalg::hermitize(&q);
        let tr = q.trace().re;
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!("covariance trace {tr} != 1")));
        }
        Ok(AnCovariance { q })
    }

    /// `I / n`, the maximally spread feasible point.
    pub fn uniform(n: usize) -> Self {
        let q = DMatrix::from_diagonal_element(n, n, Complex64::new(1.0 / n as f64, 0.0));
        AnCovariance { q }
    }

    /// Rank-one covariance `u u^H` from a unit vector.
    pub fn from_unit_vector(u: &DVector<Complex64>) -> Result<Self> {
        let norm = u.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!("vector norm {norm} != 1")));
        }
        Ok(AnCovariance { q: u * u.adjoint() })
    }

    /// Random feasible covariance `G G^H / tr(G G^H)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(n, n, |_, _| linalg::complex_gaussian(rng, 1.0));
        let mut q = &g * g.adjoint();
        let tr = q.trace().re;
        q /= Complex64::new(tr, 0.0);
        AnCovariance { q: linalg::hermitize(&q) }
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.q
    }

    /// Full invariant check, used by tests on values returned from solvers.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.q.clone()).map(|_| ())
    }
}

/// Mutual-information pair and the clamped instantaneous secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    pub i_bob: f64,
    pub i_eve: f64,
    /// `max(i_bob - i_eve, 0)`.
    pub sr: f64,
}

/// Clamped secrecy rate for one channel realization.
pub fn instantaneous_sr(i_bob: f64, i_eve: f64) -> RateBreakdown {
    let diff = i_bob - i_eve;
    RateBreakdown { i_bob, i_eve, sr: if diff > 0.0 { diff } else { 0.0 } }
}
