//! Artificial-noise design for a fixed antenna group: Monte-Carlo gradient
//! ascent on the exact secrecy rate, successive convex approximation on the
//! closed-form surrogate, Dinkelbach iteration for the large-array SINR
//! ratio, and a null-space baseline.

mod dinkelbach;
mod gd;
mod nsp;
mod project;
mod sca;

pub use dinkelbach::{dinkelbach_ancm, sinr_terms};
pub use gd::{
    es_plus_gd, gd_anpm, gd_anpm_frozen, grad_sr_frozen, grad_sr_wrt_t, mc_secrecy_rate,
    mc_secrecy_rate_raw, FrozenDraws, DEFAULT_ES_GUARD,
};
pub use nsp::nsp_baseline;
pub use project::project_feasible;
pub use sca::sca_max_asr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;

/// Artificial-noise projection matrix `T` with `tr(T T^H) = 1`; the covariance
/// seen by the receivers is `Q = T T^H`.
#[derive(Debug, Clone)]
pub struct AnProjection {
    t: DMatrix<Complex64>,
}

impl AnProjection {
    pub fn new(t: DMatrix<Complex64>) -> Result<Self> {
        let energy = t.norm_squared();
        if (energy - 1.0).abs() > 1e-9 {
            return Err(Error::Numeric(format!("tr(T T^H) = {energy} != 1")));
        }
        Ok(AnProjection { t })
    }

    /// Scales an arbitrary nonzero matrix onto the unit-energy constraint.
    pub fn normalized(t: DMatrix<Complex64>) -> Result<Self> {
        let norm = t.norm();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(Error::Numeric("cannot normalize zero or non-finite projection".into()));
        }
        Ok(AnProjection { t: t / Complex64::new(norm, 0.0) })
    }

    /// Random unit-energy projection.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(n, n, |_, _| linalg::complex_gaussian(rng, 1.0));
        Self::normalized(g).expect("gaussian draw is nonzero")
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    /// The induced covariance `T T^H`.
    pub fn covariance(&self) -> crate::rates::AnCovariance {
        crate::rates::AnCovariance::from_psd_parts(&self.t * self.t.adjoint())
            .expect("unit projection energy gives unit trace")
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.t.clone()).map(|_| ())
    }
}

/// Why an iterative solver stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Termination tolerance reached.
    Tolerance,
    /// Iteration cap reached first.
    MaxIter,
    /// The objective hit the extended-log sentinel.
    Sentinel,
}

/// One recorded optimizer step: current objective, best seen so far, and the
/// solver's control value (step size, mutation parameter, or ratio estimate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub step: usize,
    pub value: f64,
    pub best: f64,
    pub control: f64,
}

/// Iteration log returned by every optimizer; nonempty on return.
#[derive(Debug, Clone)]
pub struct OptimTrace {
    pub points: Vec<TracePoint>,
    pub converged: bool,
    pub reason: StopReason,
}

impl OptimTrace {
    pub fn new() -> Self {
        OptimTrace { points: Vec::new(), converged: false, reason: StopReason::MaxIter }
    }

    pub fn push(&mut self, step: usize, value: f64, best: f64, control: f64) {
        self.points.push(TracePoint { step, value, best, control });
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Last recorded current value.
    pub fn final_value(&self) -> Option<f64> {
        self.points.last().map(|p| p.value)
    }
}

impl Default for OptimTrace {
    fn default() -> Self {
        Self::new()
    }
}
