use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::linalg::complex_gaussian_vec;
use crate::model::SystemConfig;

/// One draw of the fading channels, with the eavesdropper link split into an
/// estimate and an additive error: `g = g_est + g_err` holds entry-wise.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Transmitter-to-legitimate-receiver channel (known perfectly).
    pub h: DVector<Complex64>,
    /// True transmitter-to-eavesdropper channel.
    pub g: DVector<Complex64>,
    /// Estimated eavesdropper channel available at the transmitter.
    pub g_est: DVector<Complex64>,
    /// Estimation error, i.i.d. complex Gaussian with variance `csi_err_var`.
    pub g_err: DVector<Complex64>,
}

/// Rayleigh channel draw: `h` and `g_est` entries are i.i.d. standard circular
/// complex Gaussian, `g_err` has per-entry variance `csi_err_var`, and the
/// draw order (h, g_est, g_err) is fixed so a seeded generator reproduces the
/// realization bit-for-bit.
pub fn sample_channel<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> ChannelRealization {
    let n = config.n_tx;
    let h = complex_gaussian_vec(rng, n, 1.0);
    let g_est = complex_gaussian_vec(rng, n, 1.0);
    let g_err = if config.csi_err_var > 0.0 {
        complex_gaussian_vec(rng, n, config.csi_err_var)
    } else {
        DVector::zeros(n)
    };
    let g = &g_est + &g_err;
    ChannelRealization { h, g, g_est, g_err }
}
