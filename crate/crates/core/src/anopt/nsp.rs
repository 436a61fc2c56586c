use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::gram;
use crate::rates::AnCovariance;

/// Null-space baseline: uniform artificial noise over the orthogonal
/// complement of the legitimate sub-channel,
/// `Q = (I - h_l^H h_l / ||h_l||^2) / (N_s - 1)`, so the legitimate receiver
/// sees none of it.
pub fn nsp_baseline(h_l: &DVector<Complex64>) -> Result<AnCovariance> {
    let n = h_l.len();
    if n < 2 {
        return Err(Error::InvalidConfig("null-space baseline needs at least two active antennas".into()));
    }
    let energy = h_l.norm_squared();
    if !(energy > 0.0) {
        return Err(Error::Numeric("null-space baseline undefined for a zero channel".into()));
    }
    let eye = DMatrix::<Complex64>::identity(n, n);
    let q = (eye - gram(h_l) / Complex64::new(energy, 0.0)).scale(1.0 / (n as f64 - 1.0));
    AnCovariance::from_psd_parts(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_gaussian_vec, quad_form};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invisible_to_the_legitimate_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let h = complex_gaussian_vec(&mut rng, 4, 1.0);
            let q = nsp_baseline(&h).unwrap();
            assert!(quad_form(&h, q.matrix()).abs() <= 1e-12);
            assert!((q.matrix().trace().re - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn axis_channel_concentrates_on_complement() {
        let h = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let q = nsp_baseline(&h).unwrap();
        assert!(q.matrix()[(0, 0)].norm() < 1e-15);
        assert!((q.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let single = DVector::from_vec(vec![Complex64::new(1.0, 0.0)]);
        assert!(nsp_baseline(&single).is_err());
        let zero = DVector::zeros(4);
        assert!(nsp_baseline(&zero).is_err());
    }
}
