use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Supported constellation sizes: PSK for M in {2, 4, 8}, square QAM above.
pub fn check_mod_order(m: usize) -> Result<()> {
    match m {
        2 | 4 | 8 => Ok(()),
        _ => {
            let side = (m as f64).sqrt().round() as usize;
            if m >= 16 && side * side == m && m.is_power_of_two() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "unsupported mod_order {m}: need PSK (2, 4, 8) or square QAM (16, 64, 256, ...)"
                )))
            }
        }
    }
}

/// Unit-average-energy constellation with a fixed, documented ordering.
///
/// PSK points sit at angles `offset + 2*pi*k/M` in ascending `k`; the offset is
/// `pi/4` for QPSK (the standard Gray-labelled diamond) and `0` otherwise, so
/// BPSK is `{+1, -1}`. Square QAM enumerates the grid row-major over
/// `(quadrature, in-phase)` level pairs `{-(s-1), ..., s-1}` scaled to unit
/// mean energy (e.g. `1/sqrt(10)` for 16-QAM).
pub fn make_constellation(mod_order: usize) -> Result<Vec<Complex64>> {
    check_mod_order(mod_order)?;
    if mod_order == 2 {
        return Ok(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
    }
    if mod_order <= 8 {
        let offset = if mod_order == 4 { std::f64::consts::FRAC_PI_4 } else { 0.0 };
        let step = 2.0 * std::f64::consts::PI / mod_order as f64;
        return Ok((0..mod_order)
            .map(|k| Complex64::from_polar(1.0, offset + step * k as f64))
            .collect());
    }
    let side = (mod_order as f64).sqrt().round() as usize;
    let levels: Vec<f64> = (0..side).map(|i| (2.0 * i as f64) - (side as f64 - 1.0)).collect();
    let mean_energy = 2.0 * levels.iter().map(|l| l * l).sum::<f64>() / side as f64;
    let scale = mean_energy.sqrt().recip();
    let mut points = Vec::with_capacity(mod_order);
    for q in 0..side {
        for i in 0..side {
            points.push(Complex64::new(levels[i] * scale, levels[q] * scale));
        }
    }
    Ok(points)
}

/// The set of legitimate transmit vectors: every (active antenna, symbol)
/// combination `e_i * b_j`, ordered antenna-major.
#[derive(Debug, Clone)]
pub struct SuperAlphabet {
    /// All `n_active * mod_order` transmit vectors of length `n_active`.
    pub symbols: Vec<DVector<Complex64>>,
    /// The underlying scalar constellation.
    pub constellation: Vec<Complex64>,
    n_active: usize,
}

pub fn build_super_alphabet(config: &SystemConfig) -> Result<SuperAlphabet> {
    let constellation = make_constellation(config.mod_order)?;
    let mean_energy: f64 =
        constellation.iter().map(|b| b.norm_sqr()).sum::<f64>() / constellation.len() as f64;
    if (mean_energy - 1.0).abs() > 1e-12 {
        return Err(Error::Numeric(format!("constellation mean energy {mean_energy} != 1")));
    }
    let n_s = config.n_active;
    let mut symbols = Vec::with_capacity(n_s * constellation.len());
    for antenna in 0..n_s {
        for b in &constellation {
            let mut x = DVector::zeros(n_s);
            x[antenna] = *b;
            symbols.push(x);
        }
    }
    Ok(SuperAlphabet { symbols, constellation, n_active: n_s })
}

impl SuperAlphabet {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn n_active(&self) -> usize {
        self.n_active
    }

    pub fn mod_order(&self) -> usize {
        self.constellation.len()
    }

    /// Active-antenna slot of symbol `k` (antenna-major ordering).
    pub fn antenna_of(&self, k: usize) -> usize {
        k / self.constellation.len()
    }

    /// Constellation index of symbol `k`.
    pub fn constellation_of(&self, k: usize) -> usize {
        k % self.constellation.len()
    }

    /// Scalars `sqrt(p1) * h_l x_k` for every symbol; each `x_k` has a single
    /// nonzero entry so this is `sqrt(p1) * h_l[antenna] * b`.
    pub fn effective_symbols(&self, h_l: &DVector<Complex64>, p1: f64) -> Vec<Complex64> {
        let root = p1.sqrt();
        (0..self.len())
            .map(|k| h_l[self.antenna_of(k)] * self.constellation[self.constellation_of(k)] * root)
            .collect()
    }

    /// `||x_m - x_k||^2`; O(1) because symbols have one nonzero entry each.
    pub fn diff_norm_sqr(&self, m: usize, k: usize) -> f64 {
        let (am, ak) = (self.antenna_of(m), self.antenna_of(k));
        let bm = self.constellation[self.constellation_of(m)];
        let bk = self.constellation[self.constellation_of(k)];
        if am == ak {
            (bm - bk).norm_sqr()
        } else {
            bm.norm_sqr() + bk.norm_sqr()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpsk_and_qpsk_points() {
        let b = make_constellation(2).unwrap();
        assert!((b[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((b[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let q = make_constellation(4).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [
            Complex64::new(r, r),
            Complex64::new(-r, r),
            Complex64::new(-r, -r),
            Complex64::new(r, -r),
        ];
        for (got, want) in q.iter().zip(expect.iter()) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn qam16_unit_energy() {
        let c = make_constellation(16).unwrap();
        // independent oracle: raw lattice energy over {-3,-1,1,3}^2 is 10 per point on average
        let raw: f64 = (0..16)
            .map(|k| {
                let levels = [-3.0, -1.0, 1.0, 3.0];
                let (i, q) = (levels[k % 4], levels[k / 4]);
                i * i + q * q
            })
            .sum::<f64>()
            / 16.0;
        assert!((raw - 10.0).abs() < 1e-12);
        let mean: f64 = c.iter().map(|b| b.norm_sqr()).sum::<f64>() / 16.0;
        assert!((mean - 1.0).abs() < 1e-12);
        // corner point is (3 + 3i)/sqrt(10)
        let corner = c.iter().map(|b| b.norm_sqr()).fold(0.0, f64::max);
        assert!((corner - 18.0 / 10.0).abs() < 1e-12);
    }

    #[test]
    fn unsupported_orders_rejected() {
        for m in [0, 1, 3, 5, 12, 32, 128] {
            assert!(make_constellation(m).is_err(), "M={m} should be rejected");
        }
        assert!(make_constellation(64).is_ok());
        assert!(make_constellation(256).is_ok());
    }

    #[test]
    fn super_alphabet_small_case() {
        let mut cfg = SystemConfig::with_defaults(2, 2).unwrap();
        cfg.mod_order = 2;
        let alph = build_super_alphabet(&cfg).unwrap();
        assert_eq!(alph.len(), 4);
        let rows: Vec<Vec<Complex64>> = alph.symbols.iter().map(|s| s.iter().copied().collect()).collect();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(rows[0], vec![one, zero]);
        assert_eq!(rows[1], vec![-one, zero]);
        assert_eq!(rows[2], vec![zero, one]);
        assert_eq!(rows[3], vec![zero, -one]);
    }

    #[test]
    fn symbols_have_single_nonzero_unit_entry_scaled_by_constellation() {
        let mut cfg = SystemConfig::with_defaults(5, 4).unwrap();
        assert_eq!(cfg.n_active, 4);
        cfg.mod_order = 4;
        let alph = build_super_alphabet(&cfg).unwrap();
        assert_eq!(alph.len(), 16);
        for (k, x) in alph.symbols.iter().enumerate() {
            let nonzero: Vec<usize> = (0..x.len()).filter(|&i| x[i].norm() > 0.0).collect();
            assert_eq!(nonzero, vec![alph.antenna_of(k)]);
            let b = alph.constellation[alph.constellation_of(k)];
            assert!((x[nonzero[0]] - b).norm() < 1e-15);
            // symbol energy equals constellation energy
            assert!((x.norm_squared() - b.norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn count_matches_large_case() {
        let cfg = SystemConfig::with_defaults(100, 4).unwrap();
        assert_eq!(cfg.n_active, 64);
        let alph = build_super_alphabet(&cfg).unwrap();
        assert_eq!(alph.len(), 256);
    }

    #[test]
    fn diff_norm_matches_dense() {
        let cfg = SystemConfig::with_defaults(6, 4).unwrap();
        let alph = build_super_alphabet(&cfg).unwrap();
        for m in 0..alph.len() {
            for k in 0..alph.len() {
                let dense = (&alph.symbols[m] - &alph.symbols[k]).norm_squared();
                assert!((alph.diff_norm_sqr(m, k) - dense).abs() < 1e-14);
            }
        }
    }
}
