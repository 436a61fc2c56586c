use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg::{gram, quad_form, LN_2};
use crate::model::{SuperAlphabet, SystemConfig};
use crate::rates::{AnCovariance, RatePairs};

/// Concave minorant of the closed-form approximate secrecy rate, expanded at a
/// feasible point `Q0`.
///
/// Both rate terms depend on `Q` only through the scalars `x = h_l Q h_l^H`
/// and `y = g_l Q g_l^H`:
///
/// - the legitimate-side tangent majorant is a log-sum-exp of affine functions
///   of `x`, clamped below by 0;
/// - the eavesdropper-side tangent minorant collapses to
///   `log2(k0 - k1 / (y + c))` for two nonnegative constants, with an extended
///   log that returns `-inf` when the argument is not positive, clamped above
///   by `2 log2 N`.
///
/// The difference is concave in `Q`, touches the true objective at `Q0`, and
/// never exceeds it, which is what the outer minorize-maximize loop relies on.
#[derive(Debug, Clone)]
pub struct SurrogateModel {
    zeta: f64,
    c_noise: f64,
    b_base: Vec<f64>,
    b_slope: Vec<f64>,
    k0: f64,
    k1: f64,
    h_l: DVector<Complex64>,
    g_l: DVector<Complex64>,
    h_gram: DMatrix<Complex64>,
    g_gram: DMatrix<Complex64>,
}

/// The two tangent terms before and after their clamps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateParts {
    pub b_tilde: f64,
    pub e_bar: f64,
    pub b_clamped: f64,
    pub e_clamped: f64,
    /// `e_clamped - b_clamped`, `-inf` when the extended log fires.
    pub value: f64,
}

impl SurrogateModel {
    pub fn new(
        q0: &AnCovariance,
        h_l: &DVector<Complex64>,
        g_l: &DVector<Complex64>,
        config: &SystemConfig,
        alphabet: &SuperAlphabet,
    ) -> Self {
        let pairs = RatePairs::new(h_l, g_l, config, alphabet);
        Self::with_pairs(&pairs, q0, h_l, g_l, config)
    }

    pub fn with_pairs(
        pairs: &RatePairs,
        q0: &AnCovariance,
        h_l: &DVector<Complex64>,
        g_l: &DVector<Complex64>,
        config: &SystemConfig,
    ) -> Self {
        let p2 = config.p2();
        let b_noise = config.noise_var_bob / p2;
        let c_noise = config.csi_err_var + config.noise_var_eve / p2;
        let x0 = quad_form(h_l, q0.matrix());
        let y0 = quad_form(g_l, q0.matrix());

        let n_sq = pairs.len() * pairs.len();
        let mut b_base = Vec::with_capacity(n_sq);
        let mut b_slope = Vec::with_capacity(n_sq);
        for &quad in pairs.bob_quads() {
            let a = quad / (4.0 * p2);
            let slope = a / ((x0 + b_noise) * (x0 + b_noise));
            b_base.push(-a / (x0 + b_noise) - slope * x0);
            b_slope.push(slope);
        }

        let mut k0 = 0.0;
        let mut k1 = 0.0;
        for &quad in pairs.eve_quads() {
            let c = quad / (4.0 * p2);
            let e0 = (-c / (y0 + c_noise)).exp();
            k0 += e0 * (1.0 + c / (y0 + c_noise));
            k1 += e0 * c;
        }

        SurrogateModel {
            zeta: 2.0 * (pairs.len() as f64).log2(),
            c_noise,
            b_base,
            b_slope,
            k0,
            k1,
            h_l: h_l.clone(),
            g_l: g_l.clone(),
            h_gram: gram(h_l),
            g_gram: gram(g_l),
        }
    }

    /// Tangent majorant of the legitimate log-sum term at `x = h_l Q h_l^H`.
    pub fn b_tilde_at(&self, x: f64) -> f64 {
        let m = self
            .b_base
            .iter()
            .zip(&self.b_slope)
            .map(|(b, s)| b + s * x)
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self.b_base.iter().zip(&self.b_slope).map(|(b, s)| (b + s * x - m).exp()).sum();
        (m + sum.ln()) / LN_2
    }

    /// Tangent minorant of the eavesdropper log-sum term at `y = g_l Q g_l^H`;
    /// `-inf` whenever the linearised sum drops to zero or below.
    pub fn e_bar_at(&self, y: f64) -> f64 {
        let sum = self.k0 - self.k1 / (y + self.c_noise);
        if sum > 0.0 {
            sum.log2()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn x_of(&self, q: &AnCovariance) -> f64 {
        quad_form(&self.h_l, q.matrix())
    }

    fn y_of(&self, q: &AnCovariance) -> f64 {
        quad_form(&self.g_l, q.matrix())
    }

    pub fn parts(&self, q: &AnCovariance) -> SurrogateParts {
        let b_tilde = self.b_tilde_at(self.x_of(q));
        let e_bar = self.e_bar_at(self.y_of(q));
        let b_clamped = b_tilde.max(0.0);
        let e_clamped = e_bar.min(self.zeta);
        let value = if e_clamped == f64::NEG_INFINITY { f64::NEG_INFINITY } else { e_clamped - b_clamped };
        SurrogateParts { b_tilde, e_bar, b_clamped, e_clamped, value }
    }

    /// Surrogate value; `-inf` signals the extended-log sentinel, which the
    /// maximizers treat as strictly worse than every real value.
    pub fn objective(&self, q: &AnCovariance) -> f64 {
        self.parts(q).value
    }

    /// Hermitian gradient `G` in the directional sense: for a Hermitian
    /// perturbation `D`, `d/dt objective(Q + t D) = Re tr(G D)`. Zero slope is
    /// used on whichever side a clamp is active.
    pub fn gradient(&self, q: &AnCovariance) -> DMatrix<Complex64> {
        let x = self.x_of(q);
        let y = self.y_of(q);

        // d b_tilde / dx: softmax-weighted average of the tangent slopes
        let m = self
            .b_base
            .iter()
            .zip(&self.b_slope)
            .map(|(b, s)| b + s * x)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut wsum = 0.0;
        let mut slope_sum = 0.0;
        for (b, s) in self.b_base.iter().zip(&self.b_slope) {
            let w = (b + s * x - m).exp();
            wsum += w;
            slope_sum += w * s;
        }
        let b_tilde = (m + wsum.ln()) / LN_2;
        let db_dx = if b_tilde <= 0.0 { 0.0 } else { slope_sum / (wsum * LN_2) };

        let sum = self.k0 - self.k1 / (y + self.c_noise);
        let e_bar = if sum > 0.0 { sum.log2() } else { f64::NEG_INFINITY };
        let de_dy = if sum <= 0.0 || e_bar >= self.zeta {
            0.0
        } else {
            self.k1 / ((y + self.c_noise) * (y + self.c_noise) * sum * LN_2)
        };

        self.g_gram.scale(de_dy) - self.h_gram.scale(db_dx)
    }
}

/// One-shot surrogate evaluation at `q` with expansion point `q0`.
pub fn surrogate_objective(
    q: &AnCovariance,
    q0: &AnCovariance,
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
) -> f64 {
    SurrogateModel::new(q0, h_l, g_l, config, alphabet).objective(q)
}

/// One-shot evaluation exposing the pre-clamp tangent terms.
pub fn surrogate_parts(
    q: &AnCovariance,
    q0: &AnCovariance,
    h_l: &DVector<Complex64>,
    g_l: &DVector<Complex64>,
    config: &SystemConfig,
    alphabet: &SuperAlphabet,
) -> SurrogateParts {
    SurrogateModel::new(q0, h_l, g_l, config, alphabet).parts(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complex_gaussian_vec;
    use crate::model::build_super_alphabet;
    use crate::rates::asr_closed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(seed: u64) -> (SystemConfig, SuperAlphabet, DVector<Complex64>, DVector<Complex64>) {
        let mut cfg = SystemConfig::with_defaults(7, 4).unwrap();
        cfg.csi_err_var = 0.25;
        let alph = build_super_alphabet(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = complex_gaussian_vec(&mut rng, 4, 1.0);
        let g = complex_gaussian_vec(&mut rng, 4, 1.0);
        (cfg, alph, h, g)
    }

    #[test]
    fn tangent_at_expansion_point() {
        let (cfg, alph, h, g) = setup(1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let q0 = AnCovariance::random(4, &mut rng);
            let closed = asr_closed(&h, &g, &q0, &cfg, &alph);
            let parts = surrogate_parts(&q0, &q0, &h, &g, &cfg, &alph);
            assert!((parts.b_tilde - closed.b_term).abs() < 1e-9, "b {} vs {}", parts.b_tilde, closed.b_term);
            assert!((parts.e_bar - closed.e_tilde).abs() < 1e-9, "e {} vs {}", parts.e_bar, closed.e_tilde);
            assert!((parts.value - (closed.e_tilde - closed.b_term.max(0.0))).abs() < 1e-9);
        }
    }

    #[test]
    fn sentinel_fires_far_from_expansion_point() {
        // high SNR, expansion aligned with the eavesdropper, candidate orthogonal
        let mut cfg = SystemConfig::with_defaults(4, 4).unwrap();
        cfg.noise_var_bob = 1e-3;
        cfg.noise_var_eve = 1e-3;
        let alph = build_super_alphabet(&cfg).unwrap();
        let g = DVector::from_vec(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let h = DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let mut aligned = DVector::zeros(4);
        aligned[0] = Complex64::new(1.0, 0.0);
        let q0 = AnCovariance::from_unit_vector(&aligned).unwrap();
        let model = SurrogateModel::new(&q0, &h, &g, &cfg, &alph);
        assert_eq!(model.e_bar_at(0.0), f64::NEG_INFINITY);
        let mut orth = DVector::zeros(4);
        orth[2] = Complex64::new(1.0, 0.0);
        let q = AnCovariance::from_unit_vector(&orth).unwrap();
        assert_eq!(model.objective(&q), f64::NEG_INFINITY);
    }

    #[test]
    fn gradient_matches_directional_difference() {
        let (cfg, alph, h, g) = setup(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q0 = AnCovariance::random(4, &mut rng);
        let model = SurrogateModel::new(&q0, &h, &g, &cfg, &alph);
        let q = AnCovariance::random(4, &mut rng);
        let grad = model.gradient(&q);
        for _ in 0..8 {
            let a = DMatrix::from_fn(4, 4, |_, _| crate::linalg::complex_gaussian(&mut rng, 1.0));
            let dir = crate::linalg::hermitize(&a);
            let eps = 1e-6;
            let shift = |t: f64| {
                let m = q.matrix() + dir.scale(t);
                // skip feasibility: the surrogate is defined for any Hermitian argument
                let qc = AnCovariance { q: m };
                model.objective(&qc)
            };
            let fd = (shift(eps) - shift(-eps)) / (2.0 * eps);
            let analytic = (grad.clone() * &dir).trace().re;
            assert!(
                (fd - analytic).abs() <= 1e-5 * (1.0 + fd.abs().max(analytic.abs())),
                "fd {fd} vs analytic {analytic}"
            );
        }
    }
}
