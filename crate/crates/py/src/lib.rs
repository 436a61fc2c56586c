//! Python bindings for the secure spatial modulation workbench: system
//! configuration, seeded channel draws, the selection schemes, rate
//! evaluation, and the sweep/trace drivers returning CSV text.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ssm_core::bench::{self, ExperimentSpec};
use ssm_core::model;
use ssm_core::rates;
use ssm_core::select::{self, SaParams};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vector_to(v: &DVector<Complex64>) -> Vec<Complex64> {
    v.iter().copied().collect()
}

fn matrix_to(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

fn matrix_from(rows: Vec<Vec<Complex64>>) -> PyResult<DMatrix<Complex64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square and nonempty"));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

/// System parameters: antenna counts, constellation order, power split, and
/// noise levels (linear variances).
#[pyclass(name = "SystemConfig", module = "ssm_py")]
#[derive(Clone)]
struct PySystemConfig {
    inner: model::SystemConfig,
}

#[pymethods]
impl PySystemConfig {
    #[new]
    #[pyo3(signature = (n_tx, mod_order=4, n_active=None, total_power=None, power_split=0.5, noise_var_bob=1.0, noise_var_eve=1.0, csi_err_var=0.0, seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        n_tx: usize,
        mod_order: usize,
        n_active: Option<usize>,
        total_power: Option<f64>,
        power_split: f64,
        noise_var_bob: f64,
        noise_var_eve: f64,
        csi_err_var: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let n_active = match n_active {
            Some(n) => n,
            None => model::derive_n_active(n_tx).map_err(err)?,
        };
        let inner = model::SystemConfig {
            n_tx,
            n_active,
            mod_order,
            total_power: total_power.unwrap_or(n_active as f64),
            power_split,
            noise_var_bob,
            noise_var_eve,
            csi_err_var,
            rng_seed: seed,
        };
        inner.validate().map_err(err)?;
        Ok(PySystemConfig { inner })
    }

    #[getter]
    fn n_tx(&self) -> usize {
        self.inner.n_tx
    }

    #[getter]
    fn n_active(&self) -> usize {
        self.inner.n_active
    }

    #[getter]
    fn mod_order(&self) -> usize {
        self.inner.mod_order
    }

    #[getter]
    fn total_power(&self) -> f64 {
        self.inner.total_power
    }

    #[getter]
    fn p1(&self) -> f64 {
        self.inner.p1()
    }

    #[getter]
    fn p2(&self) -> f64 {
        self.inner.p2()
    }

    #[getter]
    fn max_bits(&self) -> f64 {
        self.inner.max_bits()
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemConfig(n_tx={}, n_active={}, mod_order={}, total_power={}, power_split={}, noise_var_bob={}, noise_var_eve={}, csi_err_var={})",
            self.inner.n_tx,
            self.inner.n_active,
            self.inner.mod_order,
            self.inner.total_power,
            self.inner.power_split,
            self.inner.noise_var_bob,
            self.inner.noise_var_eve,
            self.inner.csi_err_var
        )
    }
}

/// One channel draw: the legitimate link and the true/estimated/error split
/// of the eavesdropper link.
#[pyclass(name = "Channel", module = "ssm_py")]
#[derive(Clone)]
struct PyChannel {
    inner: model::ChannelRealization,
}

#[pymethods]
impl PyChannel {
    #[getter]
    fn h(&self) -> Vec<Complex64> {
        vector_to(&self.inner.h)
    }

    #[getter]
    fn g(&self) -> Vec<Complex64> {
        vector_to(&self.inner.g)
    }

    #[getter]
    fn g_est(&self) -> Vec<Complex64> {
        vector_to(&self.inner.g_est)
    }

    #[getter]
    fn g_err(&self) -> Vec<Complex64> {
        vector_to(&self.inner.g_err)
    }

    fn __repr__(&self) -> String {
        format!("Channel(n_tx={})", self.inner.h.len())
    }
}

/// Output of one selection scheme on one channel draw.
#[pyclass(name = "SchemeResult", module = "ssm_py")]
struct PySchemeResult {
    #[pyo3(get)]
    active_indices: Vec<usize>,
    #[pyo3(get)]
    q: Vec<Vec<Complex64>>,
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    solver_calls: usize,
}

#[pymethods]
impl PySchemeResult {
    fn __repr__(&self) -> String {
        format!(
            "SchemeResult(active_indices={:?}, value={}, iterations={})",
            self.active_indices, self.value, self.iterations
        )
    }
}

/// Largest power of two not exceeding `n_tx`, the default group size.
#[pyfunction]
fn derive_n_active(n_tx: usize) -> PyResult<usize> {
    model::derive_n_active(n_tx).map_err(err)
}

/// Number of antenna groups `C(n_tx, n_active)`.
#[pyfunction]
fn enumerate_count(n_tx: usize, n_active: usize) -> u128 {
    select::binomial(n_tx, n_active)
}

/// Unit-energy constellation for a supported order.
#[pyfunction]
fn constellation(mod_order: usize) -> PyResult<Vec<Complex64>> {
    model::make_constellation(mod_order).map_err(err)
}

/// Seeded Rayleigh channel draw with eavesdropper estimation error.
#[pyfunction]
#[pyo3(signature = (config, seed=None))]
fn sample_channel(config: &PySystemConfig, seed: Option<u64>) -> PyChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(config.inner.rng_seed));
    PyChannel { inner: model::sample_channel(&config.inner, &mut rng) }
}

/// Runs one scheme (`"es-gd"`, `"joint-sa"`, `"separate-sa"`, `"max-r-sinr"`,
/// `"nsp-baseline"`) on a channel draw. `value` is the scheme's native
/// objective at the returned point.
#[pyfunction]
#[pyo3(signature = (name, config, channel, seed=1, mc_samples=200))]
fn run_scheme(
    name: &str,
    config: &PySystemConfig,
    channel: &PyChannel,
    seed: u64,
    mc_samples: usize,
) -> PyResult<PySchemeResult> {
    let cfg = &config.inner;
    let alphabet = model::build_super_alphabet(cfg).map_err(err)?;
    let params = SaParams::for_group_size(cfg.n_active);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match name {
        "es-gd" => select::es_gd_scheme(&channel.inner, cfg, &alphabet, 5, mc_samples, &mut rng),
        "joint-sa" => select::joint_sa_max_asr(&channel.inner, cfg, &alphabet, &params, &mut rng),
        "separate-sa" => select::separate_sa_max_asr(&channel.inner, cfg, &alphabet, &params, &mut rng),
        "max-r-sinr" => select::max_r_sinr_scheme(&channel.inner, cfg, &params, &mut rng, true),
        "nsp-baseline" => select::nsp_scheme(&channel.inner, cfg, &alphabet),
        other => return Err(PyValueError::new_err(format!("unknown scheme `{other}`"))),
    }
    .map_err(err)?;
    Ok(PySchemeResult {
        active_indices: outcome.aag.active().to_vec(),
        q: matrix_to(outcome.q.matrix()),
        value: outcome.value,
        iterations: outcome.iterations(),
        solver_calls: outcome.solver_calls,
    })
}

fn subchannels(
    config: &PySystemConfig,
    channel: &PyChannel,
    active_indices: Vec<usize>,
) -> PyResult<(DVector<Complex64>, DVector<Complex64>)> {
    let aag = model::Aag::from_active(config.inner.n_tx, &active_indices).map_err(err)?;
    model::select_subchannel(&channel.inner, &aag).map_err(err)
}

/// Closed-form approximate secrecy rate for a group and covariance; returns
/// `(r_a, e_tilde, b_term)`.
#[pyfunction]
fn asr_closed(
    config: &PySystemConfig,
    channel: &PyChannel,
    active_indices: Vec<usize>,
    q: Vec<Vec<Complex64>>,
) -> PyResult<(f64, f64, f64)> {
    let (h_l, g_l) = subchannels(config, channel, active_indices)?;
    let q = rates::AnCovariance::new(matrix_from(q)?).map_err(err)?;
    let alphabet = model::build_super_alphabet(&config.inner).map_err(err)?;
    let out = rates::asr_closed(&h_l, &g_l, &q, &config.inner, &alphabet);
    Ok((out.r_a, out.e_tilde, out.b_term))
}

/// Monte-Carlo exact mutual informations and the clamped secrecy rate;
/// returns `(i_bob, i_eve, sr)`.
#[pyfunction]
#[pyo3(signature = (config, channel, active_indices, q, n_mc=500, seed=1))]
fn exact_secrecy_rate(
    config: &PySystemConfig,
    channel: &PyChannel,
    active_indices: Vec<usize>,
    q: Vec<Vec<Complex64>>,
    n_mc: usize,
    seed: u64,
) -> PyResult<(f64, f64, f64)> {
    let (h_l, g_l) = subchannels(config, channel, active_indices)?;
    let q = rates::AnCovariance::new(matrix_from(q)?).map_err(err)?;
    let alphabet = model::build_super_alphabet(&config.inner).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i_bob = rates::mi_bob_exact(&h_l, &q, &alphabet, &config.inner, n_mc, &mut rng);
    let i_eve = rates::mi_eve_exact(&g_l, &q, &alphabet, &config.inner, n_mc, &mut rng);
    let out = rates::instantaneous_sr(i_bob, i_eve);
    Ok((out.i_bob, out.i_eve, out.sr))
}

/// Runs the full ergodic sweep described by a TOML experiment text and
/// returns the CSV output as a string.
#[pyfunction]
fn sweep_csv(spec_toml: &str) -> PyResult<String> {
    let spec = ExperimentSpec::from_toml(spec_toml).map_err(err)?;
    let result = bench::run_sweep(&spec).map_err(err)?;
    bench::csv_string(&result).map_err(err)
}

/// Per-iteration trace of one scheme at one SNR point, as CSV text.
#[pyfunction]
fn trace_csv(spec_toml: &str, scheme: &str, snr_db: f64) -> PyResult<String> {
    let spec = ExperimentSpec::from_toml(spec_toml).map_err(err)?;
    let scheme = match scheme {
        "es-gd" => bench::Scheme::EsGd,
        "joint-sa" => bench::Scheme::JointSa,
        "separate-sa" => bench::Scheme::SeparateSa,
        "max-r-sinr" => bench::Scheme::MaxRSinr,
        "nsp-baseline" => bench::Scheme::NspBaseline,
        other => return Err(PyValueError::new_err(format!("unknown scheme `{other}`"))),
    };
    let dump = bench::run_trace(&spec, scheme, snr_db).map_err(err)?;
    bench::trace_csv_string(&dump).map_err(err)
}

/// Runs the built-in property checks; returns `(name, passed, detail)` rows.
#[pyfunction]
#[pyo3(signature = (seed=1))]
fn validate(seed: u64) -> Vec<(String, bool, String)> {
    bench::run_validation(seed)
        .into_iter()
        .map(|c| (c.name.to_string(), c.pass, c.detail))
        .collect()
}

#[pymodule]
fn ssm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemConfig>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PySchemeResult>()?;
    m.add_function(wrap_pyfunction!(derive_n_active, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_count, m)?)?;
    m.add_function(wrap_pyfunction!(constellation, m)?)?;
    m.add_function(wrap_pyfunction!(sample_channel, m)?)?;
    m.add_function(wrap_pyfunction!(run_scheme, m)?)?;
    m.add_function(wrap_pyfunction!(asr_closed, m)?)?;
    m.add_function(wrap_pyfunction!(exact_secrecy_rate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(trace_csv, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
