//! Antenna-group selection: exhaustive enumeration, the annealing search with
//! Metropolis acceptance and an integer-sampling hill climb, and the composed
//! selection schemes built on it.

mod sa;
mod schemes;

pub use sa::{
    all_neighbors, binomial, enumerate_aags, initial_temperature, metropolis_accept, neighbor, sa_search,
};
pub use schemes::{
    es_gd_scheme, joint_sa_max_asr, max_r_sinr_scheme, nsp_scheme, separate_sa_max_asr, SchemeOutcome,
};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Aag;

/// Annealing controls. `c0` is the initial mutation parameter (usually set
/// from [`initial_temperature`]), `cf` the stop threshold, and cooling is
/// geometric: each level multiplies the parameter by `cooling_alpha`, so the
/// level count is bounded by `log(cf / c0) / log(cooling_alpha)` and by
/// `max_mutations`. `sample_size` caps the integer-sampling set per round;
/// `steepest` widens it to the whole neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    pub c0: f64,
    pub cf: f64,
    pub cooling_alpha: f64,
    pub sample_size: usize,
    pub equilibrium_len: usize,
    pub max_mutations: usize,
    pub steepest: bool,
}

impl SaParams {
    /// Defaults scaled to the group size: `sample_size = n_active` and a
    /// mutation budget of `10 * n_active` moves per temperature.
    pub fn for_group_size(n_active: usize) -> Self {
        SaParams {
            c0: 1.0,
            cf: 1e-3,
            cooling_alpha: 0.95,
            sample_size: n_active.max(1),
            equilibrium_len: 10 * n_active.max(1),
            max_mutations: 10_000,
            steepest: false,
        }
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > self.cf && self.cf > 0.0) {
            return Err(Error::InvalidConfig(format!("need c0 > cf > 0, got c0 {} cf {}", self.c0, self.cf)));
        }
        if !(self.cooling_alpha > 0.0 && self.cooling_alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("cooling_alpha must be in (0,1), got {}", self.cooling_alpha)));
        }
        if self.sample_size == 0 {
            return Err(Error::InvalidConfig("sample_size must be >= 1".into()));
        }
        if self.equilibrium_len == 0 || self.max_mutations == 0 {
            return Err(Error::InvalidConfig("equilibrium_len and max_mutations must be >= 1".into()));
        }
        Ok(())
    }
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams::for_group_size(4)
    }
}

/// Memoized group objective. The annealing search revisits masks constantly;
/// caching makes each distinct mask cost one underlying evaluation, which both
/// bounds the expensive inner solvers and pins a stochastic objective to a
/// single value per mask within a search.
pub struct ObjectiveHandle<'a> {
    evaluate: Box<dyn FnMut(&Aag) -> f64 + 'a>,
    cache: HashMap<Vec<bool>, f64>,
    misses: usize,
}

impl<'a> ObjectiveHandle<'a> {
    pub fn new(evaluate: impl FnMut(&Aag) -> f64 + 'a) -> Self {
        ObjectiveHandle { evaluate: Box::new(evaluate), cache: HashMap::new(), misses: 0 }
    }

    /// Extended-real objective value; `-inf` marks an infeasible group.
    pub fn value(&mut self, aag: &Aag) -> f64 {
        if let Some(&v) = self.cache.get(aag.mask()) {
            return v;
        }
        let v = (self.evaluate)(aag);
        self.misses += 1;
        self.cache.insert(aag.mask().to_vec(), v);
        v
    }

    /// Number of underlying evaluations (cache misses) so far.
    pub fn evaluations(&self) -> usize {
        self.misses
    }

    /// Number of distinct masks seen.
    pub fn distinct(&self) -> usize {
        self.cache.len()
    }
}
