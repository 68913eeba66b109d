//! Simulated annealing over single-bit flips.
//!
//! At each temperature `inner_iter` random flips are proposed. Improvements
//! and ties are always accepted; a worsening move of oriented size Δ < 0 is
//! accepted with probability exp(Δ/T). The temperature is multiplied by
//! `alpha` after each round and the search ends once it is no longer above
//! `t_min`.

use rand::Rng as _;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::measures::SetMeasure;
use crate::rng::{self, Stream};

use super::{random_mask, run_search, Observer, Search, SearchContext, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaConfig {
    pub t0: f64,
    pub alpha: f64,
    pub inner_iter: usize,
    pub t_min: f64,
    pub seed: u64,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            t0: 1.0,
            alpha: 0.9,
            inner_iter: 10,
            t_min: 1e-3,
            seed: 0,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) || !(self.t_min > 0.0) {
            return Err(Error::config("temperatures must be positive"));
        }
        if self.inner_iter == 0 {
            return Err(Error::config("inner_iter must be at least 1"));
        }
        Ok(())
    }
}

impl Search for SaConfig {
    fn name(&self) -> &'static str {
        "sa"
    }

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult> {
        self.validate()?;
        let mut rng = rng::stream(self.seed, Stream::Search);
        let ctx = SearchContext::new(data, measure, observer);
        run_search(ctx, |ctx| {
            let n = ctx.n_features();
            let desc = ctx.descriptor().clone();
            let mut current = random_mask(&mut rng, n);
            let mut value = ctx.evaluate(&current)?;
            ctx.record(0, "sa", "start", vec![current.clone()], vec![value]);
            let mut t = self.t0;
            let mut step = 0;
            while t > self.t_min {
                for _ in 0..self.inner_iter {
                    step += 1;
                    let candidate = current.flipped(rng.gen_range(0..n));
                    if candidate.is_empty() {
                        continue;
                    }
                    let v = ctx.evaluate(&candidate)?;
                    let delta = desc.oriented(v) - desc.oriented(value);
                    let accept = delta >= 0.0 || rng.gen::<f64>() < (delta / t).exp();
                    let label = if accept { "accepted" } else { "rejected" };
                    ctx.record(step, "sa", label, vec![candidate.clone()], vec![v]);
                    if accept {
                        current = candidate;
                        value = v;
                    }
                    let best = ctx.best_value().expect("evaluated");
                    ctx.log(|| {
                        format!("SA | Iter={step} | T={t:.5} | Vector={current} | Fitness={value:.4} | BestFitness={best:.4}")
                    });
                }
                t *= self.alpha;
            }
            Ok(None)
        })
    }
}

pub fn simulated_annealing(data: &Dataset, measure: &dyn SetMeasure, cfg: &SaConfig) -> Result<SearchResult> {
    cfg.search(data, measure, None)
}
