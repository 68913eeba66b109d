use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::SetMeasure;
use crate::rng::{self, Stream};

use super::{argbest, flip_neighbors, random_mask, run_search, Observer, Search, SearchContext, SearchResult};

/// Best-improvement ascent over single-bit flips from seeded random starts.
#[derive(Debug, Clone, PartialEq)]
pub struct HillClimbingConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Fixed starting mask for the first climb; later restarts are random.
    pub start: Option<FeatureMask>,
}

impl Default for HillClimbingConfig {
    fn default() -> Self {
        HillClimbingConfig {
            restarts: 1,
            seed: 0,
            start: None,
        }
    }
}

impl Search for HillClimbingConfig {
    fn name(&self) -> &'static str {
        "hc"
    }

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult> {
        if self.restarts == 0 {
            return Err(Error::config("hill climbing needs at least one restart"));
        }
        if let Some(s) = &self.start {
            data.check_mask(s)?;
            if s.is_empty() {
                return Err(Error::EmptyMask);
            }
        }
        let mut rng = rng::stream(self.seed, Stream::Search);
        let ctx = SearchContext::new(data, measure, observer);
        run_search(ctx, |ctx| {
            let n = ctx.n_features();
            let mut step = 0;
            let mut winner: Option<(FeatureMask, f64)> = None;
            for restart in 0..self.restarts {
                let stage = format!("restart{}", restart + 1);
                let mut current = match (&self.start, restart) {
                    (Some(s), 0) => s.clone(),
                    _ => random_mask(&mut rng, n),
                };
                let mut value = ctx.evaluate(&current)?;
                ctx.record(step, &stage, "start", vec![current.clone()], vec![value]);
                loop {
                    let neighbors: Vec<FeatureMask> =
                        flip_neighbors(&current).into_iter().map(|(_, m)| m).collect();
                    if neighbors.is_empty() {
                        break;
                    }
                    let values = ctx.evaluate_all(&neighbors)?;
                    let b = argbest(ctx.descriptor(), &values).expect("non-empty neighborhood");
                    if !ctx.better(values[b], value) {
                        break;
                    }
                    step += 1;
                    current = neighbors[b].clone();
                    value = values[b];
                    ctx.record(step, &stage, "move", vec![current.clone()], vec![value]);
                    ctx.log(|| format!("HC | Iter={step} | Vector={current} | Fitness={value:.4}"));
                }
                if winner.as_ref().is_none_or(|(_, w)| ctx.better(value, *w)) {
                    winner = Some((current, value));
                }
            }
            Ok(winner.map(|(m, _)| m))
        })
    }
}

pub fn hill_climbing(data: &Dataset, measure: &dyn SetMeasure, cfg: &HillClimbingConfig) -> Result<SearchResult> {
    cfg.search(data, measure, None)
}
