//! Las Vegas wrapper: pure random sampling of masks, keeping the incumbent
//! that is strictly better, or equally good with fewer features. Stops after
//! `max_stale_iter` consecutive draws that do not replace the incumbent.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::measures::SetMeasure;
use crate::rng::{self, Stream};

use super::{random_mask, run_search, Observer, Search, SearchContext, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LvwConfig {
    pub max_stale_iter: usize,
    pub seed: u64,
}

impl Default for LvwConfig {
    fn default() -> Self {
        LvwConfig {
            max_stale_iter: 100,
            seed: 0,
        }
    }
}

impl Search for LvwConfig {
    fn name(&self) -> &'static str {
        "lvw"
    }

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult> {
        if self.max_stale_iter == 0 {
            return Err(Error::config("max_stale_iter must be at least 1"));
        }
        let mut rng = rng::stream(self.seed, Stream::Search);
        let ctx = SearchContext::new(data, measure, observer);
        run_search(ctx, |ctx| {
            let n = ctx.n_features();
            let mut incumbent = random_mask(&mut rng, n);
            let mut value = ctx.evaluate(&incumbent)?;
            ctx.record(0, "lvw", "incumbent", vec![incumbent.clone()], vec![value]);
            let (mut stale, mut iteration) = (0, 0);
            while stale < self.max_stale_iter {
                iteration += 1;
                let candidate = random_mask(&mut rng, n);
                let v = ctx.evaluate(&candidate)?;
                if ctx.better(v, value) || (v == value && candidate.count() < incumbent.count()) {
                    incumbent = candidate;
                    value = v;
                    stale = 0;
                    ctx.log(|| format!("LVW | Iter={iteration} | Vector={incumbent} | Fitness={value:.4}"));
                } else {
                    stale += 1;
                }
                ctx.record(iteration, "lvw", "incumbent", vec![incumbent.clone()], vec![value]);
            }
            Ok(Some(incumbent))
        })
    }
}

pub fn las_vegas_wrapper(data: &Dataset, measure: &dyn SetMeasure, cfg: &LvwConfig) -> Result<SearchResult> {
    cfg.search(data, measure, None)
}
