//! Linear consistency-constrained selection.
//!
//! Features are ranked by an individual relevance score, least relevant
//! first. Starting from the full set, each feature in that order is dropped
//! whenever the remaining subset still reaches the threshold under the set
//! measure. The threshold defaults to the value of the full set. The
//! result is the final mask, not the best mask seen.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::{Measure, SetMeasure};

use super::{Observer, Search, SearchContext, SearchResult};

#[derive(Debug, Clone)]
pub struct Lcc {
    /// Ranks the features.
    pub individual: Measure,
    pub threshold: Option<f64>,
}

impl Lcc {
    pub fn new(individual: Measure) -> Self {
        Lcc {
            individual,
            threshold: None,
        }
    }

    fn run(&self, ctx: &mut SearchContext<'_>) -> Result<(FeatureMask, f64)> {
        let data = ctx.data();
        let n = ctx.n_features();
        let features: Vec<usize> = (0..n).collect();
        let scores = self.individual.score_features(data, &features)?;
        let rank = self.individual.descriptor().clone();
        let mut order = features;
        order.sort_by(|&a, &b| {
            rank.oriented(scores[a])
                .total_cmp(&rank.oriented(scores[b]))
                .then(a.cmp(&b))
        });

        let mut current = FeatureMask::full(n);
        let full_value = ctx.evaluate(&current)?;
        let threshold = self.threshold.unwrap_or(full_value);
        if !ctx.descriptor().at_least(full_value, threshold) {
            return Err(Error::UnreachableThreshold { threshold, full_value });
        }
        ctx.record(0, "lcc", "initial", vec![current.clone()], vec![full_value]);
        let mut value = full_value;
        for (step, &f) in order.iter().enumerate() {
            if current.count() == 1 {
                break;
            }
            let candidate = current.with(f, false);
            let v = ctx.evaluate(&candidate)?;
            let removed = ctx.descriptor().at_least(v, threshold);
            let label = if removed { "removed" } else { "kept" };
            ctx.record(step + 1, "lcc", label, vec![candidate.clone()], vec![v]);
            if removed {
                current = candidate;
                value = v;
            }
            ctx.log(|| format!("LCC | Iter={} | Vector={current} | Fitness={value:.4}", step + 1));
        }
        Ok((current, value))
    }
}

impl Search for Lcc {
    fn name(&self) -> &'static str {
        "lcc"
    }

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult> {
        let mut ctx = SearchContext::new(data, measure, observer);
        match self.run(&mut ctx) {
            Ok((mask, value)) => {
                let mut r = ctx.finish(None);
                r.best_masks = vec![mask];
                r.best_value = value;
                Ok(r)
            }
            Err(e) => Err(ctx.abort(e)),
        }
    }
}

pub fn lcc(data: &Dataset, measure: &dyn SetMeasure, individual: Measure, threshold: Option<f64>) -> Result<SearchResult> {
    Lcc { individual, threshold }.search(data, measure, None)
}
