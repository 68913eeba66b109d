//! Tabu search over single-bit flips.
//!
//! The basic stage starts from a seeded random mask and moves each
//! iteration to the best neighbor that is not in the tabu list, even when
//! that is worse than the current mask. A tabu neighbor is still admissible
//! when it beats the global best (aspiration). The tabu list is a FIFO of
//! full solution masks. When every neighbor is tabu and none aspires, the
//! neighbor that has been tabu the longest is taken and the event is noted
//! in the trace.
//!
//! Intensification phases restart from the global best with a cleared list.
//! Diversification phases restart from the ⌈n/2⌉ features selected least
//! often across all accepted solutions (ties to the lower index).

use std::collections::VecDeque;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::SetMeasure;
use crate::rng::{self, Stream};

use super::{flip_neighbors, random_mask, run_search, Observer, Search, SearchContext, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TabuConfig {
    pub iter: usize,
    pub tabu_size: usize,
    pub intensification_phases: usize,
    pub iter_per_intensification: usize,
    pub diversification_phases: usize,
    pub iter_per_diversification: usize,
    pub seed: u64,
}

impl Default for TabuConfig {
    fn default() -> Self {
        TabuConfig {
            iter: 100,
            tabu_size: 5,
            intensification_phases: 2,
            iter_per_intensification: 5,
            diversification_phases: 1,
            iter_per_diversification: 5,
            seed: 0,
        }
    }
}

impl TabuConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tabu_size == 0 {
            return Err(Error::config("tabu list size must be at least 1"));
        }
        Ok(())
    }
}

struct Tabu<'c, 'a> {
    ctx: &'c mut SearchContext<'a>,
    size: usize,
    frequency: Vec<usize>,
    iteration: usize,
}

impl Tabu<'_, '_> {
    fn accept(&mut self, mask: &FeatureMask) {
        for i in mask.indices() {
            self.frequency[i] += 1;
        }
    }

    fn phase(&mut self, stage: &str, start: FeatureMask, iterations: usize) -> Result<()> {
        let start_value = self.ctx.evaluate(&start)?;
        let mut tabu: VecDeque<FeatureMask> = VecDeque::from([start.clone()]);
        self.accept(&start);
        self.ctx
            .record(self.iteration, stage, "bestNeighbor", vec![start.clone()], vec![start_value]);
        self.ctx
            .record(self.iteration, stage, "tabuList", tabu.iter().cloned().collect(), vec![]);
        let best = self.ctx.best_value().expect("start was evaluated");
        self.ctx.log(|| {
            format!("TS | {stage} | InitialVector={start} | InitialFitness={start_value:.4} | BestFitness={best:.4}")
        });

        let mut current = start;
        for local in 1..=iterations {
            let neighbors: Vec<FeatureMask> =
                flip_neighbors(&current).into_iter().map(|(_, m)| m).collect();
            if neighbors.is_empty() {
                break;
            }
            self.iteration += 1;
            let best_before = self.ctx.best_value().expect("start was evaluated");
            let values = self.ctx.evaluate_all(&neighbors)?;

            let desc = self.ctx.descriptor();
            let mut pick: Option<usize> = None;
            for (i, (m, &v)) in neighbors.iter().zip(&values).enumerate() {
                let admissible = !tabu.contains(m) || desc.better(v, best_before);
                if admissible && pick.is_none_or(|p| desc.better(v, values[p])) {
                    pick = Some(i);
                }
            }
            let chosen = match pick {
                Some(i) => i,
                None => {
                    // every neighbor is tabu: take the one that entered the list first
                    let i = (0..neighbors.len())
                        .min_by_key(|&i| tabu.iter().position(|t| t == &neighbors[i]))
                        .expect("non-empty neighborhood");
                    self.ctx.note(
                        self.iteration,
                        stage,
                        "forcedAcceptance",
                        format!("all neighbors tabu; accepted {}", neighbors[i]),
                    );
                    i
                }
            };

            current = neighbors[chosen].clone();
            let value = values[chosen];
            tabu.retain(|t| t != &current);
            tabu.push_back(current.clone());
            while tabu.len() > self.size {
                tabu.pop_front();
            }
            self.accept(&current);

            self.ctx
                .record(self.iteration, stage, "bestNeighbor", vec![current.clone()], vec![value]);
            self.ctx
                .record(self.iteration, stage, "tabuList", tabu.iter().cloned().collect(), vec![]);
            let best = self.ctx.best_value().expect("evaluated");
            self.ctx.log(|| {
                format!("TS | Iter={local} | Vector={current} | Fitness={value:.4} | BestFitness={best:.4}")
            });
        }
        Ok(())
    }

    fn least_frequent(&self) -> FeatureMask {
        let n = self.frequency.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (self.frequency[i], i));
        FeatureMask::from_indices(n, &order[..n.div_ceil(2)])
    }
}

impl Search for TabuConfig {
    fn name(&self) -> &'static str {
        "ts"
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
            let start = random_mask(&mut rng, n);
            let mut tabu = Tabu {
                ctx,
                size: self.tabu_size,
                frequency: vec![0; n],
                iteration: 0,
            };
            tabu.phase("basic", start, self.iter)?;
            for p in 1..=self.intensification_phases {
                let best = tabu.ctx.best_mask().expect("evaluated").clone();
                tabu.phase(&format!("intensification{p}"), best, self.iter_per_intensification)?;
            }
            for p in 1..=self.diversification_phases {
                let start = tabu.least_frequent();
                tabu.phase(&format!("diversification{p}"), start, self.iter_per_diversification)?;
            }
            Ok(None)
        })
    }
}

pub fn tabu_search(data: &Dataset, measure: &dyn SetMeasure, cfg: &TabuConfig) -> Result<SearchResult> {
    cfg.search(data, measure, None)
}
