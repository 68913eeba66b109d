//! Generational genetic algorithm over feature masks.
//!
//! Generation 1 is a seeded random population. Each later generation keeps
//! the `elitism` best individuals unchanged and fills the rest with
//! offspring: parents come from binary tournaments, pairs are recombined by
//! single-point crossover with probability `p_crossover`, and every bit of a
//! child flips with probability `p_mutation`. A child that ends up empty has
//! one random bit set.

use rand::Rng as _;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::{MeasureDescriptor, SetMeasure};
use crate::rng::{self, Rng, Stream};

use super::{random_mask, run_search, Observer, Search, SearchContext, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub pop_size: usize,
    pub p_crossover: f64,
    pub p_mutation: f64,
    /// Total number of generations, the initial one included.
    pub max_iter: usize,
    pub elitism: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            pop_size: 20,
            p_crossover: 0.8,
            p_mutation: 0.1,
            max_iter: 100,
            elitism: 1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::config("population size must be at least 2"));
        }
        for (name, p) in [("crossover", self.p_crossover), ("mutation", self.p_mutation)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} probability must lie in [0, 1], got {p}")));
            }
        }
        if self.elitism > self.pop_size {
            return Err(Error::config("elitism cannot exceed the population size"));
        }
        if self.max_iter == 0 {
            return Err(Error::config("at least one generation is required"));
        }
        Ok(())
    }
}

fn tournament(rng: &mut Rng, desc: &MeasureDescriptor, fitness: &[f64]) -> usize {
    let a = rng.gen_range(0..fitness.len());
    let b = rng.gen_range(0..fitness.len());
    if desc.better(fitness[b], fitness[a]) {
        b
    } else {
        a
    }
}

fn mutate(rng: &mut Rng, mut child: FeatureMask, p: f64) -> FeatureMask {
    for i in 0..child.width() {
        if rng.gen_bool(p) {
            child = child.flipped(i);
        }
    }
    if child.is_empty() {
        let i = rng.gen_range(0..child.width());
        child.set(i, true);
    }
    child
}

fn crossover(rng: &mut Rng, a: &FeatureMask, b: &FeatureMask, p: f64) -> (FeatureMask, FeatureMask) {
    let n = a.width();
    if n < 2 || !rng.gen_bool(p) {
        return (a.clone(), b.clone());
    }
    let cut = rng.gen_range(1..n);
    let splice = |x: &FeatureMask, y: &FeatureMask| {
        FeatureMask::from_bits(x.bits()[..cut].iter().chain(&y.bits()[cut..]).copied().collect())
    };
    (splice(a, b), splice(b, a))
}

impl Search for GaConfig {
    fn name(&self) -> &'static str {
        "ga"
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
            let mut population: Vec<FeatureMask> = (0..self.pop_size).map(|_| random_mask(&mut rng, n)).collect();
            let mut fitness = ctx.evaluate_all(&population)?;
            for generation in 1..=self.max_iter {
                if generation > 1 {
                    let mut order: Vec<usize> = (0..population.len()).collect();
                    order.sort_by(|&a, &b| {
                        desc.oriented(fitness[b])
                            .total_cmp(&desc.oriented(fitness[a]))
                            .then(a.cmp(&b))
                    });
                    let mut next: Vec<FeatureMask> =
                        order[..self.elitism].iter().map(|&i| population[i].clone()).collect();
                    while next.len() < self.pop_size {
                        let p1 = tournament(&mut rng, &desc, &fitness);
                        let p2 = tournament(&mut rng, &desc, &fitness);
                        let (c1, c2) = crossover(&mut rng, &population[p1], &population[p2], self.p_crossover);
                        for child in [c1, c2] {
                            let child = mutate(&mut rng, child, self.p_mutation);
                            if next.len() < self.pop_size {
                                next.push(child);
                            }
                        }
                    }
                    population = next;
                    fitness = ctx.evaluate_all(&population)?;
                }
                let mean = fitness.iter().sum::<f64>() / fitness.len() as f64;
                let best = ctx.best_value().expect("population evaluated");
                ctx.record(generation, "ga", "population", population.clone(), fitness.clone());
                ctx.log(|| format!("GA | iter = {generation} | Mean = {mean:.7} | Best = {best:.7}"));
            }
            Ok(None)
        })
    }
}

pub fn genetic_algorithm(data: &Dataset, measure: &dyn SetMeasure, cfg: &GaConfig) -> Result<SearchResult> {
    cfg.search(data, measure, None)
}
