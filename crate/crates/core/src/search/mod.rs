//! Subset search strategies.
//!
//! Every search takes a dataset and a set measure and returns a
//! [`SearchResult`]. Comparisons respect the measure's `maximize` flag. All
//! evaluated masks that tie the incumbent best value are collected into
//! `best_masks`, with the mask the search settled on listed first.
//!
//! Batches of candidate masks are evaluated in parallel on the current rayon
//! pool; results are merged in candidate order, so outcomes never depend on
//! the number of threads.

mod annealing;
mod exhaustive;
mod genetic;
mod hill_climbing;
mod las_vegas;
mod lcc;
mod sequential;
mod tabu;

use std::collections::{HashMap, HashSet};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::{MeasureDescriptor, SetMeasure};
use crate::rng::Rng;

pub use annealing::{simulated_annealing, SaConfig};
pub use exhaustive::{exhaustive_bfs, exhaustive_dfs, BfsOrder, DfsOrder, Exhaustive, ExhaustiveOrder, DEFAULT_EXHAUSTIVE_CAP};
pub use genetic::{genetic_algorithm, GaConfig};
pub use hill_climbing::{hill_climbing, HillClimbingConfig};
pub use las_vegas::{las_vegas_wrapper, LvwConfig};
pub use lcc::{lcc, Lcc};
pub use sequential::{sbs, sfbs, sffs, sfs, Sequential, SequentialKind};
pub use tabu::{tabu_search, TabuConfig};

/// Receives human-readable progress lines.
pub type Observer = dyn Fn(&str) + Sync;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub iteration: usize,
    pub stage: String,
    pub label: String,
    pub masks: Vec<FeatureMask>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_masks: Vec<FeatureMask>,
    pub best_value: f64,
    pub trace: Vec<TraceEvent>,
    pub evaluations: usize,
}

impl SearchResult {
    pub fn best(&self) -> &FeatureMask {
        &self.best_masks[0]
    }
}

/// A configured search strategy.
pub trait Search: Send + Sync {
    /// Short name, e.g. `"ts"` or `"sfs"`.
    fn name(&self) -> &'static str;

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult>;
}

/// All masks tying the best value seen so far, in discovery order.
#[derive(Debug, Clone)]
pub(crate) struct BestSet {
    value: Option<f64>,
    masks: Vec<FeatureMask>,
    seen: HashSet<FeatureMask>,
}

impl BestSet {
    fn new() -> Self {
        BestSet {
            value: None,
            masks: Vec::new(),
            seen: HashSet::new(),
        }
    }

    fn offer(&mut self, desc: &MeasureDescriptor, mask: &FeatureMask, value: f64) {
        match self.value {
            Some(best) if desc.better(best, value) => {}
            Some(best) if best == value => {
                if self.seen.insert(mask.clone()) {
                    self.masks.push(mask.clone());
                }
            }
            _ => {
                self.value = Some(value);
                self.masks.clear();
                self.seen.clear();
                self.seen.insert(mask.clone());
                self.masks.push(mask.clone());
            }
        }
    }
}

/// Mutable state shared by every search: memoized evaluations, tie
/// tracking, trace and progress output.
pub struct SearchContext<'a> {
    data: &'a Dataset,
    measure: &'a dyn SetMeasure,
    desc: MeasureDescriptor,
    cache: Option<HashMap<FeatureMask, f64>>,
    evaluations: usize,
    best: BestSet,
    trace: Vec<TraceEvent>,
    observer: Option<&'a Observer>,
}

impl<'a> SearchContext<'a> {
    pub fn new(data: &'a Dataset, measure: &'a dyn SetMeasure, observer: Option<&'a Observer>) -> Self {
        SearchContext {
            data,
            measure,
            desc: measure.descriptor().clone(),
            cache: Some(HashMap::new()),
            evaluations: 0,
            best: BestSet::new(),
            trace: Vec::new(),
            observer,
        }
    }

    /// Disables memoization, for searches that never revisit a mask.
    pub(crate) fn without_cache(mut self) -> Self {
        self.cache = None;
        self
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn n_features(&self) -> usize {
        self.data.n_features()
    }

    pub fn descriptor(&self) -> &MeasureDescriptor {
        &self.desc
    }

    pub fn better(&self, a: f64, b: f64) -> bool {
        self.desc.better(a, b)
    }

    pub fn best_value(&self) -> Option<f64> {
        self.best.value
    }

    /// The first mask found at the current best value.
    pub fn best_mask(&self) -> Option<&FeatureMask> {
        self.best.masks.first()
    }

    pub fn evaluate(&mut self, mask: &FeatureMask) -> Result<f64> {
        Ok(self.evaluate_all(std::slice::from_ref(mask))?[0])
    }

    /// Evaluates a batch in parallel; values are returned in input order.
    pub fn evaluate_all(&mut self, masks: &[FeatureMask]) -> Result<Vec<f64>> {
        for m in masks {
            self.data.check_mask(m)?;
            if m.is_empty() {
                return Err(Error::EmptyMask);
            }
        }
        let mut pending: Vec<&FeatureMask> = Vec::new();
        let mut queued = HashSet::new();
        for m in masks {
            let cached = self.cache.as_ref().is_some_and(|c| c.contains_key(m));
            if !cached && queued.insert(m) {
                pending.push(m);
            }
        }
        let (data, measure) = (self.data, self.measure);
        let computed: Vec<Result<f64>> = pending
            .par_iter()
            .map(|m| measure.evaluate(data, m))
            .collect();
        let mut fresh = HashMap::with_capacity(pending.len());
        for (m, v) in pending.into_iter().zip(computed) {
            let v = v?;
            self.evaluations += 1;
            fresh.insert(m.clone(), v);
        }
        let values: Vec<f64> = masks
            .iter()
            .map(|m| {
                fresh
                    .get(m)
                    .or_else(|| self.cache.as_ref().and_then(|c| c.get(m)))
                    .copied()
                    .expect("every mask was evaluated or cached")
            })
            .collect();
        for (m, &v) in masks.iter().zip(&values) {
            self.best.offer(&self.desc, m, v);
        }
        if let Some(cache) = self.cache.as_mut() {
            cache.extend(fresh);
        }
        Ok(values)
    }

    pub fn record(
        &mut self,
        iteration: usize,
        stage: &str,
        label: &str,
        masks: Vec<FeatureMask>,
        values: Vec<f64>,
    ) {
        self.trace.push(TraceEvent {
            iteration,
            stage: stage.to_string(),
            label: label.to_string(),
            masks,
            values,
            note: None,
        });
    }

    pub fn note(&mut self, iteration: usize, stage: &str, label: &str, note: String) {
        self.trace.push(TraceEvent {
            iteration,
            stage: stage.to_string(),
            label: label.to_string(),
            masks: Vec::new(),
            values: Vec::new(),
            note: Some(note),
        });
    }

    pub fn log(&self, line: impl FnOnce() -> String) {
        if let Some(obs) = self.observer {
            obs(&line());
        }
    }

    /// Builds the result. `chosen`, when given, is moved to the front of the
    /// tied masks; it must tie the best value.
    pub fn finish(self, chosen: Option<&FeatureMask>) -> SearchResult {
        let mut masks = self.best.masks;
        if let Some(c) = chosen {
            if let Some(pos) = masks.iter().position(|m| m == c) {
                let m = masks.remove(pos);
                masks.insert(0, m);
            }
        }
        SearchResult {
            best_masks: masks,
            best_value: self.best.value.expect("at least one mask was evaluated"),
            trace: self.trace,
            evaluations: self.evaluations,
        }
    }

    fn abort(self, err: Error) -> Error {
        match err {
            Error::SearchAborted { .. } => err,
            other => Error::SearchAborted {
                source: Box::new(other),
                trace: self.trace,
            },
        }
    }
}

/// Runs `body` in a fresh context, converting failures into
/// [`Error::SearchAborted`] carrying the partial trace.
pub(crate) fn run_search<'a>(
    ctx: SearchContext<'a>,
    body: impl FnOnce(&mut SearchContext<'a>) -> Result<Option<FeatureMask>>,
) -> Result<SearchResult> {
    let mut ctx = ctx;
    if ctx.n_features() == 0 {
        return Err(Error::InvalidDataset("no features to search".into()));
    }
    match body(&mut ctx) {
        Ok(chosen) => Ok(ctx.finish(chosen.as_ref())),
        Err(e) => Err(ctx.abort(e)),
    }
}

/// Uniformly random non-empty mask: each bit is a fair coin, redrawn while empty.
pub(crate) fn random_mask(rng: &mut Rng, width: usize) -> FeatureMask {
    loop {
        let m = FeatureMask::from_bits((0..width).map(|_| rng.gen_bool(0.5)).collect());
        if !m.is_empty() {
            return m;
        }
    }
}

/// All single-bit flips of `mask` that leave at least one bit set, paired
/// with the flipped index.
pub(crate) fn flip_neighbors(mask: &FeatureMask) -> Vec<(usize, FeatureMask)> {
    (0..mask.width())
        .map(|i| (i, mask.flipped(i)))
        .filter(|(_, m)| !m.is_empty())
        .collect()
}

/// Index of the best value (first on ties).
pub(crate) fn argbest(desc: &MeasureDescriptor, values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|b| desc.better(v, values[b])) {
            best = Some(i);
        }
    }
    best
}
