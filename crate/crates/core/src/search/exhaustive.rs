use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::SetMeasure;

use super::{run_search, Observer, Search, SearchContext, SearchResult};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

const CHUNK: usize = 2048;

/// Non-empty subsets by increasing cardinality, lexicographic within a
/// cardinality: {0}, {1}, …, {0,1}, {0,2}, …
pub struct BfsOrder {
    n: usize,
    current: Vec<usize>,
    started: bool,
}

impl BfsOrder {
    pub fn new(n: usize) -> Self {
        BfsOrder {
            n,
            current: Vec::new(),
            started: false,
        }
    }
}

impl Iterator for BfsOrder {
    type Item = FeatureMask;

    fn next(&mut self) -> Option<FeatureMask> {
        let n = self.n;
        if n == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            self.current = vec![0];
        } else {
            let k = self.current.len();
            // rightmost position that can still move
            match (0..k).rev().find(|&i| self.current[i] < n - k + i) {
                Some(i) => {
                    self.current[i] += 1;
                    for j in i + 1..k {
                        self.current[j] = self.current[j - 1] + 1;
                    }
                }
                None if k < n => self.current = (0..=k).collect(),
                None => return None,
            }
        }
        Some(FeatureMask::from_indices(n, &self.current))
    }
}

/// Non-empty subsets in depth-first lexicographic order:
/// {0}, {0,1}, {0,1,2}, {0,2}, {1}, {1,2}, {2} for three features.
pub struct DfsOrder {
    n: usize,
    stack: Vec<usize>,
    started: bool,
}

impl DfsOrder {
    pub fn new(n: usize) -> Self {
        DfsOrder {
            n,
            stack: Vec::new(),
            started: false,
        }
    }
}

impl Iterator for DfsOrder {
    type Item = FeatureMask;

    fn next(&mut self) -> Option<FeatureMask> {
        let n = self.n;
        if n == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            self.stack.push(0);
        } else {
            let last = *self.stack.last()?;
            if last + 1 < n {
                self.stack.push(last + 1);
            } else {
                self.stack.pop();
                let top = self.stack.last_mut()?;
                *top += 1;
            }
        }
        Some(FeatureMask::from_indices(n, &self.stack))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustiveOrder {
    BreadthFirst,
    DepthFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhaustive {
    pub order: ExhaustiveOrder,
    /// Largest feature count accepted.
    pub max_features: usize,
}

impl Exhaustive {
    pub fn bfs() -> Self {
        Exhaustive {
            order: ExhaustiveOrder::BreadthFirst,
            max_features: DEFAULT_EXHAUSTIVE_CAP,
        }
    }

    pub fn dfs() -> Self {
        Exhaustive {
            order: ExhaustiveOrder::DepthFirst,
            max_features: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

impl Search for Exhaustive {
    fn name(&self) -> &'static str {
        match self.order {
            ExhaustiveOrder::BreadthFirst => "bfs",
            ExhaustiveOrder::DepthFirst => "dfs",
        }
    }

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult> {
        let n = data.n_features();
        if n > self.max_features {
            return Err(Error::TooManyFeatures {
                features: n,
                cap: self.max_features,
            });
        }
        let order: Box<dyn Iterator<Item = FeatureMask>> = match self.order {
            ExhaustiveOrder::BreadthFirst => Box::new(BfsOrder::new(n)),
            ExhaustiveOrder::DepthFirst => Box::new(DfsOrder::new(n)),
        };
        let tag = self.name().to_uppercase();
        let ctx = SearchContext::new(data, measure, observer).without_cache();
        run_search(ctx, |ctx| {
            let mut order = order.peekable();
            let mut visited = 0;
            while order.peek().is_some() {
                let chunk: Vec<FeatureMask> = order.by_ref().take(CHUNK).collect();
                let values = ctx.evaluate_all(&chunk)?;
                for (m, v) in chunk.into_iter().zip(values) {
                    visited += 1;
                    ctx.log(|| format!("{tag} | Iter={visited} | Vector={m} | Fitness={v:.4}"));
                    ctx.record(visited, "exhaustive", "visit", vec![m], vec![v]);
                }
            }
            Ok(None)
        })
    }
}

pub fn exhaustive_bfs(data: &Dataset, measure: &dyn SetMeasure) -> Result<SearchResult> {
    Exhaustive::bfs().search(data, measure, None)
}

pub fn exhaustive_dfs(data: &Dataset, measure: &dyn SetMeasure) -> Result<SearchResult> {
    Exhaustive::dfs().search(data, measure, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{fixtures::xor, mutual_information};
    use crate::search::testing::{blank, TableMeasure};

    fn names(it: impl Iterator<Item = FeatureMask>) -> Vec<String> {
        it.map(|m| m.to_string()).collect()
    }

    #[test]
    fn enumeration_orders() {
        assert_eq!(
            names(BfsOrder::new(3)),
            ["100", "010", "001", "110", "101", "011", "111"]
        );
        assert_eq!(
            names(DfsOrder::new(3)),
            ["100", "110", "111", "101", "010", "011", "001"]
        );
        for n in 1..=8 {
            assert_eq!(BfsOrder::new(n).count(), (1 << n) - 1);
            let mut dfs: Vec<_> = DfsOrder::new(n).collect();
            dfs.sort();
            dfs.dedup();
            assert_eq!(dfs.len(), (1 << n) - 1);
        }
    }

    #[test]
    fn xor_optimum() {
        let r = exhaustive_bfs(&xor(), &mutual_information()).unwrap();
        assert_eq!(r.best_masks, vec![FeatureMask::full(2)]);
        assert_eq!(r.best_value, 1.0);
        assert_eq!(r.evaluations, 3);
        let r = exhaustive_dfs(&xor(), &mutual_information()).unwrap();
        assert_eq!(r.best_value, 1.0);
    }

    #[test]
    fn constant_measure_ties_everything() {
        let d = blank(3);
        let r = exhaustive_bfs(&d, &TableMeasure::new(true, &[], 0.5)).unwrap();
        assert_eq!(r.best_masks.len(), 7);
    }

    #[test]
    fn single_feature() {
        let d = blank(1);
        let r = exhaustive_dfs(&d, &TableMeasure::new(true, &[], 0.5)).unwrap();
        assert_eq!(r.best_masks, vec![FeatureMask::full(1)]);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn visit_orders_differ_but_results_agree() {
        let d = blank(3);
        let t = TableMeasure::new(true, &[("101", 2.0), ("011", 2.0)], 1.0);
        let b = exhaustive_bfs(&d, &t).unwrap();
        let f = exhaustive_dfs(&d, &t).unwrap();
        let visits = |r: &SearchResult| r.trace.iter().map(|e| e.masks[0].clone()).collect::<Vec<_>>();
        assert_ne!(visits(&b), visits(&f));
        let mut bm = b.best_masks.clone();
        let mut fm = f.best_masks.clone();
        bm.sort();
        fm.sort();
        assert_eq!(bm, fm);
        assert_eq!(b.best_value, f.best_value);
    }

    #[test]
    fn cap_is_enforced() {
        let d = blank(4);
        let t = TableMeasure::new(true, &[], 0.0);
        let capped = Exhaustive {
            max_features: 3,
            ..Exhaustive::bfs()
        };
        assert!(matches!(
            capped.search(&d, &t, None),
            Err(Error::TooManyFeatures { features: 4, cap: 3 })
        ));
    }
}
