//! Sequential selection: forward (SFS), backward (SBS) and their floating
//! variants (SFFS, SFBS).
//!
//! SFS adds the best feature while the value strictly improves, starting
//! from an empty set valued worse than anything. SBS removes the feature
//! whose removal leaves the best value while that value does not degrade.
//! The floating variants keep the best value recorded per cardinality and,
//! after every main step, take conditional steps in the opposite direction
//! whenever these beat the record for the resulting cardinality.

use crate::dataset::Dataset;
use crate::error::Result;
use crate::mask::FeatureMask;
use crate::measures::SetMeasure;

use super::{argbest, run_search, Observer, Search, SearchContext, SearchResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequentialKind {
    Forward,
    Backward,
    FloatingForward,
    FloatingBackward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sequential {
    pub kind: SequentialKind,
}

impl Search for Sequential {
    fn name(&self) -> &'static str {
        match self.kind {
            SequentialKind::Forward => "sfs",
            SequentialKind::Backward => "sbs",
            SequentialKind::FloatingForward => "sffs",
            SequentialKind::FloatingBackward => "sfbs",
        }
    }

    fn search(
        &self,
        data: &Dataset,
        measure: &dyn SetMeasure,
        observer: Option<&Observer>,
    ) -> Result<SearchResult> {
        let tag = self.name().to_uppercase();
        let floating = matches!(
            self.kind,
            SequentialKind::FloatingForward | SequentialKind::FloatingBackward
        );
        let ctx = SearchContext::new(data, measure, observer);
        run_search(ctx, |ctx| {
            let mut walk = Walk::new(ctx, tag, floating);
            match self.kind {
                SequentialKind::Forward | SequentialKind::FloatingForward => walk.forward(),
                SequentialKind::Backward | SequentialKind::FloatingBackward => walk.backward(),
            }
        })
    }
}

struct Walk<'c, 'a> {
    ctx: &'c mut SearchContext<'a>,
    tag: String,
    floating: bool,
    step: usize,
    /// Best value seen per cardinality.
    record: Vec<Option<f64>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Move {
    Add,
    Remove,
}

impl<'c, 'a> Walk<'c, 'a> {
    fn new(ctx: &'c mut SearchContext<'a>, tag: String, floating: bool) -> Self {
        let n = ctx.n_features();
        Walk {
            ctx,
            tag,
            floating,
            step: 0,
            record: vec![None; n + 1],
        }
    }

    /// Best single move from `current`: returns the new mask and its value.
    fn best_move(&mut self, current: &FeatureMask, mv: Move, stage: &str) -> Result<Option<(FeatureMask, f64)>> {
        let candidates: Vec<FeatureMask> = (0..current.width())
            .filter(|&i| match mv {
                Move::Add => !current.get(i),
                Move::Remove => current.get(i),
            })
            .map(|i| current.with(i, mv == Move::Add))
            .filter(|m| !m.is_empty())
            .collect();
        if candidates.is_empty() {
            return Ok(None);
        }
        let values = self.ctx.evaluate_all(&candidates)?;
        let b = argbest(self.ctx.descriptor(), &values).expect("non-empty candidate list");
        let pick = (candidates[b].clone(), values[b]);
        self.ctx.record(self.step + 1, stage, "candidates", candidates, values);
        Ok(Some(pick))
    }

    fn beats_record(&self, value: f64, card: usize) -> bool {
        self.record[card].is_none_or(|r| self.ctx.better(value, r))
    }

    fn adopt(&mut self, stage: &str, mask: &FeatureMask, value: f64) {
        self.step += 1;
        let card = mask.count();
        if self.beats_record(value, card) {
            self.record[card] = Some(value);
        }
        self.ctx.record(self.step, stage, "selected", vec![mask.clone()], vec![value]);
        let (tag, step) = (&self.tag, self.step);
        self.ctx
            .log(|| format!("{tag} | Iter={step} | {stage} | Vector={mask} | Fitness={value:.4}"));
    }

    fn forward(&mut self) -> Result<Option<FeatureMask>> {
        let mut current = FeatureMask::empty(self.ctx.n_features());
        let mut value = self.ctx.descriptor().worst();
        while let Some((next, v)) = self.best_move(&current, Move::Add, "forward")? {
            if !self.ctx.better(v, value) {
                break;
            }
            (current, value) = (next, v);
            self.adopt("forward", &current, value);
            if self.floating {
                while let Some((next, v)) = self.best_move(&current, Move::Remove, "conditionalBackward")? {
                    if !self.beats_record(v, next.count()) {
                        break;
                    }
                    (current, value) = (next, v);
                    self.adopt("conditionalBackward", &current, value);
                }
            }
        }
        Ok(self.chosen(current, value))
    }

    fn backward(&mut self) -> Result<Option<FeatureMask>> {
        let mut current = FeatureMask::full(self.ctx.n_features());
        let mut value = self.ctx.evaluate(&current)?;
        self.adopt("initial", &current, value);
        while let Some((next, v)) = self.best_move(&current, Move::Remove, "backward")? {
            if !self.ctx.descriptor().at_least(v, value) {
                break;
            }
            (current, value) = (next, v);
            self.adopt("backward", &current, value);
            if self.floating {
                while let Some((next, v)) = self.best_move(&current, Move::Add, "conditionalForward")? {
                    if !self.beats_record(v, next.count()) {
                        break;
                    }
                    (current, value) = (next, v);
                    self.adopt("conditionalForward", &current, value);
                }
            }
        }
        Ok(self.chosen(current, value))
    }

    /// The final mask when it ties the overall best, otherwise the first
    /// mask found at the best value.
    fn chosen(&self, current: FeatureMask, value: f64) -> Option<FeatureMask> {
        if Some(value) == self.ctx.best_value() {
            Some(current)
        } else {
            self.ctx.best_mask().cloned()
        }
    }
}

pub fn sfs(data: &Dataset, measure: &dyn SetMeasure) -> Result<SearchResult> {
    Sequential { kind: SequentialKind::Forward }.search(data, measure, None)
}

pub fn sbs(data: &Dataset, measure: &dyn SetMeasure) -> Result<SearchResult> {
    Sequential { kind: SequentialKind::Backward }.search(data, measure, None)
}

pub fn sffs(data: &Dataset, measure: &dyn SetMeasure) -> Result<SearchResult> {
    Sequential { kind: SequentialKind::FloatingForward }.search(data, measure, None)
}

pub fn sfbs(data: &Dataset, measure: &dyn SetMeasure) -> Result<SearchResult> {
    Sequential { kind: SequentialKind::FloatingBackward }.search(data, measure, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::fixtures::{perf, xor};
    use crate::measures::{gini_index, mutual_information, MeasureDescriptor, MeasureKind};
    use crate::search::testing::{blank, TableMeasure};

    fn m(bits: &str) -> FeatureMask {
        FeatureMask::parse(bits).unwrap()
    }

    fn selected(r: &SearchResult) -> Vec<String> {
        r.trace
            .iter()
            .filter(|e| e.label == "selected")
            .map(|e| e.masks[0].to_string())
            .collect()
    }

    #[test]
    fn sfs_on_xor_breaks_tie_then_completes() {
        let r = sfs(&xor(), &mutual_information()).unwrap();
        assert_eq!(selected(&r), ["10", "11"]);
        assert_eq!(r.best(), &m("11"));
        assert_eq!(r.best_value, 1.0);
    }

    #[test]
    fn sfs_stops_without_strict_improvement() {
        let r = sfs(&perf(), &gini_index()).unwrap();
        assert_eq!(selected(&r), ["10"]);
        assert_eq!(r.best(), &m("10"));
        assert_eq!(r.best_value, 1.0);
    }

    /// −|mask|: the first pick always beats the empty baseline, nothing after.
    struct NegSize(MeasureDescriptor);

    impl SetMeasure for NegSize {
        fn descriptor(&self) -> &MeasureDescriptor {
            &self.0
        }
        fn evaluate(&self, _: &Dataset, mask: &FeatureMask) -> Result<f64> {
            Ok(-(mask.count() as f64))
        }
    }

    #[test]
    fn sfs_size_penalty_takes_single_feature() {
        let d = blank(3);
        let r = sfs(&d, &NegSize(MeasureDescriptor::new("negsize", true, MeasureKind::Set))).unwrap();
        assert_eq!(selected(&r), ["100"]);
        assert_eq!(r.best_value, -1.0);
    }

    #[test]
    fn sbs_removes_redundant_feature() {
        let r = sbs(&perf(), &gini_index()).unwrap();
        assert_eq!(r.best(), &m("10"));
        assert_eq!(r.best_value, 1.0);
    }

    #[test]
    fn sbs_keeps_xor_pair() {
        let r = sbs(&xor(), &mutual_information()).unwrap();
        assert_eq!(r.best(), &m("11"));
        assert_eq!(r.best_masks.len(), 1);
    }

    #[test]
    fn sbs_single_feature() {
        let r = sbs(&blank(1), &TableMeasure::new(true, &[], 3.0)).unwrap();
        assert_eq!(r.best(), &m("1"));
    }

    #[test]
    fn sffs_on_xor() {
        let r = sffs(&xor(), &mutual_information()).unwrap();
        assert_eq!(r.best(), &m("11"));
        assert_eq!(r.best_value, 1.0);
    }

    /// {A,C} > {A,B,C} > {A,B} > {B}: forward picks B, then A, then C; the
    /// conditional step then drops B because {A,C} beats the best pair so far.
    #[test]
    fn sffs_floating_step_recovers_better_pair() {
        let t = TableMeasure::new(
            true,
            &[
                ("100", 0.1),
                ("010", 0.5),
                ("001", 0.2),
                ("110", 0.6),
                ("101", 0.9),
                ("011", 0.3),
                ("111", 0.7),
            ],
            0.0,
        );
        let r = sffs(&blank(3), &t).unwrap();
        assert_eq!(selected(&r), ["010", "110", "111", "101"]);
        assert_eq!(r.best(), &m("101"));
        assert_eq!(r.best_value, 0.9);
        let plain = sfs(&blank(3), &t).unwrap();
        assert_eq!(plain.best(), &m("111"));
        assert!(r.best_value >= plain.best_value);
    }

    /// Backward walk ABCD → ABC → AB → A; the conditional step then adds D,
    /// a pair never seen on the way down, beating the recorded best pair.
    #[test]
    fn sfbs_floating_step_adds_back() {
        let t = TableMeasure::new(
            true,
            &[
                ("1111", 0.5),
                ("1110", 0.6),
                ("1101", 0.1),
                ("1011", 0.1),
                ("0111", 0.1),
                ("1100", 0.6),
                ("1010", 0.1),
                ("0110", 0.1),
                ("1000", 0.6),
                ("0100", 0.1),
                ("1001", 0.9),
            ],
            0.0,
        );
        let r = sfbs(&blank(4), &t).unwrap();
        assert_eq!(selected(&r), ["1111", "1110", "1100", "1000", "1001"]);
        assert_eq!(r.best(), &m("1001"));
        assert_eq!(r.best_value, 0.9);
        let b = sbs(&blank(4), &t).unwrap();
        assert_eq!(b.best_value, 0.6);
    }

    #[test]
    fn minimize_orientation() {
        let t = TableMeasure::new(false, &[("01", 0.1), ("11", 0.5), ("10", 0.9)], 1.0);
        let r = sfs(&blank(2), &t).unwrap();
        assert_eq!(r.best(), &m("01"));
        assert_eq!(r.best_value, 0.1);
        let r = sbs(&blank(2), &t).unwrap();
        assert_eq!(r.best(), &m("01"));
    }
}
