//! Direct selection: cutting a ranking of per-feature scores.
//!
//! `Difference`, `Slope` and `ThresholdRange` are gap/range readings of
//! strategies whose exact definitions are not standardized:
//! - `Difference(d)` walks the best-first ranking and cuts before the first
//!   adjacent gap larger than `d`.
//! - `Slope(s)` is the same cut with the gap measured per rank spacing 1/n,
//!   i.e. `gap · n > s`; it is computed as `Difference(s / n)`.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mask::FeatureMask;
use crate::measures::Measure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub index: usize,
    pub name: String,
    pub score: f64,
}

/// Per-feature scores sorted best-first; ties keep column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedScores {
    pub entries: Vec<RankedEntry>,
    pub maximize: bool,
}

impl RankedScores {
    pub fn new(names: Vec<String>, scores: &[f64], maximize: bool) -> Self {
        let mut entries: Vec<RankedEntry> = names
            .into_iter()
            .zip(scores)
            .enumerate()
            .map(|(index, (name, &score))| RankedEntry { index, name, score })
            .collect();
        entries.sort_by(|a, b| {
            let ord = a.score.total_cmp(&b.score);
            if maximize { ord.reverse() } else { ord }.then(a.index.cmp(&b.index))
        });
        RankedScores { entries, maximize }
    }

    /// Scores every feature of `d` with `measure`.
    pub fn rank(d: &Dataset, measure: &Measure) -> Result<Self> {
        let features: Vec<usize> = (0..d.n_features()).collect();
        let scores = measure.score_features(d, &features)?;
        Ok(RankedScores::new(d.feature_names(), &scores, measure.descriptor().maximize))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum Cutoff {
    #[serde(rename = "selectKBest")]
    KBest { k: usize },
    #[serde(rename = "selectPercentile")]
    Percentile { percentile: f64 },
    #[serde(rename = "selectThreshold")]
    Threshold { threshold: f64 },
    #[serde(rename = "selectThresholdRange")]
    ThresholdRange { lo: f64, hi: f64 },
    #[serde(rename = "selectDifference")]
    Difference { d_cut: f64 },
    #[serde(rename = "selectSlope")]
    Slope { s_cut: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffResult {
    pub mask: FeatureMask,
    /// Selected features, best-first.
    pub selected: Vec<RankedEntry>,
    pub ranking: RankedScores,
    pub empty_selection: bool,
}

impl Cutoff {
    pub fn name(&self) -> &'static str {
        match self {
            Cutoff::KBest { .. } => "selectKBest",
            Cutoff::Percentile { .. } => "selectPercentile",
            Cutoff::Threshold { .. } => "selectThreshold",
            Cutoff::ThresholdRange { .. } => "selectThresholdRange",
            Cutoff::Difference { .. } => "selectDifference",
            Cutoff::Slope { .. } => "selectSlope",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::config(format!("{}: {msg}", self.name())));
        match *self {
            Cutoff::KBest { k } if k == 0 || k > n => bad(format!("k must lie in 1..={n}, got {k}")),
            Cutoff::Percentile { percentile } if !(percentile > 0.0 && percentile <= 100.0) => {
                bad(format!("percentile must lie in (0, 100], got {percentile}"))
            }
            Cutoff::ThresholdRange { lo, hi } if !(lo <= hi) => bad(format!("empty range [{lo}, {hi}]")),
            Cutoff::Difference { d_cut: c } | Cutoff::Slope { s_cut: c } if !(c >= 0.0) => {
                bad(format!("cut must be non-negative, got {c}"))
            }
            _ => Ok(()),
        }
    }

    /// Number of leading ranked entries kept, for the prefix cutoffs.
    fn prefix(&self, r: &RankedScores) -> Option<usize> {
        let n = r.len();
        match *self {
            Cutoff::KBest { k } => Some(k),
            Cutoff::Percentile { percentile } => Some(((n as f64 * percentile / 100.0).ceil() as usize).min(n)),
            Cutoff::Difference { d_cut } => Some(
                r.entries
                    .windows(2)
                    .position(|w| (w[0].score - w[1].score).abs() > d_cut)
                    .map_or(n, |i| i + 1),
            ),
            Cutoff::Slope { s_cut } => Cutoff::Difference { d_cut: s_cut / n as f64 }.prefix(r),
            _ => None,
        }
    }

    pub fn apply(&self, ranking: &RankedScores) -> Result<CutoffResult> {
        let n = ranking.len();
        self.validate(n)?;
        let selected: Vec<RankedEntry> = match (self.prefix(ranking), *self) {
            (Some(p), _) => ranking.entries[..p].to_vec(),
            (None, Cutoff::Threshold { threshold }) => ranking
                .entries
                .iter()
                .filter(|e| if ranking.maximize { e.score >= threshold } else { e.score <= threshold })
                .cloned()
                .collect(),
            (None, Cutoff::ThresholdRange { lo, hi }) => ranking
                .entries
                .iter()
                .filter(|e| lo <= e.score && e.score <= hi)
                .cloned()
                .collect(),
            (None, _) => unreachable!("every other cutoff is a prefix"),
        };
        let indices: Vec<usize> = selected.iter().map(|e| e.index).collect();
        Ok(CutoffResult {
            mask: FeatureMask::from_indices(n, &indices),
            empty_selection: selected.is_empty(),
            selected,
            ranking: ranking.clone(),
        })
    }
}

fn select(d: &Dataset, measure: &Measure, cutoff: Cutoff) -> Result<CutoffResult> {
    cutoff.validate(d.n_features())?;
    cutoff.apply(&RankedScores::rank(d, measure)?)
}

pub fn select_k_best(d: &Dataset, measure: &Measure, k: usize) -> Result<CutoffResult> {
    select(d, measure, Cutoff::KBest { k })
}

pub fn select_percentile(d: &Dataset, measure: &Measure, percentile: f64) -> Result<CutoffResult> {
    select(d, measure, Cutoff::Percentile { percentile })
}

pub fn select_threshold(d: &Dataset, measure: &Measure, threshold: f64) -> Result<CutoffResult> {
    select(d, measure, Cutoff::Threshold { threshold })
}

pub fn select_threshold_range(d: &Dataset, measure: &Measure, lo: f64, hi: f64) -> Result<CutoffResult> {
    select(d, measure, Cutoff::ThresholdRange { lo, hi })
}

pub fn select_difference(d: &Dataset, measure: &Measure, d_cut: f64) -> Result<CutoffResult> {
    select(d, measure, Cutoff::Difference { d_cut })
}

pub fn select_slope(d: &Dataset, measure: &Measure, s_cut: f64) -> Result<CutoffResult> {
    select(d, measure, Cutoff::Slope { s_cut })
}
