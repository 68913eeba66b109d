use serde::{Deserialize, Serialize};

use featsel_core::cutoff::{CutoffResult, RankedScores};
use featsel_core::{Dataset, FeatureMask, MeasureDescriptor, Result, TaskKind, TraceEvent};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMask {
    pub bits: FeatureMask,
    pub features: Vec<String>,
}

impl NamedMask {
    pub fn new(d: &Dataset, mask: &FeatureMask) -> Result<Self> {
        Ok(NamedMask {
            bits: mask.clone(),
            features: d.mask_to_names(mask)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffReport {
    pub name: String,
    pub empty_selection: bool,
}

/// Everything a run produced, plus the configuration that reproduces it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub seed: u64,
    pub task: TaskKind,
    pub measure: MeasureDescriptor,
    pub best_masks: Vec<NamedMask>,
    pub best_value: Option<f64>,
    pub evaluations: usize,
    pub wall_time_secs: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<RankedScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<CutoffReport>,
}

impl ResultDocument {
    pub fn cutoff_parts(d: &Dataset, name: &str, r: &CutoffResult) -> Result<(Vec<NamedMask>, CutoffReport)> {
        let masks = if r.empty_selection {
            Vec::new()
        } else {
            vec![NamedMask::new(d, &r.mask)?]
        };
        Ok((
            masks,
            CutoffReport {
                name: name.to_string(),
                empty_selection: r.empty_selection,
            },
        ))
    }
}
