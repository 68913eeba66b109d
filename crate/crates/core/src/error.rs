use std::path::PathBuf;

use crate::search::TraceEvent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("class column `{0}` not found in header")]
    MissingClass(String),

    #[error("row {row} has {found} cells, header has {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("empty cell at row {row}, column `{column}`")]
    EmptyCell { row: usize, column: String },

    #[error("column `{column}` is hinted numeric but row {row} holds `{value}`")]
    NotNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("feature mask has width {found}, dataset has {expected} features")]
    MaskWidth { expected: usize, found: usize },

    #[error("feature set is empty")]
    EmptyMask,

    #[error("column `{0}` is categorical, a numeric column is required")]
    CategoricalColumn(String),

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("measure `{measure}` does not apply to {task} tasks")]
    MeasureInapplicable { measure: String, task: String },

    #[error("class `{class}` has no other instance to serve as nearest hit (row {row})")]
    NoHit { row: usize, class: String },

    #[error("class `{class}` is the only class present; no nearest miss exists (row {row})")]
    NoMiss { row: usize, class: String },

    #[error("target has zero variance; the determination coefficient is undefined")]
    DegenerateTarget,

    #[error("measure kind mismatch: {0}")]
    KindMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("threshold {threshold} is not achievable: the full feature set scores {full_value}")]
    UnreachableThreshold { threshold: f64, full_value: f64 },

    #[error("search over {features} features exceeds the exhaustive cap of {cap}")]
    TooManyFeatures { features: usize, cap: usize },

    #[error("fold {fold} has an empty training split")]
    EmptyTrainingSplit { fold: usize },

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },

    #[error("search aborted after {} trace events", trace.len())]
    SearchAborted {
        #[source]
        source: Box<Error>,
        trace: Vec<TraceEvent>,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
