//! Feature selection by composing evaluation measures with subset searches.
//!
//! - [`measures`]: filter measures over a dataset and a feature mask, either
//!   scoring features one at a time ([`measures::IndividualMeasure`]) or
//!   scoring whole subsets ([`measures::SetMeasure`]).
//! - [`wrapper`]: a learner scored by cross-validation, usable as a set
//!   measure.
//! - [`search`]: subset searches driven by any set measure.
//! - [`cutoff`]: direct selection from a ranking of individual scores.
//! - [`registry`]: construction of all of the above by name.

pub mod cutoff;
pub mod dataset;
pub mod error;
pub mod mask;
pub mod measures;
pub mod registry;
pub mod rng;
pub mod search;
pub mod wrapper;

pub use dataset::{load_csv, read_csv, Column, ColumnType, Dataset, TaskKind};
pub use error::{Error, Result};
pub use mask::FeatureMask;
pub use measures::{IndividualMeasure, Measure, MeasureDescriptor, MeasureKind, SetMeasure};
pub use search::{Search, SearchResult, TraceEvent};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
