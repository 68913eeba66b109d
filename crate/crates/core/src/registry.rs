//! Name-based construction of measures, searches and cutoffs from JSON
//! parameter maps, as used by configuration files.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::cutoff::Cutoff;
use crate::dataset::{DiscretizationSpec, TaskKind};
use crate::error::{Error, Result};
use crate::measures::{
    ChiSquared, ConsistencyKind, ConsistencyMeasure, CramerV, DeterminationCoefficient, FScore,
    InformationKind, InformationMeasure, Measure, MeasureKind, Relief, ReliefConfig,
};
use crate::search::{
    Exhaustive, GaConfig, HillClimbingConfig, Lcc, LvwConfig, SaConfig, Search, Sequential, SequentialKind,
    TabuConfig, DEFAULT_EXHAUSTIVE_CAP,
};
use crate::wrapper::{make_wrapper_evaluator, Algorithm, FitSpec, LearnerSpec, Metric, ResamplingSpec};

pub const MEASURES: &[&str] = &[
    "chiSquared",
    "cramer",
    "fscore",
    "relief",
    "binaryConsistency",
    "IEConsistency",
    "IEPConsistency",
    "roughsetConsistency",
    "mutualInformation",
    "gainRatio",
    "symmetricalUncertain",
    "giniIndex",
    "determinationCoefficient",
    "wrapper",
];

pub const SEARCHES: &[&str] = &[
    "bfs", "dfs", "sfs", "sbs", "sffs", "sfbs", "hc", "ts", "ga", "sa", "lvw", "lcc",
];

/// A component name plus its parameters, e.g.
/// `{"name": "ts", "iter": 10, "tamTabuList": 4}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spec {
    pub name: String,
    #[serde(flatten)]
    pub params: Map<String, Value>,
}

impl Spec {
    pub fn named(name: impl Into<String>) -> Self {
        Spec {
            name: name.into(),
            params: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

fn params<T: DeserializeOwned>(spec: &Spec) -> Result<T> {
    serde_json::from_value(Value::Object(spec.params.clone()))
        .map_err(|e| Error::config(format!("parameters of `{}`: {e}", spec.name)))
}

fn unknown(what: &'static str, name: &str) -> Error {
    Error::UnknownName {
        what,
        name: name.to_string(),
    }
}

/// Kind of a registered measure, without building it.
pub fn measure_kind(name: &str) -> Result<MeasureKind> {
    match name {
        "chiSquared" | "cramer" | "fscore" | "relief" => Ok(MeasureKind::Individual),
        n if MEASURES.contains(&n) => Ok(MeasureKind::Set),
        n => Err(unknown("measure", n)),
    }
}

pub fn check_search_name(name: &str) -> Result<()> {
    if SEARCHES.contains(&name) {
        Ok(())
    } else {
        Err(unknown("search", name))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Binned {
    #[serde(default = "default_bins")]
    bins: usize,
}

fn default_bins() -> usize {
    DiscretizationSpec::default().bins
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReliefParams {
    #[serde(default = "one")]
    neighbors: usize,
    #[serde(default)]
    sample: Option<usize>,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct WrapperParams {
    #[serde(default = "default_learner")]
    learner: Algorithm,
    #[serde(default = "default_folds")]
    folds: usize,
    #[serde(default)]
    stratified: Option<bool>,
    #[serde(default = "default_preprocess")]
    preprocess: Vec<String>,
    #[serde(default)]
    metric: Option<Metric>,
    #[serde(default = "default_grid")]
    grid: Vec<usize>,
}

fn default_learner() -> Algorithm {
    Algorithm::Knn
}

fn default_folds() -> usize {
    10
}

fn default_preprocess() -> Vec<String> {
    vec!["center".into(), "scale".into()]
}

fn default_grid() -> Vec<usize> {
    (1..=20).collect()
}

/// Builds a measure. `task` selects the wrapper's default metric and
/// learner task; `seed` drives any randomness inside the measure.
pub fn build_measure(spec: &Spec, task: TaskKind, seed: u64) -> Result<Measure> {
    let binned = || -> Result<DiscretizationSpec> {
        let b: Binned = params(spec)?;
        DiscretizationSpec::new(b.bins)
    };
    let consistency = |kind| Ok(Measure::set(ConsistencyMeasure::new(kind, binned()?)));
    let information = |kind| Ok(Measure::set(InformationMeasure::new(kind, binned()?)));
    match spec.name.as_str() {
        "chiSquared" => Ok(Measure::individual(ChiSquared::new(binned()?))),
        "cramer" => Ok(Measure::individual(CramerV::new(binned()?))),
        "fscore" => {
            params::<NoParams>(spec)?;
            Ok(Measure::individual(FScore::default()))
        }
        "relief" => {
            let p: ReliefParams = params(spec)?;
            Ok(Measure::individual(Relief::new(ReliefConfig {
                neighbors: p.neighbors,
                sample: p.sample,
                seed,
            })?))
        }
        "binaryConsistency" => consistency(ConsistencyKind::Binary),
        "IEConsistency" => consistency(ConsistencyKind::InconsistentExamples),
        "IEPConsistency" => consistency(ConsistencyKind::InconsistentPairs),
        "roughsetConsistency" => consistency(ConsistencyKind::RoughSet),
        "mutualInformation" => information(InformationKind::MutualInformation),
        "gainRatio" => information(InformationKind::GainRatio),
        "symmetricalUncertain" => information(InformationKind::SymmetricalUncertainty),
        "giniIndex" => information(InformationKind::Gini),
        "determinationCoefficient" => {
            params::<NoParams>(spec)?;
            Ok(Measure::set(DeterminationCoefficient::default()))
        }
        "wrapper" => {
            let p: WrapperParams = params(spec)?;
            let mut center = false;
            let mut scale = false;
            for step in &p.preprocess {
                match step.as_str() {
                    "center" => center = true,
                    "scale" => scale = true,
                    other => return Err(unknown("preprocessing step", other)),
                }
            }
            let resampling = ResamplingSpec {
                folds: p.folds,
                stratified: p.stratified.unwrap_or(task == TaskKind::Classification),
                seed,
            };
            let fitting = FitSpec {
                center,
                scale,
                metric: p.metric.unwrap_or(Metric::for_task(task)),
                grid: p.grid,
            };
            let learner = LearnerSpec {
                algorithm: p.learner,
                task,
            };
            Ok(Measure::set(make_wrapper_evaluator(learner, resampling, fitting)?))
        }
        other => Err(unknown("measure", other)),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ExhaustiveParams {
    #[serde(default = "default_cap")]
    max_features: usize,
}

fn default_cap() -> usize {
    DEFAULT_EXHAUSTIVE_CAP
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HcParams {
    #[serde(default = "one")]
    restarts: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct TsParams {
    iter: Option<usize>,
    tam_tabu_list: Option<usize>,
    intensification: Option<usize>,
    iter_intensification: Option<usize>,
    diversification: Option<usize>,
    iter_diversification: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct GaParams {
    pop_size: Option<usize>,
    pcrossover: Option<f64>,
    pmutation: Option<f64>,
    maxiter: Option<usize>,
    elitism: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct SaParams {
    t0: Option<f64>,
    alpha: Option<f64>,
    inner_iter: Option<usize>,
    t_min: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct LvwParams {
    max_stale_iter: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LccParams {
    threshold: Option<f64>,
}

/// Builds a search. `individual` is required by `lcc`, which ranks
/// features with it.
pub fn build_search(spec: &Spec, seed: u64, individual: Option<Measure>) -> Result<Box<dyn Search>> {
    let sequential = |kind| -> Result<Box<dyn Search>> {
        params::<NoParams>(spec)?;
        Ok(Box::new(Sequential { kind }))
    };
    Ok(match spec.name.as_str() {
        "bfs" | "dfs" => {
            let p: ExhaustiveParams = params(spec)?;
            let base = if spec.name == "bfs" { Exhaustive::bfs() } else { Exhaustive::dfs() };
            Box::new(Exhaustive {
                max_features: p.max_features,
                ..base
            })
        }
        "sfs" => return sequential(SequentialKind::Forward),
        "sbs" => return sequential(SequentialKind::Backward),
        "sffs" => return sequential(SequentialKind::FloatingForward),
        "sfbs" => return sequential(SequentialKind::FloatingBackward),
        "hc" => {
            let p: HcParams = params(spec)?;
            Box::new(HillClimbingConfig {
                restarts: p.restarts,
                seed,
                start: None,
            })
        }
        "ts" => {
            let p: TsParams = params(spec)?;
            let d = TabuConfig::default();
            let cfg = TabuConfig {
                iter: p.iter.unwrap_or(d.iter),
                tabu_size: p.tam_tabu_list.unwrap_or(d.tabu_size),
                intensification_phases: p.intensification.unwrap_or(d.intensification_phases),
                iter_per_intensification: p.iter_intensification.unwrap_or(d.iter_per_intensification),
                diversification_phases: p.diversification.unwrap_or(d.diversification_phases),
                iter_per_diversification: p.iter_diversification.unwrap_or(d.iter_per_diversification),
                seed,
            };
            cfg.validate()?;
            Box::new(cfg)
        }
        "ga" => {
            let p: GaParams = params(spec)?;
            let d = GaConfig::default();
            let cfg = GaConfig {
                pop_size: p.pop_size.unwrap_or(d.pop_size),
                p_crossover: p.pcrossover.unwrap_or(d.p_crossover),
                p_mutation: p.pmutation.unwrap_or(d.p_mutation),
                max_iter: p.maxiter.unwrap_or(d.max_iter),
                elitism: p.elitism.unwrap_or(d.elitism),
                seed,
            };
            cfg.validate()?;
            Box::new(cfg)
        }
        "sa" => {
            let p: SaParams = params(spec)?;
            let d = SaConfig::default();
            let cfg = SaConfig {
                t0: p.t0.unwrap_or(d.t0),
                alpha: p.alpha.unwrap_or(d.alpha),
                inner_iter: p.inner_iter.unwrap_or(d.inner_iter),
                t_min: p.t_min.unwrap_or(d.t_min),
                seed,
            };
            cfg.validate()?;
            Box::new(cfg)
        }
        "lvw" => {
            let p: LvwParams = params(spec)?;
            Box::new(LvwConfig {
                max_stale_iter: p.max_stale_iter.unwrap_or(LvwConfig::default().max_stale_iter),
                seed,
            })
        }
        "lcc" => {
            let p: LccParams = params(spec)?;
            let individual = individual
                .ok_or_else(|| Error::config("lcc needs an individual measure to rank features"))?;
            Box::new(Lcc {
                individual,
                threshold: p.threshold,
            })
        }
        other => return Err(unknown("search", other)),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KParams {
    k: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PercentileParams {
    percentile: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdParams {
    threshold: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeParams {
    lo: f64,
    hi: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CutParams {
    cut: f64,
}

/// Builds a cutoff, e.g. `{"name": "selectKBest", "k": 2}`. The gap
/// cutoffs take their bound as `cut`.
pub fn build_cutoff(spec: &Spec) -> Result<Cutoff> {
    Ok(match spec.name.as_str() {
        "selectKBest" => Cutoff::KBest {
            k: params::<KParams>(spec)?.k,
        },
        "selectPercentile" => Cutoff::Percentile {
            percentile: params::<PercentileParams>(spec)?.percentile,
        },
        "selectThreshold" => Cutoff::Threshold {
            threshold: params::<ThresholdParams>(spec)?.threshold,
        },
        "selectThresholdRange" => {
            let p: RangeParams = params(spec)?;
            Cutoff::ThresholdRange { lo: p.lo, hi: p.hi }
        }
        "selectDifference" => Cutoff::Difference {
            d_cut: params::<CutParams>(spec)?.cut,
        },
        "selectSlope" => Cutoff::Slope {
            s_cut: params::<CutParams>(spec)?.cut,
        },
        other => return Err(unknown("cutoff", other)),
    })
}
