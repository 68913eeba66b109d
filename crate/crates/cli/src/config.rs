//! Run configuration: a JSON document merged with command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use featsel_core::registry::{self, Spec};
use featsel_core::{ColumnType, MeasureKind, TaskKind};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub types: BTreeMap<String, ColumnType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Spec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<Spec>,
    /// Ranks features for `lcc`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub individual: Option<Spec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<Spec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub features: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub verbose: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn data(&self) -> Result<&Path> {
        self.data.as_deref().context("no dataset given (use --data or the `data` config key)")
    }

    pub fn class(&self) -> Result<&str> {
        self.class.as_deref().context("no class column given (use --class or the `class` config key)")
    }

    pub fn measure(&self) -> Result<&Spec> {
        self.measure.as_ref().context("no measure given (use --measure or the `measure` config key)")
    }

    pub fn search(&self) -> Result<&Spec> {
        self.search.as_ref().context("no search given (use --search or the `search` config key)")
    }

    /// Type hints, with the class column forced by a task override.
    pub fn type_hints(&self) -> Result<std::collections::HashMap<String, ColumnType>> {
        let mut hints: std::collections::HashMap<String, ColumnType> =
            self.types.iter().map(|(k, v)| (k.clone(), *v)).collect();
        if let Some(task) = self.task {
            let kind = match task {
                TaskKind::Classification => ColumnType::Categorical,
                TaskKind::Regression => ColumnType::Numeric,
            };
            hints.insert(self.class()?.to_string(), kind);
        }
        Ok(hints)
    }

    /// Checks everything that can be checked without reading the data.
    pub fn validate_search(&self) -> Result<()> {
        self.data()?;
        self.class()?;
        let search = self.search()?;
        registry::check_search_name(&search.name)?;
        let measure = self.measure()?;
        if registry::measure_kind(&measure.name)? != MeasureKind::Set {
            bail!(
                "search `{}` needs a set measure, but `{}` is an individual measure",
                search.name,
                measure.name
            );
        }
        if search.name == "lcc" {
            let individual = self
                .individual
                .as_ref()
                .context("search `lcc` needs an individual measure (the `individual` config key or --individual)")?;
            registry::measure_kind(&individual.name)?;
        }
        Ok(())
    }

    pub fn validate_evaluate(&self) -> Result<()> {
        self.data()?;
        self.class()?;
        let measure = self.measure()?;
        if registry::measure_kind(&measure.name)? != MeasureKind::Set {
            bail!("evaluating a feature subset needs a set measure, but `{}` is an individual measure", measure.name);
        }
        if self.features.is_empty() {
            bail!("no features to evaluate (use --features)");
        }
        Ok(())
    }

    pub fn validate_rank(&self) -> Result<()> {
        self.data()?;
        self.class()?;
        // set measures rank features through singleton subsets
        registry::measure_kind(&self.measure()?.name)?;
        if let Some(c) = &self.cutoff {
            registry::build_cutoff(c)?;
        }
        Ok(())
    }
}

/// Parses `key=value`; the value is read as JSON when possible, otherwise
/// kept as a string.
pub fn parse_param(raw: &str) -> Result<(String, Value)> {
    let Some((key, value)) = raw.split_once('=') else {
        bail!("expected KEY=VALUE, got `{raw}`");
    };
    let value = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
    Ok((key.trim().to_string(), value))
}

pub fn parse_type(raw: &str) -> Result<(String, ColumnType)> {
    let Some((name, kind)) = raw.split_once('=') else {
        bail!("expected NAME=numeric|categorical, got `{raw}`");
    };
    let kind = match kind {
        "numeric" => ColumnType::Numeric,
        "categorical" => ColumnType::Categorical,
        other => bail!("unknown column type `{other}` (numeric or categorical)"),
    };
    Ok((name.to_string(), kind))
}

/// Replaces the spec when a different name is given and applies `params`.
pub fn override_spec(spec: &mut Option<Spec>, name: Option<&str>, params: &[(String, Value)]) -> Result<()> {
    if let Some(name) = name {
        if spec.as_ref().is_none_or(|s| s.name != name) {
            *spec = Some(Spec::named(name));
        }
    }
    if !params.is_empty() {
        let s = spec
            .as_mut()
            .context("parameters given without a component name")?;
        for (k, v) in params {
            s.params.insert(k.clone(), v.clone());
        }
    }
    Ok(())
}
