//! Typed tabular data with a designated class column.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::FeatureMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Classification,
    Regression,
}

impl std::fmt::Display for TaskKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TaskKind::Classification => "classification",
            TaskKind::Regression => "regression",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    /// `codes[i]` indexes into `levels`.
    Categorical { levels: Vec<String>, codes: Vec<u32> },
    Numeric(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    data: ColumnData,
}

impl Column {
    pub fn numeric(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "column `{name}` has a non-finite value at row {}",
                pos + 1
            )));
        }
        Ok(Column {
            name,
            data: ColumnData::Numeric(values),
        })
    }

    pub fn categorical(name: impl Into<String>, levels: Vec<String>, codes: Vec<u32>) -> Result<Self> {
        let name = name.into();
        if levels.is_empty() {
            return Err(Error::InvalidDataset(format!("column `{name}` has no levels")));
        }
        if codes.iter().any(|&c| c as usize >= levels.len()) {
            return Err(Error::InvalidDataset(format!(
                "column `{name}` has a code outside its level list"
            )));
        }
        Ok(Column {
            name,
            data: ColumnData::Categorical { levels, codes },
        })
    }

    /// Categorical column from raw labels; levels are ordered by first appearance.
    pub fn from_labels<S: AsRef<str>>(name: impl Into<String>, labels: &[S]) -> Result<Self> {
        let mut levels: Vec<String> = Vec::new();
        let mut index: HashMap<&str, u32> = HashMap::new();
        let mut codes = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let code = *index.entry(label).or_insert_with(|| {
                levels.push(label.to_string());
                (levels.len() - 1) as u32
            });
            codes.push(code);
        }
        Self::categorical(name, levels, codes)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Categorical { codes, .. } => codes.len(),
            ColumnData::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column_type(&self) -> ColumnType {
        match self.data {
            ColumnData::Categorical { .. } => ColumnType::Categorical,
            ColumnData::Numeric(_) => ColumnType::Numeric,
        }
    }

    pub fn as_numeric(&self) -> Result<&[f64]> {
        match &self.data {
            ColumnData::Numeric(v) => Ok(v),
            ColumnData::Categorical { .. } => Err(Error::CategoricalColumn(self.name.clone())),
        }
    }

    pub fn as_codes(&self) -> Option<(&[String], &[u32])> {
        match &self.data {
            ColumnData::Categorical { levels, codes } => Some((levels, codes)),
            ColumnData::Numeric(_) => None,
        }
    }

    /// Cell rendered as it would appear in a CSV file.
    pub fn cell(&self, row: usize) -> String {
        match &self.data {
            ColumnData::Categorical { levels, codes } => levels[codes[row] as usize].clone(),
            ColumnData::Numeric(v) => format!("{}", v[row]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Column>,
    class_index: usize,
    n_rows: usize,
    feature_columns: Vec<usize>,
}

impl Dataset {
    pub fn new(columns: Vec<Column>, class_name: &str) -> Result<Self> {
        let class_index = columns
            .iter()
            .position(|c| c.name == class_name)
            .ok_or_else(|| Error::MissingClass(class_name.to_string()))?;
        let n_rows = columns[0].len();
        if n_rows == 0 {
            return Err(Error::InvalidDataset("dataset has no rows".into()));
        }
        if columns.len() < 2 {
            return Err(Error::InvalidDataset("dataset has no feature columns".into()));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.len() != n_rows {
                return Err(Error::InvalidDataset(format!(
                    "column `{}` has {} rows, expected {n_rows}",
                    c.name,
                    c.len()
                )));
            }
            if columns[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::InvalidDataset(format!("duplicate column name `{}`", c.name)));
            }
        }
        let feature_columns = (0..columns.len()).filter(|&i| i != class_index).collect();
        Ok(Dataset {
            columns,
            class_index,
            n_rows,
            feature_columns,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.feature_columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// The `i`-th non-class column.
    pub fn feature(&self, i: usize) -> &Column {
        &self.columns[self.feature_columns[i]]
    }

    pub fn features(&self) -> impl Iterator<Item = &Column> + '_ {
        self.feature_columns.iter().map(|&i| &self.columns[i])
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features().map(|c| c.name.clone()).collect()
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.features()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn class(&self) -> &Column {
        &self.columns[self.class_index]
    }

    pub fn class_name(&self) -> &str {
        &self.columns[self.class_index].name
    }

    pub fn task(&self) -> TaskKind {
        infer_task(self)
    }

    /// Class codes and level names; fails for regression targets.
    pub fn class_labels(&self) -> Result<(&[String], &[u32])> {
        self.class().as_codes().ok_or_else(|| Error::MeasureInapplicable {
            measure: "classification-only".into(),
            task: TaskKind::Regression.to_string(),
        })
    }

    pub fn type_hints(&self) -> HashMap<String, ColumnType> {
        self.columns
            .iter()
            .map(|c| (c.name.clone(), c.column_type()))
            .collect()
    }

    pub fn full_mask(&self) -> FeatureMask {
        FeatureMask::full(self.n_features())
    }

    pub fn check_mask(&self, mask: &FeatureMask) -> Result<()> {
        mask.check_width(self.n_features())
    }

    /// Names of the features selected by `mask`, in column order.
    pub fn mask_to_names(&self, mask: &FeatureMask) -> Result<Vec<String>> {
        self.check_mask(mask)?;
        Ok(mask.indices().map(|i| self.feature(i).name.clone()).collect())
    }

    pub fn names_to_mask<S: AsRef<str>>(&self, names: &[S]) -> Result<FeatureMask> {
        let mut mask = FeatureMask::empty(self.n_features());
        for name in names {
            mask.set(self.feature_index(name.as_ref())?, true);
        }
        Ok(mask)
    }

    /// Dataset holding only the masked features plus the class.
    pub fn restrict(&self, mask: &FeatureMask) -> Result<Dataset> {
        self.check_mask(mask)?;
        if mask.is_empty() {
            return Err(Error::EmptyMask);
        }
        let keep: Vec<usize> = mask.indices().map(|i| self.feature_columns[i]).collect();
        let columns = self
            .columns
            .iter()
            .enumerate()
            .filter(|(i, _)| *i == self.class_index || keep.contains(i))
            .map(|(_, c)| c.clone())
            .collect();
        Dataset::new(columns, self.class_name())
    }

    pub fn with_class_column(&self, column: Column) -> Result<Dataset> {
        let mut columns = self.columns.clone();
        let name = self.class_name().to_string();
        columns[self.class_index] = column;
        Dataset::new(columns, &name)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in 0..self.n_rows {
            w.write_record(self.columns.iter().map(|c| c.cell(row)))?;
        }
        w.flush().map_err(|source| Error::Io {
            path: "<writer>".into(),
            source,
        })?;
        Ok(())
    }
}

/// Classification iff the class column is categorical.
pub fn infer_task(d: &Dataset) -> TaskKind {
    match d.class().column_type() {
        ColumnType::Categorical => TaskKind::Classification,
        ColumnType::Numeric => TaskKind::Regression,
    }
}

pub fn load_csv(
    path: impl AsRef<Path>,
    class_name: &str,
    type_hints: &HashMap<String, ColumnType>,
) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, class_name, type_hints)
}

/// Parses CSV with a header row. A column is numeric when every cell parses
/// as a finite number, categorical otherwise; `type_hints` take precedence.
pub fn read_csv<R: Read>(
    reader: R,
    class_name: &str,
    type_hints: &HashMap<String, ColumnType>,
) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if !header.iter().any(|h| h == class_name) {
        return Err(Error::MissingClass(class_name.to_string()));
    }
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); header.len()];
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for (j, cell) in record.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(Error::EmptyCell {
                    row,
                    column: header[j].clone(),
                });
            }
            cells[j].push(cell.to_string());
        }
    }

    let mut columns = Vec::with_capacity(header.len());
    for (name, raw) in header.into_iter().zip(cells) {
        let parsed: Vec<Option<f64>> = raw
            .iter()
            .map(|s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        let kind = type_hints.get(&name).copied().unwrap_or_else(|| {
            if parsed.iter().all(Option::is_some) {
                ColumnType::Numeric
            } else {
                ColumnType::Categorical
            }
        });
        let column = match kind {
            ColumnType::Numeric => {
                if let Some(row) = parsed.iter().position(Option::is_none) {
                    return Err(Error::NotNumeric {
                        row: row + 1,
                        value: raw[row].clone(),
                        column: name,
                    });
                }
                Column::numeric(name, parsed.into_iter().flatten().collect())?
            }
            ColumnType::Categorical => Column::from_labels(name, &raw)?,
        };
        columns.push(column);
    }
    Dataset::new(columns, class_name)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationSpec {
    pub bins: usize,
}

impl Default for DiscretizationSpec {
    fn default() -> Self {
        DiscretizationSpec { bins: 10 }
    }
}

impl DiscretizationSpec {
    pub fn new(bins: usize) -> Result<Self> {
        let spec = DiscretizationSpec { bins };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::config(format!(
                "discretization needs at least 2 bins, got {}",
                self.bins
            )));
        }
        Ok(())
    }
}

/// Equal-width binning of `values` over `[min, max]`.
///
/// The first interval is closed on both ends, the rest are right-closed, so
/// `max` lands in the last bin. Only occupied bins become levels, in interval
/// order. Returns `(levels, codes)`.
pub fn equal_width_bins(values: &[f64], bins: usize) -> (Vec<String>, Vec<u32>) {
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() || min == max {
        return (vec![format!("[{min},{max}]")], vec![0; values.len()]);
    }
    let width = (max - min) / bins as f64;
    let cuts: Vec<f64> = (1..bins).map(|j| min + j as f64 * width).collect();
    let raw: Vec<usize> = values
        .iter()
        .map(|&v| cuts.partition_point(|&c| c < v))
        .collect();

    let mut occupied = vec![false; bins];
    for &b in &raw {
        occupied[b] = true;
    }
    let mut remap = vec![u32::MAX; bins];
    let mut levels = Vec::new();
    for b in (0..bins).filter(|&b| occupied[b]) {
        let lo = if b == 0 { min } else { cuts[b - 1] };
        let hi = if b == bins - 1 { max } else { cuts[b] };
        let open = if b == 0 { '[' } else { '(' };
        remap[b] = levels.len() as u32;
        levels.push(format!("{open}{lo},{hi}]"));
    }
    let codes = raw.into_iter().map(|b| remap[b]).collect();
    (levels, codes)
}

/// Replaces every numeric feature with its equal-width discretization. The
/// class column is left untouched.
pub fn discretize(d: &Dataset, spec: &DiscretizationSpec) -> Result<Dataset> {
    spec.validate()?;
    let columns = d
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| match &c.data {
            ColumnData::Numeric(v) if i != d.class_index => {
                let (levels, codes) = equal_width_bins(v, spec.bins);
                Column::categorical(c.name.clone(), levels, codes)
            }
            _ => Ok(c.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(columns, d.class_name())
}

/// Mean and population standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Centers and scales the masked columns to mean 0, population sd 1.
/// Zero-variance columns become all zeros.
pub fn standardize(d: &Dataset, features: &FeatureMask) -> Result<Dataset> {
    d.check_mask(features)?;
    let mut columns = d.columns.clone();
    for i in features.indices() {
        let ci = d.feature_columns[i];
        let values = columns[ci].as_numeric()?;
        let (mean, sd) = mean_sd(values);
        let scaled = values
            .iter()
            .map(|v| if sd > 0.0 { (v - mean) / sd } else { 0.0 })
            .collect();
        columns[ci].data = ColumnData::Numeric(scaled);
    }
    Dataset::new(columns, d.class_name())
}
