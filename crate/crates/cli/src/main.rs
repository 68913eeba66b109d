mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use featsel_core::cutoff::RankedScores;
use featsel_core::registry::{self, Spec};
use featsel_core::search::Observer;
use featsel_core::{load_csv, Dataset, Error, Measure};

use config::{override_spec, parse_param, parse_type, RunConfig};
use report::{NamedMask, ResultDocument};

/// Feature selection: filter and wrapper measures combined with subset searches.
#[derive(Parser)]
#[command(name = "featsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for the best feature subset under a set measure.
    Search(Common),
    /// Score one given feature subset.
    Evaluate(Common),
    /// Rank features individually, optionally applying a cutoff.
    Rank(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV dataset with a header row.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Name of the class column.
    #[arg(long)]
    class: Option<String>,
    /// Column type override, NAME=numeric|categorical (repeatable).
    #[arg(long = "type", value_name = "NAME=TYPE")]
    types: Vec<String>,
    /// Measure name, e.g. giniIndex or wrapper.
    #[arg(long)]
    measure: Option<String>,
    /// Measure parameter KEY=VALUE (repeatable).
    #[arg(long = "measure-param", value_name = "KEY=VALUE")]
    measure_params: Vec<String>,
    /// Search name, e.g. ts, ga or sfs.
    #[arg(long)]
    search: Option<String>,
    /// Search parameter KEY=VALUE (repeatable).
    #[arg(long = "search-param", value_name = "KEY=VALUE")]
    search_params: Vec<String>,
    /// Individual measure ranking features for lcc.
    #[arg(long)]
    individual: Option<String>,
    /// Cutoff applied by `rank`, e.g. selectKBest.
    #[arg(long)]
    cutoff: Option<String>,
    /// Cutoff parameter KEY=VALUE (repeatable).
    #[arg(long = "cutoff-param", value_name = "KEY=VALUE")]
    cutoff_params: Vec<String>,
    /// Comma-separated feature names for `evaluate`.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,
    /// Top-level seed for every random component (default: 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Stream progress lines to standard error.
    #[arg(long)]
    verbose: bool,
    /// Output path for the JSON document (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(d) = &self.data {
            cfg.data = Some(d.clone());
        }
        if let Some(c) = &self.class {
            cfg.class = Some(c.clone());
        }
        for t in &self.types {
            let (name, kind) = parse_type(t)?;
            cfg.types.insert(name, kind);
        }
        let params = |raw: &[String]| raw.iter().map(|p| parse_param(p)).collect::<Result<Vec<(String, Value)>>>();
        override_spec(&mut cfg.measure, self.measure.as_deref(), &params(&self.measure_params)?)?;
        override_spec(&mut cfg.search, self.search.as_deref(), &params(&self.search_params)?)?;
        override_spec(&mut cfg.individual, self.individual.as_deref(), &[])?;
        override_spec(&mut cfg.cutoff, self.cutoff.as_deref(), &params(&self.cutoff_params)?)?;
        if !self.features.is_empty() {
            cfg.features = self.features.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.verbose |= self.verbose;
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        Ok(cfg)
    }
}

fn load(cfg: &RunConfig) -> Result<Dataset> {
    let path = cfg.data()?;
    load_csv(path, cfg.class()?, &cfg.type_hints()?).with_context(|| format!("loading {}", path.display()))
}

fn build_measure(spec: &Spec, d: &Dataset, seed: u64) -> Result<Measure> {
    Ok(registry::build_measure(spec, d.task(), seed)?)
}

fn stderr_observer(line: &str) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

fn run_search(cfg: &RunConfig) -> Result<ResultDocument> {
    cfg.validate_search()?;
    let d = load(cfg)?;
    let started = Instant::now();
    let measure = build_measure(cfg.measure()?, &d, cfg.seed)?;
    let individual = cfg
        .individual
        .as_ref()
        .map(|s| build_measure(s, &d, cfg.seed))
        .transpose()?;
    let search = registry::build_search(cfg.search()?, cfg.seed, individual)?;
    let observer: Option<&Observer> = if cfg.verbose { Some(&stderr_observer) } else { None };
    let result = search.search(&d, measure.as_set()?, observer)?;
    Ok(ResultDocument {
        version: featsel_core::VERSION.to_string(),
        command: "search".into(),
        config: cfg.clone(),
        seed: cfg.seed,
        task: d.task(),
        measure: measure.descriptor().clone(),
        best_masks: result
            .best_masks
            .iter()
            .map(|m| NamedMask::new(&d, m))
            .collect::<featsel_core::Result<_>>()?,
        best_value: Some(result.best_value),
        evaluations: result.evaluations,
        wall_time_secs: started.elapsed().as_secs_f64(),
        trace: result.trace,
        ranking: None,
        cutoff: None,
    })
}

fn run_evaluate(cfg: &RunConfig) -> Result<ResultDocument> {
    cfg.validate_evaluate()?;
    let d = load(cfg)?;
    let started = Instant::now();
    let measure = build_measure(cfg.measure()?, &d, cfg.seed)?;
    let mask = d.names_to_mask(&cfg.features)?;
    let value = measure.as_set()?.evaluate(&d, &mask)?;
    Ok(ResultDocument {
        version: featsel_core::VERSION.to_string(),
        command: "evaluate".into(),
        config: cfg.clone(),
        seed: cfg.seed,
        task: d.task(),
        measure: measure.descriptor().clone(),
        best_masks: vec![NamedMask::new(&d, &mask)?],
        best_value: Some(value),
        evaluations: 1,
        wall_time_secs: started.elapsed().as_secs_f64(),
        trace: Vec::new(),
        ranking: None,
        cutoff: None,
    })
}

fn run_rank(cfg: &RunConfig) -> Result<ResultDocument> {
    cfg.validate_rank()?;
    let cutoff = cfg.cutoff.as_ref().map(registry::build_cutoff).transpose()?;
    let d = load(cfg)?;
    let started = Instant::now();
    let measure = build_measure(cfg.measure()?, &d, cfg.seed)?;
    let ranking = RankedScores::rank(&d, &measure)?;
    let (best_masks, cutoff_report) = match cutoff {
        Some(c) => {
            let r = c.apply(&ranking)?;
            let (masks, report) = ResultDocument::cutoff_parts(&d, c.name(), &r)?;
            (masks, Some(report))
        }
        None => (Vec::new(), None),
    };
    Ok(ResultDocument {
        version: featsel_core::VERSION.to_string(),
        command: "rank".into(),
        config: cfg.clone(),
        seed: cfg.seed,
        task: d.task(),
        measure: measure.descriptor().clone(),
        best_masks,
        best_value: None,
        evaluations: d.n_features(),
        wall_time_secs: started.elapsed().as_secs_f64(),
        trace: Vec::new(),
        ranking: Some(ranking),
        cutoff: cutoff_report,
    })
}

fn write_document(doc: &ResultDocument, out: Option<&std::path::Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let (common, runner): (&Common, fn(&RunConfig) -> Result<ResultDocument>) = match &cli.command {
        Command::Search(c) => (c, run_search),
        Command::Evaluate(c) => (c, run_evaluate),
        Command::Rank(c) => (c, run_rank),
    };
    let cfg = common.resolve()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        anyhow::ensure!(n >= 1, "--threads must be at least 1");
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    let doc = pool.install(|| runner(&cfg))?;
    write_document(&doc, cfg.out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(Error::SearchAborted { trace, .. }) = err.downcast_ref::<Error>() {
                let partial = serde_json::json!({ "error": format!("{err:#}"), "partial_trace": trace });
                eprintln!("{partial}");
            }
            ExitCode::FAILURE
        }
    }
}
