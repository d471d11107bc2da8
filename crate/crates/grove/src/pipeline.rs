//! Batch pipeline: discover files, parse, simplify, build bags, detect,
//! write the report and statistics.
//!
//! Per-file work (parsing through bag generation) is embarrassingly parallel
//! and runs on a dedicated thread pool; per-file syntax errors are collected
//! in the summary and never abort the run. Bags are merged in file-path
//! order and detection output is canonically sorted, so runs are
//! byte-deterministic regardless of worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::bags::{generate_bags, BagLimits, KeywordList, TokenBag};
use crate::detect::{detect_all, ClonePair, DetectorConfig};
use crate::error::{Error, Result};
use crate::frontend::{load_grammar, GrammarBundle};
use crate::simplify::{simplify_with, SimplifyOptions, SizeMetric};
use crate::tree::SourceFileTree;

/// How input files become trees.
#[derive(Debug, Clone)]
pub enum InputMode {
    /// Parse with a grammar bundle.
    Grammar(GrammarBundle),
    /// Ingest PT-IR documents; no parser backend involved.
    Ptir,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Files and/or directories to scan.
    pub inputs: Vec<PathBuf>,
    pub mode: InputMode,
    /// Extensions considered during directory scans. Defaults to `java` in
    /// grammar mode and `ptir` in PT-IR mode. Explicit file inputs are
    /// always taken.
    pub extensions: Vec<String>,
    /// Keyword list activating the block filter during bag generation.
    pub filter_keywords: Option<PathBuf>,
    /// Minimum block size for tree simplification.
    pub min_size: u32,
    pub size_metric: SizeMetric,
    pub bag_limits: BagLimits,
    pub detector: DetectorConfig,
    pub report_path: Option<PathBuf>,
    pub report_header: bool,
    pub stats_path: Option<PathBuf>,
    pub bag_dump_path: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(mode: InputMode, inputs: Vec<PathBuf>) -> Self {
        let extensions = match &mode {
            InputMode::Grammar(bundle) => default_extensions(&bundle.language),
            InputMode::Ptir => vec!["ptir".to_string()],
        };
        PipelineConfig {
            inputs,
            mode,
            extensions,
            filter_keywords: None,
            min_size: 2,
            size_metric: SizeMetric::default(),
            bag_limits: BagLimits::default(),
            detector: DetectorConfig::default(),
            report_path: None,
            report_header: false,
            stats_path: None,
            bag_dump_path: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.min_size < 1 {
            return Err(Error::Config("min-size must be at least 1".into()));
        }
        if self.detector.min_tokens < self.min_size {
            return Err(Error::Config(format!(
                "min-tokens ({}) must be at least min-size ({})",
                self.detector.min_tokens, self.min_size
            )));
        }
        if !(self.detector.theta > 0.0 && self.detector.theta <= 1.0) {
            return Err(Error::Config("threshold must be in (0, 1]".into()));
        }
        if self.inputs.is_empty() {
            return Err(Error::NoInputs);
        }
        Ok(())
    }
}

fn default_extensions(language: &str) -> Vec<String> {
    match language {
        "java" => vec!["java".to_string()],
        other => vec![other.to_string()],
    }
}

/// A file the pipeline skipped, with the reason.
#[derive(Debug, Clone)]
pub struct ParseFailure {
    pub path: PathBuf,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct PhaseTimes {
    /// Parse + simplify + bag generation (wall milliseconds).
    pub extract_ms: u64,
    pub detect_ms: u64,
    pub report_ms: u64,
}

/// What a run produced, plus the reported pairs themselves.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub files_found: usize,
    pub files_parsed: usize,
    pub parse_failures: Vec<ParseFailure>,
    pub bags_per_granularity: BTreeMap<u32, u64>,
    pub bag_total: u64,
    /// Keyword tokens over bag-eligible tokens across the parsed corpus.
    pub keyword_ratio: f64,
    pub pair_count: usize,
    pub phases: PhaseTimes,
    pub pairs: Vec<ClonePair>,
}

impl fmt::Display for RunSummary {
    /// The `key=value` form printed by the CLI.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "files={} parsed={} parse_errors={} bags={} pairs={} keyword_ratio={:.4}",
            self.files_found,
            self.files_parsed,
            self.parse_failures.len(),
            self.bag_total,
            self.pair_count,
            self.keyword_ratio
        )?;
        writeln!(
            f,
            "extract_ms={} detect_ms={} report_ms={}",
            self.phases.extract_ms, self.phases.detect_ms, self.phases.report_ms
        )?;
        let mut first = true;
        for (g, count) in &self.bags_per_granularity {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "bags_g{g}={count}")?;
        }
        if !first {
            writeln!(f)?;
        }
        Ok(())
    }
}

fn discover(cfg: &PipelineConfig) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in &cfg.inputs {
        if input.is_file() {
            files.push(input.clone());
            continue;
        }
        if !input.is_dir() {
            return Err(Error::Config(format!(
                "input {} is neither a file nor a directory",
                input.display()
            )));
        }
        for entry in walkdir::WalkDir::new(input).follow_links(false) {
            let entry = entry.map_err(|e| Error::Config(e.to_string()))?;
            if !entry.file_type().is_file() {
                continue;
            }
            let ext = entry
                .path()
                .extension()
                .and_then(|e| e.to_str())
                .unwrap_or("");
            if cfg.extensions.iter().any(|e| e == ext) {
                files.push(entry.into_path());
            }
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn load_tree(cfg: &PipelineConfig, frontend: Option<&crate::frontend::LanguageFrontend>, path: &PathBuf) -> Result<SourceFileTree> {
    match &cfg.mode {
        InputMode::Grammar(_) => frontend
            .expect("frontend loaded in grammar mode")
            .parse_file(path),
        InputMode::Ptir => {
            let bytes = std::fs::read(path).map_err(|e| Error::file(path, e))?;
            crate::ptir::ingest_bytes(&bytes)
        }
    }
}

/// Runs the full pipeline. Fatal errors (bad configuration, unwritable
/// outputs, every file failing to parse) are returned; per-file parse errors
/// are collected in the summary.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary> {
    cfg.validate()?;

    let frontend = match &cfg.mode {
        InputMode::Grammar(bundle) => Some(load_grammar(bundle)?),
        InputMode::Ptir => None,
    };
    let filter_list = match &cfg.filter_keywords {
        Some(path) => KeywordList::load(path)?,
        None => KeywordList::empty(),
    };

    let files = discover(cfg)?;
    if files.is_empty() {
        return Err(Error::NoInputs);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.detector.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    let simplify_opts = SimplifyOptions {
        min_size: cfg.min_size,
        metric: cfg.size_metric,
    };

    struct FileOutput {
        path: PathBuf,
        bags: Vec<TokenBag>,
        keyword_tokens: u64,
        eligible_tokens: u64,
    }

    let extract_started = Instant::now();
    let results: Vec<(PathBuf, Result<FileOutput>)> = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let out = load_tree(cfg, frontend.as_ref(), path).map(|tree| {
                    let spt = simplify_with(&tree, &simplify_opts);
                    let mut bags = generate_bags(&tree, &spt, &filter_list);
                    cfg.bag_limits.retain(&mut bags);
                    let keyword_tokens = tree
                        .tokens()
                        .iter()
                        .filter(|t| t.category == crate::tree::TokenCategory::Keyword)
                        .count() as u64;
                    let eligible_tokens = tree
                        .tokens()
                        .iter()
                        .filter(|t| t.category.bag_eligible())
                        .count() as u64;
                    FileOutput {
                        path: path.clone(),
                        bags,
                        keyword_tokens,
                        eligible_tokens,
                    }
                });
                (path.clone(), out)
            })
            .collect()
    });
    let extract_ms = extract_started.elapsed().as_millis() as u64;

    let mut outputs = Vec::new();
    let mut parse_failures = Vec::new();
    for (path, result) in results {
        match result {
            Ok(out) => outputs.push(out),
            Err(err) => parse_failures.push(ParseFailure {
                path,
                message: err.to_string(),
            }),
        }
    }
    if outputs.is_empty() {
        return Err(Error::AllFilesFailed(files.len()));
    }
    outputs.sort_by(|a, b| a.path.cmp(&b.path));

    let mut bags: Vec<TokenBag> = Vec::new();
    let mut keyword_tokens = 0u64;
    let mut eligible_tokens = 0u64;
    let files_parsed = outputs.len();
    for out in outputs {
        keyword_tokens += out.keyword_tokens;
        eligible_tokens += out.eligible_tokens;
        bags.extend(out.bags);
    }

    if let Some(path) = &cfg.bag_dump_path {
        let file = std::fs::File::create(path).map_err(|e| Error::file(path, e))?;
        crate::bags::write_bag_dump(&bags, std::io::BufWriter::new(file))
            .map_err(|e| Error::file(path, e))?;
    }

    let detect_started = Instant::now();
    let pairs = pool.install(|| detect_all(&bags, &cfg.detector));
    let detect_ms = detect_started.elapsed().as_millis() as u64;

    let report_started = Instant::now();
    if let Some(path) = &cfg.report_path {
        crate::report::write_report(&pairs, path, cfg.report_header)?;
    }
    if let Some(path) = &cfg.stats_path {
        crate::report::write_granularity_stats(&bags, &pairs, path)?;
    }
    let report_ms = report_started.elapsed().as_millis() as u64;

    let mut bags_per_granularity: BTreeMap<u32, u64> = BTreeMap::new();
    for bag in &bags {
        *bags_per_granularity.entry(bag.segment.granularity).or_insert(0) += 1;
    }

    Ok(RunSummary {
        files_found: files.len(),
        files_parsed,
        parse_failures,
        bag_total: bags.len() as u64,
        bags_per_granularity,
        keyword_ratio: if eligible_tokens == 0 {
            0.0
        } else {
            keyword_tokens as f64 / eligible_tokens as f64
        },
        pair_count: pairs.len(),
        phases: PhaseTimes {
            extract_ms,
            detect_ms,
            report_ms,
        },
        pairs,
    })
}
