//! Batch CLI over the grove pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 fatal I/O error, 3 every input
//! file failed to parse.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use grove::error::Error;
use grove::pipeline::{run_pipeline, InputMode, PipelineConfig};
use grove::simplify::SizeMetric;

#[derive(Parser, Debug)]
#[command(
    name = "grove",
    about = "Grammar-pluggable, multi-granularity code clone detector",
    version
)]
struct Args {
    /// Source files and/or directories to scan.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Grammar artifact: `builtin:<name>` or a path to a compiled
    /// tree-sitter grammar shared library.
    #[arg(long, default_value = "builtin:java")]
    grammar: String,

    /// Language id; also names the grammar entry symbol for shared
    /// libraries (`tree_sitter_<lang>`).
    #[arg(long, default_value = "java")]
    lang: String,

    /// Grammar start rule.
    #[arg(long, default_value = "program")]
    entry_rule: String,

    /// Keyword list file; keywords categorize tokens and feed the keyword
    /// ratio statistic.
    #[arg(long)]
    keywords: Option<PathBuf>,

    /// Activate the keyword block filter (requires --keywords): only blocks
    /// introduced by a keyword yield token bags.
    #[arg(long, requires = "keywords")]
    keyword_filter: bool,

    /// Treat inputs as PT-IR documents instead of source files; no grammar
    /// is loaded.
    #[arg(long)]
    ptir_in: bool,

    /// Minimum block size for parse-tree simplification.
    #[arg(long, default_value_t = 2)]
    min_size: u32,

    /// Minimum bag size admitted to clone detection.
    #[arg(long, default_value_t = 50)]
    min_tokens: u32,

    /// Similarity threshold in (0,1]; inclusive.
    #[arg(long, default_value_t = 0.7)]
    threshold: f64,

    /// Restrict detection to a granularity window, `LO:HI`.
    #[arg(long, value_parser = parse_granularity)]
    granularity: Option<(u32, u32)>,

    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,

    /// Token count driving simplification: bag-eligible tokens or all
    /// tokens.
    #[arg(long, value_parser = parse_metric, default_value = "bag")]
    size_metric: SizeMetric,

    /// Clone report CSV path.
    #[arg(long, default_value = "clones.csv")]
    report: PathBuf,

    /// Write a header line in the report.
    #[arg(long)]
    report_header: bool,

    /// Granularity distribution CSV path.
    #[arg(long)]
    stats: Option<PathBuf>,

    /// Token bag dump path (debugging aid).
    #[arg(long)]
    bag_dump: Option<PathBuf>,

    /// Extra file extensions to scan (repeatable). Defaults to the
    /// language's own extension, or `ptir` with --ptir-in.
    #[arg(long = "ext")]
    extensions: Vec<String>,
}

fn parse_granularity(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| "expected LO:HI".to_string())?;
    let lo: u32 = lo.parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: u32 = hi.parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty granularity window {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_metric(s: &str) -> Result<SizeMetric, String> {
    match s {
        "bag" => Ok(SizeMetric::BagEligible),
        "all" => Ok(SizeMetric::AllTokens),
        other => Err(format!("unknown size metric {other:?} (bag|all)")),
    }
}

fn build_config(args: &Args) -> PipelineConfig {
    let mode = if args.ptir_in {
        InputMode::Ptir
    } else {
        let mut bundle = grove::frontend::GrammarBundle::from_artifact(
            &args.grammar,
            &args.lang,
            &args.entry_rule,
        );
        bundle.keywords = args.keywords.clone();
        InputMode::Grammar(bundle)
    };
    let mut cfg = PipelineConfig::new(mode, args.inputs.clone());
    if !args.extensions.is_empty() {
        cfg.extensions = args.extensions.clone();
    }
    cfg.filter_keywords = if args.keyword_filter {
        args.keywords.clone()
    } else {
        None
    };
    cfg.min_size = args.min_size;
    cfg.size_metric = args.size_metric;
    cfg.detector.theta = args.threshold;
    cfg.detector.min_tokens = args.min_tokens;
    cfg.detector.granularity_range = args.granularity;
    cfg.detector.workers = args.jobs;
    cfg.report_path = Some(args.report.clone());
    cfg.report_header = args.report_header;
    cfg.stats_path = args.stats.clone();
    cfg.bag_dump_path = args.bag_dump.clone();
    cfg
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::NoInputs | Error::Grammar(_) | Error::EntryRule { .. } => 1,
        Error::AllFilesFailed(_) => 3,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn granularity_windows_parse() {
        assert_eq!(parse_granularity("0:4"), Ok((0, 4)));
        assert_eq!(parse_granularity("3:3"), Ok((3, 3)));
        assert!(parse_granularity("4:1").is_err());
        assert!(parse_granularity("4").is_err());
        assert!(parse_granularity("a:b").is_err());
    }

    #[test]
    fn size_metrics_parse() {
        assert_eq!(parse_metric("bag"), Ok(SizeMetric::BagEligible));
        assert_eq!(parse_metric("all"), Ok(SizeMetric::AllTokens));
        assert!(parse_metric("tokens").is_err());
    }

    #[test]
    fn defaults_mirror_the_documented_configuration() {
        use clap::Parser as _;
        let args = Args::parse_from(["grove", "src"]);
        assert_eq!(args.min_size, 2);
        assert_eq!(args.min_tokens, 50);
        assert_eq!(args.threshold, 0.7);
        assert_eq!(args.grammar, "builtin:java");
        let cfg = build_config(&args);
        assert_eq!(cfg.detector.theta, 0.7);
        assert_eq!(cfg.detector.min_tokens, 50);
        assert!(cfg.filter_keywords.is_none());
    }

    #[test]
    fn keyword_filter_flag_passes_the_list_through() {
        use clap::Parser as _;
        let args =
            Args::parse_from(["grove", "src", "--keywords", "kw.txt", "--keyword-filter"]);
        let cfg = build_config(&args);
        assert_eq!(cfg.filter_keywords, Some(PathBuf::from("kw.txt")));

        // The filter flag requires a list.
        assert!(Args::try_parse_from(["grove", "src", "--keyword-filter"]).is_err());
    }

    #[test]
    fn size_metric_flag_reaches_the_simplifier_config() {
        use clap::Parser as _;
        let args = Args::parse_from(["grove", "src", "--size-metric", "all"]);
        let cfg = build_config(&args);
        assert_eq!(cfg.size_metric, SizeMetric::AllTokens);
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(err) => {
            // Help and version are successful exits.
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };

    let cfg = build_config(&args);
    match run_pipeline(&cfg) {
        Ok(summary) => {
            for failure in &summary.parse_failures {
                eprintln!("skipped {}: {}", failure.path.display(), failure.message);
            }
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
