//! Draw a reproducible random sample of detected pairs with source
//! excerpts, the raw material for a manual precision pass.
//!
//! ```bash
//! cargo run --example precision_sample [corpus_dir] [n] [seed]
//! ```

use std::path::{Path, PathBuf};

use grove::evalkit::sample_for_precision;
use grove::pipeline::{run_pipeline, InputMode, PipelineConfig};

fn main() -> Result<(), grove::Error> {
    let mut args = std::env::args().skip(1);
    let corpus = args.next().map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/java")
    });
    let n: Option<usize> = args.next().and_then(|s| s.parse().ok());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);

    let bundle = grove::GrammarBundle::builtin("java")
        .with_keywords(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/keywords/java.txt"));
    let mut cfg = PipelineConfig::new(InputMode::Grammar(bundle), vec![corpus]);
    cfg.detector.min_tokens = 20;
    let summary = run_pipeline(&cfg)?;
    println!("{} pairs detected", summary.pairs.len());
    if summary.pairs.is_empty() {
        return Ok(());
    }

    let n = n.unwrap_or(summary.pairs.len().min(5));
    let out = std::env::temp_dir().join("grove_precision_sample.txt");
    sample_for_precision(&summary.pairs, n, seed, &out)?;
    println!("wrote {n} sampled pairs (seed {seed}) to {}", out.display());
    print!("{}", std::fs::read_to_string(&out)?);
    Ok(())
}
