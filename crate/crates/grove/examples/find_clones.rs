//! End-to-end clone detection over a directory.
//!
//! ```bash
//! cargo run --example find_clones [corpus_dir] [threshold] [min_tokens]
//! ```
//!
//! Defaults scan the bundled fixtures with a low token minimum so the small
//! files produce output; real runs keep the 50-token default.

use std::path::{Path, PathBuf};

use grove::pipeline::{run_pipeline, InputMode, PipelineConfig};

fn main() -> Result<(), grove::Error> {
    let mut args = std::env::args().skip(1);
    let corpus = args.next().map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/java")
    });
    let threshold: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.7);
    let min_tokens: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);

    let bundle = grove::GrammarBundle::builtin("java")
        .with_keywords(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/keywords/java.txt"));
    let mut cfg = PipelineConfig::new(InputMode::Grammar(bundle), vec![corpus]);
    cfg.detector.theta = threshold;
    cfg.detector.min_tokens = min_tokens;

    let summary = run_pipeline(&cfg)?;
    for failure in &summary.parse_failures {
        eprintln!("skipped {}: {}", failure.path.display(), failure.message);
    }
    print!("{summary}");

    println!("\npairs:");
    for pair in &summary.pairs {
        println!(
            "  {:.4} g={} {}:{}-{} <-> {}:{}-{}",
            pair.similarity,
            pair.granularity,
            pair.a.file,
            pair.a.start_line,
            pair.a.end_line,
            pair.b.file,
            pair.b.start_line,
            pair.b.end_line
        );
    }
    Ok(())
}
