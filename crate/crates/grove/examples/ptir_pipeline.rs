//! Run detection purely from PT-IR documents — no grammar, no parser.
//!
//! Any tool that emits PT-IR can stand in for the bundled backend; the
//! fixtures used here were serialized from the Java samples and are plain
//! text worth a look.
//!
//! ```bash
//! cargo run --example ptir_pipeline [dir_with_ptir_files]
//! ```

use std::path::{Path, PathBuf};

use grove::pipeline::{run_pipeline, InputMode, PipelineConfig};

fn main() -> Result<(), grove::Error> {
    let corpus = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/ptir")
    });

    let mut cfg = PipelineConfig::new(InputMode::Ptir, vec![corpus]);
    cfg.detector.min_tokens = 20;

    let summary = run_pipeline(&cfg)?;
    print!("{summary}");
    for pair in &summary.pairs {
        println!(
            "{:.4} g={} {}:{}-{} <-> {}:{}-{}",
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
