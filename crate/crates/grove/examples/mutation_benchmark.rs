//! Miniature recall benchmark: plant T1/T2/T3 mutants into a copy of the
//! fixture corpus, detect clones, and score recall against the injected
//! ground truth.
//!
//! ```bash
//! cargo run --example mutation_benchmark
//! ```

use std::path::Path;

use grove::evalkit::{
    compute_recall, function_segments, load_report, mutate_corpus, write_ground_truth,
    LanguageProfile, MatcherConfig, MutantSpec, MutationClass,
};
use grove::pipeline::{run_pipeline, InputMode, PipelineConfig};

fn main() -> Result<(), grove::Error> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let bundle = grove::GrammarBundle::builtin("java")
        .with_keywords(fixtures.join("keywords/java.txt"));
    let frontend = grove::load_grammar(&bundle)?;

    // Work on a private copy of the fixture corpus.
    let work = std::env::temp_dir().join(format!("grove-mutbench-{}", std::process::id()));
    let corpus = work.join("corpus");
    std::fs::create_dir_all(&corpus)?;
    for name in ["Matrix.java", "Grid.java", "ListOps.java"] {
        std::fs::copy(fixtures.join("java").join(name), corpus.join(name))?;
    }

    // One mutant of each class per file, targeting the largest method.
    let mut specs = Vec::new();
    for (i, name) in ["Matrix.java", "Grid.java", "ListOps.java"].iter().enumerate() {
        let tree = frontend.parse_file(&corpus.join(name))?;
        let targets = function_segments(&tree, Path::new(name), &["method_declaration"]);
        let Some(target) = targets.first() else { continue };
        for (j, class) in [
            MutationClass::FormatOnly,
            MutationClass::Rename { fraction: 0.15 },
            MutationClass::EditStatements { fraction: 0.2 },
        ]
        .into_iter()
        .enumerate()
        {
            specs.push(MutantSpec {
                source: target.segment.clone(),
                class,
                seed: (i * 10 + j) as u64,
            });
        }
    }

    let mutated = mutate_corpus(
        &frontend,
        &corpus,
        &work.join("mutated"),
        &specs,
        &LanguageProfile::java(),
    )?;
    write_ground_truth(&mutated.ground_truth, &work.join("ground_truth.csv"))?;
    println!("planted {} mutants (retries: {})", mutated.ground_truth.len(), mutated.retries);
    for entry in &mutated.ground_truth {
        println!(
            "  {} {} -> {}  expected similarity {:.4}",
            entry.clone_type,
            entry.original.file.display(),
            entry.mutant.file.display(),
            entry.expected_similarity
        );
    }

    let report_path = work.join("clones.csv");
    let mut cfg = PipelineConfig::new(InputMode::Grammar(bundle), vec![mutated.root.clone()]);
    cfg.detector.min_tokens = 20;
    cfg.report_path = Some(report_path.clone());
    run_pipeline(&cfg)?;

    let matcher = MatcherConfig {
        min_lines: 6,
        min_tokens: 20,
        overlap_ratio: 0.7,
    };
    let recall = compute_recall(&load_report(&report_path)?, &mutated.ground_truth, &matcher);
    println!("\nrecall (matcher: ≥6 lines, ≥20 tokens, 0.7 coverage):\n{recall}");

    std::fs::remove_dir_all(&work).ok();
    Ok(())
}
