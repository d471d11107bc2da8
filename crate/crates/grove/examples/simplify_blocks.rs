//! Simplify a parse tree into its block inventory and show the granularity
//! distribution.
//!
//! ```bash
//! cargo run --example simplify_blocks [path/to/File.java] [min_size]
//! ```

use std::path::{Path, PathBuf};

fn main() -> Result<(), grove::Error> {
    let mut args = std::env::args().skip(1);
    let input = args.next().map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/java/Matrix.java")
    });
    let min_size: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);

    let bundle = grove::GrammarBundle::builtin("java")
        .with_keywords(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/keywords/java.txt"));
    let frontend = grove::load_grammar(&bundle)?;
    let tree = frontend.parse_file(&input)?;
    let internal = tree.nodes().iter().filter(|n| !n.is_terminal()).count();

    let spt = grove::simplify(&tree, min_size);
    println!(
        "{}: {} internal parse nodes -> {} blocks at min_size {min_size}",
        input.display(),
        internal,
        spt.len()
    );

    println!("\ngranularity,blocks");
    for (granularity, count) in grove::spt_stats(&spt) {
        println!("{granularity},{count}");
    }

    println!("\norigin  granularity  tokens  lines");
    for node in spt.nodes() {
        let origin = tree.node(node.origin).expect("origin exists");
        let lines = tree
            .line_range(origin)
            .map(|(s, e)| format!("{s}-{e}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>6}  {:>11}  {:>6}  {lines}  {}",
            node.origin.0, node.granularity, node.size, origin.rule
        );
    }
    Ok(())
}
