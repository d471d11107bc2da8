//! Parse one Java file and print its PT-IR document.
//!
//! PT-IR is the interchange format the whole pipeline runs on: anything that
//! can produce it can act as a parser backend.
//!
//! ```bash
//! cargo run --example parse_to_ptir [path/to/File.java]
//! ```

use std::path::{Path, PathBuf};

fn main() -> Result<(), grove::Error> {
    let input = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/java/Matrix.java")
    });

    let bundle = grove::GrammarBundle::builtin("java")
        .with_keywords(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/keywords/java.txt"));
    let frontend = grove::load_grammar(&bundle)?;
    let tree = frontend.parse_file(&input)?;

    print!("{}", grove::ptir::emit(&tree));
    eprintln!(
        "# {} tokens, {} nodes, root rule {:?}",
        tree.tokens().len(),
        tree.nodes().len(),
        tree.root().rule
    );
    Ok(())
}
