//! Generate token bags for one file, with and without the keyword filter.
//!
//! With a keyword list, only blocks introduced by a keyword — blocks having
//! a child subtree made of keywords only, the way `class`, `for` or `while`
//! open their blocks — yield bags. Passing a single-keyword list is a cheap
//! way to target one construct.
//!
//! ```bash
//! cargo run --example token_bags [path/to/File.java]
//! ```

use std::path::{Path, PathBuf};

fn main() -> Result<(), grove::Error> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let input = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| fixtures.join("java/Matrix.java"));

    let keywords_path = fixtures.join("keywords/java.txt");
    let bundle = grove::GrammarBundle::builtin("java").with_keywords(&keywords_path);
    let frontend = grove::load_grammar(&bundle)?;
    let tree = frontend.parse_file(&input)?;
    let spt = grove::simplify(&tree, 2);

    let all = grove::generate_bags(&tree, &spt, &grove::KeywordList::empty());
    let keywords = grove::KeywordList::load(&keywords_path)?;
    let filtered = grove::generate_bags(&tree, &spt, &keywords);
    println!(
        "{}: {} bags unfiltered, {} after the keyword filter",
        input.display(),
        all.len(),
        filtered.len()
    );

    println!("\nfiltered bags (file:lines g=granularity total):");
    for bag in &filtered {
        let preview: Vec<String> = bag
            .counts()
            .iter()
            .take(8)
            .map(|(t, c)| format!("{t}:{c}"))
            .collect();
        println!(
            "  {}:{}-{} g={} total={}  {}{}",
            bag.segment.file,
            bag.segment.start_line,
            bag.segment.end_line,
            bag.segment.granularity,
            bag.total,
            preview.join(" "),
            if bag.counts().len() > 8 { " …" } else { "" }
        );
    }
    Ok(())
}
