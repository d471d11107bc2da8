//! Load a grammar from a compiled tree-sitter shared library at runtime and
//! parse with it — no recompilation of this crate involved.
//!
//! Build a grammar library with the tree-sitter CLI (`tree-sitter generate`
//! then `cc -shared -fPIC src/parser.c -Isrc -o java.so`, plus scanner.c
//! when present), then:
//!
//! ```bash
//! cargo run --example runtime_grammar -- path/to/java.so java program File.java
//! ```

use std::path::PathBuf;
use std::process::ExitCode;

use grove::{GrammarBundle, GrammarSource};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [library, language, entry_rule, source] = args.as_slice() else {
        eprintln!("usage: runtime_grammar <grammar.so> <language> <entry_rule> <source-file>");
        eprintln!("example: runtime_grammar java.so java program Main.java");
        return ExitCode::from(1);
    };

    let bundle = GrammarBundle {
        language: language.clone(),
        source: GrammarSource::SharedLibrary {
            path: PathBuf::from(library),
            symbol: None,
        },
        keywords: None,
        entry_rule: entry_rule.clone(),
    };

    let frontend = match grove::load_grammar(&bundle) {
        Ok(fe) => fe,
        Err(e) => {
            eprintln!("load failed: {e}");
            return ExitCode::from(1);
        }
    };
    match frontend.parse_file(&PathBuf::from(source)) {
        Ok(tree) => {
            println!(
                "{source}: parsed with runtime-loaded {language} grammar ({} tokens, {} nodes)",
                tree.tokens().len(),
                tree.nodes().len()
            );
            print!("{}", grove::ptir::emit(&tree));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("parse failed: {e}");
            ExitCode::from(2)
        }
    }
}
