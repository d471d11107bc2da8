//! grove — grammar-pluggable, multi-granularity code clone detection.
//!
//! grove finds Type-3 code clones in any language a runtime-loadable grammar
//! exists for. Source files are parsed into plain parse trees, the trees are
//! simplified into an inventory of semantic blocks at every granularity
//! (whole file down to single statements), each block becomes a multiset of
//! its keyword/identifier/literal tokens, and blocks of equal granularity
//! are searched for pairs whose bag overlap reaches a threshold.
//!
//! The stages are ordinary functions and can be used independently:
//!
//! ```no_run
//! use grove::{bags, detect, frontend, simplify};
//!
//! let bundle = frontend::GrammarBundle::builtin("java")
//!     .with_keywords("fixtures/keywords/java.txt");
//! let fe = frontend::load_grammar(&bundle)?;
//! let tree = fe.parse_file(std::path::Path::new("Example.java"))?;
//! let spt = simplify::simplify(&tree, 2);
//! let bags = bags::generate_bags(&tree, &spt, &bags::KeywordList::empty());
//! let pairs = detect::detect_all(&bags, &detect::DetectorConfig::default());
//! # let _ = pairs;
//! # Ok::<(), grove::Error>(())
//! ```
//!
//! Parser backends are decoupled from the core by PT-IR, a line-oriented
//! interchange format for parse trees ([`ptir`]); the whole pipeline runs
//! from PT-IR documents with no grammar present. See the `examples/`
//! directory for one runnable program per capability, and [`pipeline`] for
//! the batch entry point the `grove` binary wraps.

pub mod bags;
pub mod detect;
pub mod error;
pub mod evalkit;
pub mod frontend;
pub mod pipeline;
pub mod ptir;
pub mod report;
pub mod simplify;
pub mod tree;

pub use bags::{generate_bags, keyword_filter, BagLimits, CodeSegment, KeywordList, TokenBag};
pub use detect::{
    build_index, detect_all, detect_partition, filter_overlaps, similarity, ClonePair,
    DetectorConfig,
};
pub use error::{Error, Result};
pub use frontend::{load_grammar, GrammarBundle, GrammarSource, LanguageFrontend};
pub use pipeline::{run_pipeline, InputMode, PipelineConfig, RunSummary};
pub use simplify::{simplify, simplify_with, spt_stats, SimplifiedTree, SimplifyOptions, SizeMetric};
pub use tree::{NodeId, ParseNode, SourceFileTree, Token, TokenCategory};

#[cfg(test)]
pub(crate) fn test_fixture(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}
