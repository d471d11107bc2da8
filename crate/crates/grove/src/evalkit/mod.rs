//! Desk-scale evaluation kit: mutation-based clone injection, recall against
//! the injected ground truth, and precision sampling.
//!
//! [`mutate_corpus`] copies a corpus and plants mutants of chosen segments:
//! T1 mutants change only comments and layout, T2 mutants rename
//! identifiers/literals consistently within the segment, T3 mutants insert
//! or delete whole statements. Every mutant comes with its analytically
//! expected similarity, derived from token counts, so recall assertions
//! never depend on the detector being right.

mod mutate;
mod recall;
mod sample;

pub use mutate::{function_segments, mutate_corpus, LanguageProfile, MutatedCorpus, SegmentTarget};
pub use recall::{
    compute_recall, load_report, pair_matches, read_ground_truth, write_ground_truth,
    RecallReport, ReportedPair,
};
pub use sample::sample_for_precision;

use std::fmt;
use std::path::PathBuf;

/// Clone taxonomy used for ground truth and recall rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CloneType {
    T1,
    T2,
    T3,
}

impl fmt::Display for CloneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CloneType {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "T1" => Some(CloneType::T1),
            "T2" => Some(CloneType::T2),
            "T3" => Some(CloneType::T3),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CloneType::T1 => "T1",
            CloneType::T2 => "T2",
            CloneType::T3 => "T3",
        }
    }
}

/// A line-aligned block of one corpus file, relative to the corpus root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentRef {
    pub file: PathBuf,
    pub start_line: u32,
    pub end_line: u32,
}

/// What to do to a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationClass {
    /// Comment and whitespace edits only (a T1 clone of the original).
    FormatOnly,
    /// Rename identifiers/literals covering about `fraction` of the
    /// segment's bag tokens (a T2 clone).
    Rename { fraction: f64 },
    /// Insert or delete whole statements moving about `fraction` of the
    /// segment's bag tokens (a T3 clone).
    EditStatements { fraction: f64 },
}

impl MutationClass {
    pub fn clone_type(self) -> CloneType {
        match self {
            MutationClass::FormatOnly => CloneType::T1,
            MutationClass::Rename { .. } => CloneType::T2,
            MutationClass::EditStatements { .. } => CloneType::T3,
        }
    }
}

/// One planned mutant.
#[derive(Debug, Clone)]
pub struct MutantSpec {
    pub source: SegmentRef,
    pub class: MutationClass,
    pub seed: u64,
}

/// An injected clone pair: the original segment, the mutant segment, and the
/// similarity the construction guarantees.
#[derive(Debug, Clone)]
pub struct GroundTruthEntry {
    pub original: SegmentRef,
    pub mutant: SegmentRef,
    pub clone_type: CloneType,
    /// Similarity derived from token counts at construction time.
    pub expected_similarity: f64,
    pub original_tokens: u32,
    pub mutant_tokens: u32,
}

/// Clone-matcher settings: a ground-truth entry is only scored when both
/// sides meet the minimum size, and a reported pair matches it when both
/// reported segments cover at least `overlap_ratio` of the corresponding
/// ground-truth lines.
#[derive(Debug, Clone)]
pub struct MatcherConfig {
    pub min_lines: u32,
    pub min_tokens: u32,
    pub overlap_ratio: f64,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig {
            min_lines: 6,
            min_tokens: 50,
            overlap_ratio: 0.7,
        }
    }
}
