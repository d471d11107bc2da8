//! Corpus mutation.
//!
//! Mutations are computed on the token stream and the statement boundaries
//! of the parse tree, so the machinery is language-generic; the only
//! language knowledge needed is the line-comment prefix and which rule names
//! denote statements. Every mutant is re-parsed, its segment is located in
//! the mutated file, and the actual before/after token multisets are checked
//! against the analytically expected similarity. A mutation that breaks
//! parsability or misses its arithmetic is retried with a fresh seed, a
//! bounded number of times.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GroundTruthEntry, MutantSpec, MutationClass, SegmentRef};
use crate::error::{Error, Result};
use crate::frontend::LanguageFrontend;
use crate::tree::{NodeId, ParseNode, SourceFileTree, Token, TokenCategory};

const MAX_ATTEMPTS: u32 = 6;

/// Language facts the mutator needs.
#[derive(Debug, Clone)]
pub struct LanguageProfile {
    pub line_comment: String,
    statement_exact: Vec<String>,
    statement_suffix: Vec<String>,
}

impl LanguageProfile {
    pub fn java() -> Self {
        LanguageProfile {
            line_comment: "//".to_string(),
            statement_exact: vec!["local_variable_declaration".to_string()],
            statement_suffix: vec!["statement".to_string()],
        }
    }

    pub fn is_statement(&self, rule: &str) -> bool {
        self.statement_exact.iter().any(|r| r == rule)
            || self.statement_suffix.iter().any(|s| rule.ends_with(s.as_str()))
    }
}

/// A candidate mutation target.
#[derive(Debug, Clone)]
pub struct SegmentTarget {
    pub segment: SegmentRef,
    pub node: NodeId,
    pub bag_tokens: u32,
    pub lines: u32,
}

/// Lists line-aligned blocks matching the given rule names, largest first —
/// the natural pool to draw mutation targets from.
pub fn function_segments(
    tree: &SourceFileTree,
    file: &Path,
    rules: &[&str],
) -> Vec<SegmentTarget> {
    let mut out = Vec::new();
    for node in tree.nodes() {
        if !rules.contains(&node.rule.as_str()) {
            continue;
        }
        if let Some((start, end)) = tree.line_range(node) {
            out.push(SegmentTarget {
                segment: SegmentRef {
                    file: file.to_path_buf(),
                    start_line: start,
                    end_line: end,
                },
                node: node.id,
                bag_tokens: node.size,
                lines: end - start + 1,
            });
        }
    }
    out.sort_by_key(|t| std::cmp::Reverse(t.bag_tokens));
    out
}

/// Result of mutating a corpus.
#[derive(Debug)]
pub struct MutatedCorpus {
    pub root: PathBuf,
    pub ground_truth: Vec<GroundTruthEntry>,
    /// Seed retries that were needed across all mutants.
    pub retries: u32,
}

/// Copies `corpus_root` into `out_root` and plants one mutant file per spec.
/// Mutant files sit next to their originals as `<stem>__m<i>.<ext>`. Ground
/// truth records every injected pair exactly once, with segment paths under
/// `out_root`.
pub fn mutate_corpus(
    frontend: &LanguageFrontend,
    corpus_root: &Path,
    out_root: &Path,
    specs: &[MutantSpec],
    profile: &LanguageProfile,
) -> Result<MutatedCorpus> {
    std::fs::create_dir_all(out_root).map_err(|e| Error::file(out_root, e))?;
    for entry in walkdir::WalkDir::new(corpus_root) {
        let entry = entry.map_err(|e| Error::Config(e.to_string()))?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(corpus_root)
            .expect("walkdir stays under root");
        let dest = out_root.join(rel);
        if let Some(parent) = dest.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::file(parent, e))?;
        }
        std::fs::copy(entry.path(), &dest).map_err(|e| Error::file(&dest, e))?;
    }

    let mut ground_truth = Vec::new();
    let mut retries = 0u32;
    for (index, spec) in specs.iter().enumerate() {
        let entry = plant_mutant(frontend, corpus_root, out_root, spec, index, profile, &mut retries)?;
        ground_truth.push(entry);
    }
    Ok(MutatedCorpus {
        root: out_root.to_path_buf(),
        ground_truth,
        retries,
    })
}

struct FileView {
    source: String,
    tree: SourceFileTree,
    /// Byte offset of the start of each 1-based line.
    line_starts: Vec<usize>,
}

impl FileView {
    fn load(frontend: &LanguageFrontend, path: &Path, label: &str) -> Result<Self> {
        let source = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_source(frontend, source, label)
    }

    fn from_source(frontend: &LanguageFrontend, source: String, label: &str) -> Result<Self> {
        let tree = frontend.parse_source(label, &source)?;
        let mut line_starts = vec![0usize];
        for (i, b) in source.bytes().enumerate() {
            if b == b'\n' {
                line_starts.push(i + 1);
            }
        }
        Ok(FileView {
            source,
            tree,
            line_starts,
        })
    }

    fn token_offset(&self, token: &Token) -> usize {
        self.line_starts[token.line as usize - 1] + token.column as usize - 1
    }

    fn token_end(&self, token: &Token) -> usize {
        self.token_offset(token) + token.text.len()
    }

    /// The node matching a segment: smallest span whose line range equals
    /// the segment, preferring the outermost on ties.
    fn locate(&self, start_line: u32, end_line: u32) -> Option<&ParseNode> {
        self.tree
            .nodes()
            .iter()
            .filter(|n| !n.is_terminal())
            .find(|n| self.tree.line_range(n) == Some((start_line, end_line)))
    }

    fn bag(&self, node: &ParseNode) -> BTreeMap<&str, u32> {
        let mut counts = BTreeMap::new();
        for t in self.tree.span_tokens(node) {
            if t.category.bag_eligible() {
                *counts.entry(t.text.as_str()).or_insert(0) += 1;
            }
        }
        counts
    }
}

fn bag_total(bag: &BTreeMap<&str, u32>) -> u32 {
    bag.values().sum()
}

fn bag_similarity(a: &BTreeMap<&str, u32>, b: &BTreeMap<&str, u32>) -> f64 {
    let mut shared = 0u64;
    for (text, ca) in a {
        if let Some(cb) = b.get(text) {
            shared += u64::from(*ca.min(cb));
        }
    }
    shared as f64 / f64::from(bag_total(a).max(bag_total(b)))
}

fn mutant_file_name(rel: &Path, index: usize) -> PathBuf {
    let stem = rel.file_stem().and_then(|s| s.to_str()).unwrap_or("file");
    let ext = rel.extension().and_then(|s| s.to_str()).unwrap_or("txt");
    rel.with_file_name(format!("{stem}__m{index}.{ext}"))
}

#[allow(clippy::too_many_arguments)]
fn plant_mutant(
    frontend: &LanguageFrontend,
    corpus_root: &Path,
    out_root: &Path,
    spec: &MutantSpec,
    index: usize,
    profile: &LanguageProfile,
    retries: &mut u32,
) -> Result<GroundTruthEntry> {
    let original_path = corpus_root.join(&spec.source.file);
    let view = FileView::load(frontend, &original_path, &spec.source.file.to_string_lossy())?;
    let node = view
        .locate(spec.source.start_line, spec.source.end_line)
        .ok_or_else(|| {
            Error::Config(format!(
                "no block spans lines {}..{} of {}",
                spec.source.start_line,
                spec.source.end_line,
                spec.source.file.display()
            ))
        })?
        .clone();
    let original_bag = view.bag(&node);
    let original_tokens = bag_total(&original_bag);

    let mut last_err: Option<Error> = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(u64::from(attempt) << 32));
        let outcome = match spec.class {
            MutationClass::FormatOnly => apply_format_only(&view, &node, profile, &mut rng),
            MutationClass::Rename { fraction } => apply_rename(&view, &node, fraction, &mut rng),
            MutationClass::EditStatements { fraction } => {
                apply_statement_edit(&view, &node, fraction, profile, &mut rng)
            }
        };
        let edit = match outcome {
            Ok(edit) => edit,
            Err(e) => {
                last_err = Some(e);
                *retries += 1;
                continue;
            }
        };

        // Reparse and check the construction arithmetic before accepting.
        let label = format!("mutant of {}", spec.source.file.display());
        let mutated = match FileView::from_source(frontend, edit.text.clone(), &label) {
            Ok(v) => v,
            Err(e) => {
                last_err = Some(e);
                *retries += 1;
                continue;
            }
        };
        let new_start = spec.source.start_line;
        let new_end = (spec.source.end_line as i64 + edit.line_delta) as u32;
        let Some(mutant_node) = mutated.locate(new_start, new_end) else {
            last_err = Some(Error::Config("mutated block not found after edit".into()));
            *retries += 1;
            continue;
        };
        let mutant_bag = mutated.bag(mutant_node);
        let actual = bag_similarity(&original_bag, &mutant_bag);
        if actual != edit.expected_similarity {
            last_err = Some(Error::Config(format!(
                "similarity drifted: expected {} got {actual}",
                edit.expected_similarity
            )));
            *retries += 1;
            continue;
        }

        let mutant_rel = mutant_file_name(&spec.source.file, index);
        let mutant_path = out_root.join(&mutant_rel);
        std::fs::write(&mutant_path, &edit.text).map_err(|e| Error::file(&mutant_path, e))?;
        let mutant_tokens = bag_total(&mutant_bag);
        return Ok(GroundTruthEntry {
            original: SegmentRef {
                file: out_root.join(&spec.source.file),
                start_line: spec.source.start_line,
                end_line: spec.source.end_line,
            },
            mutant: SegmentRef {
                file: mutant_path,
                start_line: new_start,
                end_line: new_end,
            },
            clone_type: spec.class.clone_type(),
            expected_similarity: edit.expected_similarity,
            original_tokens,
            mutant_tokens,
        });
    }

    Err(last_err.unwrap_or(Error::MutationFailed {
        path: original_path,
        attempts: MAX_ATTEMPTS,
    }))
}

struct Edit {
    text: String,
    /// How many lines the segment end moved.
    line_delta: i64,
    expected_similarity: f64,
}

/// Comment insertions and reindentation inside the segment. The bag must
/// stay identical, so the expected similarity is exactly 1.
fn apply_format_only(
    view: &FileView,
    node: &ParseNode,
    profile: &LanguageProfile,
    rng: &mut ChaCha8Rng,
) -> Result<Edit> {
    let (start, end) = view
        .tree
        .line_range(node)
        .ok_or_else(|| Error::Config("segment has no tokens".into()))?;
    let mut lines: Vec<String> = view.source.lines().map(str::to_string).collect();

    // Reindent a few lines.
    for idx in start..=end {
        let line = &mut lines[idx as usize - 1];
        if !line.trim().is_empty() && rng.random_bool(0.4) {
            line.insert_str(0, "  ");
        }
    }

    // Insert full-line comments between segment lines; descending insertion
    // order keeps earlier positions valid.
    let mut delta = 0i64;
    if end > start {
        let mut points: Vec<u32> = (0..rng.random_range(1..4u32))
            .map(|_| rng.random_range(start + 1..=end))
            .collect();
        points.sort_unstable_by(|a, b| b.cmp(a));
        delta = points.len() as i64;
        for (i, at) in points.into_iter().enumerate() {
            lines.insert(
                at as usize - 1,
                format!("{} edit marker {i}", profile.line_comment),
            );
        }
    }

    let mut text = lines.join("\n");
    if view.source.ends_with('\n') {
        text.push('\n');
    }
    Ok(Edit {
        text,
        line_delta: delta,
        expected_similarity: 1.0,
    })
}

/// Renames identifiers (and integer literals) consistently within the
/// segment until roughly `fraction` of its bag tokens changed. The new names
/// never collide with any token of the file, so the expected similarity is
/// exactly `(total - renamed) / total`.
fn apply_rename(
    view: &FileView,
    node: &ParseNode,
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Edit> {
    let in_segment = view.tree.span_tokens(node);
    let file_texts: BTreeSet<&str> = view.tree.tokens().iter().map(|t| t.text.as_str()).collect();

    let mut occurrences: BTreeMap<&str, u32> = BTreeMap::new();
    for t in in_segment {
        let renamable = t.category == TokenCategory::Identifier
            || (t.category == TokenCategory::Literal
                && t.text.bytes().all(|b| b.is_ascii_digit()));
        if renamable {
            *occurrences.entry(t.text.as_str()).or_insert(0) += 1;
        }
    }
    if occurrences.is_empty() {
        return Err(Error::Config("segment has no renamable tokens".into()));
    }

    let total = node.size;
    let target = (fraction * f64::from(total)).round() as u32;
    let mut distinct: Vec<(&str, u32)> = occurrences.iter().map(|(t, c)| (*t, *c)).collect();
    distinct.shuffle(rng);

    let mut chosen: BTreeMap<&str, String> = BTreeMap::new();
    let mut renamed = 0u32;
    let mut fresh = 0u32;
    for (text, count) in distinct {
        if renamed >= target {
            break;
        }
        let replacement = loop {
            let candidate = if text.bytes().all(|b| b.is_ascii_digit()) {
                format!("9{:04}", fresh)
            } else {
                format!("zz{:03}", fresh)
            };
            fresh += 1;
            if !file_texts.contains(candidate.as_str()) {
                break candidate;
            }
        };
        chosen.insert(text, replacement);
        renamed += count;
    }
    if renamed == 0 {
        return Err(Error::Config("rename fraction selected nothing".into()));
    }

    // Splice replacements back to front so earlier offsets stay valid.
    let mut text = view.source.clone();
    let mut edits: Vec<(usize, usize, &str)> = Vec::new();
    for t in in_segment {
        if let Some(replacement) = chosen.get(t.text.as_str()) {
            edits.push((view.token_offset(t), view.token_end(t), replacement));
        }
    }
    edits.sort_by_key(|e| std::cmp::Reverse(e.0));
    for (from, to, replacement) in edits {
        text.replace_range(from..to, replacement);
    }

    Ok(Edit {
        text,
        line_delta: 0,
        expected_similarity: f64::from(total - renamed) / f64::from(total),
    })
}

/// Deletes or duplicates whole statements within the segment until roughly
/// `fraction` of its bag tokens moved. Deletion gives `(total - moved) /
/// total`, insertion `total / (total + moved)`.
fn apply_statement_edit(
    view: &FileView,
    node: &ParseNode,
    fraction: f64,
    profile: &LanguageProfile,
    rng: &mut ChaCha8Rng,
) -> Result<Edit> {
    // Top-level statements of the segment: statement nodes in the subtree
    // with no statement ancestor below the segment node itself.
    let mut statements: Vec<&ParseNode> = Vec::new();
    let mut stack: Vec<NodeId> = view
        .tree
        .node(node.id)
        .expect("validated")
        .children
        .clone();
    while let Some(id) = stack.pop() {
        let n = view.tree.node(id).expect("validated");
        if n.is_terminal() {
            continue;
        }
        if profile.is_statement(&n.rule) && n.size > 0 {
            statements.push(n);
        } else {
            stack.extend(n.children.iter().copied());
        }
    }

    // Only statements owning whole lines are safe to splice as lines.
    let segment_tokens = view.tree.span_tokens(node);
    let owns_lines = |s: &ParseNode| {
        let Some((ls, le)) = view.tree.line_range(s) else {
            return false;
        };
        segment_tokens
            .iter()
            .filter(|t| t.line >= ls && t.line <= le)
            .all(|t| t.index >= s.first && t.index < s.last)
    };
    let mut candidates: Vec<&ParseNode> = statements.into_iter().filter(|s| owns_lines(s)).collect();
    if candidates.is_empty() {
        return Err(Error::Config("segment has no line-aligned statements".into()));
    }
    candidates.shuffle(rng);

    let total = node.size;
    let target = (fraction * f64::from(total)).round().max(1.0) as u32;
    let mut moved = 0u32;
    let mut picked: Vec<&ParseNode> = Vec::new();
    for s in &candidates {
        if moved >= target {
            break;
        }
        // Keep at least one statement when deleting.
        if picked.len() + 1 == candidates.len() {
            break;
        }
        picked.push(s);
        moved += s.size;
    }
    if picked.is_empty() {
        return Err(Error::Config("statement edit selected nothing".into()));
    }

    let delete = rng.random_bool(0.5);
    let mut lines: Vec<String> = view.source.lines().map(str::to_string).collect();
    let mut spans: Vec<(u32, u32)> = picked
        .iter()
        .map(|s| view.tree.line_range(s).expect("non-empty statement"))
        .collect();
    spans.sort_unstable();

    let mut delta = 0i64;
    if delete {
        for &(ls, le) in spans.iter().rev() {
            lines.drain(ls as usize - 1..le as usize);
            delta -= i64::from(le - ls + 1);
        }
    } else {
        for &(ls, le) in spans.iter().rev() {
            let copy: Vec<String> = lines[ls as usize - 1..le as usize].to_vec();
            let at = le as usize;
            for (i, line) in copy.into_iter().enumerate() {
                lines.insert(at + i, line);
            }
            delta += i64::from(le - ls + 1);
        }
    }

    let mut text = lines.join("\n");
    if view.source.ends_with('\n') {
        text.push('\n');
    }
    let expected = if delete {
        f64::from(total - moved) / f64::from(total)
    } else {
        f64::from(total) / f64::from(total + moved)
    };
    Ok(Edit {
        text,
        line_delta: delta,
        expected_similarity: expected,
    })
}
