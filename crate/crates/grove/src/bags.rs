//! Token-bag generation.
//!
//! Every block node of a simplified tree can yield one bag: the multiset of
//! keyword, identifier and literal tokens in its origin span, bound to the
//! code segment (file, start line, end line, granularity) the block covers.
//! With a non-empty keyword list the keyword filter keeps only blocks
//! introduced by a keyword — blocks having at least one child subtree whose
//! tokens are all keywords — which is what classes, functions and loops look
//! like in most grammars.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::simplify::SimplifiedTree;
use crate::tree::{NodeId, SourceFileTree};

/// Set of keyword strings. Loaded from a UTF-8 file with one keyword per
/// line; `#` lines are comments and trailing whitespace is stripped. An empty
/// list means the keyword filter is inactive.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeywordList {
    entries: BTreeSet<String>,
}

impl KeywordList {
    pub fn empty() -> Self {
        KeywordList::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Ok(Self::from_lines(&text))
    }

    fn from_lines(text: &str) -> Self {
        let entries = text
            .lines()
            .map(|l| l.trim_end())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_string())
            .collect();
        KeywordList { entries }
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: Into<String>>(words: I) -> Self {
        KeywordList {
            entries: words.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|s| s.as_str())
    }

    pub(crate) fn into_set(self) -> std::collections::HashSet<String> {
        self.entries.into_iter().collect()
    }
}

/// Location of one block: file, 1-based inclusive line range, granularity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeSegment {
    pub file: Arc<str>,
    pub start_line: u32,
    pub end_line: u32,
    pub granularity: u32,
}

/// Multiset of bag-eligible token texts for one code segment.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenBag {
    pub segment: CodeSegment,
    /// Parse-tree node the bag was built from; with the file path this gives
    /// every bag a stable identity.
    pub origin: NodeId,
    counts: Vec<(Arc<str>, u32)>,
    pub total: u32,
}

impl TokenBag {
    pub fn new(segment: CodeSegment, origin: NodeId, mut counts: Vec<(Arc<str>, u32)>) -> Self {
        counts.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        counts.dedup_by(|next, kept| {
            if next.0 == kept.0 {
                kept.1 += next.1;
                true
            } else {
                false
            }
        });
        counts.retain(|(_, c)| *c > 0);
        let total = counts.iter().map(|(_, c)| *c).sum();
        TokenBag {
            segment,
            origin,
            counts,
            total,
        }
    }

    /// Distinct token texts with their counts, sorted by text.
    pub fn counts(&self) -> &[(Arc<str>, u32)] {
        &self.counts
    }

    pub fn count_of(&self, text: &str) -> u32 {
        self.counts
            .binary_search_by(|(t, _)| t.as_ref().cmp(text))
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    /// Multiset intersection size: sum over distinct texts of the smaller
    /// count.
    pub fn intersection(&self, other: &TokenBag) -> u64 {
        let (mut i, mut j) = (0, 0);
        let mut shared = 0u64;
        while i < self.counts.len() && j < other.counts.len() {
            match self.counts[i].0.cmp(&other.counts[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += u64::from(self.counts[i].1.min(other.counts[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        shared
    }
}

/// True when some child subtree on the node's frontier contains at least one
/// token and every one of them is in the keyword list.
///
/// Tokens accumulate a flag: bit 1 for a keyword, bits 1|2 for anything
/// else; a child passes when its flag ends up exactly 1. A token-less child
/// stays at 0 and never passes.
pub fn keyword_filter(
    tree: &SourceFileTree,
    spt: &SimplifiedTree,
    node: usize,
    keywords: &KeywordList,
) -> bool {
    assert!(!keywords.is_empty(), "keyword filter needs a non-empty list");
    for &child in &spt.nodes()[node].frontier {
        let child = tree.node(child).expect("validated");
        let mut flag = 0u8;
        for token in tree.span_tokens(child) {
            flag |= if keywords.contains(&token.text) { 1 } else { 3 };
            if flag == 3 {
                break;
            }
        }
        if flag == 1 {
            return true;
        }
    }
    false
}

/// Builds one bag per selected block node, in pre-order. With an empty
/// keyword list every block is selected; otherwise only blocks passing
/// [`keyword_filter`]. Blocks containing no bag-eligible token yield nothing.
pub fn generate_bags(
    tree: &SourceFileTree,
    spt: &SimplifiedTree,
    keywords: &KeywordList,
) -> Vec<TokenBag> {
    let file: Arc<str> = Arc::from(tree.path());
    let mut interner: BTreeMap<&str, Arc<str>> = BTreeMap::new();
    let mut bags = Vec::new();

    for (idx, node) in spt.nodes().iter().enumerate() {
        if node.size == 0 {
            continue;
        }
        if !keywords.is_empty() && !keyword_filter(tree, spt, idx, keywords) {
            continue;
        }
        let origin = tree.node(node.origin).expect("validated");
        let (start_line, end_line) = tree
            .line_range(origin)
            .expect("non-empty bag has tokens");

        let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
        for token in tree.span_tokens(origin) {
            if token.category.bag_eligible() {
                *counts.entry(token.text.as_str()).or_insert(0) += 1;
            }
        }
        let counts: Vec<(Arc<str>, u32)> = counts
            .into_iter()
            .map(|(text, count)| {
                let interned = interner
                    .entry(text)
                    .or_insert_with(|| Arc::from(text))
                    .clone();
                (interned, count)
            })
            .collect();

        bags.push(TokenBag::new(
            CodeSegment {
                file: file.clone(),
                start_line,
                end_line,
                granularity: node.granularity,
            },
            node.origin,
            counts,
        ));
    }
    bags
}

/// Optional restrictions applied after generation: granularity window and
/// bag-size window.
#[derive(Debug, Clone, Default)]
pub struct BagLimits {
    pub min_granularity: Option<u32>,
    pub max_granularity: Option<u32>,
    pub min_tokens: Option<u32>,
    pub max_tokens: Option<u32>,
}

impl BagLimits {
    pub fn is_unrestricted(&self) -> bool {
        self.min_granularity.is_none()
            && self.max_granularity.is_none()
            && self.min_tokens.is_none()
            && self.max_tokens.is_none()
    }

    pub fn admits(&self, bag: &TokenBag) -> bool {
        let g = bag.segment.granularity;
        self.min_granularity.is_none_or(|lo| g >= lo)
            && self.max_granularity.is_none_or(|hi| g <= hi)
            && self.min_tokens.is_none_or(|lo| bag.total >= lo)
            && self.max_tokens.is_none_or(|hi| bag.total <= hi)
    }

    pub fn retain(&self, bags: &mut Vec<TokenBag>) {
        if !self.is_unrestricted() {
            bags.retain(|b| self.admits(b));
        }
    }
}

/// Writes the debug bag dump: one line per bag with the segment, the total,
/// and the sorted `token:count` pairs.
pub fn write_bag_dump<W: Write>(bags: &[TokenBag], mut out: W) -> std::io::Result<()> {
    for bag in bags {
        write!(
            out,
            "{}\t{}\t{}\t{}\t{}\t",
            bag.segment.file,
            bag.segment.start_line,
            bag.segment.end_line,
            bag.segment.granularity,
            bag.total
        )?;
        let mut first = true;
        for (text, count) in bag.counts() {
            if !first {
                out.write_all(b" ")?;
            }
            first = false;
            write!(out, "{}:{}", text.escape_default(), count)?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplify::simplify;
    use crate::tree::testutil::*;
    use crate::tree::{NodeSpec, TokenCategory};

    fn keywords(words: &[&str]) -> KeywordList {
        KeywordList::from_words(words.iter().copied())
    }

    /// while (x < 10) { .. } as a two-child block: a keyword terminal and an
    /// expression subtree.
    fn while_tree() -> SourceFileTree {
        let tokens = vec![
            tok(0, "while", TokenCategory::Keyword),
            tok(1, "x", TokenCategory::Identifier),
            tok(2, "<", TokenCategory::Other),
            tok(3, "10", TokenCategory::Literal),
        ];
        let specs = vec![
            NodeSpec::internal("while_stmt", 0, 4, vec![1, 2]),
            NodeSpec::terminal(0),
            NodeSpec::internal("cond", 1, 4, vec![3, 4, 5]),
            NodeSpec::terminal(1),
            NodeSpec::terminal(2),
            NodeSpec::terminal(3),
        ];
        SourceFileTree::new("w.src", tokens, specs, NodeId(0)).unwrap()
    }

    #[test]
    fn keyword_only_child_passes_the_filter() {
        let tree = while_tree();
        let spt = simplify(&tree, 1);
        assert!(keyword_filter(&tree, &spt, 0, &keywords(&["while"])));
    }

    #[test]
    fn nodes_whose_children_all_mix_in_identifiers_fail() {
        let tree = while_tree();
        let spt = simplify(&tree, 1);
        // "x" and "10" are not keywords, and the only all-keyword child was
        // "while" — with a list that does not contain it, nothing passes.
        assert!(!keyword_filter(&tree, &spt, 0, &keywords(&["if"])));
    }

    #[test]
    fn token_less_child_never_passes() {
        // Root with a single empty-span internal child.
        let tokens = ident_tokens(&["x"]);
        let specs = vec![
            NodeSpec::internal("root", 0, 1, vec![1]),
            NodeSpec::internal("hole", 0, 0, vec![]),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        let spt = simplify(&tree, 1);
        assert!(!keyword_filter(&tree, &spt, 0, &keywords(&["x"])));
    }

    #[test]
    fn reference_tree_yields_four_bags_without_filter() {
        let tree = crate::simplify::tests::reference_tree();
        let spt = simplify(&tree, 2);
        let bags = generate_bags(&tree, &spt, &KeywordList::empty());
        let mut granularities: Vec<u32> =
            bags.iter().map(|b| b.segment.granularity).collect();
        granularities.sort_unstable();
        assert_eq!(granularities, vec![0, 1, 1, 2]);
        for bag in &bags {
            let origin = tree.node(bag.origin).unwrap();
            assert_eq!(bag.total, origin.size);
        }
    }

    #[test]
    fn filtered_bags_are_a_subset_of_unfiltered() {
        let tree = while_tree();
        let spt = simplify(&tree, 1);
        let all = generate_bags(&tree, &spt, &KeywordList::empty());
        let filtered = generate_bags(&tree, &spt, &keywords(&["while"]));
        let all_origins: BTreeSet<NodeId> = all.iter().map(|b| b.origin).collect();
        for bag in &filtered {
            assert!(all_origins.contains(&bag.origin));
        }
        assert!(filtered.len() <= all.len());
    }

    #[test]
    fn filter_matches_independent_traversal_on_java_fixture() {
        let bundle = crate::frontend::GrammarBundle::builtin("java")
            .with_keywords(crate::test_fixture("keywords/java.txt"));
        let fe = crate::frontend::load_grammar(&bundle).unwrap();
        let src = std::fs::read_to_string(crate::test_fixture("java/Matrix.java")).unwrap();
        let tree = fe.parse_source("Matrix.java", &src).unwrap();
        let spt = simplify(&tree, 2);
        let list = KeywordList::load(&crate::test_fixture("keywords/java.txt")).unwrap();

        let bags = generate_bags(&tree, &spt, &list);

        // Brute-force recount: an SPT node qualifies iff some frontier child
        // subtree is non-empty and all-keyword.
        let expected = spt
            .nodes()
            .iter()
            .filter(|n| n.size > 0)
            .filter(|n| {
                n.frontier.iter().any(|&c| {
                    let child = tree.node(c).unwrap();
                    let toks = tree.span_tokens(child);
                    !toks.is_empty() && toks.iter().all(|t| list.contains(&t.text))
                })
            })
            .count();
        assert_eq!(bags.len(), expected);
        assert!(!bags.is_empty());
    }

    #[test]
    fn single_keyword_list_targets_one_construct() {
        // A list containing only "for" selects exactly the blocks a `for`
        // keyword introduces.
        let bundle = crate::frontend::GrammarBundle::builtin("java")
            .with_keywords(crate::test_fixture("keywords/java.txt"));
        let fe = crate::frontend::load_grammar(&bundle).unwrap();
        let src = std::fs::read_to_string(crate::test_fixture("java/Matrix.java")).unwrap();
        let tree = fe.parse_source("Matrix.java", &src).unwrap();
        let spt = simplify(&tree, 2);

        let bags = generate_bags(&tree, &spt, &keywords(&["for"]));
        assert!(!bags.is_empty());
        for bag in &bags {
            let origin = tree.node(bag.origin).unwrap();
            assert_eq!(origin.rule, "for_statement", "only for-loops pass");
        }
    }

    #[test]
    fn segment_lines_cover_sibling_shared_lines() {
        // Re-lexing the segment's line range yields a superset of the bag,
        // because sibling code may share the boundary lines.
        let bundle = crate::frontend::GrammarBundle::builtin("java")
            .with_keywords(crate::test_fixture("keywords/java.txt"));
        let fe = crate::frontend::load_grammar(&bundle).unwrap();
        let src = std::fs::read_to_string(crate::test_fixture("java/Matrix.java")).unwrap();
        let tree = fe.parse_source("Matrix.java", &src).unwrap();
        let spt = simplify(&tree, 2);
        for bag in generate_bags(&tree, &spt, &KeywordList::empty()) {
            let mut by_line: BTreeMap<&str, u32> = BTreeMap::new();
            for t in tree.tokens() {
                if t.category.bag_eligible()
                    && t.line >= bag.segment.start_line
                    && t.line <= bag.segment.end_line
                {
                    *by_line.entry(t.text.as_str()).or_insert(0) += 1;
                }
            }
            for (text, count) in bag.counts() {
                assert!(by_line.get(text.as_ref()).copied().unwrap_or(0) >= *count);
            }
        }
    }

    #[test]
    fn bag_dump_lists_segment_total_and_sorted_pairs() {
        let tree = while_tree();
        let spt = simplify(&tree, 1);
        let bags = generate_bags(&tree, &spt, &KeywordList::empty());
        let mut out = Vec::new();
        write_bag_dump(&bags, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first, "w.src\t1\t4\t0\t3\t10:1 while:1 x:1");
    }

    #[test]
    fn bag_construction_coalesces_duplicate_texts() {
        let bag = TokenBag::new(
            CodeSegment {
                file: std::sync::Arc::from("f"),
                start_line: 1,
                end_line: 1,
                granularity: 0,
            },
            NodeId(0),
            vec![
                (std::sync::Arc::from("a"), 2),
                (std::sync::Arc::from("b"), 1),
                (std::sync::Arc::from("a"), 3),
            ],
        );
        assert_eq!(bag.total, 6);
        assert_eq!(bag.count_of("a"), 5);
        assert_eq!(bag.counts().len(), 2);
    }

    #[test]
    fn keyword_list_loading() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kw.txt");

        std::fs::write(&path, "if\nwhile\nif\n").unwrap();
        let list = KeywordList::load(&path).unwrap();
        assert_eq!(list.len(), 2);
        assert!(list.contains("if") && list.contains("while"));

        std::fs::write(&path, "# java\nclass\n").unwrap();
        let list = KeywordList::load(&path).unwrap();
        assert_eq!(list.len(), 1);
        assert!(list.contains("class"));

        std::fs::write(&path, "").unwrap();
        assert!(KeywordList::load(&path).unwrap().is_empty());

        assert!(KeywordList::load(&dir.path().join("missing.txt")).is_err());
    }

    #[test]
    fn bag_limits_window_bags() {
        let tree = crate::simplify::tests::reference_tree();
        let spt = simplify(&tree, 1);
        let mut bags = generate_bags(&tree, &spt, &KeywordList::empty());
        let limits = BagLimits {
            min_granularity: Some(1),
            max_granularity: Some(1),
            min_tokens: Some(3),
            max_tokens: None,
        };
        limits.retain(&mut bags);
        assert!(bags
            .iter()
            .all(|b| b.segment.granularity == 1 && b.total >= 3));
    }
}
