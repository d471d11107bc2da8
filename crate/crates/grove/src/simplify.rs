//! Parse-tree simplification.
//!
//! Raw parse trees are poor block inventories: grammars wrap the same token
//! run in chains of single-derivation rules, and most subtrees are smaller
//! than anything worth comparing. Simplification walks the tree in pre-order
//! and, at each node, first merges away every first child covering the same
//! tokens as the node itself, then — if the node is below the configured
//! minimum size — deletes all of its children, leaving it a leaf.
//!
//! The result is a [`SimplifiedTree`] of block nodes. A node's depth in the
//! simplified tree is its *granularity*: 0 is the whole file, larger values
//! are finer blocks. Token terminals are never block nodes themselves, but
//! they remain visible in each block's [`frontier`](SptNode::frontier), which
//! the keyword filter inspects.

use std::collections::BTreeMap;

use crate::tree::{NodeId, SourceFileTree};

/// Which token count drives merging and pruning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeMetric {
    /// Keywords, identifiers and literals only.
    #[default]
    BagEligible,
    /// Every token in the span, punctuation included.
    AllTokens,
}

#[derive(Debug, Clone)]
pub struct SimplifyOptions {
    /// Nodes smaller than this keep no children.
    pub min_size: u32,
    pub metric: SizeMetric,
}

impl SimplifyOptions {
    pub fn new(min_size: u32) -> Self {
        SimplifyOptions {
            min_size,
            metric: SizeMetric::default(),
        }
    }
}

/// One block node of the simplified tree.
#[derive(Debug, Clone)]
pub struct SptNode {
    /// The parse-tree node this block corresponds to. Merging never changes
    /// it, so the block's token multiset is exactly the origin's span.
    pub origin: NodeId,
    /// Depth in the simplified tree; root = 0.
    pub granularity: u32,
    /// Bag-eligible token count of the origin span.
    pub size: u32,
    /// Indexes of child block nodes within the simplified tree.
    pub children: Vec<usize>,
    /// Effective parse-tree children after merging and pruning, terminals
    /// included. Empty for nodes pruned below the minimum size.
    pub frontier: Vec<NodeId>,
}

/// Simplified tree in pre-order; element 0 is the root.
#[derive(Debug, Clone)]
pub struct SimplifiedTree {
    nodes: Vec<SptNode>,
}

impl SimplifiedTree {
    pub fn nodes(&self) -> &[SptNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &SptNode {
        &self.nodes[0]
    }
}

/// Simplifies with the default bag-eligible metric.
pub fn simplify(tree: &SourceFileTree, min_size: u32) -> SimplifiedTree {
    simplify_with(tree, &SimplifyOptions::new(min_size))
}

/// Simplifies a parse tree into its block inventory.
pub fn simplify_with(tree: &SourceFileTree, opts: &SimplifyOptions) -> SimplifiedTree {
    assert!(opts.min_size >= 1, "min_size must be at least 1");

    let metric = |id: NodeId| -> u32 {
        let node = tree.node(id).expect("node ids are validated");
        match opts.metric {
            SizeMetric::BagEligible => node.size,
            SizeMetric::AllTokens => node.span_len(),
        }
    };

    let mut nodes: Vec<SptNode> = Vec::new();
    // (parse node, granularity, parent index in `nodes`)
    let mut stack: Vec<(NodeId, u32, Option<usize>)> = vec![(tree.root_id(), 0, None)];

    while let Some((origin, granularity, parent)) = stack.pop() {
        let own = metric(origin);
        let mut frontier = tree.node(origin).expect("validated").children.clone();

        // Merge every first child that covers the same tokens as this node.
        // Merged nodes disappear; their children are hoisted in place.
        while let Some(&head) = frontier.first() {
            if metric(head) != own {
                break;
            }
            let head_children = &tree.node(head).expect("validated").children;
            let mut merged = Vec::with_capacity(head_children.len() + frontier.len() - 1);
            merged.extend_from_slice(head_children);
            merged.extend_from_slice(&frontier[1..]);
            frontier = merged;
        }

        // Too small: drop the whole frontier, making this node a leaf.
        if own < opts.min_size {
            frontier.clear();
        }

        let idx = nodes.len();
        nodes.push(SptNode {
            origin,
            granularity,
            size: tree.node(origin).expect("validated").size,
            children: Vec::new(),
            frontier: frontier.clone(),
        });
        if let Some(p) = parent {
            nodes[p].children.push(idx);
        }

        // Only internal parse nodes become block nodes of their own; pushing
        // in reverse keeps sibling order across the pre-order pops.
        for &child in frontier
            .iter()
            .rev()
            .filter(|&&c| !tree.node(c).expect("validated").is_terminal())
        {
            stack.push((child, granularity + 1, Some(idx)));
        }
    }

    SimplifiedTree { nodes }
}

/// Node count per granularity value.
pub fn spt_stats(spt: &SimplifiedTree) -> BTreeMap<u32, u64> {
    let mut stats = BTreeMap::new();
    for node in spt.nodes() {
        *stats.entry(node.granularity).or_insert(0) += 1;
    }
    stats
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tree::testutil::*;
    use crate::tree::{NodeSpec, SourceFileTree};

    /// Builds the eleven-node reference tree used across the test suite:
    /// a root chain 0→1 over six tokens, with 1 → {2, 3}, 2 → {4, 5},
    /// 3 → {6, 7, 8} and 7 → {9, 10}; nodes 4, 5, 6, 8, 9, 10 are terminals.
    pub(crate) fn reference_tree() -> SourceFileTree {
        let tokens = ident_tokens(&["a", "b", "c", "d", "e", "f"]);
        let specs = vec![
            NodeSpec::internal("n0", 0, 6, vec![1]),
            NodeSpec::internal("n1", 0, 6, vec![2, 3]),
            NodeSpec::internal("n2", 0, 2, vec![4, 5]),
            NodeSpec::internal("n3", 2, 6, vec![6, 7, 8]),
            NodeSpec::terminal(0),
            NodeSpec::terminal(1),
            NodeSpec::terminal(2),
            NodeSpec::internal("n7", 3, 5, vec![9, 10]),
            NodeSpec::terminal(5),
            NodeSpec::terminal(3),
            NodeSpec::terminal(4),
        ];
        SourceFileTree::new("ref.src", tokens, specs, NodeId(0)).unwrap()
    }

    #[test]
    fn reference_tree_simplifies_to_four_blocks() {
        let tree = reference_tree();
        let spt = simplify(&tree, 2);
        let got: Vec<(u32, u32)> = spt
            .nodes()
            .iter()
            .map(|n| (n.origin.0, n.granularity))
            .collect();
        let mut sorted = got.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![(0, 0), (2, 1), (3, 1), (7, 2)]);
    }

    #[test]
    fn reference_tree_stats() {
        let tree = reference_tree();
        let spt = simplify(&tree, 2);
        let stats = spt_stats(&spt);
        assert_eq!(stats, BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(stats.values().sum::<u64>() as usize, spt.len());
    }

    #[test]
    fn undersized_node_survives_as_leaf() {
        // One internal node wrapping a single identifier, min_size 2.
        let tokens = ident_tokens(&["x"]);
        let specs = vec![
            NodeSpec::internal("wrap", 0, 1, vec![1]),
            NodeSpec::terminal(0),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        let spt = simplify(&tree, 2);
        assert_eq!(spt.len(), 1);
        assert_eq!(spt.root().origin, NodeId(0));
        assert_eq!(spt.root().granularity, 0);
        assert!(spt.root().frontier.is_empty());
    }

    #[test]
    fn same_span_chain_collapses_to_one_node() {
        // root → a → b, all spanning the same two tokens.
        let tokens = ident_tokens(&["x", "y"]);
        let specs = vec![
            NodeSpec::internal("root", 0, 2, vec![1]),
            NodeSpec::internal("a", 0, 2, vec![2]),
            NodeSpec::internal("b", 0, 2, vec![3, 4]),
            NodeSpec::terminal(0),
            NodeSpec::terminal(1),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        let spt = simplify(&tree, 2);
        assert_eq!(spt.len(), 1);
        assert_eq!(spt.root().origin, NodeId(0));
        // The chain bottom's terminals were hoisted into the survivor.
        assert_eq!(spt.root().frontier, vec![NodeId(3), NodeId(4)]);
    }

    #[test]
    fn empty_file_keeps_only_the_root() {
        let specs = vec![NodeSpec::internal("program", 0, 0, vec![])];
        let tree = SourceFileTree::new("f", Vec::new(), specs, NodeId(0)).unwrap();
        let spt = simplify(&tree, 2);
        assert_eq!(spt_stats(&spt), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn child_granularity_is_parent_plus_one() {
        let tree = reference_tree();
        let spt = simplify(&tree, 1);
        for node in spt.nodes() {
            for &c in &node.children {
                assert_eq!(spt.nodes()[c].granularity, node.granularity + 1);
            }
        }
    }

    #[test]
    fn all_tokens_metric_merges_by_span_length() {
        // stmt(expr ";") — with the bag metric the expression merges into the
        // statement (the ";" carries no bag tokens); with the span metric the
        // spans differ, so both survive.
        let tokens = vec![
            tok(0, "x", crate::tree::TokenCategory::Identifier),
            tok(1, ";", crate::tree::TokenCategory::Other),
        ];
        let specs = vec![
            NodeSpec::internal("stmt", 0, 2, vec![1, 3]),
            NodeSpec::internal("expr", 0, 1, vec![2]),
            NodeSpec::terminal(0),
            NodeSpec::terminal(1),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();

        let bag = simplify(&tree, 1);
        assert_eq!(bag.len(), 1);

        let spans = simplify_with(
            &tree,
            &SimplifyOptions {
                min_size: 1,
                metric: SizeMetric::AllTokens,
            },
        );
        assert_eq!(spans.len(), 2);
    }

    #[test]
    fn increasing_min_size_never_grows_the_tree() {
        let tree = reference_tree();
        let mut prev = usize::MAX;
        for min_size in 1..8 {
            let count = simplify(&tree, min_size).len();
            assert!(count <= prev);
            prev = count;
        }
    }
}
