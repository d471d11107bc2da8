//! Tokens and parse trees.
//!
//! A [`SourceFileTree`] is the unit every later stage consumes: a token table
//! plus a tree of nodes whose spans are token-index ranges. Trees come from a
//! parser backend ([`crate::frontend`]) or from a PT-IR document
//! ([`crate::ptir`]); both paths run the same validation, so downstream code
//! can rely on the invariants unconditionally.

use crate::error::{Error, Result};

/// Lexical class of a token. Only keywords, identifiers and literals are
/// *bag-eligible*: they are the tokens that enter token bags and the counts
/// that node sizes are measured in. Comments and whitespace never reach the
/// token table at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenCategory {
    Keyword,
    Identifier,
    Literal,
    Other,
}

impl TokenCategory {
    pub fn bag_eligible(self) -> bool {
        !matches!(self, TokenCategory::Other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TokenCategory::Keyword => "keyword",
            TokenCategory::Identifier => "identifier",
            TokenCategory::Literal => "literal",
            TokenCategory::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "keyword" => Some(TokenCategory::Keyword),
            "identifier" => Some(TokenCategory::Identifier),
            "literal" => Some(TokenCategory::Literal),
            "other" => Some(TokenCategory::Other),
            _ => None,
        }
    }
}

/// One lexical unit of a source file.
///
/// `line` is 1-based; `column` is a 1-based byte offset within the line.
/// Positions are carried for reporting only; every algorithm in this crate
/// operates on token indexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: u32,
    pub line: u32,
    pub column: u32,
    pub text: String,
    pub category: TokenCategory,
}

/// Identifier of a node within one [`SourceFileTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A node of the parse tree. Terminal nodes have an empty rule name, no
/// children and a span of exactly one token; internal nodes carry the grammar
/// rule that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseNode {
    pub id: NodeId,
    pub rule: String,
    /// Half-open token index range `[first, last)`.
    pub first: u32,
    pub last: u32,
    pub children: Vec<NodeId>,
    /// Number of bag-eligible tokens in the span.
    pub size: u32,
}

impl ParseNode {
    pub fn is_terminal(&self) -> bool {
        self.rule.is_empty()
    }

    /// Total tokens in the span, bag-eligible or not.
    pub fn span_len(&self) -> u32 {
        self.last - self.first
    }
}

/// Input shape for building a tree; node ids are implied by position.
#[derive(Debug, Clone)]
pub struct NodeSpec {
    pub rule: String,
    pub first: u32,
    pub last: u32,
    pub children: Vec<NodeId>,
}

impl NodeSpec {
    pub fn internal(rule: impl Into<String>, first: u32, last: u32, children: Vec<u32>) -> Self {
        NodeSpec {
            rule: rule.into(),
            first,
            last,
            children: children.into_iter().map(NodeId).collect(),
        }
    }

    pub fn terminal(token_index: u32) -> Self {
        NodeSpec {
            rule: String::new(),
            first: token_index,
            last: token_index + 1,
            children: Vec::new(),
        }
    }
}

/// A parsed source file: token table plus validated parse tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFileTree {
    path: String,
    tokens: Vec<Token>,
    nodes: Vec<ParseNode>,
    root: NodeId,
}

impl SourceFileTree {
    /// Builds a tree and checks every structural invariant:
    /// contiguous token indexes, non-empty token texts, spans in range,
    /// child containment, sibling order, terminal shape, and that the nodes
    /// form a single tree rooted at `root` covering the whole token table.
    pub fn new(
        path: impl Into<String>,
        tokens: Vec<Token>,
        specs: Vec<NodeSpec>,
        root: NodeId,
    ) -> Result<Self> {
        let n_tokens = tokens.len() as u32;
        for (i, tok) in tokens.iter().enumerate() {
            if tok.index != i as u32 {
                return Err(Error::TokenIndex {
                    index: tok.index,
                    expected: i as u32,
                });
            }
            if tok.text.is_empty() {
                return Err(Error::EmptyToken { index: tok.index });
            }
        }

        if specs.is_empty() {
            return Err(Error::TreeShape {
                node: root.0,
                msg: "tree has no nodes".into(),
            });
        }
        if root.0 as usize >= specs.len() {
            return Err(Error::UnknownNode(root.0));
        }

        // Prefix sums of bag-eligible tokens make node sizes O(1).
        let mut eligible = vec![0u32; tokens.len() + 1];
        for (i, tok) in tokens.iter().enumerate() {
            eligible[i + 1] = eligible[i] + u32::from(tok.category.bag_eligible());
        }

        let mut nodes = Vec::with_capacity(specs.len());
        for (i, spec) in specs.into_iter().enumerate() {
            let id = NodeId(i as u32);
            if spec.first > spec.last || spec.last > n_tokens {
                return Err(Error::SpanOutOfRange {
                    node: id.0,
                    first: spec.first,
                    last: spec.last,
                    tokens: n_tokens,
                });
            }
            if spec.rule.is_empty()
                && (spec.last != spec.first + 1 || !spec.children.is_empty())
            {
                return Err(Error::InvalidTerminal { node: id.0 });
            }
            let size = eligible[spec.last as usize] - eligible[spec.first as usize];
            nodes.push(ParseNode {
                id,
                rule: spec.rule,
                first: spec.first,
                last: spec.last,
                children: spec.children,
                size,
            });
        }

        let root_node = &nodes[root.0 as usize];
        if root_node.first != 0 || root_node.last != n_tokens {
            return Err(Error::RootSpan {
                root: root.0,
                tokens: n_tokens,
            });
        }

        // Containment, sibling order, and single-parent tree shape.
        let mut claimed = vec![false; nodes.len()];
        for node in &nodes {
            let mut prev_last = node.first;
            for &child_id in &node.children {
                let child = nodes.get(child_id.0 as usize).ok_or_else(|| Error::TreeShape {
                    node: node.id.0,
                    msg: format!("child {child_id} does not exist"),
                })?;
                if child.first < node.first || child.last > node.last {
                    return Err(Error::ChildSpanEscapes {
                        parent: node.id.0,
                        child: child_id.0,
                    });
                }
                if child.first < prev_last {
                    return Err(Error::SiblingOrder {
                        parent: node.id.0,
                        child: child_id.0,
                    });
                }
                prev_last = child.last;
                if std::mem::replace(&mut claimed[child_id.0 as usize], true) {
                    return Err(Error::TreeShape {
                        node: child_id.0,
                        msg: "node has more than one parent".into(),
                    });
                }
            }
        }
        if claimed[root.0 as usize] {
            return Err(Error::TreeShape {
                node: root.0,
                msg: "root node has a parent".into(),
            });
        }
        let mut reached = 0usize;
        let mut stack = vec![root];
        let mut seen = vec![false; nodes.len()];
        seen[root.0 as usize] = true;
        while let Some(id) = stack.pop() {
            reached += 1;
            for &c in &nodes[id.0 as usize].children {
                if !std::mem::replace(&mut seen[c.0 as usize], true) {
                    stack.push(c);
                }
            }
        }
        if reached != nodes.len() {
            return Err(Error::TreeShape {
                node: root.0,
                msg: format!("{} nodes unreachable from root", nodes.len() - reached),
            });
        }

        Ok(SourceFileTree {
            path: path.into(),
            tokens,
            nodes,
            root,
        })
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn nodes(&self) -> &[ParseNode] {
        &self.nodes
    }

    pub fn root_id(&self) -> NodeId {
        self.root
    }

    pub fn root(&self) -> &ParseNode {
        &self.nodes[self.root.0 as usize]
    }

    pub fn node(&self, id: NodeId) -> Option<&ParseNode> {
        self.nodes.get(id.0 as usize)
    }

    /// Count of bag-eligible tokens in the node's span.
    pub fn node_size(&self, id: NodeId) -> Result<u32> {
        self.node(id).map(|n| n.size).ok_or(Error::UnknownNode(id.0))
    }

    /// Tokens covered by a node's span.
    pub fn span_tokens(&self, node: &ParseNode) -> &[Token] {
        &self.tokens[node.first as usize..node.last as usize]
    }

    /// Minimum and maximum source line over a node's tokens; `None` when the
    /// span is empty.
    pub fn line_range(&self, node: &ParseNode) -> Option<(u32, u32)> {
        let toks = self.span_tokens(node);
        if toks.is_empty() {
            return None;
        }
        let mut lo = u32::MAX;
        let mut hi = 0;
        for t in toks {
            lo = lo.min(t.line);
            hi = hi.max(t.line);
        }
        Some((lo, hi))
    }
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn single_rule_over_three_tokens() {
        let tokens = ident_tokens(&["a", "b", "c"]);
        let specs = vec![
            NodeSpec::internal("stmt", 0, 3, vec![1, 2, 3]),
            NodeSpec::terminal(0),
            NodeSpec::terminal(1),
            NodeSpec::terminal(2),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        assert_eq!(tree.nodes().len(), 4);
        assert_eq!(tree.root().rule, "stmt");
        assert_eq!(tree.nodes().iter().filter(|n| n.is_terminal()).count(), 3);
    }

    #[test]
    fn child_span_escaping_parent_is_rejected() {
        let tokens = ident_tokens(&["a", "b", "c", "d", "e"]);
        let specs = vec![
            NodeSpec::internal("root", 0, 5, vec![1]),
            NodeSpec::internal("outer", 0, 3, vec![2]),
            NodeSpec::internal("inner", 2, 5, vec![]),
        ];
        let err = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap_err();
        assert!(matches!(
            err,
            Error::ChildSpanEscapes { parent: 1, child: 2 }
        ));
    }

    #[test]
    fn sibling_overlap_is_rejected() {
        let tokens = ident_tokens(&["a", "b", "c"]);
        let specs = vec![
            NodeSpec::internal("root", 0, 3, vec![1, 2]),
            NodeSpec::internal("x", 0, 2, vec![]),
            NodeSpec::internal("y", 1, 3, vec![]),
        ];
        let err = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap_err();
        assert!(matches!(err, Error::SiblingOrder { .. }));
    }

    #[test]
    fn non_contiguous_token_indexes_are_rejected() {
        let mut tokens = ident_tokens(&["a", "b"]);
        tokens[1].index = 5;
        let specs = vec![NodeSpec::internal("root", 0, 2, vec![])];
        let err = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap_err();
        assert!(matches!(err, Error::TokenIndex { index: 5, expected: 1 }));
    }

    #[test]
    fn node_size_counts_only_bag_eligible_tokens() {
        let tokens = vec![
            tok(0, "x", TokenCategory::Identifier),
            tok(1, ";", TokenCategory::Other),
        ];
        let specs = vec![
            NodeSpec::internal("stmt", 0, 2, vec![1, 2]),
            NodeSpec::terminal(0),
            NodeSpec::terminal(1),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        assert_eq!(tree.node_size(NodeId(1)).unwrap(), 1);
        assert_eq!(tree.node_size(NodeId(2)).unwrap(), 0);
        assert!(matches!(
            tree.node_size(NodeId(9)),
            Err(Error::UnknownNode(9))
        ));
    }

    #[test]
    fn root_size_counts_categories_across_the_file() {
        // 7 keywords + 5 identifiers + 2 literals + 9 others.
        let mut tokens = Vec::new();
        let mut push = |cat, n: usize, prefix: &str| {
            for i in 0..n {
                let idx = tokens.len() as u32;
                tokens.push(tok(idx, &format!("{prefix}{i}"), cat));
            }
        };
        push(TokenCategory::Keyword, 7, "kw");
        push(TokenCategory::Identifier, 5, "id");
        push(TokenCategory::Literal, 2, "lit");
        push(TokenCategory::Other, 9, "op");
        let n = tokens.len() as u32;
        let specs = vec![NodeSpec::internal("file", 0, n, vec![])];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        // Independent count by category.
        let expected = tree
            .tokens()
            .iter()
            .filter(|t| t.category.bag_eligible())
            .count() as u32;
        assert_eq!(expected, 14);
        assert_eq!(tree.node_size(NodeId(0)).unwrap(), expected);
    }

    #[test]
    fn internal_sizes_equal_sum_of_terminal_sizes() {
        let tokens = vec![
            tok(0, "if", TokenCategory::Keyword),
            tok(1, "(", TokenCategory::Other),
            tok(2, "x", TokenCategory::Identifier),
            tok(3, ")", TokenCategory::Other),
        ];
        let specs = vec![
            NodeSpec::internal("if_stmt", 0, 4, vec![1, 2]),
            NodeSpec::terminal(0),
            NodeSpec::internal("cond", 1, 4, vec![3, 4, 5]),
            NodeSpec::terminal(1),
            NodeSpec::terminal(2),
            NodeSpec::terminal(3),
        ];
        let tree = SourceFileTree::new("f", tokens, specs, NodeId(0)).unwrap();
        for node in tree.nodes().iter().filter(|n| !n.is_terminal()) {
            let brute: u32 = tree
                .span_tokens(node)
                .iter()
                .filter(|t| t.category.bag_eligible())
                .count() as u32;
            assert_eq!(node.size, brute, "node {}", node.id);
        }
    }

    #[test]
    fn empty_file_root_is_valid() {
        let specs = vec![NodeSpec::internal("program", 0, 0, vec![])];
        let tree = SourceFileTree::new("f", Vec::new(), specs, NodeId(0)).unwrap();
        assert_eq!(tree.root().span_len(), 0);
        assert_eq!(tree.root().size, 0);
    }
}
