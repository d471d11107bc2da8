//! PT-IR, the parse-tree interchange format.
//!
//! One UTF-8 document per source file, line-oriented and tab-separated:
//!
//! ```text
//! ptir/1<TAB>path
//! T<TAB>index<TAB>line<TAB>column<TAB>category<TAB>text
//! ...
//! N<TAB>id<TAB>rule<TAB>first<TAB>last<TAB>child ids (space separated)
//! ...
//! ROOT<TAB>id
//! ```
//!
//! Token records appear in index order, node records in id order, and the
//! `ROOT` record is last. Rule names are empty for terminals. The `path`,
//! `text` and `rule` fields escape backslash, tab, newline and carriage
//! return as `\\`, `\t`, `\n`, `\r`. [`emit`] always produces this canonical
//! form, so `emit(ingest(d)) == d` for any canonical document.

use crate::error::{Error, Result};
use crate::tree::{NodeId, NodeSpec, SourceFileTree, Token, TokenCategory};

pub const FORMAT_VERSION: &str = "ptir/1";

fn escape(s: &str, out: &mut String) {
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(ch),
        }
    }
}

fn unescape(s: &str, line: usize) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => {
                return Err(Error::Malformed {
                    line,
                    msg: format!("unknown escape \\{other}"),
                })
            }
            None => {
                return Err(Error::Malformed {
                    line,
                    msg: "trailing backslash".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Serializes a tree into the canonical PT-IR document.
pub fn emit(tree: &SourceFileTree) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_VERSION);
    out.push('\t');
    escape(tree.path(), &mut out);
    out.push('\n');
    for tok in tree.tokens() {
        out.push_str("T\t");
        out.push_str(&tok.index.to_string());
        out.push('\t');
        out.push_str(&tok.line.to_string());
        out.push('\t');
        out.push_str(&tok.column.to_string());
        out.push('\t');
        out.push_str(tok.category.as_str());
        out.push('\t');
        escape(&tok.text, &mut out);
        out.push('\n');
    }
    for node in tree.nodes() {
        out.push_str("N\t");
        out.push_str(&node.id.0.to_string());
        out.push('\t');
        escape(&node.rule, &mut out);
        out.push('\t');
        out.push_str(&node.first.to_string());
        out.push('\t');
        out.push_str(&node.last.to_string());
        out.push('\t');
        let mut first = true;
        for c in &node.children {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&c.0.to_string());
        }
        out.push('\n');
    }
    out.push_str("ROOT\t");
    out.push_str(&tree.root_id().0.to_string());
    out.push('\n');
    out
}

/// Spec equivalent of [`emit`] returning bytes.
pub fn emit_bytes(tree: &SourceFileTree) -> Vec<u8> {
    emit(tree).into_bytes()
}

fn parse_u32(s: &str, line: usize, what: &str) -> Result<u32> {
    s.parse().map_err(|_| Error::Malformed {
        line,
        msg: format!("invalid {what}: {s:?}"),
    })
}

/// Parses and validates a PT-IR document. All tree invariants hold on the
/// returned value; violations are reported with the offending node or token.
pub fn ingest(document: &str) -> Result<SourceFileTree> {
    let mut lines = document.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::Malformed {
        line: 1,
        msg: "empty document".into(),
    })?;
    let (version, path) = header.split_once('\t').ok_or(Error::Malformed {
        line: 1,
        msg: "header must be 'ptir/1<TAB>path'".into(),
    })?;
    if version != FORMAT_VERSION {
        return Err(Error::Malformed {
            line: 1,
            msg: format!("unsupported format version {version:?}"),
        });
    }
    let path = unescape(path, 1)?;

    let mut tokens: Vec<Token> = Vec::new();
    let mut specs: Vec<NodeSpec> = Vec::new();
    let mut root: Option<NodeId> = None;

    for (idx, raw) in lines {
        let line_no = idx + 1;
        if root.is_some() {
            return Err(Error::Malformed {
                line: line_no,
                msg: "content after ROOT record".into(),
            });
        }
        let (kind, rest) = raw.split_once('\t').ok_or(Error::Malformed {
            line: line_no,
            msg: "record has no fields".into(),
        })?;
        match kind {
            "T" => {
                if !specs.is_empty() {
                    return Err(Error::Malformed {
                        line: line_no,
                        msg: "token record after node records".into(),
                    });
                }
                let mut fields = rest.splitn(5, '\t');
                let index = parse_u32(fields.next().unwrap_or(""), line_no, "token index")?;
                let line = parse_u32(fields.next().unwrap_or(""), line_no, "line")?;
                let column = parse_u32(fields.next().unwrap_or(""), line_no, "column")?;
                let category = fields.next().unwrap_or("");
                let category = TokenCategory::parse(category).ok_or(Error::Malformed {
                    line: line_no,
                    msg: format!("unknown category {category:?}"),
                })?;
                let text = fields.next().ok_or(Error::Malformed {
                    line: line_no,
                    msg: "token record is missing the text field".into(),
                })?;
                let expected = tokens.len() as u32;
                if index != expected {
                    return Err(Error::TokenIndex { index, expected });
                }
                tokens.push(Token {
                    index,
                    line,
                    column,
                    text: unescape(text, line_no)?,
                    category,
                });
            }
            "N" => {
                let mut fields = rest.splitn(5, '\t');
                let id = parse_u32(fields.next().unwrap_or(""), line_no, "node id")?;
                let rule = unescape(fields.next().unwrap_or(""), line_no)?;
                let first = parse_u32(fields.next().unwrap_or(""), line_no, "span start")?;
                let last = parse_u32(fields.next().unwrap_or(""), line_no, "span end")?;
                let child_field = fields.next().ok_or(Error::Malformed {
                    line: line_no,
                    msg: "node record is missing the child list field".into(),
                })?;
                if id as usize != specs.len() {
                    return Err(Error::Malformed {
                        line: line_no,
                        msg: format!("node ids must be contiguous from 0, got {id}"),
                    });
                }
                let mut children = Vec::new();
                for part in child_field.split(' ').filter(|p| !p.is_empty()) {
                    children.push(NodeId(parse_u32(part, line_no, "child id")?));
                }
                specs.push(NodeSpec {
                    rule,
                    first,
                    last,
                    children,
                });
            }
            "ROOT" => {
                root = Some(NodeId(parse_u32(rest, line_no, "root id")?));
            }
            other => {
                return Err(Error::Malformed {
                    line: line_no,
                    msg: format!("unknown record kind {other:?}"),
                })
            }
        }
    }

    let root = root.ok_or(Error::Malformed {
        line: document.lines().count(),
        msg: "missing ROOT record".into(),
    })?;
    SourceFileTree::new(path, tokens, specs, root)
}

/// Parses a PT-IR document from raw bytes.
pub fn ingest_bytes(document: &[u8]) -> Result<SourceFileTree> {
    let text = std::str::from_utf8(document).map_err(|_| Error::Malformed {
        line: 1,
        msg: "document is not valid UTF-8".into(),
    })?;
    ingest(text)
}
