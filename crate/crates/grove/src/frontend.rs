//! Grammar-pluggable parser backend.
//!
//! The detection core only consumes [`SourceFileTree`] values, so any parser
//! that can produce one can drive it. This module ships a tree-sitter
//! backend with two ways to obtain a grammar:
//!
//! * `builtin:<name>` — grammars compiled into this crate (currently `java`),
//! * a path to a compiled tree-sitter grammar shared library, loaded at
//!   runtime with no recompilation of the core.
//!
//! Backend-free operation is always available by feeding PT-IR documents
//! through [`crate::ptir::ingest`] instead.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::bags::KeywordList;
use crate::error::{Error, Result};
use crate::tree::{NodeSpec, SourceFileTree, Token, TokenCategory};

/// Where a grammar comes from.
#[derive(Debug, Clone)]
pub enum GrammarSource {
    /// A grammar linked into this binary, by name.
    Builtin(String),
    /// A compiled tree-sitter grammar shared library. The entry symbol
    /// defaults to `tree_sitter_<language>`.
    SharedLibrary {
        path: PathBuf,
        symbol: Option<String>,
    },
}

/// Everything needed to stand up a frontend for one language.
#[derive(Debug, Clone)]
pub struct GrammarBundle {
    /// Short language id, e.g. `java`.
    pub language: String,
    pub source: GrammarSource,
    /// Keyword list used for token categorization. Tokens whose text appears
    /// here are categorized `keyword`; without a list no token is.
    pub keywords: Option<PathBuf>,
    /// Name of the grammar's start rule; validated at load time.
    pub entry_rule: String,
}

impl GrammarBundle {
    /// Bundle for a compiled-in grammar with its default entry rule.
    pub fn builtin(language: &str) -> Self {
        GrammarBundle {
            language: language.to_string(),
            source: GrammarSource::Builtin(language.to_string()),
            keywords: None,
            entry_rule: builtin_entry_rule(language).unwrap_or("program").to_string(),
        }
    }

    /// Parses an artifact string: `builtin:<name>` or a shared-library path.
    pub fn from_artifact(artifact: &str, language: &str, entry_rule: &str) -> Self {
        let source = match artifact.strip_prefix("builtin:") {
            Some(name) => GrammarSource::Builtin(name.to_string()),
            None => GrammarSource::SharedLibrary {
                path: PathBuf::from(artifact),
                symbol: None,
            },
        };
        GrammarBundle {
            language: language.to_string(),
            source,
            keywords: None,
            entry_rule: entry_rule.to_string(),
        }
    }

    pub fn with_keywords(mut self, path: impl Into<PathBuf>) -> Self {
        self.keywords = Some(path.into());
        self
    }
}

fn builtin_entry_rule(language: &str) -> Option<&'static str> {
    match language {
        "java" => Some("program"),
        _ => None,
    }
}

fn builtin_language(name: &str) -> Result<tree_sitter::Language> {
    match name {
        "java" => Ok(tree_sitter_java::LANGUAGE.into()),
        other => Err(Error::Grammar(format!(
            "no builtin grammar named {other:?} (available: java)"
        ))),
    }
}

/// A loaded grammar plus the categorization keyword list.
///
/// The tree-sitter `Language` handle is immutable and safe to share across
/// threads; a parser is created per call, so one frontend can serve many
/// workers. When the grammar was loaded from a shared library, the library
/// handle is kept alive for as long as the frontend exists.
pub struct LanguageFrontend {
    language_id: String,
    entry_rule: String,
    keywords: HashSet<String>,
    language: tree_sitter::Language,
    // Declared after `language` so the library outlives every use of it.
    _library: Option<libloading::Library>,
}

impl fmt::Debug for LanguageFrontend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageFrontend")
            .field("language_id", &self.language_id)
            .field("entry_rule", &self.entry_rule)
            .field("keywords", &self.keywords.len())
            .finish()
    }
}

/// Loads a grammar bundle into a usable frontend.
pub fn load_grammar(bundle: &GrammarBundle) -> Result<LanguageFrontend> {
    let (language, library) = match &bundle.source {
        GrammarSource::Builtin(name) => (builtin_language(name)?, None),
        GrammarSource::SharedLibrary { path, symbol } => {
            let symbol = symbol.clone().unwrap_or_else(|| {
                format!("tree_sitter_{}", bundle.language.replace('-', "_"))
            });
            let (language, library) = load_shared_grammar(path, &symbol)?;
            (language, Some(library))
        }
    };

    // The entry rule must exist and actually be the rule parses start at.
    if language.id_for_node_kind(&bundle.entry_rule, true) == 0 {
        return Err(Error::Grammar(format!(
            "grammar for {:?} has no rule named {:?}",
            bundle.language, bundle.entry_rule
        )));
    }
    let mut parser = tree_sitter::Parser::new();
    parser
        .set_language(&language)
        .map_err(|e| Error::Grammar(format!("incompatible grammar: {e}")))?;
    let probe = parser
        .parse("", None)
        .ok_or_else(|| Error::Grammar("grammar failed to parse an empty input".into()))?;
    let actual = probe.root_node().kind();
    if actual != bundle.entry_rule {
        return Err(Error::EntryRule {
            rule: bundle.entry_rule.clone(),
            actual: actual.to_string(),
        });
    }

    let keywords = match &bundle.keywords {
        Some(path) => KeywordList::load(path)?.into_set(),
        None => HashSet::new(),
    };

    Ok(LanguageFrontend {
        language_id: bundle.language.clone(),
        entry_rule: bundle.entry_rule.clone(),
        keywords,
        language,
        _library: library,
    })
}

fn load_shared_grammar(
    path: &Path,
    symbol: &str,
) -> Result<(tree_sitter::Language, libloading::Library)> {
    if !path.exists() {
        return Err(Error::Grammar(format!(
            "grammar artifact {} does not exist",
            path.display()
        )));
    }
    unsafe {
        let library = libloading::Library::new(path).map_err(|e| {
            Error::Grammar(format!("cannot load {}: {e}", path.display()))
        })?;
        let raw: libloading::Symbol<unsafe extern "C" fn() -> *const ()> =
            library.get(symbol.as_bytes()).map_err(|e| {
                Error::Grammar(format!(
                    "{} has no symbol {symbol:?}: {e}",
                    path.display()
                ))
            })?;
        let language_fn = tree_sitter_language::LanguageFn::from_raw(*raw);
        Ok((language_fn.into(), library))
    }
}

impl LanguageFrontend {
    pub fn language_id(&self) -> &str {
        &self.language_id
    }

    pub fn entry_rule(&self) -> &str {
        &self.entry_rule
    }

    /// Parses one file from disk. Syntax errors name the file and the
    /// position of the first offending node so the pipeline can log and
    /// continue with the remaining files.
    pub fn parse_file(&self, path: &Path) -> Result<SourceFileTree> {
        let bytes = std::fs::read(path).map_err(|e| Error::file(path, e))?;
        let source = String::from_utf8(bytes).map_err(|_| Error::Encoding {
            path: path.to_path_buf(),
        })?;
        self.parse_source(&path.to_string_lossy(), &source)
    }

    /// Parses source text under a path label.
    pub fn parse_source(&self, path: &str, source: &str) -> Result<SourceFileTree> {
        let mut parser = tree_sitter::Parser::new();
        parser
            .set_language(&self.language)
            .map_err(|e| Error::Grammar(format!("incompatible grammar: {e}")))?;
        let tree = parser.parse(source, None).ok_or_else(|| Error::Syntax {
            path: PathBuf::from(path),
            line: 1,
            column: 1,
        })?;
        let root = tree.root_node();
        if root.has_error() {
            let (line, column) = first_error_position(root);
            return Err(Error::Syntax {
                path: PathBuf::from(path),
                line,
                column,
            });
        }
        self.convert(path, source, root)
    }

    /// Lowers a tree-sitter CST into the token table + parse tree model.
    ///
    /// Comment nodes are dropped entirely; literal-class subtrees (string
    /// literals and friends) are flattened into single tokens, matching what
    /// a conventional lexer would produce.
    fn convert(
        &self,
        path: &str,
        source: &str,
        root: tree_sitter::Node<'_>,
    ) -> Result<SourceFileTree> {
        enum Step<'t> {
            Enter(tree_sitter::Node<'t>, Option<usize>),
            Exit(usize),
        }

        let mut tokens: Vec<Token> = Vec::new();
        let mut specs: Vec<NodeSpec> = Vec::new();
        let mut stack = vec![Step::Enter(root, None)];

        while let Some(step) = stack.pop() {
            match step {
                Step::Exit(idx) => {
                    specs[idx].last = tokens.len() as u32;
                }
                Step::Enter(node, parent) => {
                    let kind = node.kind();
                    if is_comment_kind(kind) {
                        continue;
                    }
                    // The root stays internal even when the file is empty.
                    let token_like = parent.is_some()
                        && (node.child_count() == 0 || is_literal_kind(kind));
                    if token_like {
                        let text = &source[node.byte_range()];
                        if text.is_empty() {
                            continue;
                        }
                        let index = tokens.len() as u32;
                        let pos = node.start_position();
                        tokens.push(Token {
                            index,
                            line: pos.row as u32 + 1,
                            column: pos.column as u32 + 1,
                            text: text.to_string(),
                            category: self.categorize(&node, text),
                        });
                        let idx = specs.len();
                        specs.push(NodeSpec::terminal(index));
                        if let Some(p) = parent {
                            attach_child(&mut specs, p, idx);
                        }
                    } else {
                        let idx = specs.len();
                        specs.push(NodeSpec {
                            rule: kind.to_string(),
                            first: tokens.len() as u32,
                            last: tokens.len() as u32,
                            children: Vec::new(),
                        });
                        if let Some(p) = parent {
                            attach_child(&mut specs, p, idx);
                        }
                        stack.push(Step::Exit(idx));
                        let mut cursor = node.walk();
                        let children: Vec<_> = node.children(&mut cursor).collect();
                        for child in children.into_iter().rev() {
                            stack.push(Step::Enter(child, Some(idx)));
                        }
                    }
                }
            }
        }

        SourceFileTree::new(path, tokens, specs, crate::tree::NodeId(0))
    }

    fn categorize(&self, node: &tree_sitter::Node<'_>, text: &str) -> TokenCategory {
        if self.keywords.contains(text) {
            TokenCategory::Keyword
        } else if is_literal_kind(node.kind()) {
            TokenCategory::Literal
        } else if node.is_named() && is_identifier_kind(node.kind()) {
            TokenCategory::Identifier
        } else {
            TokenCategory::Other
        }
    }
}

fn attach_child(specs: &mut [NodeSpec], parent: usize, child: usize) {
    let id = crate::tree::NodeId(child as u32);
    specs[parent].children.push(id);
}

fn is_comment_kind(kind: &str) -> bool {
    kind == "comment" || kind.ends_with("comment")
}

fn is_identifier_kind(kind: &str) -> bool {
    kind == "identifier" || kind.ends_with("_identifier")
}

fn is_literal_kind(kind: &str) -> bool {
    kind.contains("literal")
        || matches!(
            kind,
            "true" | "false" | "null" | "nil" | "none" | "number" | "string" | "character"
        )
}

fn first_error_position(root: tree_sitter::Node<'_>) -> (u32, u32) {
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_error() || node.is_missing() {
            let pos = node.start_position();
            return (pos.row as u32 + 1, pos.column as u32 + 1);
        }
        if !node.has_error() {
            continue;
        }
        let mut cursor = node.walk();
        let children: Vec<_> = node.children(&mut cursor).collect();
        for child in children.into_iter().rev() {
            stack.push(child);
        }
    }
    let pos = root.start_position();
    (pos.row as u32 + 1, pos.column as u32 + 1)
}
