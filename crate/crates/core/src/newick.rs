//! Newick ingestion and serialization.
//!
//! Input is rooted Newick with branch lengths. Interior edges become splits;
//! leaf branch lengths are kept as pendant lengths. A file may hold several
//! `;`-terminated records.

use crate::error::{BhvError, Result};
use crate::labels::LabelDict;
use crate::split::{union_bits, Split};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NewickOptions {
    /// Remove zero-length interior edges instead of rejecting them.
    pub collapse_zero: bool,
}

/// Parses a single Newick record with default options.
pub fn parse_newick(text: &str, labels: &LabelDict) -> Result<Tree> {
    parse_newick_with(text, labels, NewickOptions::default())
}

pub fn parse_newick_with(text: &str, labels: &LabelDict, opts: NewickOptions) -> Result<Tree> {
    let mut trees = parse_newick_records(text, labels, opts)?;
    match trees.len() {
        1 => Ok(trees.pop().expect("one tree")),
        0 => Err(BhvError::Parse {
            line: 1,
            column: 1,
            message: "no tree found".into(),
        }),
        n => Err(BhvError::Parse {
            line: 1,
            column: 1,
            message: format!("expected one tree, found {n}"),
        }),
    }
}

/// Parses every `;`-terminated record in `text`.
pub fn parse_newick_records(
    text: &str,
    labels: &LabelDict,
    opts: NewickOptions,
) -> Result<Vec<Tree>> {
    let mut parser = Parser::new(text);
    let mut out = Vec::new();
    loop {
        parser.skip_trivia()?;
        if parser.peek().is_none() {
            break;
        }
        let root = parser.parse_node()?;
        parser.skip_trivia()?;
        match parser.peek() {
            Some(';') => {
                parser.bump();
            }
            _ => return Err(parser.error("expected ';' after tree")),
        }
        out.push(build_tree(root, labels, opts)?);
    }
    Ok(out)
}

/// Builds a dictionary from the leaf names of the first record, in order of
/// appearance.
pub fn labels_from_first_record(text: &str) -> Result<LabelDict> {
    let mut parser = Parser::new(text);
    parser.skip_trivia()?;
    let root = parser.parse_node()?;
    let mut names = Vec::new();
    collect_leaf_names(&root, &mut names);
    LabelDict::new(names)
}

fn collect_leaf_names(node: &RawNode, out: &mut Vec<String>) {
    if node.children.is_empty() {
        out.push(node.name.clone().unwrap_or_default());
    }
    for c in &node.children {
        collect_leaf_names(c, out);
    }
}

#[derive(Debug)]
struct RawNode {
    name: Option<String>,
    length: Option<f64>,
    children: Vec<RawNode>,
    line: usize,
    column: usize,
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> BhvError {
        BhvError::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) -> Result<()> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('[') => {
                    self.bump();
                    loop {
                        match self.bump() {
                            Some(']') => break,
                            Some(_) => {}
                            None => return Err(self.error("unterminated comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn parse_node(&mut self) -> Result<RawNode> {
        self.skip_trivia()?;
        let (line, column) = (self.line, self.column);
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.bump();
            loop {
                children.push(self.parse_node()?);
                self.skip_trivia()?;
                match self.bump() {
                    Some(',') => continue,
                    Some(')') => break,
                    Some(c) => return Err(self.error(format!("unexpected {c:?} in child list"))),
                    None => return Err(self.error("unexpected end of input in child list")),
                }
            }
        }
        self.skip_trivia()?;
        let name = self.parse_label()?;
        self.skip_trivia()?;
        let mut length = None;
        if self.peek() == Some(':') {
            self.bump();
            self.skip_trivia()?;
            length = Some(self.parse_number()?);
        }
        if children.is_empty() && name.is_none() {
            return Err(BhvError::Parse {
                line,
                column,
                message: "leaf without a label".into(),
            });
        }
        Ok(RawNode {
            name,
            length,
            children,
            line,
            column,
        })
    }

    fn parse_label(&mut self) -> Result<Option<String>> {
        if self.peek() == Some('\'') {
            self.bump();
            let mut out = String::new();
            loop {
                match self.bump() {
                    Some('\'') => {
                        if self.peek() == Some('\'') {
                            self.bump();
                            out.push('\'');
                        } else {
                            break;
                        }
                    }
                    Some(c) => out.push(c),
                    None => return Err(self.error("unterminated quoted label")),
                }
            }
            return Ok(Some(out));
        }
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "()[]':;,".contains(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        Ok(if out.is_empty() { None } else { Some(out) })
    }

    fn parse_number(&mut self) -> Result<f64> {
        let mut raw = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || "+-.eE".contains(c) {
                raw.push(c);
                self.bump();
            } else {
                break;
            }
        }
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(format!("invalid branch length {raw:?}")))
    }
}

fn build_tree(mut root: RawNode, labels: &LabelDict, opts: NewickOptions) -> Result<Tree> {
    // a chain of single-child nodes above the real root only carries the root edge
    while root.children.len() == 1 && !root.children[0].children.is_empty() {
        root = root.children.pop().expect("one child");
    }
    let n = labels.len();
    let mut pendant = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut any_pendant = false;
    let mut edges = Vec::new();
    for child in &root.children {
        visit(
            child,
            labels,
            opts,
            &mut edges,
            &mut pendant,
            &mut seen,
            &mut any_pendant,
        )?;
    }
    if root.children.is_empty() {
        return Err(BhvError::Parse {
            line: root.line,
            column: root.column,
            message: "a tree needs at least three leaves".into(),
        });
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(BhvError::Parse {
            line: root.line,
            column: root.column,
            message: format!(
                "leaf {:?} from the label dictionary is missing",
                labels.name_of(missing + 1).unwrap_or("?")
            ),
        });
    }
    Tree::new(n, edges, any_pendant.then_some(pendant)).map_err(|e| BhvError::Parse {
        line: root.line,
        column: root.column,
        message: e.to_string(),
    })
}

fn visit(
    node: &RawNode,
    labels: &LabelDict,
    opts: NewickOptions,
    edges: &mut Vec<(Split, f64)>,
    pendant: &mut [f64],
    seen: &mut [bool],
    any_pendant: &mut bool,
) -> Result<[u64; 4]> {
    let fail = |message: String| BhvError::Parse {
        line: node.line,
        column: node.column,
        message,
    };
    if node.children.is_empty() {
        let name = node.name.as_deref().unwrap_or_default();
        let label = labels
            .label_of(name)
            .ok_or_else(|| fail(format!("unknown leaf label {name:?}")))?;
        if seen[label - 1] {
            return Err(fail(format!("duplicate leaf label {name:?}")));
        }
        seen[label - 1] = true;
        if let Some(len) = node.length {
            if len < 0.0 {
                return Err(fail(format!("negative pendant length {len} for {name:?}")));
            }
            pendant[label - 1] = len;
            *any_pendant = true;
        }
        let mut bits = [0u64; 4];
        bits[(label - 1) / 64] |= 1u64 << ((label - 1) % 64);
        return Ok(bits);
    }
    if node.children.len() == 1 {
        return Err(fail("internal node with a single child".into()));
    }
    let mut bits = [0u64; 4];
    for c in &node.children {
        let child = visit(c, labels, opts, edges, pendant, seen, any_pendant)?;
        bits = union_bits(&bits, &child);
    }
    let len = node
        .length
        .ok_or_else(|| fail("interior edge without a branch length".into()))?;
    if len < 0.0 || (len == 0.0 && !opts.collapse_zero) {
        return Err(fail(format!(
            "non-positive interior edge length {len} (use zero-collapsing to drop zero-length edges)"
        )));
    }
    let split = Split::from_bits(labels.len(), bits).map_err(|e| fail(e.to_string()))?;
    if len > 0.0 {
        edges.push((split, len));
    }
    Ok(bits)
}

/// Serializes with integer leaf labels. Missing pendant lengths are written
/// as 0.
pub fn write_newick(tree: &Tree) -> String {
    write_with(tree, &|leaf| leaf.to_string())
}

/// Serializes with the names of a label dictionary.
pub fn write_newick_with_labels(tree: &Tree, labels: &LabelDict) -> String {
    write_with(tree, &|leaf| quote(labels.name_of(leaf).unwrap_or("?")))
}

fn quote(name: &str) -> String {
    if name
        .chars()
        .any(|c| c.is_whitespace() || "()[]':;,".contains(c))
    {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

enum Child {
    Leaf(usize),
    Clade(usize),
}

fn write_with(tree: &Tree, name: &dyn Fn(usize) -> String) -> String {
    let n = tree.n_leaves();
    let edges = tree.edges();
    let k = edges.len();
    let parent_of = |contained: &dyn Fn(&Split) -> bool, exclude: Option<usize>| -> usize {
        let mut best = k;
        let mut best_size = usize::MAX;
        for (j, (s, _)) in edges.iter().enumerate() {
            if Some(j) != exclude && contained(s) && s.size() < best_size {
                best = j;
                best_size = s.size();
            }
        }
        best
    };
    let mut children: Vec<Vec<(usize, Child)>> = (0..=k).map(|_| Vec::new()).collect();
    for (j, (s, _)) in edges.iter().enumerate() {
        let p = parent_of(&|c: &Split| s.is_subset_of(c), Some(j));
        children[p].push((s.min_leaf(), Child::Clade(j)));
    }
    for leaf in 1..=n {
        let p = parent_of(&|c: &Split| c.contains(leaf), None);
        children[p].push((leaf, Child::Leaf(leaf)));
    }
    for c in &mut children {
        c.sort_by_key(|(key, _)| *key);
    }
    let pendant = tree.pendant();
    let mut out = String::new();
    fn emit(
        node: usize,
        children: &[Vec<(usize, Child)>],
        edges: &[(Split, f64)],
        pendant: Option<&[f64]>,
        name: &dyn Fn(usize) -> String,
        out: &mut String,
    ) {
        out.push('(');
        for (i, (_, child)) in children[node].iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match child {
                Child::Leaf(leaf) => {
                    let len = pendant.map_or(0.0, |p| p[leaf - 1]);
                    out.push_str(&format!("{}:{}", name(*leaf), len));
                }
                Child::Clade(j) => {
                    emit(*j, children, edges, pendant, name, out);
                    out.push_str(&format!(":{}", edges[*j].1));
                }
            }
        }
        out.push(')');
    }
    emit(k, &children, edges, pendant, name, &mut out);
    out.push(';');
    out
}
