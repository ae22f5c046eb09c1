//! Bracketed constituency trees, as produced by PTB-style parsers.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub label: String,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Sentence-local token index, set on word leaves only.
    pub leaf: Option<usize>,
    pub depth: usize,
    /// Sentence-local token range covered by the node.
    pub span: Range<usize>,
    /// Sentence-local index of the lexical head token.
    pub head: usize,
}

/// A constituency tree over one sentence. Word leaves are nodes whose label
/// is the word itself; their parents are the part-of-speech preterminals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParseTree {
    pub nodes: Vec<TreeNode>,
    /// Node index of each word leaf, in token order.
    pub leaves: Vec<usize>,
}

impl ParseTree {
    pub fn parse(input: &str) -> Result<ParseTree> {
        let mut parser = Parser { chars: input.chars().collect(), pos: 0, nodes: Vec::new(), leaves: Vec::new() };
        parser.skip_ws();
        let root = parser.node(None, 0)?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(Error::parse(1, format!("trailing input in tree at char {}", parser.pos)));
        }
        let mut tree = ParseTree { nodes: parser.nodes, leaves: parser.leaves };
        debug_assert_eq!(root, 0);
        tree.assign_heads(0);
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Depth of the tree: the longest root-to-word path, in edges.
    pub fn depth(&self) -> usize {
        self.leaves.iter().map(|&l| self.nodes[l].depth).max().unwrap_or(0)
    }

    /// Preterminal label (part of speech) of token `i`.
    pub fn pos(&self, i: usize) -> Option<&str> {
        let leaf = *self.leaves.get(i)?;
        self.nodes[leaf].parent.map(|p| self.nodes[p].label.as_str())
    }

    /// Lowest common ancestor of two tokens.
    pub fn lca(&self, a: usize, b: usize) -> Option<usize> {
        let mut x = *self.leaves.get(a)?;
        let mut y = *self.leaves.get(b)?;
        while self.nodes[x].depth > self.nodes[y].depth {
            x = self.nodes[x].parent?;
        }
        while self.nodes[y].depth > self.nodes[x].depth {
            y = self.nodes[y].parent?;
        }
        while x != y {
            x = self.nodes[x].parent?;
            y = self.nodes[y].parent?;
        }
        Some(x)
    }

    /// Number of edges from token `a` up to the LCA of `a` and `b`.
    pub fn lca_path_len(&self, a: usize, b: usize) -> Option<usize> {
        let lca = self.lca(a, b)?;
        Some(self.nodes[self.leaves[a]].depth - self.nodes[lca].depth)
    }

    /// `LHS->RHS` production rules of internal nodes whose span lies in `range`.
    /// Preterminal-to-word expansions are excluded.
    pub fn production_rules(&self, range: Range<usize>) -> Vec<String> {
        self.nodes
            .iter()
            .filter(|n| n.leaf.is_none() && !n.children.is_empty() && self.nodes[n.children[0]].leaf.is_none())
            .filter(|n| range.start <= n.span.start && n.span.end <= range.end)
            .map(|n| {
                let rhs: Vec<&str> = n.children.iter().map(|&c| self.nodes[c].label.as_str()).collect();
                format!("{}->{}", n.label, rhs.join("_"))
            })
            .collect()
    }

    /// Nodes with the given label whose span lies within `range`.
    pub fn phrases(&self, label: &str, range: Range<usize>) -> Vec<Range<usize>> {
        self.nodes
            .iter()
            .filter(|n| n.leaf.is_none() && n.label == label)
            .filter(|n| range.start <= n.span.start && n.span.end <= range.end)
            .map(|n| n.span.clone())
            .collect()
    }

    /// Number of embedded clauses (clause nodes beyond the outermost one).
    pub fn subclauses(&self) -> usize {
        let clauses = self
            .nodes
            .iter()
            .filter(|n| n.leaf.is_none() && matches!(n.label.as_str(), "S" | "SBAR" | "SBARQ" | "SINV" | "SQ"))
            .count();
        clauses.saturating_sub(1)
    }

    /// Uppermost node headed by token `i`.
    pub fn maximal_projection(&self, i: usize) -> Option<usize> {
        let mut n = *self.leaves.get(i)?;
        while let Some(p) = self.nodes[n].parent {
            if self.nodes[p].head != i {
                break;
            }
            n = p;
        }
        Some(n)
    }

    fn assign_heads(&mut self, n: usize) -> usize {
        if let Some(leaf) = self.nodes[n].leaf {
            self.nodes[n].head = leaf;
            return leaf;
        }
        let children = self.nodes[n].children.clone();
        let heads: Vec<usize> = children.iter().map(|&c| self.assign_heads(c)).collect();
        let labels: Vec<&str> = children.iter().map(|&c| self.nodes[c].label.as_str()).collect();
        let k = head_child(&self.nodes[n].label, &labels);
        let head = heads.get(k).copied().unwrap_or(0);
        self.nodes[n].head = head;
        head
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nodes: Vec<TreeNode>,
    leaves: Vec<usize>,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && !self.chars[self.pos].is_whitespace() && !matches!(self.chars[self.pos], '(' | ')') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn push(&mut self, label: String, parent: Option<usize>, depth: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode { label, parent, children: Vec::new(), leaf: None, depth, span: 0..0, head: 0 });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }

    fn node(&mut self, parent: Option<usize>, depth: usize) -> Result<usize> {
        if self.chars.get(self.pos) != Some(&'(') {
            return Err(Error::parse(1, format!("expected `(` at char {}", self.pos)));
        }
        self.pos += 1;
        self.skip_ws();
        let mut label = self.atom();
        if label.is_empty() {
            label = "ROOT".to_string();
        }
        let id = self.push(label, parent, depth);
        let first_leaf = self.leaves.len();
        loop {
            self.skip_ws();
            match self.chars.get(self.pos) {
                None => return Err(Error::parse(1, "unbalanced parentheses in tree")),
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some('(') => {
                    self.node(Some(id), depth + 1)?;
                }
                Some(_) => {
                    let word = self.atom();
                    let leaf = self.push(word, Some(id), depth + 1);
                    let index = self.leaves.len();
                    self.nodes[leaf].leaf = Some(index);
                    self.nodes[leaf].span = index..index + 1;
                    self.leaves.push(leaf);
                }
            }
        }
        if self.nodes[id].children.is_empty() {
            return Err(Error::parse(1, format!("empty constituent `{}`", self.nodes[id].label)));
        }
        self.nodes[id].span = first_leaf..self.leaves.len();
        Ok(id)
    }
}

enum Dir {
    LeftToRight,
    RightToLeft,
}

/// Collins-style head child selection.
fn head_child(label: &str, children: &[&str]) -> usize {
    use Dir::*;
    if children.len() <= 1 {
        return 0;
    }
    if label == "NP" || label == "NX" {
        return np_head(children);
    }
    let (dir, priority): (Dir, &[&str]) = match label {
        "ADJP" => (LeftToRight, &["NNS", "QP", "NN", "$", "ADVP", "JJ", "VBN", "VBG", "ADJP", "JJR", "NP", "JJS", "DT", "FW", "RBR", "RBS", "SBAR", "RB"]),
        "ADVP" => (RightToLeft, &["RB", "RBR", "RBS", "FW", "ADVP", "TO", "CD", "JJR", "JJ", "IN", "NP", "JJS", "NN"]),
        "CONJP" => (RightToLeft, &["CC", "RB", "IN"]),
        "FRAG" => (RightToLeft, &[]),
        "LST" => (RightToLeft, &["LS", ":"]),
        "PP" => (LeftToRight, &["IN", "TO", "VBG", "VBN", "RP", "FW"]),
        "PRN" => (LeftToRight, &[]),
        "PRT" => (RightToLeft, &["RP"]),
        "QP" => (LeftToRight, &["$", "IN", "NNS", "NN", "JJ", "RB", "DT", "CD", "NCD", "QP", "JJR", "JJS"]),
        "S" => (LeftToRight, &["TO", "IN", "VP", "S", "SBAR", "ADJP", "UCP", "NP"]),
        "SBAR" => (LeftToRight, &["WHNP", "WHPP", "WHADVP", "WHADJP", "IN", "DT", "S", "SQ", "SINV", "SBAR", "FRAG"]),
        "SBARQ" => (LeftToRight, &["SQ", "S", "SINV", "SBARQ", "FRAG"]),
        "SINV" => (LeftToRight, &["VBZ", "VBD", "VBP", "VB", "MD", "VP", "S", "SINV", "ADJP", "NP"]),
        "SQ" => (LeftToRight, &["VBZ", "VBD", "VBP", "VB", "MD", "VP", "SQ"]),
        "UCP" => (RightToLeft, &[]),
        "VP" => (LeftToRight, &["TO", "VBD", "VBN", "MD", "VBZ", "VB", "VBG", "VBP", "VP", "ADJP", "NN", "NNS", "NP"]),
        "WHADJP" => (LeftToRight, &["CC", "WRB", "JJ", "ADJP"]),
        "WHADVP" => (RightToLeft, &["CC", "WRB"]),
        "WHNP" => (LeftToRight, &["WDT", "WP", "WP$", "WHADJP", "WHPP", "WHNP"]),
        "WHPP" => (RightToLeft, &["IN", "TO", "FW"]),
        _ => (LeftToRight, &[]),
    };
    for cat in priority {
        let found = match dir {
            LeftToRight => children.iter().position(|c| c == cat),
            RightToLeft => children.iter().rposition(|c| c == cat),
        };
        if let Some(k) = found {
            return k;
        }
    }
    match dir {
        LeftToRight => 0,
        RightToLeft => children.len() - 1,
    }
}

fn np_head(children: &[&str]) -> usize {
    let last = children.len() - 1;
    if children[last] == "POS" {
        return last;
    }
    let find_rev = |cats: &[&str]| children.iter().rposition(|c| cats.contains(c));
    if let Some(k) = find_rev(&["NN", "NNP", "NNPS", "NNS", "NX", "POS", "JJR"]) {
        return k;
    }
    if let Some(k) = children.iter().position(|c| *c == "NP") {
        return k;
    }
    for cats in [&["$", "ADJP", "PRN"][..], &["CD"], &["JJ", "JJS", "RB", "QP"]] {
        if let Some(k) = find_rev(cats) {
            return k;
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREE: &str = "(ROOT (S (NP (PRP I)) (VP (VBP think) (SBAR (IN that) (S (NP (NN technology)) (VP (VBZ helps) (NP (NNS people)))))) (. .)))";

    #[test]
    fn parses_leaves_and_pos() {
        let t = ParseTree::parse(TREE).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.pos(1), Some("VBP"));
        assert_eq!(t.pos(6), Some("."));
        // ROOT-S-VP-SBAR-S-VP-NP-NNS-people
        assert_eq!(t.depth(), 8);
    }

    #[test]
    fn lca_paths() {
        let t = ParseTree::parse(TREE).unwrap();
        // I / think meet at S: I -> PRP -> NP -> S = 3 edges.
        assert_eq!(t.lca_path_len(0, 1), Some(3));
        let lca = t.lca(0, 1).unwrap();
        assert_eq!(t.nodes[lca].label, "S");
        // that / technology meet at SBAR: that -> IN -> SBAR = 2.
        assert_eq!(t.lca_path_len(2, 3), Some(2));
        assert_eq!(t.lca_path_len(3, 2), Some(4));
    }

    #[test]
    fn heads_follow_collins_rules() {
        let t = ParseTree::parse(TREE).unwrap();
        // Sentence headed by the main verb "think".
        assert_eq!(t.nodes[0].head, 1);
        let top_proj = t.maximal_projection(1).unwrap();
        assert_eq!(t.nodes[top_proj].label, "ROOT");
        let helps = t.maximal_projection(4).unwrap();
        assert_eq!(t.nodes[helps].label, "S");
        assert_eq!(t.subclauses(), 2);
    }

    #[test]
    fn production_rules_within_range() {
        let t = ParseTree::parse(TREE).unwrap();
        let rules = t.production_rules(3..6);
        assert_eq!(rules, vec!["S->NP_VP", "NP->NN", "VP->VBZ_NP", "NP->NNS"]);
    }

    #[test]
    fn rejects_unbalanced() {
        assert!(ParseTree::parse("(S (NP (NN x))").is_err());
        assert!(ParseTree::parse("(S (NP (NN x))))").is_err());
    }
}
