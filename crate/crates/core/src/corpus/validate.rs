//! Structural checks of an annotated (or predicted) document.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ComponentType, Document};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    PremiseOutDegree,
    ClaimOutDegree,
    Cycle,
    CrossParagraph,
    SelfLoop,
    DanglingEndpoint,
    OutsideParagraph,
    StanceOnNonClaim,
    MissingStance,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::PremiseOutDegree => "premise out-degree",
            ViolationKind::ClaimOutDegree => "claim out-degree",
            ViolationKind::Cycle => "cycle",
            ViolationKind::CrossParagraph => "cross-paragraph relation",
            ViolationKind::SelfLoop => "self-loop",
            ViolationKind::DanglingEndpoint => "dangling endpoint",
            ViolationKind::OutsideParagraph => "component outside paragraph",
            ViolationKind::StanceOnNonClaim => "stance on non-claim",
            ViolationKind::MissingStance => "missing stance",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub component: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.kind.as_str(), self.component, self.detail)
    }
}

fn violation(kind: ViolationKind, component: &str, detail: impl Into<String>) -> Violation {
    Violation { kind, component: component.to_string(), detail: detail.into() }
}

/// Forest invariants per paragraph: every premise has exactly one outgoing
/// relation, claims and major claims have none, relations stay inside one
/// paragraph and form no cycle. An empty result means the document is valid.
pub fn validate_document(doc: &Document) -> Vec<Violation> {
    let mut out = Vec::new();
    let index: HashMap<&str, usize> = doc.components.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
    let para: Vec<Option<usize>> = doc.components.iter().map(|c| doc.paragraph_of(c.span)).collect();
    for (c, p) in doc.components.iter().zip(&para) {
        if p.is_none() {
            out.push(violation(ViolationKind::OutsideParagraph, &c.id, format!("span {} crosses or leaves paragraphs", c.span)));
        }
    }

    let mut out_degree = vec![0usize; doc.components.len()];
    for r in &doc.relations {
        let (Some(&s), Some(&t)) = (index.get(r.source.as_str()), index.get(r.target.as_str())) else {
            out.push(violation(ViolationKind::DanglingEndpoint, &r.id, format!("{} -> {}", r.source, r.target)));
            continue;
        };
        if s == t {
            out.push(violation(ViolationKind::SelfLoop, &r.source, format!("relation {}", r.id)));
            continue;
        }
        if para[s].is_none() || para[s] != para[t] {
            out.push(violation(ViolationKind::CrossParagraph, &r.source, format!("relation {} to {}", r.id, r.target)));
        }
        out_degree[s] += 1;
    }

    for (i, c) in doc.components.iter().enumerate() {
        match c.ctype {
            ComponentType::Premise if out_degree[i] != 1 => out.push(violation(
                ViolationKind::PremiseOutDegree,
                &c.id,
                format!("{} outgoing relations", out_degree[i]),
            )),
            ComponentType::Claim | ComponentType::MajorClaim if out_degree[i] != 0 => out.push(violation(
                ViolationKind::ClaimOutDegree,
                &c.id,
                format!("{} outgoing relations", out_degree[i]),
            )),
            _ => {}
        }
    }

    // Report each cycle once, at its smallest member.
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); doc.components.len()];
    for r in &doc.relations {
        if let (Some(&s), Some(&t)) = (index.get(r.source.as_str()), index.get(r.target.as_str())) {
            if s != t {
                adjacency[s].push(t);
            }
        }
    }
    for start in 0..doc.components.len() {
        if reaches(&adjacency, start, start) && (0..start).all(|j| !(reaches(&adjacency, start, j) && reaches(&adjacency, j, start))) {
            out.push(violation(ViolationKind::Cycle, &doc.components[start].id, "component reaches itself"));
        }
    }
    out
}

fn reaches(adjacency: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut stack: Vec<usize> = adjacency[from].clone();
    while let Some(n) = stack.pop() {
        if n == to {
            return true;
        }
        if !std::mem::replace(&mut seen[n], true) {
            stack.extend(&adjacency[n]);
        }
    }
    false
}

/// Stance checks: claims carry a stance, other components do not.
pub fn validate_attributes(doc: &Document) -> Vec<Violation> {
    let mut out = Vec::new();
    for c in &doc.components {
        match (c.ctype, c.stance) {
            (ComponentType::Claim, None) => out.push(violation(ViolationKind::MissingStance, &c.id, "claim without stance")),
            (ComponentType::Claim, Some(_)) => {}
            (t, Some(_)) => out.push(violation(ViolationKind::StanceOnNonClaim, &c.id, format!("{t} with stance"))),
            _ => {}
        }
    }
    out
}
