//! Markables and labels per task, aligned between gold documents, parser
//! output and baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ParsedEssay;
use crate::corpus::{encode_iob, ComponentType, Document, RelationType, Stance};
use crate::error::{Error, Result};
use crate::eval::{macro_prf_over, ConfusionMatrix, MacroScores};

/// Label for a gold component the parser did not find with the exact span.
pub const UNMATCHED: &str = "None";
pub const LINKED: &str = "Linked";
pub const NOT_LINKED: &str = "Not-Linked";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Identify,
    Classify,
    Relations,
    Stance,
}

impl Task {
    pub const ALL: [Task; 4] = [Task::Identify, Task::Classify, Task::Relations, Task::Stance];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Identify => "identify",
            Task::Classify => "classify",
            Task::Relations => "relations",
            Task::Stance => "stance",
        }
    }

    /// Scored classes in reporting order.
    pub fn classes(&self) -> &'static [&'static str] {
        match self {
            Task::Identify => &["Arg-B", "Arg-I", "O"],
            Task::Classify => &["MajorClaim", "Claim", "Premise"],
            Task::Relations => &[NOT_LINKED, LINKED],
            Task::Stance => &["Support", "Attack"],
        }
    }

    /// Matrix axes: the classes plus [`UNMATCHED`] where a gold markable can
    /// go without a prediction.
    pub fn axes(&self) -> Vec<&'static str> {
        let mut out = self.classes().to_vec();
        if matches!(self, Task::Classify | Task::Stance) {
            out.push(UNMATCHED);
        }
        out
    }

    pub fn matrix(&self) -> ConfusionMatrix {
        ConfusionMatrix::new(&self.axes())
    }

    /// Macro scores over the task's classes only.
    pub fn scores(&self, cm: &ConfusionMatrix) -> MacroScores {
        macro_prf_over(cm, self.classes().len())
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown task `{s}` (identify, classify, relations, stance)")))
    }
}

pub(crate) fn stance_label(stance: Option<Stance>) -> RelationType {
    match stance {
        Some(Stance::Against) => RelationType::Attack,
        _ => RelationType::Support,
    }
}

pub(crate) fn relation_label(r: RelationType) -> &'static str {
    match r {
        RelationType::Support => "Support",
        RelationType::Attack => "Attack",
    }
}

/// Ordered pairs of non-major-claim components sharing a paragraph, source
/// index major within each paragraph.
pub fn relation_pairs(doc: &Document, types: &[ComponentType]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for group in doc.components_by_paragraph() {
        let members: Vec<usize> = group.into_iter().filter(|&i| types[i] != ComponentType::MajorClaim).collect();
        for &i in &members {
            for &j in &members {
                if i != j {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// Claims and premises with their support/attack label: the stance of a
/// claim, the type of a premise's outgoing relation.
pub fn stance_markables(doc: &Document) -> Vec<(usize, RelationType)> {
    doc.components
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c.ctype {
            ComponentType::MajorClaim => None,
            ComponentType::Claim => Some((i, stance_label(c.stance))),
            ComponentType::Premise => {
                let r = doc.relations.iter().find(|r| r.source == c.id).map_or(RelationType::Support, |r| r.rtype);
                Some((i, r))
            }
        })
        .collect()
}

fn gold_types(doc: &Document) -> Vec<ComponentType> {
    doc.components.iter().map(|c| c.ctype).collect()
}

fn linked(doc: &Document, i: usize, j: usize) -> bool {
    let (a, b) = (&doc.components[i].id, &doc.components[j].id);
    doc.relations.iter().any(|r| &r.source == a && &r.target == b)
}

/// Gold label of every markable of `task`.
pub fn gold_labels(task: Task, doc: &Document) -> Vec<String> {
    match task {
        Task::Identify => encode_iob(doc).iter().map(|l| l.as_str().to_string()).collect(),
        Task::Classify => doc.components.iter().map(|c| c.ctype.as_str().to_string()).collect(),
        Task::Relations => relation_pairs(doc, &gold_types(doc))
            .into_iter()
            .map(|(i, j)| if linked(doc, i, j) { LINKED } else { NOT_LINKED }.to_string())
            .collect(),
        Task::Stance => stance_markables(doc).into_iter().map(|(_, r)| relation_label(r).to_string()).collect(),
    }
}

/// Parser labels aligned with [`gold_labels`]; gold components are matched
/// to predicted ones by exact span.
pub fn predicted_labels(task: Task, gold: &Document, parsed: &ParsedEssay) -> Vec<String> {
    let pred = &parsed.document;
    let matched = |g: usize| pred.components.iter().position(|c| c.span == gold.components[g].span);
    match task {
        Task::Identify => encode_iob(pred).iter().map(|l| l.as_str().to_string()).collect(),
        Task::Classify => (0..gold.components.len())
            .map(|g| matched(g).map_or(UNMATCHED, |p| pred.components[p].ctype.as_str()).to_string())
            .collect(),
        Task::Relations => relation_pairs(gold, &gold_types(gold))
            .into_iter()
            .map(|(i, j)| {
                let hit = matches!((matched(i), matched(j)), (Some(a), Some(b)) if linked(pred, a, b));
                if hit { LINKED } else { NOT_LINKED }.to_string()
            })
            .collect(),
        Task::Stance => stance_markables(gold)
            .into_iter()
            .map(|(g, _)| {
                matched(g)
                    .and_then(|p| parsed.stances[p])
                    .map_or(UNMATCHED, relation_label)
                    .to_string()
            })
            .collect(),
    }
}

/// Relation labels of the base classifier before tree inference, aligned
/// with [`gold_labels`] for [`Task::Relations`].
pub fn base_relation_labels(gold: &Document, parsed: &ParsedEssay) -> Vec<String> {
    let matched = |g: usize| parsed.document.components.iter().position(|c| c.span == gold.components[g].span);
    relation_pairs(gold, &gold_types(gold))
        .into_iter()
        .map(|(i, j)| {
            let hit = matches!((matched(i), matched(j)), (Some(a), Some(b)) if parsed.base_relations.contains(&(a, b)));
            if hit { LINKED } else { NOT_LINKED }.to_string()
        })
        .collect()
}

/// Adds aligned gold and predicted labels to `cm`.
pub fn accumulate(cm: &mut ConfusionMatrix, gold: &[String], predicted: &[String]) -> Result<()> {
    if gold.len() != predicted.len() {
        return Err(Error::Contract(format!("{} gold labels but {} predictions", gold.len(), predicted.len())));
    }
    for (g, p) in gold.iter().zip(predicted) {
        cm.add(g, p)?;
    }
    Ok(())
}
