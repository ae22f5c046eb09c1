//! Rule-based and majority-class baselines, aligned with the gold markables
//! of each task.

use std::collections::BTreeMap;

use super::score::{gold_labels, relation_pairs, stance_markables, Task, LINKED, NOT_LINKED};
use crate::corpus::{ComponentType, Document, IobLabel, ParagraphRole};

/// Position rules over the essay layout:
///
/// - identify: every sentence except the first two and the last one is a
///   component, without its sentence-final full stop;
/// - classify: the last component of the introduction and the first of the
///   conclusion are major claims, the first of each body paragraph a claim,
///   all others premises;
/// - relations: a pair is linked iff its target is the first component of a
///   body paragraph;
/// - stance: components in the second-last paragraph attack, all others
///   support.
pub fn heuristic_baseline(task: Task, doc: &Document) -> Vec<String> {
    match task {
        Task::Identify => heuristic_iob(doc).into_iter().map(|l| l.as_str().to_string()).collect(),
        Task::Classify => heuristic_types(doc).into_iter().map(|t| t.as_str().to_string()).collect(),
        Task::Relations => {
            let types: Vec<ComponentType> = doc.components.iter().map(|c| c.ctype).collect();
            let firsts = body_firsts(doc);
            relation_pairs(doc, &types)
                .into_iter()
                .map(|(_, j)| if firsts.contains(&j) { LINKED } else { NOT_LINKED }.to_string())
                .collect()
        }
        Task::Stance => {
            let second_last = doc.paragraphs.len().checked_sub(2);
            stance_markables(doc)
                .into_iter()
                .map(|(i, _)| {
                    let attack = second_last.is_some() && doc.paragraph_of(doc.components[i].span) == second_last;
                    if attack { "Attack" } else { "Support" }.to_string()
                })
                .collect()
        }
    }
}

fn heuristic_iob(doc: &Document) -> Vec<IobLabel> {
    let mut labels = vec![IobLabel::O; doc.tokens.len()];
    let n = doc.sentences.len();
    for s in 2..n.saturating_sub(1) {
        let range = doc.sentences[s].tokens.clone();
        let mut end = range.end;
        if end > range.start && doc.tokens[end - 1].surface == "." {
            end -= 1;
        }
        if end > range.start {
            labels[range.start] = IobLabel::ArgB;
            for l in &mut labels[range.start + 1..end] {
                *l = IobLabel::ArgI;
            }
        }
    }
    labels
}

/// Index of the first component of each body paragraph.
fn body_firsts(doc: &Document) -> Vec<usize> {
    doc.components_by_paragraph()
        .iter()
        .enumerate()
        .filter(|(p, _)| doc.paragraph_role(*p) == ParagraphRole::Body)
        .filter_map(|(_, g)| g.first().copied())
        .collect()
}

fn heuristic_types(doc: &Document) -> Vec<ComponentType> {
    let mut types = vec![ComponentType::Premise; doc.components.len()];
    for (p, group) in doc.components_by_paragraph().iter().enumerate() {
        let pick = match doc.paragraph_role(p) {
            ParagraphRole::Introduction => group.last().map(|&i| (i, ComponentType::MajorClaim)),
            ParagraphRole::Conclusion => group.first().map(|&i| (i, ComponentType::MajorClaim)),
            ParagraphRole::Body => group.first().map(|&i| (i, ComponentType::Claim)),
        };
        if let Some((i, t)) = pick {
            types[i] = t;
        }
    }
    types
}

/// Gold class counts of `task` over `docs`.
pub fn class_distribution(task: Task, docs: &[Document]) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<String, usize> = task.classes().iter().map(|c| (c.to_string(), 0)).collect();
    for doc in docs {
        for l in gold_labels(task, doc) {
            *counts.entry(l).or_default() += 1;
        }
    }
    counts
}

/// Most frequent class; ties go to the earlier class in reporting order.
pub fn majority_class(task: Task, distribution: &BTreeMap<String, usize>) -> String {
    let mut best = task.classes()[0];
    for c in task.classes() {
        if distribution.get(*c).copied().unwrap_or(0) > distribution.get(best).copied().unwrap_or(0) {
            best = c;
        }
    }
    best.to_string()
}

/// The majority class for every markable of `doc`.
pub fn majority_baseline(task: Task, distribution: &BTreeMap<String, usize>, doc: &Document) -> Vec<String> {
    vec![majority_class(task, distribution); gold_labels(task, doc).len()]
}
