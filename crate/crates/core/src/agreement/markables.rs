//! Markables for agreement studies: each essay annotated independently by
//! several raters, one [`Document`] per rater over the same text.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    confusion_probability_matrix, fleiss_kappa, joint_alpha_u, krippendorff_alpha_u, observed_agreement, AgreementTable,
    Continuum, Unit,
};
use crate::corpus::{component_pairs, ComponentType, Document, RelationType, Span, Stance};
use crate::error::{Error, Result};

pub const COMPONENT_CATEGORIES: [&str; 4] = ["MajorClaim", "Claim", "Premise", "NoArg"];
pub const RELATION_CATEGORIES: [&str; 3] = ["Support", "Attack", "Not-Linked"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgreementRow {
    pub metric: String,
    pub category: String,
    pub value: f64,
}

fn check_essay(raters: &[Document]) -> Result<()> {
    let Some(first) = raters.first() else {
        return Err(Error::UndefinedInput("essay without annotations".into()));
    };
    if raters.iter().any(|d| d.text != first.text || d.sentences.len() != first.sentences.len()) {
        return Err(Error::UndefinedInput(format!("{}: raters annotated different texts", first.essay_id)));
    }
    Ok(())
}

/// Components of `doc` overlapping sentence `s`, in text order.
fn sentence_components(doc: &Document, s: usize) -> impl Iterator<Item = &crate::corpus::ArgumentComponent> {
    let sent = doc.sentences[s].span;
    let mut comps: Vec<_> = doc.components.iter().filter(move |c| c.span.overlaps(&sent)).collect();
    comps.sort_by_key(|c| c.span.start);
    comps.into_iter()
}

/// Per-sentence presence of `ctype`: category 0 = present, 1 = absent.
pub fn sentence_presence_table(study: &[Vec<Document>], ctype: ComponentType) -> Result<AgreementTable> {
    let mut labels = Vec::new();
    for raters in study {
        check_essay(raters)?;
        for s in 0..raters[0].sentences.len() {
            labels.push(
                raters
                    .iter()
                    .map(|d| usize::from(!sentence_components(d, s).any(|c| c.ctype == ctype)))
                    .collect(),
            );
        }
    }
    AgreementTable::from_labels(&labels, 2)
}

/// Per-sentence stance: 0 = for, 1 = against, 2 = no claim. A sentence with
/// several claims of different stance takes the first claim's stance; the
/// number of such sentences is returned alongside the table.
pub fn stance_table(study: &[Vec<Document>]) -> Result<(AgreementTable, usize)> {
    let mut labels = Vec::new();
    let mut mixed = 0;
    for raters in study {
        check_essay(raters)?;
        for s in 0..raters[0].sentences.len() {
            let row = raters
                .iter()
                .map(|d| {
                    let stances: Vec<Option<Stance>> =
                        sentence_components(d, s).filter(|c| c.ctype == ComponentType::Claim).map(|c| c.stance).collect();
                    if stances.windows(2).any(|w| w[0] != w[1]) {
                        mixed += 1;
                    }
                    match stances.first() {
                        Some(Some(Stance::Against)) => 1,
                        Some(_) => 0,
                        None => 2,
                    }
                })
                .collect();
            labels.push(row);
        }
    }
    if mixed > 0 {
        log::warn!("{mixed} sentence annotations hold claims of mixed stance; first claim's stance used");
    }
    Ok((AgreementTable::from_labels(&labels, 3)?, mixed))
}

/// Per-sentence component category (index into [`COMPONENT_CATEGORIES`]),
/// taken from the first component overlapping the sentence.
pub fn component_label_sequences(study: &[Vec<Document>]) -> Result<Vec<Vec<usize>>> {
    let mut labels = Vec::new();
    for raters in study {
        check_essay(raters)?;
        for s in 0..raters[0].sentences.len() {
            labels.push(
                raters
                    .iter()
                    .map(|d| match sentence_components(d, s).next().map(|c| c.ctype) {
                        Some(ComponentType::MajorClaim) => 0,
                        Some(ComponentType::Claim) => 1,
                        Some(ComponentType::Premise) => 2,
                        None => 3,
                    })
                    .collect(),
            );
        }
    }
    Ok(labels)
}

/// Relation labels (index into [`RELATION_CATEGORIES`]) for ordered pairs of
/// components sharing a paragraph. Only components annotated with the same
/// span by every rater form markables.
pub fn relation_label_sequences(study: &[Vec<Document>]) -> Result<Vec<Vec<usize>>> {
    let mut labels = Vec::new();
    for raters in study {
        check_essay(raters)?;
        let first = &raters[0];
        let shared: Vec<Span> = first
            .components
            .iter()
            .map(|c| c.span)
            .filter(|span| raters.iter().all(|d| d.components.iter().any(|c| c.span == *span)))
            .collect();
        let rater_links: Vec<HashMap<(Span, Span), RelationType>> = raters
            .iter()
            .map(|d| {
                d.relations
                    .iter()
                    .filter_map(|r| Some(((d.component(&r.source)?.span, d.component(&r.target)?.span), r.rtype)))
                    .collect()
            })
            .collect();
        for p in 0..first.paragraphs.len() {
            let group: Vec<Span> = shared.iter().copied().filter(|s| first.paragraph_of(*s) == Some(p)).collect();
            for (a, b) in component_pairs(group.len()) {
                labels.push(
                    rater_links
                        .iter()
                        .map(|links| match links.get(&(group[a], group[b])) {
                            Some(RelationType::Support) => 0,
                            Some(RelationType::Attack) => 1,
                            None => 2,
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(labels)
}

/// Binary relation table for one relation type: 0 = that type, 1 = other.
pub fn relation_table(study: &[Vec<Document>], rtype: RelationType) -> Result<AgreementTable> {
    let target = match rtype {
        RelationType::Support => 0,
        RelationType::Attack => 1,
    };
    let labels: Vec<Vec<usize>> = relation_label_sequences(study)?
        .into_iter()
        .map(|row| row.into_iter().map(|l| usize::from(l != target)).collect())
        .collect();
    AgreementTable::from_labels(&labels, 2)
}

/// One token continuum per rater, essays appended in study order.
pub fn component_continua(study: &[Vec<Document>]) -> Result<Vec<Continuum>> {
    let raters = study.first().map_or(0, Vec::len);
    if study.iter().any(|e| e.len() != raters) {
        return Err(Error::UndefinedInput("essays annotated by different numbers of raters".into()));
    }
    (0..raters)
        .map(|r| {
            let parts = study
                .iter()
                .map(|essay| {
                    check_essay(essay)?;
                    let d = &essay[r];
                    let units = d
                        .components
                        .iter()
                        .filter_map(|c| {
                            let range = d.token_range(c.span);
                            (!range.is_empty()).then(|| Unit { start: range.start, end: range.end, category: c.ctype.to_string() })
                        })
                        .collect();
                    Continuum::new(d.tokens.len(), units)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Continuum::concat(&parts))
        })
        .collect()
}

/// Every agreement figure of a study, as `(metric, category, value)` rows.
/// Figures that are undefined for the data (e.g. a category nobody used)
/// are skipped with a warning.
pub fn agreement_report(study: &[Vec<Document>]) -> Result<Vec<AgreementRow>> {
    let mut rows = Vec::new();
    let mut push = |metric: &str, category: &str, value: Result<f64>| match value {
        Ok(v) => rows.push(AgreementRow { metric: metric.into(), category: category.into(), value: v }),
        Err(e) => log::warn!("{metric} for {category}: {e}"),
    };
    for t in ComponentType::ALL {
        let table = sentence_presence_table(study, t)?;
        push("observed_agreement", t.as_str(), observed_agreement(&table));
        push("fleiss_kappa", t.as_str(), fleiss_kappa(&table));
    }
    let continua = component_continua(study)?;
    for t in ComponentType::ALL {
        push("alpha_u", t.as_str(), krippendorff_alpha_u(&continua, t.as_str()));
    }
    let names: Vec<&str> = ComponentType::ALL.iter().map(|t| t.as_str()).collect();
    push("alpha_u", "all", joint_alpha_u(&continua, &names));

    let (stance, _) = stance_table(study)?;
    push("observed_agreement", "Stance", observed_agreement(&stance));
    push("fleiss_kappa", "Stance", fleiss_kappa(&stance));
    for (rtype, name) in [(RelationType::Support, "Support"), (RelationType::Attack, "Attack")] {
        let table = relation_table(study, rtype)?;
        push("observed_agreement", name, observed_agreement(&table));
        push("fleiss_kappa", name, fleiss_kappa(&table));
    }

    let cpm = confusion_probability_matrix(&component_label_sequences(study)?, &COMPONENT_CATEGORIES)?;
    let rel = confusion_probability_matrix(&relation_label_sequences(study)?, &RELATION_CATEGORIES)?;
    for m in [&cpm, &rel] {
        for (r, row) in m.categories.iter().enumerate() {
            if m.undefined_rows.contains(&r) {
                log::warn!("cpm row {row} undefined: category never used");
                continue;
            }
            for (c, col) in m.categories.iter().enumerate() {
                push("cpm", &format!("{row}->{col}"), Ok(m.matrix[r][c]));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_brat;

    const TEXT: &str = "T\n\nCats are great. Dogs bark loudly. Birds sing.\nFish swim. Frogs jump.\n";

    fn rater(ann: &str) -> Document {
        parse_brat("e", TEXT, ann).unwrap()
    }

    #[test]
    fn sentence_tables_and_stance() {
        // Sentences start at 3, 19, 37, 50, 61.
        let a = rater("T1\tClaim 3 18\tCats are great\nA1\tStance T1 For\nT2\tPremise 19 34\tDogs bark loudly\n");
        let b = rater("T1\tClaim 3 18\tCats are great\nA1\tStance T1 Against\nT2\tClaim 19 34\tDogs bark loudly\nA2\tStance T2 For\n");
        let study = vec![vec![a, b]];
        let claims = sentence_presence_table(&study, ComponentType::Claim).unwrap();
        assert_eq!(claims.counts, vec![vec![2, 0], vec![1, 1], vec![0, 2], vec![0, 2], vec![0, 2]]);
        let (stance, mixed) = stance_table(&study).unwrap();
        assert_eq!(mixed, 0);
        assert_eq!(stance.counts[0], vec![1, 1, 0]);
        assert_eq!(stance.counts[1], vec![1, 0, 1]);
        let labels = component_label_sequences(&study).unwrap();
        assert_eq!(labels[1], vec![2, 1]);
        assert_eq!(labels[4], vec![3, 3]);
    }

    #[test]
    fn relation_markables_use_shared_components() {
        let ann = "T1\tClaim 3 18\tCats are great\nA1\tStance T1 For\nT2\tPremise 19 34\tDogs bark loudly\n";
        let a = rater(&format!("{ann}R1\tsupports Arg1:T2 Arg2:T1\n"));
        let b = rater(&format!("{ann}R1\tattacks Arg1:T2 Arg2:T1\n"));
        let labels = relation_label_sequences(&[vec![a, b]]).unwrap();
        assert_eq!(labels, vec![vec![2, 2], vec![0, 1]]);
    }
}
