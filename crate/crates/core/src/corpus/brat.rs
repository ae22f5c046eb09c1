//! Reading and writing brat standoff annotations.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::{ArgumentComponent, ArgumentativeRelation, ComponentType, Document, RelationType, Sidecar, Span, Stance};
use crate::error::{Error, Result};

/// Parses an essay and its `.ann` file using the built-in segmentation.
pub fn parse_brat(essay_id: &str, text: &str, ann: &str) -> Result<Document> {
    parse_brat_with_layers(essay_id, text, ann, None)
}

/// Parses an essay and its `.ann` file; sidecar layers replace the built-in
/// segmentation when they carry tokens.
pub fn parse_brat_with_layers(essay_id: &str, text: &str, ann: &str, sidecar: Option<&Sidecar>) -> Result<Document> {
    let mut doc = Document::new(essay_id, text, sidecar)?;
    let mut stances: Vec<(usize, String, Stance)> = Vec::new();
    let mut seen_ids = HashSet::new();

    for (k, raw) in ann.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim_end_matches(['\r', '\t']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let id = fields.next().unwrap_or_default();
        let body = fields.next().ok_or_else(|| Error::parse(line_no, "missing tab-separated body"))?;
        let tail = fields.next();
        if !seen_ids.insert(id.to_string()) {
            return Err(Error::parse(line_no, format!("duplicate annotation id `{id}`")));
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        match id.chars().next() {
            Some('T') => {
                if parts.len() != 3 {
                    return Err(Error::parse(line_no, format!("expected `<Type> <start> <end>`, got `{body}`")));
                }
                let ctype: ComponentType =
                    parts[0].parse().map_err(|_| Error::parse(line_no, format!("unknown component type `{}`", parts[0])))?;
                let offset = |s: &str| {
                    s.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad offset `{s}`")))
                };
                let span = Span::new(offset(parts[1])?, offset(parts[2])?);
                if span.is_empty() || span.end > doc.char_len() {
                    return Err(Error::parse(line_no, format!("offsets {span} outside the essay text")));
                }
                if let Some(t) = tail {
                    if t != doc.slice(span) {
                        log::warn!("{essay_id}:{line_no}: annotated text differs from the essay text at {span}");
                    }
                }
                doc.components.push(ArgumentComponent {
                    id: id.to_string(),
                    ctype,
                    span,
                    stance: None,
                    preceding_span: None,
                });
            }
            Some('A') => {
                if parts.len() != 3 || parts[0] != "Stance" {
                    return Err(Error::parse(line_no, format!("expected `Stance <T> For|Against`, got `{body}`")));
                }
                let stance: Stance =
                    parts[2].parse().map_err(|_| Error::parse(line_no, format!("unknown stance `{}`", parts[2])))?;
                stances.push((line_no, parts[1].to_string(), stance));
            }
            Some('R') => {
                if parts.len() != 3 {
                    return Err(Error::parse(line_no, format!("expected `<type> Arg1:<T> Arg2:<T>`, got `{body}`")));
                }
                let rtype = match parts[0] {
                    "supports" => RelationType::Support,
                    "attacks" => RelationType::Attack,
                    other => return Err(Error::parse(line_no, format!("unknown relation type `{other}`"))),
                };
                let arg = |s: &str, key: &str| {
                    s.strip_prefix(key)
                        .map(str::to_string)
                        .ok_or_else(|| Error::parse(line_no, format!("expected `{key}<T>`, got `{s}`")))
                };
                doc.relations.push(ArgumentativeRelation {
                    id: id.to_string(),
                    source: arg(parts[1], "Arg1:")?,
                    target: arg(parts[2], "Arg2:")?,
                    rtype,
                });
            }
            _ => return Err(Error::parse(line_no, format!("unsupported annotation id `{id}`"))),
        }
    }

    let index: HashMap<String, usize> = doc.components.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();
    for (line_no, target, stance) in stances {
        let i = *index
            .get(&target)
            .ok_or_else(|| Error::Reference(format!("{essay_id}:{line_no}: stance refers to unknown `{target}`")))?;
        doc.components[i].stance = Some(stance);
    }
    for r in &doc.relations {
        for end in [&r.source, &r.target] {
            if !index.contains_key(end) {
                return Err(Error::Reference(format!("{essay_id}: relation {} refers to unknown `{end}`", r.id)));
            }
        }
    }

    doc.components.sort_by_key(|c| (c.span.start, c.span.end));
    for w in doc.components.windows(2) {
        if w[0].span.overlaps(&w[1].span) {
            return Err(Error::Validity(format!(
                "{essay_id}: components {} {} and {} {} overlap",
                w[0].id, w[0].span, w[1].id, w[1].span
            )));
        }
    }
    doc.assign_preceding_spans();
    Ok(doc)
}

/// Serializes components, stances and relations as brat standoff.
pub fn to_brat(doc: &Document) -> String {
    let mut out = String::new();
    for c in &doc.components {
        let text = doc.slice(c.span).replace(['\n', '\t'], " ");
        let _ = writeln!(out, "{}\t{} {} {}\t{}", c.id, c.ctype, c.span.start, c.span.end, text);
    }
    for (k, c) in doc.components.iter().filter(|c| c.stance.is_some()).enumerate() {
        let stance = c.stance.map(|s| s.as_str()).unwrap_or_default();
        let _ = writeln!(out, "A{}\tStance {} {}", k + 1, c.id, stance);
    }
    for r in &doc.relations {
        let _ = writeln!(out, "{}\t{} Arg1:{} Arg2:{}\t", r.id, r.rtype.brat_label(), r.source, r.target);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TEXT: &str = "Prompt\n\nWe should act. It helps everyone.\nSecond paragraph here.\n";

    #[test]
    fn decodes_records() {
        let ann = "T1\tMajorClaim 8 21\tWe should act\nT2\tPremise 23 40\tIt helps everyone\n\
                   A1\tStance T1 For\nR1\tsupports Arg1:T2 Arg2:T1\t\n";
        let doc = parse_brat("e", TEXT, ann).unwrap();
        assert_eq!(doc.components.len(), 2);
        assert_eq!(doc.components[0].ctype, ComponentType::MajorClaim);
        assert_eq!(doc.components[0].span, Span::new(8, 21));
        assert_eq!(doc.components[0].stance, Some(Stance::For));
        assert_eq!(doc.relations[0].source, "T2");
        assert_eq!(doc.relations[0].rtype, RelationType::Support);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let ann = "T1\tClaim 8 21\tWe should act\nT2 Premise 23 40\n";
        match parse_brat("e", TEXT, ann) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_relation_is_reference_error() {
        let ann = "T1\tClaim 8 21\tWe should act\nR1\tattacks Arg1:T9 Arg2:T1\n";
        assert!(matches!(parse_brat("e", TEXT, ann), Err(Error::Reference(_))));
    }

    #[test]
    fn overlapping_components_are_rejected() {
        let ann = "T1\tClaim 8 21\tWe should act\nT2\tPremise 18 30\tx\n";
        assert!(matches!(parse_brat("e", TEXT, ann), Err(Error::Validity(_))));
    }

    fn record_set(ann: &str) -> Vec<String> {
        let mut lines: Vec<String> = ann
            .lines()
            .filter(|l| !l.starts_with('A'))
            .map(|l| l.trim_end_matches('\t').to_string())
            .collect();
        let mut stances: Vec<String> =
            ann.lines().filter(|l| l.starts_with('A')).map(|l| l.split('\t').nth(1).unwrap().to_string()).collect();
        lines.append(&mut stances);
        lines.sort();
        lines
    }

    proptest! {
        #[test]
        fn serialization_round_trips(cuts in proptest::collection::btree_set(8usize..62, 0..10), seed in any::<u64>()) {
            // Consecutive cut points become non-overlapping components.
            let cuts: Vec<usize> = cuts.into_iter().collect();
            let mut ann = String::new();
            let mut ids = Vec::new();
            let types = ["MajorClaim", "Claim", "Premise"];
            for (k, w) in cuts.chunks(2).enumerate() {
                if w.len() < 2 { break; }
                let id = format!("T{}", k + 1);
                let t = types[((seed >> (2 * k)) % 3) as usize];
                ann.push_str(&format!("{id}\t{t} {} {}\t{}\n", w[0], w[1], TEXT.chars().skip(w[0]).take(w[1] - w[0]).collect::<String>().replace('\n', " ")));
                if t == "Claim" {
                    ann.push_str(&format!("A{}\tStance {id} {}\n", k + 1, if seed & 1 == 0 { "For" } else { "Against" }));
                }
                ids.push(id);
            }
            for (k, pair) in ids.windows(2).enumerate() {
                ann.push_str(&format!("R{}\tsupports Arg1:{} Arg2:{}\t\n", k + 1, pair[1], pair[0]));
            }
            let doc = parse_brat("e", TEXT, &ann).unwrap();
            let again = parse_brat("e", TEXT, &to_brat(&doc)).unwrap();
            prop_assert_eq!(&doc, &again);
            prop_assert_eq!(record_set(&ann), record_set(&to_brat(&doc)));
        }
    }
}
