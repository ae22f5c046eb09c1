//! Agreement between two raters: the second rater copies the fixture
//! annotation but relabels the last premise of every paragraph as a claim
//! and drops its outgoing relation.
//!
//!     cargo run --example agreement_study

use std::path::Path;

use argstruct::agreement::agreement_report;
use argstruct::corpus::{load_corpus_dir, ComponentType, Document};

fn second_rater(doc: &Document) -> Document {
    let mut d = doc.clone();
    for group in d.components_by_paragraph() {
        let Some(&last) = group.iter().rev().find(|&&i| d.components[i].ctype == ComponentType::Premise) else {
            continue;
        };
        d.components[last].ctype = ComponentType::Claim;
        let id = d.components[last].id.clone();
        d.relations.retain(|r| r.source != id);
    }
    d
}

fn main() -> argstruct::Result<()> {
    let docs = load_corpus_dir(&Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/essays"))?;
    let study: Vec<Vec<Document>> = docs.iter().take(10).map(|d| vec![d.clone(), second_rater(d)]).collect();
    println!("{:<20} {:<24} {:>7}", "metric", "category", "value");
    for row in agreement_report(&study)? {
        println!("{:<20} {:<24} {:>7.4}", row.metric, row.category, row.value);
    }
    Ok(())
}
