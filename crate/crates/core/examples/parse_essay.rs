//! Trains the full pipeline on the fixture training split and parses the
//! first test essay from raw text.
//!
//!     cargo run --release --example parse_essay

use std::path::Path;

use argstruct::corpus::{load_corpus_dir, load_split};
use argstruct::pipeline::{run_pipeline, train_models, PipelineConfig};

fn main() -> argstruct::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let docs = load_corpus_dir(&root.join("essays"))?;
    let split = load_split(&root.join("split.csv"))?.partition(docs)?;
    let config = PipelineConfig::default();
    let models = train_models(&split.train, &config)?;

    let essay = &split.test[0];
    let parsed = run_pipeline(essay, &models, &config)?;
    let doc = &parsed.document;
    println!("{}: {} components, {} relations", doc.essay_id, doc.components.len(), doc.relations.len());
    for c in &doc.components {
        let stance = c.stance.map(|s| format!(" ({})", s.as_str())).unwrap_or_default();
        println!("  {} {}{stance}: {}", c.id, c.ctype.as_str(), doc.slice(c.span));
    }
    for r in &doc.relations {
        println!("  {} -{}-> {}", r.source, r.rtype.brat_label(), r.target);
    }
    for rec in &parsed.provenance {
        println!("  {:?} from {:?} in {} us", rec.stage, rec.source, rec.micros);
    }
    Ok(())
}
