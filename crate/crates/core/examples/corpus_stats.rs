//! Loads the bundled fixture corpus, prints its statistics and checks every
//! essay against the annotation rules.
//!
//!     cargo run --example corpus_stats [CORPUS_DIR]

use std::path::PathBuf;

use argstruct::corpus::{corpus_stats, load_corpus_dir, validate_attributes, validate_document};

fn main() -> argstruct::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/essays"));
    let docs = load_corpus_dir(&dir)?;
    print!("{}", corpus_stats(&docs).to_csv());

    let mut problems = 0;
    for d in &docs {
        for v in validate_document(d).into_iter().chain(validate_attributes(d)) {
            println!("{}: {v}", d.essay_id);
            problems += 1;
        }
    }
    println!("{} essays, {problems} violations", docs.len());
    Ok(())
}
