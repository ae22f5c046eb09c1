//! How much would tree inference gain from better base classifiers? Trains
//! on the fixture, then corrects growing fractions of the base relation
//! errors and reports the scores after inference.
//!
//!     cargo run --release --example improvement_simulation

use std::path::Path;

use argstruct::corpus::{load_corpus_dir, load_split};
use argstruct::eval::{curve_csv, improvement_simulation, SimTarget};
use argstruct::joint::Phi;
use argstruct::pipeline::{parse_corpus, simulation_paragraphs, train_models, PipelineConfig};

fn main() -> argstruct::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let docs = load_corpus_dir(&root.join("essays"))?;
    let split = load_split(&root.join("split.csv"))?.partition(docs)?;
    let config = PipelineConfig { gold_components: true, ..Default::default() };
    let models = train_models(&split.train, &config)?;
    let parsed = parse_corpus(&split.test, &models, &config)?;
    let paragraphs = simulation_paragraphs(&split.test, &parsed);

    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let curve = improvement_simulation(&paragraphs, &grid, SimTarget::Relations, 10, 7, Phi::default())?;
    print!("{}", curve_csv(&curve));
    Ok(())
}
