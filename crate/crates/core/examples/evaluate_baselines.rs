//! Scores the trained pipeline against the heuristic and majority
//! baselines on the fixture test split, with a McNemar test of parser
//! against heuristic per task.
//!
//!     cargo run --release --example evaluate_baselines

use std::path::Path;

use argstruct::corpus::{load_corpus_dir, load_split};
use argstruct::eval::{mcnemar, PairedOutcomes};
use argstruct::pipeline::{
    class_distribution, gold_labels, heuristic_baseline, majority_baseline, parse_corpus, parser_matrix,
    predicted_labels, task_matrix, train_models, PipelineConfig, Task,
};

fn main() -> argstruct::Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let docs = load_corpus_dir(&root.join("essays"))?;
    let split = load_split(&root.join("split.csv"))?.partition(docs)?;
    let end_to_end = PipelineConfig::default();
    let on_gold = PipelineConfig { gold_components: true, ..Default::default() };
    let models = train_models(&split.train, &end_to_end)?;
    let parsed_e2e = parse_corpus(&split.test, &models, &end_to_end)?;
    let parsed_gold = parse_corpus(&split.test, &models, &on_gold)?;

    println!("{:<10} {:>7} {:>9} {:>8} {:>9}", "task", "parser", "heuristic", "majority", "mcnemar");
    for task in Task::ALL {
        let parsed = if task == Task::Identify { &parsed_e2e } else { &parsed_gold };
        let parser = task.scores(&parser_matrix(task, &split.test, parsed)?);
        let heuristic = task.scores(&task_matrix(task, &split.test, |_, d| heuristic_baseline(task, d))?);
        let dist = class_distribution(task, &split.train);
        let majority = task.scores(&task_matrix(task, &split.test, |_, d| majority_baseline(task, &dist, d))?);

        let gold: Vec<String> = split.test.iter().flat_map(|d| gold_labels(task, d)).collect();
        let pred: Vec<String> =
            split.test.iter().zip(parsed).flat_map(|(d, p)| predicted_labels(task, d, p)).collect();
        let heur: Vec<String> = split.test.iter().flat_map(|d| heuristic_baseline(task, d)).collect();
        let test = mcnemar(&PairedOutcomes::from_predictions(&gold, &pred, &heur)?);
        println!(
            "{:<10} {:>7.3} {:>9.3} {:>8.3} {:>8.2}{}",
            task.as_str(),
            parser.f1,
            heuristic.f1,
            majority.f1,
            test.statistic,
            if test.significant { "*" } else { "" }
        );
    }
    Ok(())
}
