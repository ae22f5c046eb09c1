//! Command-line front end. `run` parses arguments, runs one subcommand and
//! returns the process exit code: 0 on success, 1 on data or model errors,
//! 2 on usage errors.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::agreement::agreement_report;
use crate::corpus::{
    corpus_stats, load_corpus_dir, load_split, parse_brat_with_layers, to_brat, validate_attributes,
    validate_document, Document, Partition, Sidecar,
};
use crate::error::{Error, Result};
use crate::eval::{
    curve_csv, fold_assignment, improvement_simulation, macro_prf, mcnemar, scores_csv, ConfusionMatrix,
    MacroScores, PairedOutcomes, SimTarget,
};
use crate::features::GROUPS;
use crate::pipeline::{
    base_relation_labels, class_distribution, gold_labels, heuristic_baseline, majority_baseline, parse_corpus,
    parser_matrix, predicted_labels, simulation_paragraphs, task_matrix, train_models, Models, ParsedEssay,
    PipelineConfig, Task,
};

#[derive(Parser, Debug)]
#[command(name = "argstruct", version, about = "Argumentation structure parser for persuasive essays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Brat corpus directory (`<id>.txt`, `<id>.ann`, optional `<id>.json`).
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Train/test split file (`ID;SET`).
    #[arg(long, global = true)]
    split: Option<PathBuf>,
    /// Model directory to read or write.
    #[arg(long, global = true)]
    models: Option<PathBuf>,
    /// Pipeline configuration (TOML); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file or directory; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long = "phi-r", global = true)]
    phi_r: Option<f64>,
    #[arg(long = "phi-cr", global = true)]
    phi_cr: Option<f64>,
    #[arg(long = "phi-c", global = true)]
    phi_c: Option<f64>,
    /// Comma-separated feature groups to use in every stage.
    #[arg(long, global = true, value_delimiter = ',')]
    features: Option<Vec<String>>,
    /// Use gold components instead of running identification.
    #[arg(long = "gold-components", global = true)]
    gold_components: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corpus size and annotation counts as CSV.
    Stats,
    /// Check annotation structure; exits 1 when violations are found.
    Validate,
    /// Check a split against the corpus and report per-set counts.
    Split,
    /// Train models on the training split (or the whole corpus).
    Train {
        #[arg(long, value_enum, default_value = "all")]
        stage: StageArg,
    },
    /// Parse essays and write `.ann` and `.json` files.
    Parse {
        /// A single essay text file; its `.json` sidecar is read if present.
        #[arg(long)]
        essay: Option<PathBuf>,
    },
    /// Score the parser on the test split, or cross-validate on training data.
    Eval {
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Heuristic and majority baseline scores.
    Baseline {
        #[arg(long, value_enum, default_value = "all")]
        task: TaskArg,
    },
    /// Agreement figures of a study: one rater directory per subdirectory.
    Agreement,
    /// Improvement simulation curves as CSV.
    Simulate {
        #[arg(long, value_enum, default_value = "both")]
        target: TargetArg,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        /// Number of grid steps between 0 and 1.
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StageArg {
    All,
    Identify,
    Classify,
    Relations,
    Stance,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TaskArg {
    All,
    Identify,
    Classify,
    Relations,
    Stance,
}

impl TaskArg {
    fn tasks(self) -> Vec<Task> {
        match self {
            TaskArg::All => Task::ALL.to_vec(),
            TaskArg::Identify => vec![Task::Identify],
            TaskArg::Classify => vec![Task::Classify],
            TaskArg::Relations => vec![Task::Relations],
            TaskArg::Stance => vec![Task::Stance],
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TargetArg {
    Types,
    Relations,
    Both,
}

/// Resolved options of one invocation.
#[derive(Debug, Clone)]
pub struct CommandSpec {
    pub subcommand: &'static str,
    pub corpus: Option<PathBuf>,
    pub split: Option<PathBuf>,
    pub models: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub config: PipelineConfig,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Usage(m),
            other => Failure::Data(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn init_logging() {
    let env = env_logger::Env::new().filter_or("ARGSTRUCT_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn resolve(name: &'static str, c: &Common) -> CliResult<CommandSpec> {
    let mut config = match &c.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = c.seed {
        config.train.seed = s;
    }
    if let Some(v) = c.phi_r {
        config.phi.r = v;
    }
    if let Some(v) = c.phi_cr {
        config.phi.cr = v;
    }
    if let Some(v) = c.phi_c {
        config.phi.c = v;
    }
    config.phi.validate()?;
    if c.gold_components {
        config.gold_components = true;
    }
    if let Some(groups) = &c.features {
        if let Some(bad) = groups.iter().find(|g| !GROUPS.contains(&g.as_str())) {
            return Err(Failure::Usage(format!("unknown feature group `{bad}` (known: {})", GROUPS.join(", "))));
        }
        let off: BTreeSet<String> =
            GROUPS.iter().filter(|g| !groups.iter().any(|x| x == *g)).map(|g| g.to_string()).collect();
        config.disabled.identify = off.clone();
        config.disabled.classify = off.clone();
        config.disabled.relations = off.clone();
        config.disabled.stance = off;
    }
    if let Some(n) = c.jobs {
        if n == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        // Fails only if a pool already exists, e.g. when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(CommandSpec {
        subcommand: name,
        corpus: c.corpus.clone(),
        split: c.split.clone(),
        models: c.models.clone().or_else(|| config.models.clone()),
        out: c.out.clone(),
        seed: config.train.seed,
        config,
    })
}

fn require<'a>(spec: &CommandSpec, value: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    value.as_deref().ok_or_else(|| Failure::Usage(format!("`{}` needs --{flag}", spec.subcommand)))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn load_corpus(spec: &CommandSpec) -> CliResult<Vec<Document>> {
    let dir = require(spec, &spec.corpus, "corpus")?;
    let docs = load_corpus_dir(dir)?;
    if docs.is_empty() {
        return Err(Failure::Data(Error::UndefinedInput(format!("no essays in {}", dir.display()))));
    }
    Ok(docs)
}

/// Train/test partition; without a split file the whole corpus is both.
fn partition(spec: &CommandSpec) -> CliResult<Partition> {
    let docs = load_corpus(spec)?;
    match &spec.split {
        Some(p) => Ok(load_split(p)?.partition(docs)?),
        None => Ok(Partition { train: docs.clone(), test: docs }),
    }
}

fn models_for(spec: &CommandSpec, train: &[Document], config: &PipelineConfig) -> Result<Models> {
    match &spec.models {
        Some(dir) => {
            let mut m = Models::load(dir)?;
            m.attach_resources(config)?;
            Ok(m)
        }
        None => train_models(train, config),
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let name = match &cli.command {
        Command::Stats => "stats",
        Command::Validate => "validate",
        Command::Split => "split",
        Command::Train { .. } => "train",
        Command::Parse { .. } => "parse",
        Command::Eval { .. } => "eval",
        Command::Baseline { .. } => "baseline",
        Command::Agreement => "agreement",
        Command::Simulate { .. } => "simulate",
    };
    let spec = resolve(name, &cli.common)?;
    match cli.command {
        Command::Stats => {
            let docs = load_corpus(&spec)?;
            emit(&spec.out, &corpus_stats(&docs).to_csv())?;
        }
        Command::Validate => validate(&spec)?,
        Command::Split => split(&spec)?,
        Command::Train { stage } => train(&spec, stage)?,
        Command::Parse { essay } => parse(&spec, essay)?,
        Command::Eval { folds } => evaluate(&spec, folds)?,
        Command::Baseline { task } => baseline(&spec, task)?,
        Command::Agreement => agreement(&spec)?,
        Command::Simulate { target, repeats, steps } => simulate(&spec, target, repeats, steps)?,
    }
    Ok(())
}

fn validate(spec: &CommandSpec) -> CliResult<()> {
    let docs = load_corpus(spec)?;
    let mut out = String::from("essay,kind,component,detail\n");
    let mut count = 0;
    for d in &docs {
        for v in validate_document(d).into_iter().chain(validate_attributes(d)) {
            count += 1;
            out.push_str(&format!("{},{},{},\"{}\"\n", d.essay_id, v.kind.as_str(), v.component, v.detail.replace('"', "'")));
        }
    }
    emit(&spec.out, &out)?;
    if count > 0 {
        return Err(Failure::Data(Error::Validity(format!("{count} violations in {} essays", docs.len()))));
    }
    log::info!("{} essays valid", docs.len());
    Ok(())
}

fn split(spec: &CommandSpec) -> CliResult<()> {
    require(spec, &spec.split, "split")?;
    let p = partition(spec)?;
    let mut out = String::from("set,essays,components,relations\n");
    for (name, docs) in [("train", &p.train), ("test", &p.test)] {
        let comps: usize = docs.iter().map(|d| d.components.len()).sum();
        let rels: usize = docs.iter().map(|d| d.relations.len()).sum();
        out.push_str(&format!("{name},{},{comps},{rels}\n", docs.len()));
    }
    emit(&spec.out, &out)?;
    Ok(())
}

fn train(spec: &CommandSpec, stage: StageArg) -> CliResult<()> {
    let dir = spec.out.as_ref().or(spec.models.as_ref()).ok_or_else(|| Failure::Usage("`train` needs --out or --models".into()))?;
    let p = partition(spec)?;
    let mut config = spec.config.clone();
    let only = |s: StageArg| matches!(stage, StageArg::All) || std::mem::discriminant(&stage) == std::mem::discriminant(&s);
    config.identify &= only(StageArg::Identify);
    config.classify &= only(StageArg::Classify);
    config.relations &= only(StageArg::Relations);
    config.stance &= only(StageArg::Stance);
    if !config.identify {
        // Identification off means no identification model, not gold input at parse time.
        config.gold_components = true;
    }
    let models = train_models(&p.train, &config)?;
    models.save(dir)?;
    log::info!("models written to {}", dir.display());
    Ok(())
}

fn write_parse(dir: &Path, parsed: &ParsedEssay) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let id = &parsed.document.essay_id;
    let write = |ext: &str, text: String| {
        let p = dir.join(format!("{id}.{ext}"));
        std::fs::write(&p, text).map_err(|e| Error::io(&p, e))
    };
    write("ann", to_brat(&parsed.document))?;
    write("json", parsed.structure_json()?)?;
    write("timings.json", parsed.timings_json()?)
}

fn parse(spec: &CommandSpec, essay: Option<PathBuf>) -> CliResult<()> {
    let models_dir = require(spec, &spec.models, "models")?;
    let out = require(spec, &spec.out, "out")?;
    let mut models = Models::load(models_dir)?;
    models.attach_resources(&spec.config)?;
    let docs = match essay {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("essay").to_string();
            let ann = if spec.config.gold_components {
                let p = path.with_extension("ann");
                std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?
            } else {
                String::new()
            };
            let sidecar = Sidecar::load_optional(&path.with_extension("json"))?;
            vec![parse_brat_with_layers(&id, &text, &ann, sidecar.as_ref())?]
        }
        None => {
            let mut docs = load_corpus(spec)?;
            if let Some(p) = &spec.split {
                docs = load_split(p)?.partition(docs)?.test;
            }
            docs
        }
    };
    for parsed in parse_corpus(&docs, &models, &spec.config)? {
        write_parse(out, &parsed)?;
    }
    log::info!("{} essays parsed into {}", docs.len(), out.display());
    Ok(())
}

#[derive(Serialize)]
struct ScoreReport {
    task: String,
    scores: MacroScores,
    matrix: ConfusionMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    mcnemar_vs_heuristic: Option<crate::eval::McNemar>,
}

fn emit_scores(spec: &CommandSpec, rows: Vec<ScoreReport>) -> Result<()> {
    let json = spec.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    if json {
        emit(&spec.out, &serde_json::to_string_pretty(&rows)?)
    } else {
        let flat: Vec<(String, MacroScores)> = rows.into_iter().map(|r| (r.task, r.scores)).collect();
        emit(&spec.out, &scores_csv(&flat))
    }
}

/// Task name, confusion matrix, gold and predicted labels.
type TaskRun = (String, ConfusionMatrix, Vec<String>, Vec<String>);

/// Parser matrices of every task on `test`: identification end to end,
/// the later stages on gold components; plus base relations before tree
/// inference.
fn score_split(
    train: &[Document],
    test: &[Document],
    spec: &CommandSpec,
) -> Result<Vec<TaskRun>> {
    let config = &spec.config;
    let gold_config = PipelineConfig { gold_components: true, ..config.clone() };
    let models = models_for(spec, train, config)?;
    let gold_parsed = parse_corpus(test, &models, &gold_config)?;
    let end_to_end = if config.gold_components || !config.identify { None } else { Some(parse_corpus(test, &models, config)?) };
    let mut out = Vec::new();
    for task in Task::ALL {
        let parsed = match (task, &end_to_end) {
            (Task::Identify, Some(p)) => p,
            (Task::Identify, None) => continue,
            _ => &gold_parsed,
        };
        let gold: Vec<String> = test.iter().flat_map(|d| gold_labels(task, d)).collect();
        let pred: Vec<String> = test.iter().zip(parsed).flat_map(|(d, p)| predicted_labels(task, d, p)).collect();
        out.push((task.as_str().to_string(), parser_matrix(task, test, parsed)?, gold, pred));
    }
    if config.relations {
        let cm = task_matrix(Task::Relations, test, |k, d| base_relation_labels(d, &gold_parsed[k]))?;
        out.push(("relations_base".to_string(), cm, Vec::new(), Vec::new()));
    }
    Ok(out)
}

fn task_of(name: &str) -> Option<Task> {
    name.parse().ok()
}

fn evaluate(spec: &CommandSpec, folds: Option<usize>) -> CliResult<()> {
    let p = partition(spec)?;
    let rows = match folds {
        None => {
            let mut rows = Vec::new();
            for (name, matrix, gold, pred) in score_split(&p.train, &p.test, spec)? {
                let task = task_of(&name);
                let scores = task.map_or_else(|| macro_prf(&matrix), |t| t.scores(&matrix));
                let mcnemar_vs_heuristic = match task {
                    Some(t) if !gold.is_empty() => {
                        let heur: Vec<String> = p.test.iter().flat_map(|d| heuristic_baseline(t, d)).collect();
                        Some(mcnemar(&PairedOutcomes::from_predictions(&gold, &pred, &heur)?))
                    }
                    _ => None,
                };
                rows.push(ScoreReport { task: name, scores, matrix, mcnemar_vs_heuristic });
            }
            rows
        }
        Some(k) => {
            if spec.models.is_some() {
                return Err(Failure::Usage("--folds trains per fold and cannot use --models".into()));
            }
            let assignment = fold_assignment(p.train.len(), k, spec.seed)?;
            let mut total: Vec<(String, ConfusionMatrix)> = Vec::new();
            for test_idx in &assignment {
                let test: Vec<Document> = test_idx.iter().map(|&i| p.train[i].clone()).collect();
                let train: Vec<Document> = (0..p.train.len())
                    .filter(|i| test_idx.binary_search(i).is_err())
                    .map(|i| p.train[i].clone())
                    .collect();
                for (k, (name, cm, _, _)) in score_split(&train, &test, spec)?.into_iter().enumerate() {
                    match total.get_mut(k) {
                        Some((_, acc)) => acc.merge(&cm)?,
                        None => total.push((name, cm)),
                    }
                }
            }
            total
                .into_iter()
                .map(|(name, matrix)| {
                    let scores = task_of(&name).map_or_else(|| macro_prf(&matrix), |t| t.scores(&matrix));
                    ScoreReport { task: name, scores, matrix, mcnemar_vs_heuristic: None }
                })
                .collect()
        }
    };
    emit_scores(spec, rows)?;
    Ok(())
}

fn baseline(spec: &CommandSpec, task: TaskArg) -> CliResult<()> {
    let p = partition(spec)?;
    let mut rows = Vec::new();
    for t in task.tasks() {
        let heuristic = task_matrix(t, &p.test, |_, d| heuristic_baseline(t, d))?;
        let dist = class_distribution(t, &p.train);
        let majority = task_matrix(t, &p.test, |_, d| majority_baseline(t, &dist, d))?;
        for (kind, matrix) in [("heuristic", heuristic), ("majority", majority)] {
            rows.push(ScoreReport { task: format!("{t}_{kind}"), scores: t.scores(&matrix), matrix, mcnemar_vs_heuristic: None });
        }
    }
    emit_scores(spec, rows)?;
    Ok(())
}

fn agreement(spec: &CommandSpec) -> CliResult<()> {
    let dir = require(spec, &spec.corpus, "corpus")?;
    let mut raters: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    raters.sort();
    if raters.len() < 2 {
        return Err(Failure::Data(Error::UndefinedInput(format!(
            "{} needs one subdirectory per rater, found {}",
            dir.display(),
            raters.len()
        ))));
    }
    let per_rater: Vec<Vec<Document>> = raters.iter().map(|r| load_corpus_dir(r)).collect::<Result<_>>()?;
    let n = per_rater[0].len();
    if per_rater.iter().any(|r| r.len() != n) {
        return Err(Failure::Data(Error::UndefinedInput("raters annotated different essay sets".into())));
    }
    let study: Vec<Vec<Document>> = (0..n).map(|i| per_rater.iter().map(|r| r[i].clone()).collect()).collect();
    let mut out = String::from("metric,category,value\n");
    for row in agreement_report(&study)? {
        out.push_str(&format!("{},{},{:.4}\n", row.metric, row.category, row.value));
    }
    emit(&spec.out, &out)?;
    Ok(())
}

fn simulate(spec: &CommandSpec, target: TargetArg, repeats: usize, steps: usize) -> CliResult<()> {
    if steps == 0 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    let p = partition(spec)?;
    let config = PipelineConfig { gold_components: true, ..spec.config.clone() };
    let models = models_for(spec, &p.train, &config)?;
    let parsed = parse_corpus(&p.test, &models, &config)?;
    let paragraphs = simulation_paragraphs(&p.test, &parsed);
    let grid: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let target = match target {
        TargetArg::Types => SimTarget::Types,
        TargetArg::Relations => SimTarget::Relations,
        TargetArg::Both => SimTarget::Both,
    };
    let curve = improvement_simulation(&paragraphs, &grid, target, repeats, spec.seed, config.phi)?;
    emit(&spec.out, &curve_csv(&curve))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> String {
        format!("{}/fixtures/essays", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["argstruct"]), 2);
        assert_eq!(run(["argstruct", "frobnicate"]), 2);
        assert_eq!(run(["argstruct", "stats"]), 2);
        assert_eq!(run(["argstruct", "eval", "--corpus", &fixture(), "--phi-r=-1"]), 2);
        assert_eq!(run(["argstruct", "train", "--corpus", &fixture(), "--features", "nope", "--out", "/tmp/x"]), 2);
    }

    #[test]
    fn data_errors_exit_one() {
        assert_eq!(run(["argstruct", "stats", "--corpus", "/nonexistent/corpus"]), 1);
        let empty = tempfile::tempdir().unwrap();
        assert_eq!(run(["argstruct", "stats", "--corpus", empty.path().to_str().unwrap()]), 1);
    }

    #[test]
    fn stats_are_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        for p in [&a, &b] {
            assert_eq!(run(["argstruct", "stats", "--corpus", &fixture(), "--out", p.to_str().unwrap()]), 0);
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}
