//! The five-stage parser (identification, classification, relations, tree
//! inference, stance), its configuration and trained models, and the
//! baselines it is compared against.

mod baseline;
mod score;
mod train;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    decode_iob, ArgumentComponent, ArgumentativeRelation, ComponentType, Document, RelationType, Stance,
};
use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::features::{Embeddings, Extractor, FeatureTables, FeatureVector, IndicatorLexicon, SubjectivityLexicon};
use crate::joint::{infer_paragraph, Phi};
use crate::learners::{classify, decode_sequence, ClassifierModel, SequenceModel};

pub use baseline::{class_distribution, heuristic_baseline, majority_baseline, majority_class};
pub use score::{
    accumulate, base_relation_labels, gold_labels, predicted_labels, relation_pairs, stance_markables, Task, LINKED,
    NOT_LINKED, UNMATCHED,
};
pub use train::{simulation_paragraphs, train_models};

/// Feature groups switched off per stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DisabledGroups {
    pub identify: BTreeSet<String>,
    pub classify: BTreeSet<String>,
    pub relations: BTreeSet<String>,
    pub stance: BTreeSet<String>,
}

impl Default for DisabledGroups {
    fn default() -> Self {
        DisabledGroups {
            identify: BTreeSet::new(),
            classify: BTreeSet::new(),
            relations: ["lex".to_string()].into(),
            stance: BTreeSet::new(),
        }
    }
}

impl DisabledGroups {
    pub fn for_task(&self, task: Task) -> &BTreeSet<String> {
        match task {
            Task::Identify => &self.identify,
            Task::Classify => &self.classify,
            Task::Relations => &self.relations,
            Task::Stance => &self.stance,
        }
    }

    fn all_mut(&mut self) -> [&mut BTreeSet<String>; 4] {
        [&mut self.identify, &mut self.classify, &mut self.relations, &mut self.stance]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainSettings {
    pub epochs: usize,
    pub seed: u64,
    /// Classifier degree; 2 adds conjunctions of frequent binary features.
    pub degree: u8,
    pub conjunction_base: usize,
}

impl Default for TrainSettings {
    fn default() -> Self {
        TrainSettings { epochs: 10, seed: 1, degree: 2, conjunction_base: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub identify: bool,
    pub classify: bool,
    pub relations: bool,
    pub joint: bool,
    pub stance: bool,
    /// Take components from the gold annotation; identification never runs.
    pub gold_components: bool,
    /// When false, major claims are trained and scored as claims.
    pub major_claims: bool,
    pub phi: Phi,
    pub disabled: DisabledGroups,
    pub train: TrainSettings,
    pub models: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub subjectivity: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            identify: true,
            classify: true,
            relations: true,
            joint: true,
            stance: true,
            gold_components: false,
            major_claims: true,
            phi: Phi::default(),
            disabled: DisabledGroups::default(),
            train: TrainSettings::default(),
            models: None,
            embeddings: None,
            subjectivity: None,
        }
    }
}

impl PipelineConfig {
    /// For short texts without essay layout: no major-claim label and no
    /// features tied to introduction and conclusion.
    pub fn short_text() -> Self {
        let mut c = PipelineConfig { major_claims: false, ..Default::default() };
        for set in c.disabled.all_mut() {
            set.insert("genre".into());
        }
        c
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.phi.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    fn uses_gold_components(&self) -> bool {
        self.gold_components || !self.identify
    }
}

/// Trained models plus the resources feature extraction reads.
#[derive(Clone, Debug)]
pub struct Models {
    pub tables: FeatureTables,
    pub disabled: DisabledGroups,
    pub major_claims: bool,
    pub identify: Option<SequenceModel>,
    pub classify: Option<ClassifierModel>,
    pub relations: Option<ClassifierModel>,
    pub stance: Option<ClassifierModel>,
    pub lexicon: IndicatorLexicon,
    pub embeddings: Option<Embeddings>,
    pub subjectivity: Option<SubjectivityLexicon>,
}

impl Default for Models {
    fn default() -> Self {
        Models {
            tables: FeatureTables::default(),
            disabled: DisabledGroups::default(),
            major_claims: true,
            identify: None,
            classify: None,
            relations: None,
            stance: None,
            lexicon: IndicatorLexicon::default(),
            embeddings: None,
            subjectivity: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    disabled: DisabledGroups,
    major_claims: bool,
}

fn write_json(path: &Path, json: String) -> Result<()> {
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(path, e)),
    }
}

impl Models {
    pub fn extractor(&self) -> Extractor<'_> {
        Extractor {
            tables: &self.tables,
            lexicon: &self.lexicon,
            embeddings: self.embeddings.as_ref(),
            subjectivity: self.subjectivity.as_ref(),
        }
    }

    /// Loads the embedding and subjectivity files named in `config`.
    pub fn attach_resources(&mut self, config: &PipelineConfig) -> Result<()> {
        if let Some(p) = &config.embeddings {
            self.embeddings = Some(Embeddings::load(p)?);
        }
        if let Some(p) = &config.subjectivity {
            self.subjectivity = Some(SubjectivityLexicon::load(p)?);
        }
        Ok(())
    }

    /// One JSON file per trained model plus the feature tables and a manifest.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let manifest = Manifest { disabled: self.disabled.clone(), major_claims: self.major_claims };
        write_json(&dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
        write_json(&dir.join("tables.json"), serde_json::to_string(&self.tables)?)?;
        if let Some(m) = &self.identify {
            write_json(&dir.join("identify.json"), m.to_json()?)?;
        }
        for (name, m) in [("classify", &self.classify), ("relations", &self.relations), ("stance", &self.stance)] {
            if let Some(m) = m {
                write_json(&dir.join(format!("{name}.json")), m.to_json()?)?;
            }
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Models> {
        let manifest_path = dir.join("manifest.json");
        let manifest: Manifest = serde_json::from_str(
            &read_optional(&manifest_path)?.ok_or_else(|| Error::Model(format!("{} is missing", manifest_path.display())))?,
        )?;
        let tables_path = dir.join("tables.json");
        let tables = serde_json::from_str(
            &read_optional(&tables_path)?.ok_or_else(|| Error::Model(format!("{} is missing", tables_path.display())))?,
        )?;
        let classifier = |name: &str| -> Result<Option<ClassifierModel>> {
            read_optional(&dir.join(format!("{name}.json")))?.map(|s| ClassifierModel::from_json(&s)).transpose()
        };
        Ok(Models {
            tables,
            disabled: manifest.disabled,
            major_claims: manifest.major_claims,
            identify: read_optional(&dir.join("identify.json"))?.map(|s| SequenceModel::from_json(&s)).transpose()?,
            classify: classifier("classify")?,
            relations: classifier("relations")?,
            stance: classifier("stance")?,
            ..Default::default()
        })
    }
}

pub(crate) fn filtered(mut f: FeatureVector, disabled: &BTreeSet<String>) -> FeatureVector {
    if !disabled.is_empty() {
        f.retain_groups(|g| !disabled.contains(g));
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Identify,
    Classify,
    Relations,
    Joint,
    Stance,
}

/// Where a stage's output came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Model,
    /// Copied from the gold annotation (exact-span matches only).
    Gold,
    /// Base predictions passed through unchanged.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub source: Source,
    pub micros: u128,
}

/// Parser output: the predicted structure as a document, the base
/// predictions before tree inference, the support/attack label of every
/// claim and premise, and per-stage provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedEssay {
    pub document: Document,
    pub base_types: Vec<ComponentType>,
    /// Pairs the relation stage predicted as linked, by component index.
    pub base_relations: Vec<(usize, usize)>,
    pub stances: Vec<Option<RelationType>>,
    pub provenance: Vec<StageRecord>,
}

#[derive(Serialize)]
struct ComponentOut<'a> {
    id: &'a str,
    #[serde(rename = "type")]
    ctype: &'a str,
    start: usize,
    end: usize,
    text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    stance: Option<&'a str>,
}

#[derive(Serialize)]
struct RelationOut<'a> {
    source: &'a str,
    target: &'a str,
    #[serde(rename = "type")]
    rtype: &'a str,
}

#[derive(Serialize)]
struct StructureOut<'a> {
    essay: &'a str,
    components: Vec<ComponentOut<'a>>,
    relations: Vec<RelationOut<'a>>,
}

impl ParsedEssay {
    /// JSON dump of components, relations and stances. Timings are kept out
    /// so repeated runs give identical files; see [`ParsedEssay::timings_json`].
    pub fn structure_json(&self) -> Result<String> {
        let d = &self.document;
        let out = StructureOut {
            essay: &d.essay_id,
            components: d
                .components
                .iter()
                .map(|c| ComponentOut {
                    id: &c.id,
                    ctype: c.ctype.as_str(),
                    start: c.span.start,
                    end: c.span.end,
                    text: d.slice(c.span),
                    stance: c.stance.map(|s| s.as_str()),
                })
                .collect(),
            relations: d
                .relations
                .iter()
                .map(|r| RelationOut {
                    source: &r.source,
                    target: &r.target,
                    rtype: score::relation_label(r.rtype),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&out)?)
    }

    pub fn timings_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.provenance)?)
    }
}

fn missing(stage: &str) -> Error {
    Error::Config(format!("the {stage} stage is enabled but no {stage} model is loaded"))
}

fn elapsed(t: Instant) -> u128 {
    t.elapsed().as_micros()
}

/// Gold support/attack label of gold component `g`.
fn gold_stance(gold: &Document, g: usize) -> Option<RelationType> {
    stance_markables(gold).into_iter().find(|(i, _)| *i == g).map(|(_, r)| r)
}

/// Runs the enabled stages on `doc` in order. Disabled stages copy the gold
/// annotation where a component matches a gold one by span.
pub fn run_pipeline(doc: &Document, models: &Models, config: &PipelineConfig) -> Result<ParsedEssay> {
    config.phi.validate()?;
    let ex = models.extractor();
    let mut provenance = Vec::new();

    // Stage 1: components.
    let t = Instant::now();
    let mut work = doc.clone();
    work.relations.clear();
    if config.uses_gold_components() {
        provenance.push(StageRecord { stage: Stage::Identify, source: Source::Gold, micros: elapsed(t) });
    } else {
        let model = models.identify.as_ref().ok_or_else(|| missing("identify"))?;
        let features: Vec<FeatureVector> =
            ex.sequence_features(doc).into_iter().map(|f| filtered(f, &models.disabled.identify)).collect();
        let labels = decode_sequence(model, &features);
        work.components = decode_iob(&labels, &doc.tokens)
            .into_iter()
            .enumerate()
            .map(|(k, ts)| ArgumentComponent {
                id: format!("T{}", k + 1),
                ctype: ComponentType::Premise,
                span: ts.span,
                stance: None,
                preceding_span: None,
            })
            .collect();
        work.assign_preceding_spans();
        provenance.push(StageRecord { stage: Stage::Identify, source: Source::Model, micros: elapsed(t) });
    }
    for c in &mut work.components {
        c.stance = None;
    }
    let n = work.components.len();
    let gold_of: Vec<Option<usize>> =
        work.components.iter().map(|c| doc.components.iter().position(|g| g.span == c.span)).collect();

    // Stage 2: types.
    let t = Instant::now();
    let mut types: Vec<ComponentType> = if config.classify {
        let model = models.classify.as_ref().ok_or_else(|| missing("classify"))?;
        (0..n)
            .map(|i| {
                let f = filtered(ex.component_features(&work, i), &models.disabled.classify);
                let (k, _) = classify(model, &f);
                model.classes[k].parse()
            })
            .collect::<Result<_>>()?
    } else {
        gold_of.iter().map(|g| g.map_or(ComponentType::Premise, |g| doc.components[g].ctype)).collect()
    };
    if !models.major_claims && config.classify {
        for ty in &mut types {
            if *ty == ComponentType::MajorClaim {
                *ty = ComponentType::Claim;
            }
        }
    }
    for (c, ty) in work.components.iter_mut().zip(&types) {
        c.ctype = *ty;
    }
    let source = if config.classify { Source::Model } else { Source::Gold };
    provenance.push(StageRecord { stage: Stage::Classify, source, micros: elapsed(t) });
    let base_types = types.clone();

    // Stage 3: base relations among non-major-claims of a paragraph.
    let t = Instant::now();
    let pairs = relation_pairs(&work, &types);
    let base_relations: Vec<(usize, usize)> = if config.relations {
        let model = models.relations.as_ref().ok_or_else(|| missing("relations"))?;
        let linked = model.class_index(LINKED).ok_or_else(|| Error::Model("relation model lacks the Linked class".into()))?;
        let mut out = Vec::new();
        for &(i, j) in &pairs {
            let f = filtered(ex.pair_features(&work, i, j)?, &models.disabled.relations);
            if classify(model, &f).0 == linked {
                out.push((i, j));
            }
        }
        out
    } else {
        pairs
            .into_iter()
            .filter(|&(i, j)| match (gold_of[i], gold_of[j]) {
                (Some(a), Some(b)) => {
                    let (sa, sb) = (&doc.components[a].id, &doc.components[b].id);
                    doc.relations.iter().any(|r| &r.source == sa && &r.target == sb)
                }
                _ => false,
            })
            .collect()
    };
    let source = if config.relations { Source::Model } else { Source::Gold };
    provenance.push(StageRecord { stage: Stage::Relations, source, micros: elapsed(t) });

    // Stage 4: tree inference per paragraph.
    let t = Instant::now();
    let edges: Vec<(usize, usize)> = if config.joint {
        let mut edges = Vec::new();
        for group in work.components_by_paragraph() {
            let members: Vec<usize> = group.into_iter().filter(|&i| types[i] != ComponentType::MajorClaim).collect();
            if members.is_empty() {
                continue;
            }
            let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let mut r = vec![vec![false; members.len()]; members.len()];
            for (i, j) in &base_relations {
                if let (Some(&a), Some(&b)) = (local.get(i), local.get(j)) {
                    r[a][b] = true;
                }
            }
            let member_types: Vec<ComponentType> = members.iter().map(|&i| types[i]).collect();
            let (_, new_types, rel) = infer_paragraph(&r, &member_types, config.phi)?;
            for (k, &i) in members.iter().enumerate() {
                types[i] = new_types[k];
            }
            edges.extend(rel.into_iter().map(|(a, b)| (members[a], members[b])));
        }
        edges
    } else {
        base_relations.clone()
    };
    for (c, ty) in work.components.iter_mut().zip(&types) {
        c.ctype = *ty;
    }
    let source = if config.joint { Source::Model } else { Source::Skipped };
    provenance.push(StageRecord { stage: Stage::Joint, source, micros: elapsed(t) });

    // Stage 5: support/attack for claims and premises.
    let t = Instant::now();
    let stances: Vec<Option<RelationType>> = if config.stance {
        let model = models.stance.as_ref().ok_or_else(|| missing("stance"))?;
        (0..n)
            .map(|i| {
                if types[i] == ComponentType::MajorClaim {
                    return Ok(None);
                }
                let f = filtered(ex.stance_features(&work, i), &models.disabled.stance);
                let label = &model.classes[classify(model, &f).0];
                Ok(Some(if label == "Attack" { RelationType::Attack } else { RelationType::Support }))
            })
            .collect::<Result<_>>()?
    } else {
        (0..n)
            .map(|i| {
                (types[i] != ComponentType::MajorClaim)
                    .then(|| gold_of[i].and_then(|g| gold_stance(doc, g)).unwrap_or(RelationType::Support))
            })
            .collect()
    };
    let source = if config.stance { Source::Model } else { Source::Gold };
    provenance.push(StageRecord { stage: Stage::Stance, source, micros: elapsed(t) });

    for (c, s) in work.components.iter_mut().zip(&stances) {
        if c.ctype == ComponentType::Claim {
            c.stance = Some(if *s == Some(RelationType::Attack) { Stance::Against } else { Stance::For });
        }
    }
    work.relations = edges
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| ArgumentativeRelation {
            id: format!("R{}", k + 1),
            source: work.components[i].id.clone(),
            target: work.components[j].id.clone(),
            rtype: stances[i].unwrap_or(RelationType::Support),
        })
        .collect();

    Ok(ParsedEssay { document: work, base_types, base_relations, stances, provenance })
}

/// Parses every document, in parallel.
pub fn parse_corpus(docs: &[Document], models: &Models, config: &PipelineConfig) -> Result<Vec<ParsedEssay>> {
    docs.par_iter().map(|d| run_pipeline(d, models, config)).collect()
}

/// Accumulated matrix of `task` over aligned gold documents and predictions.
pub fn task_matrix<F>(task: Task, gold: &[Document], predict: F) -> Result<ConfusionMatrix>
where
    F: Fn(usize, &Document) -> Vec<String>,
{
    let mut cm = task.matrix();
    for (k, doc) in gold.iter().enumerate() {
        accumulate(&mut cm, &gold_labels(task, doc), &predict(k, doc))?;
    }
    Ok(cm)
}

/// Parser scores of `task` on `gold`.
pub fn parser_matrix(task: Task, gold: &[Document], parsed: &[ParsedEssay]) -> Result<ConfusionMatrix> {
    task_matrix(task, gold, |k, doc| predicted_labels(task, doc, &parsed[k]))
}

#[cfg(test)]
mod tests;
