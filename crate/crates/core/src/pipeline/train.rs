use rayon::prelude::*;

use super::score::{relation_pairs, stance_markables, LINKED, NOT_LINKED};
use super::{filtered, Models, ParsedEssay, PipelineConfig};
use crate::corpus::{encode_iob, ComponentType, Document};
use crate::error::Result;
use crate::eval::SimParagraph;
use crate::features::{FeatureTables, FeatureVector};
use crate::learners::{train_classifier, train_sequence, ClassifierConfig, TrainConfig};

fn gold_type(t: ComponentType, major_claims: bool) -> ComponentType {
    if !major_claims && t == ComponentType::MajorClaim {
        ComponentType::Claim
    } else {
        t
    }
}

/// Fits feature tables and every enabled stage's model on `train`. The
/// identification model is trained only when components are not taken
/// from the gold annotation.
pub fn train_models(train: &[Document], config: &PipelineConfig) -> Result<Models> {
    let mut models = Models {
        tables: FeatureTables::fit(train),
        disabled: config.disabled.clone(),
        major_claims: config.major_claims,
        ..Default::default()
    };
    models.attach_resources(config)?;
    let ex = models.extractor();
    let classifier = ClassifierConfig {
        epochs: config.train.epochs,
        seed: config.train.seed,
        degree: config.train.degree,
        conjunction_base: config.train.conjunction_base,
    };

    let identify = if config.identify && !config.gold_components {
        let data: Vec<(Vec<FeatureVector>, _)> = train
            .par_iter()
            .map(|doc| {
                let x = ex.sequence_features(doc).into_iter().map(|f| filtered(f, &config.disabled.identify)).collect();
                (x, encode_iob(doc))
            })
            .collect();
        log::info!("training identification on {} essays", data.len());
        Some(train_sequence(&data, TrainConfig { epochs: config.train.epochs, seed: config.train.seed })?)
    } else {
        None
    };

    let classify = if config.classify {
        let data: Vec<(FeatureVector, String)> = train
            .par_iter()
            .flat_map_iter(|doc| {
                (0..doc.components.len()).map(move |i| {
                    let f = filtered(ex.component_features(doc, i), &config.disabled.classify);
                    (f, gold_type(doc.components[i].ctype, config.major_claims).as_str().to_string())
                })
            })
            .collect();
        log::info!("training classification on {} components", data.len());
        Some(train_classifier(&data, classifier)?)
    } else {
        None
    };

    let relations = if config.relations {
        let per_doc: Vec<Vec<(FeatureVector, String)>> = train
            .par_iter()
            .map(|doc| {
                let types: Vec<ComponentType> = doc.components.iter().map(|c| c.ctype).collect();
                relation_pairs(doc, &types)
                    .into_iter()
                    .map(|(i, j)| {
                        let (a, b) = (&doc.components[i].id, &doc.components[j].id);
                        let linked = doc.relations.iter().any(|r| &r.source == a && &r.target == b);
                        let f = filtered(ex.pair_features(doc, i, j)?, &config.disabled.relations);
                        Ok((f, if linked { LINKED } else { NOT_LINKED }.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let data: Vec<(FeatureVector, String)> = per_doc.into_iter().flatten().collect();
        log::info!("training relations on {} pairs", data.len());
        Some(train_classifier(&data, classifier)?)
    } else {
        None
    };

    let stance = if config.stance {
        let data: Vec<(FeatureVector, String)> = train
            .par_iter()
            .flat_map_iter(|doc| {
                stance_markables(doc).into_iter().map(move |(i, r)| {
                    let f = filtered(ex.stance_features(doc, i), &config.disabled.stance);
                    (f, super::score::relation_label(r).to_string())
                })
            })
            .collect();
        log::info!("training stance on {} components", data.len());
        Some(train_classifier(&data, classifier)?)
    } else {
        None
    };

    Ok(Models { identify, classify, relations, stance, ..models })
}

/// Per paragraph of each gold document: its claims and premises with gold
/// and base-classifier types and relations. The parse must have used the
/// gold components; a predicted major claim enters as a claim.
pub fn simulation_paragraphs(gold: &[Document], parsed: &[ParsedEssay]) -> Vec<SimParagraph> {
    let mut out = Vec::new();
    for (doc, p) in gold.iter().zip(parsed) {
        debug_assert_eq!(doc.components.len(), p.base_types.len());
        for group in doc.components_by_paragraph() {
            let members: Vec<usize> =
                group.into_iter().filter(|&i| doc.components[i].ctype != ComponentType::MajorClaim).collect();
            if members.is_empty() {
                continue;
            }
            let n = members.len();
            let mut gold_relations = vec![vec![false; n]; n];
            let mut base_relations = vec![vec![false; n]; n];
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in members.iter().enumerate() {
                    let (si, sj) = (&doc.components[i].id, &doc.components[j].id);
                    gold_relations[a][b] = doc.relations.iter().any(|r| &r.source == si && &r.target == sj);
                    base_relations[a][b] = p.base_relations.contains(&(i, j));
                }
            }
            out.push(SimParagraph {
                gold_types: members.iter().map(|&i| doc.components[i].ctype).collect(),
                gold_relations,
                base_types: members
                    .iter()
                    .map(|&i| gold_type(p.base_types[i], false))
                    .collect(),
                base_relations,
            });
        }
    }
    out
}
