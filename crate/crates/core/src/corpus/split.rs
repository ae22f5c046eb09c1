//! Train/test split files: `;`-separated CSV with header `ID;SET`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Document;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitSet {
    Train,
    Test,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub assignments: BTreeMap<String, SplitSet>,
}

#[derive(Clone, Debug, Default)]
pub struct Partition {
    pub train: Vec<Document>,
    pub test: Vec<Document>,
}

pub fn parse_split(csv_text: &str) -> Result<SplitSpec> {
    let mut reader = csv::ReaderBuilder::new().delimiter(b';').trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "ID" || &headers[1] != "SET" {
        return Err(Error::Config(format!("split file header must be `ID;SET`, got `{}`", headers.iter().collect::<Vec<_>>().join(";"))));
    }
    let mut spec = SplitSpec::default();
    for (k, record) in reader.records().enumerate() {
        let record = record?;
        let (id, set) = (record.get(0).unwrap_or_default(), record.get(1).unwrap_or_default());
        let set = match set.to_ascii_uppercase().as_str() {
            "TRAIN" => SplitSet::Train,
            "TEST" => SplitSet::Test,
            other => return Err(Error::Config(format!("split row {}: unknown set `{other}`", k + 2))),
        };
        if spec.assignments.insert(id.to_string(), set).is_some() {
            return Err(Error::Config(format!("split row {}: duplicate essay id `{id}`", k + 2)));
        }
    }
    Ok(spec)
}

pub fn load_split(path: &Path) -> Result<SplitSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_split(&text)
}

impl SplitSpec {
    pub fn ids(&self, set: SplitSet) -> Vec<&str> {
        self.assignments.iter().filter(|(_, s)| **s == set).map(|(id, _)| id.as_str()).collect()
    }

    /// Partitions a corpus. Every essay must be assigned and every assigned id
    /// must exist in the corpus.
    pub fn partition(&self, corpus: Vec<Document>) -> Result<Partition> {
        let mut present = std::collections::HashSet::new();
        let mut out = Partition::default();
        for doc in corpus {
            present.insert(doc.essay_id.clone());
            match self.assignments.get(&doc.essay_id) {
                Some(SplitSet::Train) => out.train.push(doc),
                Some(SplitSet::Test) => out.test.push(doc),
                None => return Err(Error::Config(format!("essay `{}` has no split assignment", doc.essay_id))),
            }
        }
        if let Some(missing) = self.assignments.keys().find(|id| !present.contains(*id)) {
            return Err(Error::Config(format!("split names essay `{missing}` which is not in the corpus")));
        }
        log::info!("split: {} train / {} test essays", out.train.len(), out.test.len());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str) -> Document {
        Document::new(id, "T\n\nText.\n", None).unwrap()
    }

    #[test]
    fn quoted_and_plain_rows() {
        let spec = parse_split("\"ID\";\"SET\"\n\"essay001\";\"TRAIN\"\nessay002;TEST\n").unwrap();
        assert_eq!(spec.ids(SplitSet::Train), vec!["essay001"]);
        assert_eq!(spec.ids(SplitSet::Test), vec!["essay002"]);
        let part = spec.partition(vec![doc("essay001"), doc("essay002")]).unwrap();
        assert_eq!((part.train.len(), part.test.len()), (1, 1));
    }

    #[test]
    fn all_train_gives_empty_test() {
        let spec = parse_split("ID;SET\na;TRAIN\nb;TRAIN\n").unwrap();
        let part = spec.partition(vec![doc("a"), doc("b")]).unwrap();
        assert!(part.test.is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_split("ID;SET\na;TRAIN\na;TEST\n"), Err(Error::Config(_))));
        assert!(matches!(parse_split("X;Y\na;TRAIN\n"), Err(Error::Config(_))));
        let spec = parse_split("ID;SET\na;TRAIN\nzzz;TEST\n").unwrap();
        assert!(matches!(spec.partition(vec![doc("a")]), Err(Error::Config(_))));
        let spec = parse_split("ID;SET\na;TRAIN\n").unwrap();
        assert!(matches!(spec.partition(vec![doc("a"), doc("b")]), Err(Error::Config(_))));
    }
}
