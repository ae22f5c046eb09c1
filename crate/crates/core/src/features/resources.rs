//! External lexical resources: word vectors and a subjectivity lexicon.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Word vectors in word2vec text format (`word v1 .. vd` per line, with an
/// optional `count dim` header line).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Embeddings {
    pub dim: usize,
    pub vectors: HashMap<String, Vec<f64>>,
}

impl Embeddings {
    pub fn parse(text: &str) -> Result<Embeddings> {
        let mut out = Embeddings::default();
        for (k, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let values: Vec<&str> = parts.collect();
            if k == 0 && values.len() == 1 && word.parse::<usize>().is_ok() && values[0].parse::<usize>().is_ok() {
                continue;
            }
            let v = values
                .iter()
                .map(|x| x.parse::<f64>().ok().filter(|f| f.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| Error::parse(k + 1, format!("bad vector for `{word}`")))?;
            if out.dim == 0 {
                out.dim = v.len();
            } else if v.len() != out.dim {
                return Err(Error::parse(k + 1, format!("expected {} dimensions, got {}", out.dim, v.len())));
            }
            out.vectors.insert(word.to_string(), v);
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Embeddings> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Embeddings::parse(&text)
    }

    /// Exact match first, then the lowercased word.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).or_else(|| self.vectors.get(&word.to_lowercase())).map(Vec::as_slice)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

/// `word,polarity` rows; polarity is `positive`, `negative`, `neutral` or
/// `both` (counted as neutral).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SubjectivityLexicon {
    pub entries: HashMap<String, Polarity>,
}

impl SubjectivityLexicon {
    pub fn parse(text: &str) -> Result<SubjectivityLexicon> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut out = SubjectivityLexicon::default();
        for (k, record) in reader.records().enumerate() {
            let record = record?;
            let (Some(word), Some(pol)) = (record.get(0), record.get(1)) else {
                return Err(Error::parse(k + 1, "expected `word,polarity`"));
            };
            let polarity = match pol.to_ascii_lowercase().as_str() {
                "positive" => Polarity::Positive,
                "negative" => Polarity::Negative,
                "neutral" | "both" => Polarity::Neutral,
                "polarity" if k == 0 => continue,
                other => return Err(Error::parse(k + 1, format!("unknown polarity `{other}`"))),
            };
            out.entries.insert(word.to_lowercase(), polarity);
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<SubjectivityLexicon> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SubjectivityLexicon::parse(&text)
    }

    pub fn get(&self, word: &str) -> Option<Polarity> {
        self.entries.get(&word.to_lowercase()).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word2vec_text_with_header() {
        let e = Embeddings::parse("2 3\ncat 1 0 0.5\nDog 0 1 -1\n").unwrap();
        assert_eq!(e.dim, 3);
        assert_eq!(e.get("cat"), Some(&[1.0, 0.0, 0.5][..]));
        assert_eq!(e.get("DOG"), None);
        assert_eq!(e.get("Dog"), Some(&[0.0, 1.0, -1.0][..]));
        assert!(Embeddings::parse("a 1 2\nb 1\n").is_err());
    }

    #[test]
    fn subjectivity_rows() {
        let l = SubjectivityLexicon::parse("word,polarity\ngood,positive\nbad,negative\nabout,both\n").unwrap();
        assert_eq!(l.get("Good"), Some(Polarity::Positive));
        assert_eq!(l.get("about"), Some(Polarity::Neutral));
        assert_eq!(l.get("meh"), None);
        assert!(SubjectivityLexicon::parse("x,weird\n").is_err());
    }
}
