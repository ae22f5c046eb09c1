//! Lexical indicator lists and matching over token sequences.

use serde::{Deserialize, Serialize};

use crate::corpus::tokenize;

pub const FORWARD: [&str; 24] = [
    "As a result",
    "As the consequence",
    "Because",
    "Clearly",
    "Consequently",
    "Considering this subject",
    "Furthermore",
    "Hence",
    "leading to the consequence",
    "so",
    "So",
    "taking account on this fact",
    "That is the reason why",
    "The reason is that",
    "Therefore",
    "therefore",
    "This means that",
    "This shows that",
    "This will result",
    "Thus",
    "thus",
    "Thus, it is clearly seen that",
    "Thus, it is seen",
    "Thus, the example shows",
];

pub const BACKWARD: [&str; 33] = [
    "Additionally",
    "As a matter of fact",
    "because",
    "Besides",
    "due to",
    "Finally",
    "First of all",
    "Firstly",
    "for example",
    "For example",
    "For instance",
    "for instance",
    "Furthermore",
    "has proved it",
    "In addition",
    "In addition to this",
    "In the first place",
    "is due to the fact that",
    "It should also be noted",
    "Moreover",
    "On one hand",
    "On the one hand",
    "On the other hand",
    "One of the main reasons",
    "Secondly",
    "Similarly",
    "since",
    "Since",
    "So",
    "The reason",
    "To begin with",
    "To offer an instance",
    "What is more",
];

pub const THESIS: [&str; 48] = [
    "All in all",
    "All things considered",
    "As far as I am concerned",
    "Based on some reasons",
    "by analyzing both the views",
    "considering both the previous fact",
    "Finally",
    "For the reasons mentioned above",
    "From explanation above",
    "From this point of view",
    "I agree that",
    "I agree with",
    "I agree with the statement that",
    "I believe",
    "I believe that",
    "I do not agree with this statement",
    "I firmly believe that",
    "I highly advocate that",
    "I highly recommend",
    "I strongly believe that",
    "I think that",
    "I think the view is",
    "I totally agree",
    "I totally agree to this opinion",
    "I would have to argue that",
    "I would reaffirm my position that",
    "In conclusion",
    "in conclusion",
    "in my opinion",
    "In my opinion",
    "In my personal point of view",
    "in my point of view",
    "In my point of view",
    "In summary",
    "In the light of the facts outlined above",
    "it can be said that",
    "it is clear that",
    "it seems to me that",
    "my deep conviction",
    "My sentiments",
    "Overall",
    "Personally",
    "the above explanations and example shows that",
    "This, however",
    "To conclude",
    "To my way of thinking",
    "To sum up",
    "Ultimately",
];

pub const REBUTTAL: [&str; 10] = [
    "Admittedly",
    "although",
    "Although",
    "besides these advantages",
    "but",
    "But",
    "Even though",
    "even though",
    "However",
    "Otherwise",
];

pub const FIRST_PERSON: [&str; 5] = ["I", "me", "my", "mine", "myself"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndicatorType {
    Forward,
    Backward,
    Thesis,
    Rebuttal,
}

impl IndicatorType {
    pub const ALL: [IndicatorType; 4] =
        [IndicatorType::Forward, IndicatorType::Backward, IndicatorType::Thesis, IndicatorType::Rebuttal];

    pub fn as_str(self) -> &'static str {
        match self {
            IndicatorType::Forward => "forward",
            IndicatorType::Backward => "backward",
            IndicatorType::Thesis => "thesis",
            IndicatorType::Rebuttal => "rebuttal",
        }
    }
}

/// Indicator phrases pre-tokenized with the built-in tokenizer. Matching is
/// case-sensitive on token surfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorLexicon {
    pub phrases: Vec<(IndicatorType, Vec<String>)>,
    pub first_person: Vec<String>,
}

impl Default for IndicatorLexicon {
    fn default() -> Self {
        let lists: [(IndicatorType, &[&str]); 4] = [
            (IndicatorType::Forward, &FORWARD),
            (IndicatorType::Backward, &BACKWARD),
            (IndicatorType::Thesis, &THESIS),
            (IndicatorType::Rebuttal, &REBUTTAL),
        ];
        let phrases = lists
            .iter()
            .flat_map(|(t, list)| list.iter().map(move |p| (*t, tokenize(p).into_iter().map(|r| r.surface).collect())))
            .collect();
        IndicatorLexicon { phrases, first_person: FIRST_PERSON.iter().map(|s| s.to_string()).collect() }
    }
}

impl IndicatorLexicon {
    /// Indicator types with at least one phrase occurring in `surfaces`,
    /// indexed like `IndicatorType::ALL`.
    pub fn types_in<S: AsRef<str>>(&self, surfaces: &[S]) -> [bool; 4] {
        let mut found = [false; 4];
        for (t, phrase) in &self.phrases {
            let k = *t as usize;
            if !found[k] && contains_phrase(surfaces, phrase) {
                found[k] = true;
            }
        }
        found
    }

    pub fn has_first_person<S: AsRef<str>>(&self, surfaces: &[S]) -> bool {
        surfaces.iter().any(|s| self.first_person.iter().any(|f| f == s.as_ref()))
    }
}

fn contains_phrase<S: AsRef<str>>(surfaces: &[S], phrase: &[String]) -> bool {
    if phrase.is_empty() || phrase.len() > surfaces.len() {
        return false;
    }
    surfaces.windows(phrase.len()).any(|w| w.iter().zip(phrase).all(|(a, b)| a.as_ref() == b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &str) -> Vec<String> {
        tokenize(s).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn list_sizes() {
        let lex = IndicatorLexicon::default();
        let count = |t| lex.phrases.iter().filter(|(x, _)| *x == t).count();
        assert_eq!(count(IndicatorType::Forward), 24);
        assert_eq!(count(IndicatorType::Backward), 33);
        assert_eq!(count(IndicatorType::Thesis), 48);
        assert_eq!(count(IndicatorType::Rebuttal), 10);
    }

    #[test]
    fn matching_is_case_sensitive_and_multiword() {
        let lex = IndicatorLexicon::default();
        assert_eq!(lex.types_in(&words("To sum up, we win")), [false, false, true, false]);
        assert_eq!(lex.types_in(&words("to sum up, we win")), [false; 4]);
        assert_eq!(lex.types_in(&words("Thus, it is seen here")), [true, false, false, false]);
        assert_eq!(lex.types_in(&words("we fail although we try")), [false, false, false, true]);
        // "So" sits in two lists.
        assert_eq!(lex.types_in(&words("So it goes")), [true, true, false, false]);
        assert!(lex.has_first_person(&words("this is my view")));
        assert!(!lex.has_first_person(&words("This is My view")));
    }
}
