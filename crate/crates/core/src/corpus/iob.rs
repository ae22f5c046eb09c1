//! Token-level IOB encoding of argument components.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{Document, Span, Token};

/// Ordering doubles as the Viterbi tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IobLabel {
    ArgB,
    ArgI,
    O,
}

impl IobLabel {
    pub const ALL: [IobLabel; 3] = [IobLabel::ArgB, IobLabel::ArgI, IobLabel::O];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IobLabel::ArgB => "Arg-B",
            IobLabel::ArgI => "Arg-I",
            IobLabel::O => "O",
        }
    }
}

impl fmt::Display for IobLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A decoded component: essay-wide token range and its character span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub tokens: Range<usize>,
    pub span: Span,
}

/// One label per token of the essay. Component boundaries falling inside a
/// token are widened to cover the whole token.
pub fn encode_iob(doc: &Document) -> Vec<IobLabel> {
    let mut labels = vec![IobLabel::O; doc.tokens.len()];
    for c in &doc.components {
        let range = doc.token_range(c.span);
        if range.is_empty() {
            log::warn!("{}: component {} covers no token", doc.essay_id, c.id);
            continue;
        }
        let snapped = Span::new(doc.tokens[range.start].char_start, doc.tokens[range.end - 1].char_end);
        if snapped != c.span && doc.slice(c.span).trim() != doc.slice(snapped) {
            log::debug!("{}: component {} {} snapped to {}", doc.essay_id, c.id, c.span, snapped);
        }
        labels[range.start] = IobLabel::ArgB;
        for l in &mut labels[range.start + 1..range.end] {
            *l = IobLabel::ArgI;
        }
    }
    labels
}

/// Spans from each `ArgB` to the next `ArgB`/`O`. An `ArgI` with no open
/// component opens one, and runs never cross a paragraph boundary.
pub fn decode_iob(labels: &[IobLabel], tokens: &[Token]) -> Vec<TokenSpan> {
    debug_assert_eq!(labels.len(), tokens.len());
    let mut out: Vec<Range<usize>> = Vec::new();
    let mut open = false;
    for (i, &label) in labels.iter().enumerate() {
        let continues = open && i > 0 && tokens[i].para_index == tokens[i - 1].para_index;
        match label {
            IobLabel::O => open = false,
            IobLabel::ArgI if continues => {
                if let Some(last) = out.last_mut() {
                    last.end = i + 1;
                }
            }
            IobLabel::ArgB | IobLabel::ArgI => {
                out.push(i..i + 1);
                open = true;
            }
        }
    }
    out.into_iter()
        .map(|r| TokenSpan { span: Span::new(tokens[r.start].char_start, tokens[r.end - 1].char_end), tokens: r })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_brat;
    use proptest::prelude::*;
    use IobLabel::*;

    fn tokens(n: usize, para_break: Option<usize>) -> Vec<Token> {
        (0..n)
            .map(|i| Token {
                surface: format!("w{i}"),
                char_start: 3 * i,
                char_end: 3 * i + 2,
                sent_index: 0,
                para_index: usize::from(para_break.is_some_and(|b| i >= b)),
            })
            .collect()
    }

    fn ranges(labels: &[IobLabel], para_break: Option<usize>) -> Vec<Range<usize>> {
        decode_iob(labels, &tokens(labels.len(), para_break)).into_iter().map(|s| s.tokens).collect()
    }

    #[test]
    fn decode_examples() {
        assert_eq!(ranges(&[O, ArgB, ArgI, O], None), vec![1..3]);
        assert_eq!(ranges(&[ArgI, ArgI, O], None), vec![0..2]);
        assert_eq!(ranges(&[ArgB, ArgB], None), vec![0..1, 1..2]);
        assert_eq!(ranges(&[ArgB, ArgI, ArgI, ArgI], Some(2)), vec![0..2, 2..4]);
    }

    #[test]
    fn encode_examples() {
        let text = "T\n\nzero one two three four five six\n";
        let doc = parse_brat("e", text, "T1\tClaim 16 31\tthree four five\n").unwrap();
        assert_eq!(encode_iob(&doc), vec![O, O, O, ArgB, ArgI, ArgI, O]);
        let doc = parse_brat("e", text, "").unwrap();
        assert!(encode_iob(&doc).iter().all(|&l| l == O));
        let doc = parse_brat("e", text, "T1\tClaim 3 11\tzero one\nT2\tClaim 12 21\ttwo three\n").unwrap();
        assert_eq!(&encode_iob(&doc)[..4], &[ArgB, ArgI, ArgB, ArgI]);
    }

    #[test]
    fn boundaries_inside_tokens_snap_outward() {
        let text = "T\n\nzero one two\n";
        let doc = parse_brat("e", text, "T1\tClaim 5 9\tro o\n").unwrap();
        assert_eq!(encode_iob(&doc), vec![ArgB, ArgI, O]);
    }

    fn label() -> impl Strategy<Value = IobLabel> {
        prop_oneof![Just(ArgB), Just(ArgI), Just(O)]
    }

    proptest! {
        #[test]
        fn decoded_spans_are_disjoint_and_ordered(labels in proptest::collection::vec(label(), 0..40)) {
            let spans = ranges(&labels, None);
            for w in spans.windows(2) {
                prop_assert!(w[0].end <= w[1].start);
            }
            let covered: usize = spans.iter().map(|r| r.len()).sum();
            prop_assert_eq!(covered, labels.iter().filter(|&&l| l != O).count());
        }

        #[test]
        fn well_formed_sequences_round_trip(labels in proptest::collection::vec(label(), 0..40)) {
            // Repair orphans first; the repaired sequence is a fixed point.
            let spans = ranges(&labels, None);
            let mut fixed = vec![O; labels.len()];
            for r in &spans {
                fixed[r.start] = ArgB;
                for l in &mut fixed[r.start + 1..r.end] { *l = ArgI; }
            }
            prop_assert_eq!(ranges(&fixed, None), spans);
        }
    }
}
