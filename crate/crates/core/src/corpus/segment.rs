//! Built-in fallback segmentation, used when no sidecar token layer exists.
//!
//! Paragraphs are non-empty lines. The first line is the essay prompt when it
//! is followed by a blank line. Tokens are maximal runs of alphanumerics
//! (internal `'` / `-` joining two alphanumeric runs); every other
//! non-whitespace character is a token of its own. A sentence ends after a
//! run of `.`, `?`, `!`, absorbing directly following closing quotes or
//! brackets.

use std::ops::Range;

use super::Span;

/// A token with character offsets relative to the segmented string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub start: usize,
    pub end: usize,
}

pub fn tokenize(text: &str) -> Vec<RawToken> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_alphanumeric() {
            i += 1;
            loop {
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let joiner = i + 1 < chars.len()
                    && matches!(chars[i], '\'' | '-')
                    && chars[i + 1].is_alphanumeric();
                if joiner {
                    i += 1;
                } else {
                    break;
                }
            }
        } else {
            i += 1;
        }
        tokens.push(RawToken { surface: chars[start..i].iter().collect(), start, end: i });
    }
    tokens
}

fn is_terminal(s: &str) -> bool {
    matches!(s, "." | "?" | "!")
}

fn is_closing(s: &str) -> bool {
    matches!(s, "." | "?" | "!" | "\"" | ")" | "'")
}

/// Groups tokens into sentences; returns index ranges into `tokens`.
pub fn split_sentences(tokens: &[RawToken]) -> Vec<Range<usize>> {
    let mut sentences = Vec::new();
    let mut begin = 0;
    let mut i = 0;
    while i < tokens.len() {
        if is_terminal(&tokens[i].surface) {
            let mut j = i + 1;
            while j < tokens.len() && is_closing(&tokens[j].surface) {
                j += 1;
            }
            sentences.push(begin..j);
            begin = j;
            i = j;
        } else {
            i += 1;
        }
    }
    if begin < tokens.len() {
        sentences.push(begin..tokens.len());
    }
    sentences
}

/// Tokenizes and sentence-splits one paragraph.
pub fn segment_paragraph(text: &str) -> (Vec<RawToken>, Vec<Range<usize>>) {
    let tokens = tokenize(text);
    let sentences = split_sentences(&tokens);
    (tokens, sentences)
}

/// Title span (if any) and paragraph spans, in characters.
pub(crate) fn paragraph_spans(text: &str) -> (Option<Span>, Vec<Span>) {
    let mut lines = Vec::new();
    let mut pos = 0;
    for line in text.split('\n') {
        let n = line.chars().count();
        lines.push((pos, line));
        pos += n + 1;
    }
    let is_blank = |s: &str| s.trim().is_empty();
    let trimmed = |start: usize, line: &str| {
        let lead = line.chars().take_while(|c| c.is_whitespace()).count();
        let trail = line.chars().rev().take_while(|c| c.is_whitespace()).count();
        Span::new(start + lead, start + line.chars().count() - trail)
    };
    let first = lines.iter().position(|(_, l)| !is_blank(l));
    let mut title = None;
    let mut skip = usize::MAX;
    if let Some(f) = first {
        let has_body = lines[f + 1..].iter().any(|(_, l)| !is_blank(l));
        if has_body && lines.get(f + 1).is_some_and(|(_, l)| is_blank(l)) {
            title = Some(trimmed(lines[f].0, lines[f].1));
            skip = f;
        }
    }
    let paragraphs = lines
        .iter()
        .enumerate()
        .filter(|(i, (_, l))| *i != skip && !is_blank(l))
        .map(|(_, (start, l))| trimmed(*start, l))
        .collect();
    (title, paragraphs)
}
