//! Deterministic tokenization, sentence segmentation, n-gram extraction,
//! stopword filtering, and TF-IDF vectorization shared by every other module.
//!
//! Everything here is rule-based and pure: identical input produces identical
//! output on every platform, which is what makes corpus metrics and training
//! runs reproducible bit-for-bit.

mod stopwords;
mod tfidf;

pub use stopwords::StopwordList;
pub use tfidf::{cosine, fit_tfidf, vectorize, IdfMode, SparseVec, TfIdfModel};

use std::collections::HashMap;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("n-gram order must be >= 1")]
    InvalidN,
    #[error("cannot fit a TF-IDF model on an empty corpus")]
    EmptyCorpus,
}

/// Lowercased word tokens plus the byte span each token was sliced from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TokenSeq {
    /// Lowercased tokens in source order.
    pub tokens: Vec<String>,
    /// Per-token `(start, end)` byte offsets into the tokenized string.
    /// Strictly increasing and non-overlapping.
    pub offsets: Vec<(usize, usize)>,
}

impl TokenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Builds a sequence from bare tokens, synthesizing offsets as if the
    /// tokens were joined by single spaces. Used by tests and generators
    /// that start from token lists rather than raw text.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let mut offsets = Vec::with_capacity(tokens.len());
        let mut pos = 0usize;
        for t in &tokens {
            offsets.push((pos, pos + t.len()));
            pos += t.len() + 1;
        }
        TokenSeq { tokens, offsets }
    }
}

/// One sentence span of a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    /// Sentence text (trailing inter-sentence whitespace excluded).
    pub text: String,
    /// Byte offset of the first character in the source string.
    pub start: usize,
    /// Byte offset one past the last character in the source string.
    pub end: usize,
    /// Tokens of `text`, offsets relative to `text`.
    pub tokens: TokenSeq,
}

/// Ordered, non-overlapping sentence spans covering all non-whitespace text.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SentenceIndex {
    pub sentences: Vec<Sentence>,
}

impl SentenceIndex {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Total token count across all sentences.
    pub fn total_tokens(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens.len()).sum()
    }
}

// A word token is either a letter-dot abbreviation ("I.P.C.", "i.e.") kept
// whole, or a maximal alphanumeric run. Everything else is a boundary.
static TOKEN_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:\p{L}\.){2,}|[\p{L}\p{N}]+").unwrap());

/// Splits `text` into lowercased word tokens on whitespace and punctuation
/// boundaries. Letter-dot abbreviations of two or more units ("I.P.C.")
/// survive as single tokens; all other punctuation is dropped.
pub fn tokenize(text: &str) -> TokenSeq {
    let mut tokens = Vec::new();
    let mut offsets = Vec::new();
    for m in TOKEN_RE.find_iter(text) {
        tokens.push(m.as_str().to_lowercase());
        offsets.push((m.start(), m.end()));
    }
    TokenSeq { tokens, offsets }
}

/// Terminal-period words that never end a sentence.
const ABBREV_GUARD: &[&str] = &[
    "no.", "nos.", "v.", "vs.", "mr.", "mrs.", "ms.", "dr.", "hon.", "jr.", "sr.", "st.", "co.",
    "ltd.", "inc.", "corp.", "etc.", "cf.", "ca.", "art.", "arts.", "sec.", "secs.", "s.", "ss.",
    "p.", "pp.", "para.", "paras.", "cl.", "cls.", "rs.", "ors.", "anr.", "approx.", "dept.",
    "govt.", "dist.", "addl.", "ex.", "viz.", "act.", "crl.",
];

static MULTI_LETTER_DOT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\p{L}\.){2,}$").unwrap());

fn is_guarded_abbreviation(word: &str) -> bool {
    let lower = word.to_lowercase();
    ABBREV_GUARD.contains(&lower.as_str()) || MULTI_LETTER_DOT.is_match(&lower)
}

/// Rule-based sentence splitter: a sentence ends at a run of `.`/`?`/`!`
/// followed by whitespace and an uppercase letter, unless the terminating
/// word is a guarded abbreviation ("No.", "v.", letter-dot sequences like
/// "I.P.C."). Single capital initials such as "A." do split, which matches
/// how press summaries enumerate points. Spans cover all non-whitespace
/// text, so headings without terminal punctuation become sentences too.
pub fn split_sentences(text: &str) -> SentenceIndex {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let n = chars.len();
    let mut sentences = Vec::new();

    let mut start = 0usize; // index into chars
    while start < n && chars[start].1.is_whitespace() {
        start += 1;
    }
    if start == n {
        return SentenceIndex { sentences };
    }

    let mut j = start;
    while j < n {
        let c = chars[j].1;
        if matches!(c, '.' | '?' | '!') {
            // extend over a run of terminal punctuation
            let mut k = j;
            while k + 1 < n && matches!(chars[k + 1].1, '.' | '?' | '!') {
                k += 1;
            }
            // require whitespace, then an uppercase start
            let mut m = k + 1;
            while m < n && chars[m].1.is_whitespace() {
                m += 1;
            }
            let has_ws = m > k + 1;
            let upper_follows = m < n && chars[m].1.is_uppercase();
            let mut boundary = has_ws && upper_follows;
            if boundary && k == j && c == '.' {
                // single period: check the word it terminates
                let mut w = j;
                while w > 0 && (chars[w - 1].1.is_alphanumeric() || chars[w - 1].1 == '.') {
                    w -= 1;
                }
                let word = &text[chars[w].0..chars[k].0 + chars[k].1.len_utf8()];
                if is_guarded_abbreviation(word) {
                    boundary = false;
                }
            }
            if boundary {
                push_sentence(text, &chars, start, k, &mut sentences);
                start = m;
                j = m;
                continue;
            }
            j = k + 1;
            continue;
        }
        j += 1;
    }

    // trailing sentence: up to the last non-whitespace character
    let mut last = n;
    while last > start && chars[last - 1].1.is_whitespace() {
        last -= 1;
    }
    if last > start {
        push_sentence(text, &chars, start, last - 1, &mut sentences);
    }
    SentenceIndex { sentences }
}

fn push_sentence(
    text: &str,
    chars: &[(usize, char)],
    start: usize,
    end_inclusive: usize,
    out: &mut Vec<Sentence>,
) {
    let byte_start = chars[start].0;
    let byte_end = chars[end_inclusive].0 + chars[end_inclusive].1.len_utf8();
    let slice = &text[byte_start..byte_end];
    out.push(Sentence {
        text: slice.to_string(),
        start: byte_start,
        end: byte_end,
        tokens: tokenize(slice),
    });
}

/// Multiset of n-grams of `tokens`, keyed by the gram slice.
///
/// Returns exactly `max(0, len - n + 1)` grams counted with multiplicity.
pub fn ngrams(tokens: &[String], n: usize) -> Result<HashMap<&[String], usize>, TextError> {
    if n < 1 {
        return Err(TextError::InvalidN);
    }
    let mut counts: HashMap<&[String], usize> = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_plain_sentence() {
        let seq = tokenize("The cat sat.");
        assert_eq!(seq.tokens, vec!["the", "cat", "sat"]);
    }

    #[test]
    fn tokenize_keeps_letter_dot_abbreviations() {
        let seq = tokenize("section 302 I.P.C., by");
        assert_eq!(seq.tokens, vec!["section", "302", "i.p.c.", "by"]);
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_offsets_match_source() {
        let text = "Held: the Appeal No. 1782 was dismissed under I.P.C. rules.";
        let seq = tokenize(text);
        for (tok, &(s, e)) in seq.tokens.iter().zip(&seq.offsets) {
            assert_eq!(*tok, text[s..e].to_lowercase());
        }
        let mut prev_end = 0;
        for &(s, e) in &seq.offsets {
            assert!(s >= prev_end && e > s);
            prev_end = e;
        }
    }

    #[test]
    fn split_two_sentences_on_capital() {
        let idx = split_sentences("A. B.");
        assert_eq!(idx.len(), 2);
        assert_eq!(idx.sentences[0].text, "A.");
        assert_eq!(idx.sentences[1].text, "B.");
    }

    #[test]
    fn split_guards_known_abbreviations() {
        // Hand segmentation: the "No." must not split the appeal citation.
        let idx = split_sentences("Criminal Appeal No. 1782 of 60.");
        assert_eq!(idx.len(), 1);
    }

    #[test]
    fn split_guards_letter_dot_abbreviations() {
        let idx = split_sentences("He was charged under I.P.C. The appeal failed.");
        assert_eq!(idx.len(), 1, "multi letter-dot abbreviation must not split");
    }

    #[test]
    fn split_empty_and_whitespace() {
        assert!(split_sentences("").is_empty());
        assert!(split_sentences("  \n\t ").is_empty());
    }

    #[test]
    fn split_spans_cover_non_whitespace() {
        let text = "The court held X. The appeal was allowed!  Costs follow.\nNEW SECTION\nMore text here";
        let idx = split_sentences(text);
        // every non-whitespace byte falls inside some span
        let mut covered = vec![false; text.len()];
        for s in &idx.sentences {
            for slot in covered.iter_mut().take(s.end).skip(s.start) {
                *slot = true;
            }
        }
        for (i, ch) in text.char_indices() {
            if !ch.is_whitespace() {
                assert!(covered[i], "byte {} ({:?}) not covered", i, ch);
            }
        }
        // spans ordered and non-overlapping
        let mut prev_end = 0;
        for s in &idx.sentences {
            assert!(s.start >= prev_end);
            prev_end = s.end;
        }
    }

    #[test]
    fn ngram_counts() {
        let toks: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let grams = ngrams(&toks, 2).unwrap();
        assert_eq!(grams.len(), 2);
        assert_eq!(grams.values().sum::<usize>(), 2);

        let short: Vec<String> = vec!["a".to_string()];
        assert!(ngrams(&short, 2).unwrap().is_empty());

        let rep: Vec<String> = ["a", "b", "a", "b"].iter().map(|s| s.to_string()).collect();
        let grams = ngrams(&rep, 2).unwrap();
        let ab: Vec<String> = vec!["a".into(), "b".into()];
        let ba: Vec<String> = vec!["b".into(), "a".into()];
        assert_eq!(grams[ab.as_slice()], 2);
        assert_eq!(grams[ba.as_slice()], 1);
    }

    #[test]
    fn ngrams_rejects_zero() {
        let toks: Vec<String> = vec!["a".to_string()];
        assert!(matches!(ngrams(&toks, 0), Err(TextError::InvalidN)));
    }

    #[test]
    fn tokenize_idempotent_on_joined_output() {
        for text in [
            "The cat sat on the mat.",
            "section 302 I.P.C., by the Session Judge",
            "Appeal No. 1782 of 1960, decided 4 May 1961",
        ] {
            let first = tokenize(text);
            let joined = first.tokens.join(" ");
            let second = tokenize(&joined);
            assert_eq!(first.tokens, second.tokens);
        }
    }
}
