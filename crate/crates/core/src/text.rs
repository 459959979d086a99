//! Reviews, sentence segmentation and token normalization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// One app-store review. `entity` is the app the review is about; holder and
/// time are carried along as inert metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Review {
    #[serde(rename = "entity")]
    pub entity_id: String,
    pub review_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// Why a review was refused by [`Corpus::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    EmptyText,
    RatingOutOfRange(i64),
    DuplicateReviewId(String),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::EmptyText => f.write_str("text is empty"),
            RejectReason::RatingOutOfRange(r) => write!(f, "rating {r} outside 1..=5"),
            RejectReason::DuplicateReviewId(id) => write!(f, "duplicate review_id `{id}`"),
        }
    }
}

/// Checks a raw rating value and narrows it.
pub fn validate_rating(rating: i64) -> Result<u8, RejectReason> {
    if (1..=5).contains(&rating) {
        Ok(rating as u8)
    } else {
        Err(RejectReason::RatingOutOfRange(rating))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReviewRef {
    pub entity_id: String,
    pub review_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub norm: String,
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub review_ref: ReviewRef,
    pub index: usize,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn norms(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|t| t.norm.as_str())
    }

    pub fn norm_vec(&self) -> Vec<&str> {
        self.norms().collect()
    }

    /// Original surface text, tokens joined with single spaces.
    pub fn surface_text(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&t.surface);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizeOptions {
    /// Reduce runs of three or more identical letters to two
    /// ("loveeeee" becomes "lovee"). Off by default.
    pub collapse_elongation: bool,
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

/// Splits review text into trimmed sentences.
///
/// Boundaries fall after a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets that immediately follow it) and at newlines. Text without any
/// terminal punctuation comes back as a single sentence.
pub fn segment(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();

    let flush = |buf: &mut String, out: &mut Vec<String>| {
        let trimmed = buf.trim();
        if !trimmed.is_empty() {
            out.push(String::from(trimmed));
        }
        buf.clear();
    };

    while let Some(c) = chars.next() {
        if c == '\n' || c == '\r' {
            flush(&mut current, &mut out);
            continue;
        }
        current.push(c);
        if is_terminal(c) {
            while let Some(&next) = chars.peek() {
                if is_terminal(next) || is_closer(next) {
                    current.push(next);
                    chars.next();
                } else {
                    break;
                }
            }
            flush(&mut current, &mut out);
        }
    }
    flush(&mut current, &mut out);
    out
}

/// Normalizes one whitespace-delimited chunk. Returns `None` when nothing
/// survives (standalone punctuation, `&`, emoji).
pub fn normalize_word(chunk: &str, options: TokenizeOptions) -> Option<String> {
    let ascii: String = chunk.chars().filter(char::is_ascii).collect();
    let trimmed = ascii.trim_matches(|c: char| !c.is_ascii_alphanumeric());
    if trimmed.is_empty() {
        return None;
    }
    let lower = trimmed.to_ascii_lowercase();
    Some(if options.collapse_elongation {
        collapse_elongation(&lower)
    } else {
        lower
    })
}

/// Replaces every run of three or more identical letters with two.
pub fn collapse_elongation(word: &str) -> String {
    let mut out = String::with_capacity(word.len());
    let mut prev = None;
    let mut run = 0usize;
    for c in word.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run <= 2 || !c.is_alphabetic() {
            out.push(c);
        }
    }
    out
}

pub fn tokenize(sentence: &str) -> Vec<Token> {
    tokenize_with(sentence, TokenizeOptions::default())
}

pub fn tokenize_with(sentence: &str, options: TokenizeOptions) -> Vec<Token> {
    sentence
        .split_whitespace()
        .filter_map(|chunk| normalize_word(chunk, options).map(|norm| (chunk, norm)))
        .enumerate()
        .map(|(pos, (surface, norm))| Token {
            surface: String::from(surface),
            norm,
            pos,
        })
        .collect()
}

/// All reviews and sentences of one entity.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EntityCorpus {
    pub reviews: Vec<Review>,
    pub sentences: Vec<Sentence>,
    #[serde(skip)]
    review_ids: BTreeSet<String>,
}

impl PartialEq for EntityCorpus {
    fn eq(&self, other: &Self) -> bool {
        self.reviews == other.reviews && self.sentences == other.sentences
    }
}

impl EntityCorpus {
    pub fn review_count(&self) -> usize {
        self.reviews.len()
    }
}

/// Segmented and tokenized reviews, grouped by entity in name order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub options: TokenizeOptions,
    pub entities: BTreeMap<String, EntityCorpus>,
}

impl Corpus {
    pub fn new(options: TokenizeOptions) -> Self {
        Corpus {
            options,
            entities: BTreeMap::new(),
        }
    }

    /// Adds a review, segmenting and tokenizing it. Sentences that have no
    /// tokens left after normalization are skipped, and the remaining ones
    /// are numbered contiguously from 0.
    pub fn insert(&mut self, review: Review) -> Result<(), RejectReason> {
        if review.text.trim().is_empty() {
            return Err(RejectReason::EmptyText);
        }
        if let Some(r) = review.rating {
            validate_rating(i64::from(r))?;
        }
        let entity = self.entities.entry(review.entity_id.clone()).or_default();
        if entity.review_ids.len() != entity.reviews.len() {
            // Deserialized corpora arrive without the id set.
            entity.review_ids = entity.reviews.iter().map(|r| r.review_id.clone()).collect();
        }
        if entity.review_ids.contains(&review.review_id) {
            return Err(RejectReason::DuplicateReviewId(review.review_id));
        }
        entity.review_ids.insert(review.review_id.clone());

        let review_ref = ReviewRef {
            entity_id: review.entity_id.clone(),
            review_id: review.review_id.clone(),
        };
        let segments = segment(&review.text);
        let sentences = segments
            .iter()
            .map(|s| tokenize_with(s, self.options))
            .filter(|tokens| !tokens.is_empty())
            .enumerate()
            .map(|(index, tokens)| Sentence {
                review_ref: review_ref.clone(),
                index,
                tokens,
            });
        entity.sentences.extend(sentences);
        entity.reviews.push(review);
        Ok(())
    }

    pub fn review_counts(&self) -> BTreeMap<String, usize> {
        self.entities
            .iter()
            .map(|(id, e)| (id.clone(), e.review_count()))
            .collect()
    }

    /// Every sentence, entities in name order.
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> + '_ {
        self.entities.values().flat_map(|e| e.sentences.iter())
    }

    pub fn sentence_count(&self) -> usize {
        self.entities.values().map(|e| e.sentences.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norms(s: &str) -> Vec<String> {
        tokenize(s).into_iter().map(|t| t.norm).collect()
    }

    fn review(entity: &str, id: &str, text: &str) -> Review {
        Review {
            entity_id: entity.into(),
            review_id: id.into(),
            text: text.into(),
            rating: None,
            timestamp: None,
        }
    }

    #[test]
    fn segments_on_terminals() {
        assert_eq!(segment("Great app. Love it!"), ["Great app.", "Love it!"]);
        assert_eq!(segment("Loveeeeeeeeeeeeeeeeeeeeeeeee it").len(), 1);
        assert!(segment("").is_empty());
        assert_eq!(segment("what?!? really\nyes"), ["what?!?", "really", "yes"]);
        assert_eq!(segment("He said \"wow!\" then left"), ["He said \"wow!\"", "then left"]);
    }

    #[test]
    fn tokenizes_examples() {
        assert_eq!(
            norms("I need video call feature."),
            ["i", "need", "video", "call", "feature"]
        );
        assert_eq!(norms("Great!!!"), ["great"]);
        assert_eq!(norms("dp & status"), ["dp", "status"]);
        assert_eq!(norms("love it \u{1F600} !!"), ["love", "it"]);
        assert_eq!(norms("don't"), ["don't"]);
        let toks = tokenize("a , b");
        assert_eq!(toks.iter().map(|t| t.pos).collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn elongation_collapse_is_opt_in() {
        assert_eq!(norms("Loveeeee"), ["loveeeee"]);
        let opts = TokenizeOptions {
            collapse_elongation: true,
        };
        let toks = tokenize_with("Loveeeee it", opts);
        assert_eq!(toks[0].norm, "lovee");
        assert_eq!(collapse_elongation("soooo gooood"), "soo good");
        assert_eq!(collapse_elongation("1000"), "1000");
    }

    #[test]
    fn corpus_counts_and_rejects() {
        let mut c = Corpus::default();
        c.insert(review("A", "1", "Nice. Good camera")).unwrap();
        c.insert(review("A", "2", "meh")).unwrap();
        c.insert(review("B", "1", "ok")).unwrap();
        assert_eq!(
            c.insert(review("A", "1", "again")),
            Err(RejectReason::DuplicateReviewId("1".into()))
        );
        assert_eq!(c.insert(review("A", "3", "   ")), Err(RejectReason::EmptyText));
        let counts = c.review_counts();
        assert_eq!(counts["A"], 2);
        assert_eq!(counts["B"], 1);
        let a = &c.entities["A"];
        assert_eq!(a.sentences.len(), 3);
        assert_eq!(a.sentences[1].index, 1);
    }

    #[test]
    fn punctuation_only_sentences_are_skipped() {
        let mut c = Corpus::default();
        c.insert(review("A", "1", "!!! ok.")).unwrap();
        let s = &c.entities["A"].sentences;
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].index, 0);
    }

    #[test]
    fn rating_bounds() {
        assert_eq!(validate_rating(5), Ok(5));
        assert!(validate_rating(0).is_err());
        assert!(validate_rating(6).is_err());
    }
}
