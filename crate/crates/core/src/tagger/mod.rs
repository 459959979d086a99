//! Part-of-speech tagging and noun-phrase chunking.
//!
//! The built-in [`LexiconTagger`] is a dictionary lookup with a handful of
//! suffix rules; anything it does not recognise is tagged as a noun. Any other
//! tagger can be plugged in through the [`Tagger`] trait.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text::{Sentence, Token};

const DICTIONARY: &str = include_str!("dictionary.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PosTag {
    Noun,
    ProperNoun,
    Adj,
    Det,
    Verb,
    Adv,
    Prep,
    Pron,
    Other,
}

impl PosTag {
    pub fn is_noun(self) -> bool {
        matches!(self, PosTag::Noun | PosTag::ProperNoun)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::ProperNoun => "PROPER_NOUN",
            PosTag::Adj => "ADJ",
            PosTag::Det => "DET",
            PosTag::Verb => "VERB",
            PosTag::Adv => "ADV",
            PosTag::Prep => "PREP",
            PosTag::Pron => "PRON",
            PosTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown part-of-speech tag `{}`", self.0)
    }
}

impl FromStr for PosTag {
    type Err = UnknownTag;

    /// Accepts the tag names used here plus the common Penn Treebank tags, so
    /// an override list exported from another tagger can be used as is.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        let tag = match upper.as_str() {
            "NOUN" | "NN" | "NNS" => PosTag::Noun,
            "PROPER_NOUN" | "PROPN" | "NNP" | "NNPS" => PosTag::ProperNoun,
            "ADJ" | "JJ" | "JJR" | "JJS" => PosTag::Adj,
            "DET" | "DT" | "PDT" | "WDT" | "PRP$" => PosTag::Det,
            "VERB" | "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" | "MD" => PosTag::Verb,
            "ADV" | "RB" | "RBR" | "RBS" | "WRB" => PosTag::Adv,
            "PREP" | "ADP" | "IN" | "TO" => PosTag::Prep,
            "PRON" | "PRP" | "WP" => PosTag::Pron,
            "OTHER" | "CC" | "CD" | "UH" | "SYM" | "X" => PosTag::Other,
            _ => return Err(UnknownTag(s.to_string())),
        };
        Ok(tag)
    }
}

/// Assigns exactly one tag per token.
pub trait Tagger {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag>;
}

/// Dictionary tagger with suffix fallbacks and a noun default.
#[derive(Debug, Clone)]
pub struct LexiconTagger {
    dictionary: BTreeMap<String, PosTag>,
}

impl Default for LexiconTagger {
    fn default() -> Self {
        Self::embedded()
    }
}

impl LexiconTagger {
    /// The built-in dictionary.
    pub fn embedded() -> Self {
        let mut dictionary = BTreeMap::new();
        let mut current = None;
        for line in DICTIONARY.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('@') {
                current = Some(name.parse::<PosTag>().expect("valid tag header"));
                continue;
            }
            let tag = current.expect("dictionary words before first tag header");
            for word in line.split_whitespace() {
                dictionary.insert(word.to_string(), tag);
            }
        }
        LexiconTagger { dictionary }
    }

    pub fn empty() -> Self {
        LexiconTagger {
            dictionary: BTreeMap::new(),
        }
    }

    /// Merges `word -> tag` overrides on top of the current dictionary.
    pub fn with_overrides<I, S>(mut self, overrides: I) -> Self
    where
        I: IntoIterator<Item = (S, PosTag)>,
        S: AsRef<str>,
    {
        for (word, tag) in overrides {
            self.dictionary
                .insert(word.as_ref().to_ascii_lowercase(), tag);
        }
        self
    }

    pub fn len(&self) -> usize {
        self.dictionary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dictionary.is_empty()
    }

    pub fn lookup(&self, norm: &str) -> Option<PosTag> {
        self.dictionary.get(norm).copied()
    }

    fn stem_tag(&self, stem: &str) -> Option<PosTag> {
        match self.lookup(stem) {
            Some(tag @ (PosTag::Noun | PosTag::Verb | PosTag::ProperNoun)) => Some(tag),
            _ => None,
        }
    }

    /// Tag for a single word without sentence context.
    pub fn tag_word(&self, norm: &str) -> PosTag {
        if let Some(tag) = self.lookup(norm) {
            return tag;
        }
        if norm.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') {
            return PosTag::Other;
        }
        let len = norm.len();
        // Plurals and third-person forms follow their stem when it is known.
        if len > 3 {
            if let Some(stem) = norm.strip_suffix("ies") {
                let mut y = String::from(stem);
                y.push('y');
                if let Some(tag) = self.stem_tag(&y) {
                    return tag;
                }
            }
            for suffix in ["es", "s"] {
                if let Some(stem) = norm.strip_suffix(suffix) {
                    if let Some(tag) = self.stem_tag(stem) {
                        return tag;
                    }
                }
            }
        }
        if len > 4 && norm.ends_with("ing") {
            return PosTag::Verb;
        }
        if len > 3 && norm.ends_with("ly") {
            return PosTag::Adv;
        }
        if len > 3 && norm.ends_with("ed") {
            return PosTag::Verb;
        }
        if len > 4
            && ["ful", "ous", "able", "ible", "ive", "less"]
                .iter()
                .any(|s| norm.ends_with(s))
        {
            return PosTag::Adj;
        }
        PosTag::Noun
    }
}

impl Tagger for LexiconTagger {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag> {
        tokens
            .iter()
            .map(|t| match self.lookup(&t.norm) {
                Some(tag) => tag,
                None => {
                    let tag = self.tag_word(&t.norm);
                    // Capitalised unknown words after the sentence start read
                    // as names ("WhatsApp", "Hike").
                    let capitalised = t.surface.chars().find(|c| c.is_ascii_alphanumeric())
                        .is_some_and(|c| c.is_ascii_uppercase());
                    if tag == PosTag::Noun && t.pos > 0 && capitalised {
                        PosTag::ProperNoun
                    } else {
                        tag
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentenceRef {
    pub entity_id: String,
    pub review_id: String,
    pub index: usize,
}

impl SentenceRef {
    pub fn of(sentence: &Sentence) -> Self {
        SentenceRef {
            entity_id: sentence.review_ref.entity_id.clone(),
            review_id: sentence.review_ref.review_id.clone(),
            index: sentence.index,
        }
    }
}

/// A chunked noun phrase. `terms` and `tags` run in parallel and skip
/// determiners; `span` is the `[start, end)` token range in the sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NounPhrase {
    pub sentence_ref: SentenceRef,
    pub span: (usize, usize),
    pub terms: Vec<String>,
    pub tags: Vec<PosTag>,
}

impl NounPhrase {
    /// Terms that are items for mining: no prepositions (determiners are
    /// already gone).
    pub fn content_terms(&self) -> impl Iterator<Item = &str> + '_ {
        self.terms
            .iter()
            .zip(&self.tags)
            .filter(|(_, tag)| **tag != PosTag::Prep && **tag != PosTag::Det)
            .map(|(t, _)| t.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkOptions {
    /// Merge `NP PREP NP` runs into one phrase ("end to end encryption").
    pub coalesce_prepositions: bool,
}

impl Default for ChunkOptions {
    fn default() -> Self {
        ChunkOptions {
            coalesce_prepositions: true,
        }
    }
}

/// Finds maximal `DET? ADJ* (NOUN|PROPER_NOUN)+` spans, left to right.
fn base_spans(tags: &[PosTag]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let mut j = i;
        if tags[j] == PosTag::Det {
            j += 1;
        }
        while j < tags.len() && tags[j] == PosTag::Adj {
            j += 1;
        }
        let nouns_start = j;
        while j < tags.len() && tags[j].is_noun() {
            j += 1;
        }
        if j > nouns_start {
            spans.push((i, j));
            i = j;
        } else {
            i += 1;
        }
    }
    spans
}

/// Chunks a tagged sentence into non-overlapping noun phrases.
///
/// `tags` must hold one tag per token of `sentence`.
pub fn chunk(sentence: &Sentence, tags: &[PosTag], options: ChunkOptions) -> Vec<NounPhrase> {
    assert_eq!(
        sentence.tokens.len(),
        tags.len(),
        "chunk needs one tag per token"
    );
    let mut spans = base_spans(tags);

    if options.coalesce_prepositions && spans.len() > 1 {
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(spans.len());
        for span in spans {
            match merged.last_mut() {
                Some(prev) if span.0 == prev.1 + 1 && tags[prev.1] == PosTag::Prep => {
                    prev.1 = span.1;
                }
                _ => merged.push(span),
            }
        }
        spans = merged;
    }

    let sentence_ref = SentenceRef::of(sentence);
    spans
        .into_iter()
        .map(|(start, end)| {
            let (terms, kept): (Vec<String>, Vec<PosTag>) = (start..end)
                .filter(|&i| tags[i] != PosTag::Det)
                .map(|i| (sentence.tokens[i].norm.clone(), tags[i]))
                .unzip();
            NounPhrase {
                sentence_ref: sentence_ref.clone(),
                span: (start, end),
                terms,
                tags: kept,
            }
        })
        .collect()
}

/// Tags and chunks one sentence.
pub fn noun_phrases<T: Tagger + ?Sized>(
    tagger: &T,
    sentence: &Sentence,
    options: ChunkOptions,
) -> Vec<NounPhrase> {
    if sentence.tokens.is_empty() {
        return Vec::new();
    }
    let tags = tagger.tag(&sentence.tokens);
    chunk(sentence, &tags, options)
}
