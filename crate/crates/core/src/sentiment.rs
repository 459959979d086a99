//! Distance-weighted lexicon scoring of aspects.
//!
//! Every opinion word in a sentence that mentions an aspect contributes
//! `1 / dist` to the aspect's positive or negative score, where `dist` is the
//! token distance to the nearest aspect token. Positive and negative are kept
//! as two separate non-negative magnitudes.
//!
//! Contributions are accumulated in a [`DistanceTally`]: a histogram of how
//! many opinion words were seen at each distance. Merging tallies is integer
//! addition, so totals do not depend on summation order, and any corpus
//! partition merges back to exactly the same score.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::matching::find_occurrences;
use crate::mining::{term_key, AspectCategory, AspectTerm};
use crate::text::{Corpus, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    /// `+1` or `-1`.
    pub fn value(self) -> i8 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

/// Positive and negative opinion word lists, kept disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpinionLexicon {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
}

fn parse_word_list<'a>(lines: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
    lines
        .into_iter()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
        .map(|l| l.to_lowercase())
        .collect()
}

impl OpinionLexicon {
    /// Builds a lexicon from the lines of a positive and a negative word list.
    /// Blank lines and `;` comments are skipped. Words found in both lists
    /// are dropped from both and returned as the second value.
    pub fn from_lines<'a, 'b>(
        positive: impl IntoIterator<Item = &'a str>,
        negative: impl IntoIterator<Item = &'b str>,
    ) -> (Self, Vec<String>) {
        let mut pos = parse_word_list(positive);
        let mut neg = parse_word_list(negative);
        let conflicts: Vec<String> = pos.intersection(&neg).cloned().collect();
        for w in &conflicts {
            pos.remove(w);
            neg.remove(w);
        }
        (
            OpinionLexicon {
                positive: pos,
                negative: neg,
            },
            conflicts,
        )
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.positive.len(), self.negative.len())
    }

    pub fn polarity(&self, word: &str) -> Option<Polarity> {
        if self.positive.contains(word) {
            Some(Polarity::Positive)
        } else if self.negative.contains(word) {
            Some(Polarity::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentMatch {
    pub word: String,
    pub polarity: Polarity,
    pub pos: usize,
}

pub fn sentiment_matches(tokens: &[&str], lexicon: &OpinionLexicon) -> Vec<SentimentMatch> {
    tokens
        .iter()
        .enumerate()
        .filter_map(|(pos, w)| {
            lexicon.polarity(w).map(|polarity| SentimentMatch {
                word: String::from(*w),
                polarity,
                pos,
            })
        })
        .collect()
}

/// A positive/negative score pair. Both values are non-negative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub positive: f64,
    pub negative: f64,
}

impl ScorePair {
    pub const ZERO: ScorePair = ScorePair {
        positive: 0.0,
        negative: 0.0,
    };

    pub fn new(positive: f64, negative: f64) -> Self {
        ScorePair { positive, negative }
    }

    pub fn total(&self) -> f64 {
        self.positive + self.negative
    }
}

impl core::ops::Add for ScorePair {
    type Output = ScorePair;

    fn add(self, rhs: ScorePair) -> ScorePair {
        ScorePair {
            positive: self.positive + rhs.positive,
            negative: self.negative + rhs.negative,
        }
    }
}

impl core::iter::Sum for ScorePair {
    fn sum<I: Iterator<Item = ScorePair>>(iter: I) -> ScorePair {
        iter.fold(ScorePair::ZERO, |a, b| a + b)
    }
}

/// Opinion-word counts per distance, per polarity, plus the number of
/// sentences that mentioned the aspect.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceTally {
    pub positive: BTreeMap<usize, u64>,
    pub negative: BTreeMap<usize, u64>,
    pub mentions: u64,
}

fn weighted_sum(hist: &BTreeMap<usize, u64>) -> f64 {
    // Fold from +0.0: an empty float `sum` is -0.0.
    hist.iter()
        .fold(0.0, |acc, (&d, &n)| acc + n as f64 / d as f64)
}

impl DistanceTally {
    pub fn record(&mut self, polarity: Polarity, distance: usize) {
        let d = distance.max(1);
        let hist = match polarity {
            Polarity::Positive => &mut self.positive,
            Polarity::Negative => &mut self.negative,
        };
        *hist.entry(d).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &DistanceTally) {
        for (&d, &n) in &other.positive {
            *self.positive.entry(d).or_insert(0) += n;
        }
        for (&d, &n) in &other.negative {
            *self.negative.entry(d).or_insert(0) += n;
        }
        self.mentions += other.mentions;
    }

    /// `Σ count(d) / d` per polarity, summed in ascending distance order.
    pub fn score(&self) -> ScorePair {
        ScorePair {
            positive: weighted_sum(&self.positive),
            negative: weighted_sum(&self.negative),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.mentions == 0 && self.positive.is_empty() && self.negative.is_empty()
    }
}

/// Tallies one sentence against one aspect. `None` when the aspect does not
/// occur in the sentence.
///
/// Opinion words inside any occurrence's span are skipped; every other one is
/// recorded at its distance to the nearest occurrence token (at least 1).
pub fn tally_sentence<S: AsRef<str>>(
    tokens: &[&str],
    aspect: &[S],
    lexicon: &OpinionLexicon,
    max_gap: usize,
) -> Option<DistanceTally> {
    let occurrences = find_occurrences(tokens, aspect, max_gap);
    if occurrences.is_empty() {
        return None;
    }
    let mut tally = DistanceTally {
        mentions: 1,
        ..DistanceTally::default()
    };
    for m in sentiment_matches(tokens, lexicon) {
        if occurrences.iter().any(|o| o.covers(m.pos)) {
            continue;
        }
        let dist = occurrences
            .iter()
            .map(|o| o.distance(m.pos))
            .min()
            .expect("at least one occurrence");
        tally.record(m.polarity, dist);
    }
    Some(tally)
}

/// Positive and negative score of `aspect` in one sentence; zero when the
/// aspect is absent.
pub fn score_sentence<S: AsRef<str>>(
    tokens: &[&str],
    aspect: &[S],
    lexicon: &OpinionLexicon,
    max_gap: usize,
) -> ScorePair {
    tally_sentence(tokens, aspect, lexicon, max_gap)
        .map(|t| t.score())
        .unwrap_or_default()
}

/// Tallies per term key over a batch of sentences. Callers can split a corpus
/// into batches freely and [`merge_term_tallies`] the results.
pub fn tally_sentences<'a>(
    sentences: impl IntoIterator<Item = &'a Sentence>,
    terms: &[AspectTerm],
    lexicon: &OpinionLexicon,
    max_gap: usize,
) -> BTreeMap<String, DistanceTally> {
    let keys: Vec<String> = terms.iter().map(AspectTerm::key).collect();
    let mut out: BTreeMap<String, DistanceTally> = BTreeMap::new();
    for sentence in sentences {
        let tokens = sentence.norm_vec();
        let present: BTreeSet<&str> = tokens.iter().copied().collect();
        for (term, key) in terms.iter().zip(&keys) {
            if !term.words.iter().all(|w| present.contains(w.as_str())) {
                continue;
            }
            if let Some(t) = tally_sentence(&tokens, &term.words, lexicon, max_gap) {
                out.entry(key.clone()).or_default().merge(&t);
            }
        }
    }
    out
}

pub fn merge_term_tallies(
    into: &mut BTreeMap<String, DistanceTally>,
    from: &BTreeMap<String, DistanceTally>,
) {
    for (k, t) in from {
        into.entry(k.clone()).or_default().merge(t);
    }
}

/// Term tallies per entity, with the entity review counts used for
/// normalization.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusScores {
    pub by_entity: BTreeMap<String, BTreeMap<String, DistanceTally>>,
    pub review_counts: BTreeMap<String, usize>,
}

impl CorpusScores {
    /// Tallies across all entities, per term key.
    pub fn term_totals(&self) -> BTreeMap<String, DistanceTally> {
        let mut out = BTreeMap::new();
        for terms in self.by_entity.values() {
            merge_term_tallies(&mut out, terms);
        }
        out
    }

    fn category_tally(terms: &BTreeMap<String, DistanceTally>, category: &AspectCategory) -> DistanceTally {
        let mut tally = DistanceTally::default();
        for key in category.member_keys() {
            if let Some(t) = terms.get(&key) {
                tally.merge(t);
            }
        }
        tally
    }

    /// Whole-corpus tally per category: the members' tallies merged.
    pub fn category_totals(&self, categories: &[AspectCategory]) -> Vec<(String, DistanceTally)> {
        let totals = self.term_totals();
        categories
            .iter()
            .map(|c| (c.category_id.clone(), Self::category_tally(&totals, c)))
            .collect()
    }

    /// One entity's tally for a category, from that entity's sentences only.
    pub fn entity_category(&self, entity: &str, category: &AspectCategory) -> DistanceTally {
        self.by_entity
            .get(entity)
            .map(|terms| Self::category_tally(terms, category))
            .unwrap_or_default()
    }

    pub fn entity_term(&self, entity: &str, term: &[String]) -> DistanceTally {
        self.by_entity
            .get(entity)
            .and_then(|terms| terms.get(&term_key(term)))
            .cloned()
            .unwrap_or_default()
    }

    /// Per-entity category score divided by that entity's review count.
    pub fn normalized(&self, entity: &str, category: &AspectCategory) -> Option<ScorePair> {
        let count = self.review_counts.get(entity).copied().unwrap_or(0);
        normalize_per_entity(self.entity_category(entity, category).score(), count)
    }
}

/// Scores every term over every sentence of every entity.
pub fn score_corpus(
    corpus: &Corpus,
    terms: &[AspectTerm],
    lexicon: &OpinionLexicon,
    max_gap: usize,
) -> CorpusScores {
    CorpusScores {
        by_entity: corpus
            .entities
            .iter()
            .map(|(id, e)| (id.clone(), tally_sentences(&e.sentences, terms, lexicon, max_gap)))
            .collect(),
        review_counts: corpus.review_counts(),
    }
}

/// Divides a score by the number of reviews behind it. `None` for zero
/// reviews.
pub fn normalize_per_entity(score: ScorePair, review_count: usize) -> Option<ScorePair> {
    if review_count == 0 {
        return None;
    }
    let n = review_count as f64;
    Some(ScorePair {
        positive: score.positive / n,
        negative: score.negative / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{Review, TokenizeOptions};

    fn lexicon() -> OpinionLexicon {
        OpinionLexicon::from_lines(["great", "good", "love"], ["blurry", "bad", "crash"]).0
    }

    #[test]
    fn empty_tally_scores_positive_zero() {
        let s = DistanceTally::default().score();
        assert!(s.positive.is_sign_positive() && s.negative.is_sign_positive());
    }

    #[test]
    fn loads_lexicon() {
        let (lex, conflicts) = OpinionLexicon::from_lines(["good", "great"], ["bad"]);
        assert_eq!(lex.sizes(), (2, 1));
        assert!(conflicts.is_empty());

        let (lex, conflicts) = OpinionLexicon::from_lines(["funny", "good"], ["funny", "bad"]);
        assert_eq!(conflicts, ["funny"]);
        assert_eq!(lex.polarity("funny"), None);
        assert_eq!(lex.sizes(), (1, 1));

        let (lex, _) = OpinionLexicon::from_lines(
            ["; header", ";", "; more", "Good", "", "great"],
            ["bad"],
        );
        assert_eq!(lex.sizes(), (2, 1));
        assert_eq!(lex.polarity("good"), Some(Polarity::Positive));
    }

    #[test]
    fn hand_examples() {
        let toks = ["great", "camera", "but", "blurry", "video"];
        let lex = lexicon();
        assert_eq!(score_sentence(&toks, &["camera"], &lex, 2), ScorePair::new(1.0, 0.5));
        assert_eq!(score_sentence(&toks, &["video"], &lex, 2), ScorePair::new(0.25, 1.0));
        assert_eq!(score_sentence(&["the", "app", "is"], &["app"], &lex, 2), ScorePair::ZERO);
    }

    #[test]
    fn absent_aspect_scores_zero_and_has_no_tally() {
        let lex = lexicon();
        assert!(tally_sentence(&["great", "app"], &["camera"], &lex, 2).is_none());
    }

    #[test]
    fn sentiment_words_inside_span_are_skipped() {
        let lex = lexicon();
        let s = score_sentence(&["great", "wall", "is", "bad"], &["great", "wall"], &lex, 0);
        assert_eq!(s, ScorePair::new(0.0, 0.5));
    }

    #[test]
    fn nearest_occurrence_wins() {
        let lex = lexicon();
        let toks = ["camera", "x", "x", "x", "good", "camera"];
        assert_eq!(score_sentence(&toks, &["camera"], &lex, 0), ScorePair::new(1.0, 0.0));
    }

    #[test]
    fn tally_matches_polarity_values() {
        assert_eq!(Polarity::Positive.value(), 1);
        assert_eq!(Polarity::Negative.value(), -1);
    }

    fn corpus(texts: &[&str]) -> Corpus {
        let mut c = Corpus::new(TokenizeOptions::default());
        for (i, t) in texts.iter().enumerate() {
            c.insert(Review {
                entity_id: "A".into(),
                review_id: alloc::format!("{i}"),
                text: String::from(*t),
                rating: None,
                timestamp: None,
            })
            .unwrap();
        }
        c
    }

    fn term(words: &[&str]) -> AspectTerm {
        AspectTerm {
            words: words.iter().map(|s| String::from(*s)).collect(),
            occurrence_count: 1,
        }
    }

    #[test]
    fn corpus_scoring_is_additive() {
        let lex = lexicon();
        let terms = [term(&["camera"])];
        let one = score_corpus(&corpus(&["great camera"]), &terms, &lex, 2);
        assert_eq!(one.term_totals()["camera"].score(), ScorePair::new(1.0, 0.0));
        let two = score_corpus(&corpus(&["great camera", "great camera"]), &terms, &lex, 2);
        assert_eq!(two.term_totals()["camera"].score(), ScorePair::new(2.0, 0.0));
        assert_eq!(two.term_totals()["camera"].mentions, 2);
    }

    #[test]
    fn category_sums_members() {
        let s = ScorePair::new(200.0, 50.0) + ScorePair::new(93.525, 18.054);
        assert!((s.positive - 293.525).abs() < 1e-9);
        assert!((s.negative - 68.054).abs() < 1e-9);

        let lex = lexicon();
        let terms = [term(&["sticker"]), term(&["emoji"])];
        let scores = score_corpus(
            &corpus(&["love the sticker", "bad emoji"]),
            &terms,
            &lex,
            2,
        );
        let cat = AspectCategory {
            category_id: "stickers".into(),
            label: "sticker, emoji".into(),
            members: alloc::vec![alloc::vec!["sticker".into()], alloc::vec!["emoji".into()]],
        };
        let totals = scores.category_totals(core::slice::from_ref(&cat));
        assert_eq!(totals[0].1.score(), ScorePair::new(0.5, 1.0));
        assert_eq!(scores.entity_category("A", &cat).score(), ScorePair::new(0.5, 1.0));
        assert_eq!(scores.entity_category("B", &cat).score(), ScorePair::ZERO);
        assert_eq!(scores.normalized("A", &cat), Some(ScorePair::new(0.25, 0.5)));
    }

    #[test]
    fn normalization() {
        let n = normalize_per_entity(ScorePair::new(664.893, 224.012), 10_000).unwrap();
        assert!((n.positive - 0.0664893).abs() < 1e-12);
        assert!((n.negative - 0.0224012).abs() < 1e-12);
        assert_eq!(normalize_per_entity(ScorePair::ZERO, 7), Some(ScorePair::ZERO));
        assert_eq!(normalize_per_entity(ScorePair::new(1.0, 1.0), 0), None);
    }

    #[test]
    fn tally_merge_and_floor() {
        let mut a = DistanceTally::default();
        a.record(Polarity::Positive, 0);
        a.record(Polarity::Negative, 4);
        let mut b = a.clone();
        b.merge(&a);
        assert_eq!(b.positive[&1], 2);
        assert_eq!(b.score(), ScorePair::new(2.0, 0.5));
    }
}
