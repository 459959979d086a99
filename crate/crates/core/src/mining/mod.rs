//! Frequency-based aspect extraction.
//!
//! Noun phrases become transactions, Apriori finds frequent itemsets and
//! association rules, and the words and itemsets in those rules are pruned
//! against sentence-level occurrence counts to leave the aspect vocabulary.

mod apriori;
mod categories;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use apriori::{
    generate_rules, meets_support, mine_frequent, validate_confidence, validate_support, ItemSet,
    Rule,
};
pub use categories::{check_categories, AspectCategory, CategoryCheck};

use crate::error::{Error, Result};
use crate::matching::contains_phrase;
use crate::tagger::{NounPhrase, PosTag};
use crate::text::Sentence;

/// Largest itemset considered for multi-word aspects.
pub const MAX_MULTIWORD_ITEMS: usize = 4;

/// The unique content terms of one noun phrase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub items: BTreeSet<String>,
}

impl Transaction {
    /// `None` when no item is left.
    pub fn new<I: IntoIterator<Item = String>>(items: I) -> Option<Self> {
        let items: BTreeSet<String> = items.into_iter().collect();
        (!items.is_empty()).then_some(Transaction { items })
    }
}

/// One transaction per noun phrase, with determiners and prepositions left
/// out. Phrases with nothing left are dropped.
pub fn build_transactions(phrases: &[NounPhrase]) -> Vec<Transaction> {
    phrases
        .iter()
        .filter_map(|np| Transaction::new(np.content_terms().map(String::from)))
        .collect()
}

/// A mined aspect: a word sequence and the number of sentences it occurs in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AspectTerm {
    pub words: Vec<String>,
    pub occurrence_count: usize,
}

impl AspectTerm {
    pub fn key(&self) -> String {
        term_key(&self.words)
    }

    pub fn is_multiword(&self) -> bool {
        self.words.len() > 1
    }
}

/// Space-joined display and lookup key for a word sequence.
pub fn term_key<S: AsRef<str>>(words: &[S]) -> String {
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(w.as_ref());
    }
    out
}

/// Sentence-level occurrence counts over a fixed set of sentences.
pub struct SentenceIndex<'a> {
    sentences: Vec<Vec<&'a str>>,
    postings: BTreeMap<&'a str, Vec<usize>>,
}

impl<'a> SentenceIndex<'a> {
    pub fn new<I: IntoIterator<Item = &'a Sentence>>(sentences: I) -> Self {
        let sentences: Vec<Vec<&'a str>> = sentences.into_iter().map(|s| s.norm_vec()).collect();
        let mut postings: BTreeMap<&'a str, Vec<usize>> = BTreeMap::new();
        for (id, toks) in sentences.iter().enumerate() {
            for tok in toks {
                let list = postings.entry(*tok).or_default();
                if list.last() != Some(&id) {
                    list.push(id);
                }
            }
        }
        SentenceIndex {
            sentences,
            postings,
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Sentences containing every word, in any order.
    fn containing_all<S: AsRef<str>>(&self, words: &[S]) -> Vec<usize> {
        let mut lists: Vec<&Vec<usize>> = Vec::with_capacity(words.len());
        for w in words {
            match self.postings.get(w.as_ref()) {
                Some(list) => lists.push(list),
                None => return Vec::new(),
            }
        }
        lists.sort_by_key(|l| l.len());
        let Some((first, rest)) = lists.split_first() else {
            return Vec::new();
        };
        first
            .iter()
            .copied()
            .filter(|id| rest.iter().all(|l| l.binary_search(id).is_ok()))
            .collect()
    }

    pub fn count_word(&self, word: &str) -> usize {
        self.postings.get(word).map_or(0, Vec::len)
    }

    pub fn count_all<S: AsRef<str>>(&self, words: &[S]) -> usize {
        self.containing_all(words).len()
    }

    /// Sentences with the words in order, at most `max_gap` tokens apart.
    pub fn count_ordered<S: AsRef<str>>(&self, phrase: &[S], max_gap: usize) -> usize {
        self.containing_all(phrase)
            .into_iter()
            .filter(|&id| contains_phrase(&self.sentences[id], phrase, max_gap))
            .count()
    }
}

/// Unique words across all rules, sorted.
pub fn rule_words(rules: &[Rule]) -> BTreeSet<String> {
    rules
        .iter()
        .flat_map(|r| r.antecedent.iter().chain(&r.consequent))
        .cloned()
        .collect()
}

/// Unique `antecedent ∪ consequent` sets across all rules, sorted.
pub fn rule_itemsets(rules: &[Rule]) -> BTreeSet<Vec<String>> {
    rules.iter().map(Rule::itemset).collect()
}

/// Keeps a candidate word `w` when `count(w) - max_j count(superset_j)` is
/// more than `threshold`, where the supersets are the given itemsets that
/// contain `w` and counts are sentence occurrences. A word with no superset
/// is kept when `count(w) > threshold`.
pub fn prune_candidates(
    candidates: &BTreeSet<String>,
    supersets: &BTreeSet<Vec<String>>,
    index: &SentenceIndex<'_>,
    threshold: usize,
) -> Vec<AspectTerm> {
    candidates
        .iter()
        .filter_map(|w| {
            let count = index.count_word(w);
            let absorbed = supersets
                .iter()
                .filter(|s| s.len() > 1 && s.contains(w))
                .map(|s| index.count_all(s))
                .max()
                .unwrap_or(0);
            (count.saturating_sub(absorbed) > threshold).then(|| AspectTerm {
                words: alloc::vec![w.clone()],
                occurrence_count: count,
            })
        })
        .collect()
}

/// Single-word aspects from the words of `rules`, compared against the
/// rules' own itemsets as supersets.
pub fn prune_singletons(
    rules: &[Rule],
    index: &SentenceIndex<'_>,
    threshold: usize,
) -> Vec<AspectTerm> {
    prune_candidates(&rule_words(rules), &rule_itemsets(rules), index, threshold)
}

/// The word sequence a noun phrase gives for `items`: the run of terms from
/// the first to the last item word, if every term in between is an item word
/// or a preposition and consecutive item words are at most `max_gap` apart.
fn phrase_in(np: &NounPhrase, items: &BTreeSet<&str>, max_gap: usize) -> Option<Vec<String>> {
    let hits: Vec<usize> = np
        .terms
        .iter()
        .zip(&np.tags)
        .enumerate()
        .filter(|(_, (t, tag))| **tag != PosTag::Prep && items.contains(t.as_str()))
        .map(|(i, _)| i)
        .collect();
    let covered: BTreeSet<&str> = hits.iter().map(|&i| np.terms[i].as_str()).collect();
    if covered.len() != items.len() {
        return None;
    }
    let (first, last) = (hits[0], *hits.last()?);
    let dense = (first..=last).all(|i| np.tags[i] == PosTag::Prep || hits.binary_search(&i).is_ok());
    let close = hits.windows(2).all(|w| w[1] - w[0] - 1 <= max_gap);
    (dense && close).then(|| np.terms[first..=last].to_vec())
}

/// Multi-word aspects from candidate itemsets (size 2 up to
/// [`MAX_MULTIWORD_ITEMS`]).
///
/// Word orders are read off the noun phrases that contain a candidate, which
/// is also how connecting prepositions ("end to end encryption") end up in
/// the term. Each order found is kept when it occurs, in order and with gaps
/// of at most `max_gap`, in at least `min_sentences` sentences.
pub fn validate_multiword(
    candidates: &BTreeSet<Vec<String>>,
    phrases: &[NounPhrase],
    index: &SentenceIndex<'_>,
    max_gap: usize,
    min_sentences: usize,
) -> Vec<AspectTerm> {
    let mut by_item: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    for (id, np) in phrases.iter().enumerate() {
        for term in np.content_terms() {
            by_item.entry(term).or_default().insert(id);
        }
    }

    let mut orders: BTreeSet<Vec<String>> = BTreeSet::new();
    for cand in candidates
        .iter()
        .filter(|c| (2..=MAX_MULTIWORD_ITEMS).contains(&c.len()))
    {
        let items: BTreeSet<&str> = cand.iter().map(String::as_str).collect();
        let mut nps: Option<BTreeSet<usize>> = None;
        for item in &items {
            let ids = by_item.get(item).cloned().unwrap_or_default();
            nps = Some(match nps {
                None => ids,
                Some(prev) => prev.intersection(&ids).copied().collect(),
            });
        }
        for id in nps.unwrap_or_default() {
            if let Some(order) = phrase_in(&phrases[id], &items, max_gap) {
                orders.insert(order);
            }
        }
    }

    orders
        .into_iter()
        .filter_map(|words| {
            let count = index.count_ordered(&words, max_gap);
            (count >= min_sentences && count > 0).then_some(AspectTerm {
                words,
                occurrence_count: count,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiningParams {
    pub min_support: f64,
    pub min_confidence: f64,
    pub prune_threshold: usize,
    pub max_gap: usize,
    pub min_sentences: usize,
    /// Also admit frequent 1-itemsets as single-word candidates.
    pub include_frequent_singletons: bool,
    /// Only words tagged as nouns in some phrase may become single-word
    /// aspects.
    pub singletons_must_be_nouns: bool,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            min_support: 0.0004,
            min_confidence: 0.6,
            prune_threshold: 3,
            max_gap: 2,
            min_sentences: 2,
            include_frequent_singletons: false,
            singletons_must_be_nouns: true,
        }
    }
}

impl MiningParams {
    pub fn validate(&self) -> Result<()> {
        validate_support(self.min_support)?;
        validate_confidence(self.min_confidence)?;
        if self.min_sentences == 0 {
            return Err(Error::InvalidParameter {
                name: "min_sentences",
                reason: String::from("must be at least 1"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningOutput {
    pub transactions: Vec<Transaction>,
    pub itemsets: Vec<ItemSet>,
    pub rules: Vec<Rule>,
    /// Single-word terms first, then multi-word terms, each sorted.
    pub terms: Vec<AspectTerm>,
}

/// Runs the whole extraction from chunked phrases to aspect terms.
pub fn extract_aspects<'a>(
    phrases: &[NounPhrase],
    sentences: impl IntoIterator<Item = &'a Sentence>,
    params: &MiningParams,
) -> Result<MiningOutput> {
    params.validate()?;
    let transactions = build_transactions(phrases);
    let itemsets = mine_frequent(&transactions, params.min_support)?;
    let rules = generate_rules(&itemsets, params.min_confidence)?;
    let index = SentenceIndex::new(sentences);

    let mut candidates = rule_words(&rules);
    if params.include_frequent_singletons {
        candidates.extend(
            itemsets
                .iter()
                .filter(|s| s.items.len() == 1)
                .map(|s| s.items[0].clone()),
        );
    }
    if params.singletons_must_be_nouns {
        let nouns: BTreeSet<&str> = phrases
            .iter()
            .flat_map(|np| np.terms.iter().zip(&np.tags))
            .filter(|(_, tag)| tag.is_noun())
            .map(|(t, _)| t.as_str())
            .collect();
        candidates.retain(|w| nouns.contains(w.as_str()));
    }
    let supersets = rule_itemsets(&rules);

    let mut terms = prune_candidates(&candidates, &supersets, &index, params.prune_threshold);
    terms.extend(validate_multiword(
        &supersets,
        phrases,
        &index,
        params.max_gap,
        params.min_sentences,
    ));

    Ok(MiningOutput {
        transactions,
        itemsets,
        rules,
        terms,
    })
}
