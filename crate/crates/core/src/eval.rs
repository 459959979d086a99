//! Recall and precision of extracted aspects against a gold feature list.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{normalize_word, TokenizeOptions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldFeature {
    pub name: String,
    pub aliases: Vec<String>,
    pub offered_by: BTreeSet<String>,
}

/// An explicit gold feature to extracted term pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOverride {
    pub gold_name: String,
    pub extracted_term: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedFeature {
    pub gold: String,
    pub extracted: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    /// In gold order. A gold feature appears at most once; an extracted term
    /// belongs to at most one gold feature.
    pub matched: Vec<MatchedFeature>,
    pub unmatched_gold: Vec<String>,
    pub unmatched_extracted: Vec<String>,
}

impl MatchResult {
    pub fn true_positives(&self) -> usize {
        self.matched.iter().map(|m| m.extracted.len()).sum()
    }

    pub fn false_positives(&self) -> usize {
        self.unmatched_extracted.len()
    }

    pub fn is_matched(&self, gold: &str) -> bool {
        self.matched.iter().any(|m| m.gold == gold)
    }

    pub fn extracted_for(&self, gold: &str) -> &[String] {
        self.matched
            .iter()
            .find(|m| m.gold == gold)
            .map_or(&[], |m| m.extracted.as_slice())
    }
}

fn words(s: &str) -> Vec<String> {
    s.split_whitespace()
        .filter_map(|w| normalize_word(w, TokenizeOptions::default()))
        .collect()
}

/// Alias words equal to, or a subset of, the term's words.
fn alias_matches(alias: &[String], term: &[String]) -> bool {
    !alias.is_empty() && alias.iter().all(|w| term.contains(w))
}

/// Pairs gold features with extracted terms.
///
/// Overrides are applied first. A gold feature named in any override uses
/// only its overrides. Every other gold feature, in list order, claims each
/// still-unclaimed extracted term that one of its aliases (or its name)
/// matches word-wise.
pub fn match_features(
    gold: &[GoldFeature],
    extracted: &[String],
    overrides: &[MatchOverride],
) -> Result<MatchResult> {
    let gold_names: BTreeSet<&str> = gold.iter().map(|g| g.name.as_str()).collect();
    let known_terms: BTreeSet<&str> = extracted.iter().map(String::as_str).collect();
    for o in overrides {
        if !gold_names.contains(o.gold_name.as_str()) {
            return Err(Error::UnknownGoldFeature(o.gold_name.clone()));
        }
        if !known_terms.contains(o.extracted_term.as_str()) {
            return Err(Error::UnknownExtractedTerm(o.extracted_term.clone()));
        }
    }

    let mut claimed: BTreeSet<&str> = BTreeSet::new();
    let mut assigned: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for o in overrides {
        if claimed.insert(o.extracted_term.as_str()) {
            assigned
                .entry(o.gold_name.as_str())
                .or_default()
                .push(o.extracted_term.clone());
        }
    }
    let overridden: BTreeSet<&str> = overrides.iter().map(|o| o.gold_name.as_str()).collect();

    let term_words: Vec<Vec<String>> = extracted.iter().map(|t| words(t)).collect();
    for g in gold.iter().filter(|g| !overridden.contains(g.name.as_str())) {
        let aliases: Vec<Vec<String>> = core::iter::once(&g.name)
            .chain(&g.aliases)
            .map(|a| words(a))
            .collect();
        for (term, tw) in extracted.iter().zip(&term_words) {
            if claimed.contains(term.as_str()) {
                continue;
            }
            if aliases.iter().any(|a| alias_matches(a, tw)) {
                claimed.insert(term.as_str());
                assigned.entry(g.name.as_str()).or_default().push(term.clone());
            }
        }
    }

    let mut result = MatchResult::default();
    for g in gold {
        match assigned.remove(g.name.as_str()) {
            Some(extracted) => result.matched.push(MatchedFeature {
                gold: g.name.clone(),
                extracted,
            }),
            None => result.unmatched_gold.push(g.name.clone()),
        }
    }
    result.unmatched_extracted = extracted
        .iter()
        .filter(|t| !claimed.contains(t.as_str()))
        .cloned()
        .collect();
    Ok(result)
}

/// Matched share of the gold features offered by `entity`, or of all gold
/// features when `entity` is `None`. `None` when that scope is empty.
pub fn recall(result: &MatchResult, gold: &[GoldFeature], entity: Option<&str>) -> Option<f64> {
    let scope: Vec<&GoldFeature> = gold
        .iter()
        .filter(|g| entity.is_none_or(|e| g.offered_by.contains(e)))
        .collect();
    if scope.is_empty() {
        return None;
    }
    let hit = scope.iter().filter(|g| result.is_matched(&g.name)).count();
    Some(hit as f64 / scope.len() as f64)
}

/// `tp / (tp + fp)`, or `None` when both are zero.
pub fn precision(true_positives: usize, false_positives: usize) -> Option<f64> {
    let total = true_positives + false_positives;
    (total > 0).then(|| true_positives as f64 / total as f64)
}
