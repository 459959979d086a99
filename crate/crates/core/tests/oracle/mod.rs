//! Brute-force reference implementations used only by tests.
//!
//! Nothing here calls into the library's mining or scoring code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Every itemset over the transaction vocabulary whose support fraction is at
/// least `min_support`, with its count. Enumerates all `2^m - 1` subsets.
pub fn frequent_itemsets(
    transactions: &[BTreeSet<String>],
    min_support: f64,
) -> BTreeMap<Vec<String>, usize> {
    let vocab: Vec<String> = transactions
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(vocab.len() <= 16, "oracle is exponential in vocabulary size");
    let n = transactions.len();
    let mut out = BTreeMap::new();
    if n == 0 {
        return out;
    }
    for mask in 1u32..(1 << vocab.len()) {
        let set: Vec<String> = vocab
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, w)| w.clone())
            .collect();
        let count = support_count(transactions, &set);
        if count as f64 / n as f64 >= min_support {
            out.insert(set, count);
        }
    }
    out
}

pub fn support_count(transactions: &[BTreeSet<String>], set: &[String]) -> usize {
    transactions
        .iter()
        .filter(|t| set.iter().all(|w| t.contains(w)))
        .count()
}

/// Every rule split of every frequent itemset meeting `min_confidence`:
/// `(antecedent, consequent) -> confidence`, with counts recomputed from the
/// transactions.
pub fn rules(
    transactions: &[BTreeSet<String>],
    frequent: &BTreeMap<Vec<String>, usize>,
    min_confidence: f64,
) -> BTreeMap<(Vec<String>, Vec<String>), f64> {
    let mut out = BTreeMap::new();
    for (set, &count) in frequent.iter().filter(|(s, _)| s.len() >= 2) {
        for mask in 1u32..(1 << set.len()) - 1 {
            let mut ante = Vec::new();
            let mut cons = Vec::new();
            for (i, w) in set.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    ante.push(w.clone());
                } else {
                    cons.push(w.clone());
                }
            }
            let conf = count as f64 / support_count(transactions, &ante) as f64;
            if conf >= min_confidence {
                out.insert((ante, cons), conf);
            }
        }
    }
    out
}

/// Distance-weighted score of a contiguous aspect by checking every
/// (opinion token, aspect window) pair.
pub fn sentence_score(
    tokens: &[&str],
    aspect: &[&str],
    positive: &BTreeSet<&str>,
    negative: &BTreeSet<&str>,
) -> (f64, f64) {
    let k = aspect.len();
    let windows: Vec<usize> = (0..tokens.len())
        .filter(|&s| s + k <= tokens.len() && tokens[s..s + k] == *aspect)
        .collect();
    let (mut pos, mut neg) = (0.0, 0.0);
    if windows.is_empty() {
        return (pos, neg);
    }
    for (j, tok) in tokens.iter().enumerate() {
        let is_pos = positive.contains(tok);
        let is_neg = negative.contains(tok);
        if !is_pos && !is_neg {
            continue;
        }
        if windows.iter().any(|&s| j >= s && j < s + k) {
            continue;
        }
        let mut best = usize::MAX;
        for &s in &windows {
            for t in s..s + k {
                let d = j.abs_diff(t);
                best = best.min(d);
            }
        }
        let w = 1.0 / best.max(1) as f64;
        if is_pos {
            pos += w;
        } else {
            neg += w;
        }
    }
    (pos, neg)
}
