//! Level-wise Apriori over string items.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mining::Transaction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemSet {
    /// Sorted, unique.
    pub items: Vec<String>,
    pub support_count: usize,
    pub support: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
}

impl Rule {
    /// `antecedent ∪ consequent`, sorted.
    pub fn itemset(&self) -> Vec<String> {
        let mut all: Vec<String> = self
            .antecedent
            .iter()
            .chain(&self.consequent)
            .cloned()
            .collect();
        all.sort();
        all
    }
}

pub fn validate_support(min_support: f64) -> Result<()> {
    if min_support > 0.0 && min_support <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "min_support",
            reason: alloc::format!("{min_support} is outside (0, 1]"),
        })
    }
}

pub fn validate_confidence(min_confidence: f64) -> Result<()> {
    if (0.0..=1.0).contains(&min_confidence) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "min_confidence",
            reason: alloc::format!("{min_confidence} is outside [0, 1]"),
        })
    }
}

/// Support threshold test shared by every caller: `count / total >= min`.
pub fn meets_support(count: usize, total: usize, min_support: f64) -> bool {
    total > 0 && count as f64 / total as f64 >= min_support
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn for_each_k_subset(items: &[u32], k: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(items: &[u32], k: usize, start: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let need = k - buf.len();
        for i in start..=items.len() - need {
            buf.push(items[i]);
            rec(items, k, i + 1, buf, f);
            buf.pop();
        }
    }
    if k == 0 || k > items.len() {
        return;
    }
    let mut buf = Vec::with_capacity(k);
    rec(items, k, 0, &mut buf, f);
}

/// Joins frequent `(k-1)`-sets sharing their first `k-2` items and drops any
/// candidate with an infrequent `(k-1)`-subset.
fn candidates(prev: &BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    let sets: Vec<&Vec<u32>> = prev.iter().collect();
    let mut out = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        let prefix = &a[..a.len() - 1];
        for b in &sets[i + 1..] {
            if &b[..b.len() - 1] != prefix {
                break;
            }
            let mut cand = (*a).clone();
            cand.push(*b.last().unwrap());
            let closed = (0..cand.len()).all(|skip| {
                let sub: Vec<u32> = cand
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, x)| *x)
                    .collect();
                prev.contains(&sub)
            });
            if closed {
                out.push(cand);
            }
        }
    }
    out
}

/// Every itemset whose support (fraction of transactions containing it) is at
/// least `min_support`. Sorted by size, then lexicographically.
pub fn mine_frequent(transactions: &[Transaction], min_support: f64) -> Result<Vec<ItemSet>> {
    validate_support(min_support)?;
    let total = transactions.len();
    if total == 0 {
        return Ok(Vec::new());
    }

    let vocab: Vec<&str> = transactions
        .iter()
        .flat_map(|t| t.items.iter().map(String::as_str))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let id_of: BTreeMap<&str, u32> = vocab
        .iter()
        .enumerate()
        .map(|(i, w)| (*w, i as u32))
        .collect();
    // Items are already sorted inside each transaction, and ids follow the
    // same order, so the encoded rows stay sorted.
    let rows: Vec<Vec<u32>> = transactions
        .iter()
        .map(|t| t.items.iter().map(|w| id_of[w.as_str()]).collect())
        .collect();

    let mut found: Vec<(Vec<u32>, usize)> = Vec::new();

    let mut singles = alloc::vec![0usize; vocab.len()];
    for row in &rows {
        for &id in row {
            singles[id as usize] += 1;
        }
    }
    let mut level: BTreeSet<Vec<u32>> = BTreeSet::new();
    for (id, &count) in singles.iter().enumerate() {
        if meets_support(count, total, min_support) {
            level.insert(alloc::vec![id as u32]);
            found.push((alloc::vec![id as u32], count));
        }
    }

    let mut k = 2;
    while !level.is_empty() {
        let cands = candidates(&level);
        if cands.is_empty() {
            break;
        }
        let mut counts: BTreeMap<Vec<u32>, usize> = cands.iter().map(|c| (c.clone(), 0)).collect();
        for row in rows.iter().filter(|r| r.len() >= k) {
            if binomial(row.len(), k) <= cands.len() {
                for_each_k_subset(row, k, &mut |sub| {
                    if let Some(c) = counts.get_mut(sub) {
                        *c += 1;
                    }
                });
            } else {
                for (cand, c) in counts.iter_mut() {
                    if is_subset(cand, row) {
                        *c += 1;
                    }
                }
            }
        }
        level = BTreeSet::new();
        for (set, count) in counts {
            if meets_support(count, total, min_support) {
                level.insert(set.clone());
                found.push((set, count));
            }
        }
        k += 1;
    }

    let mut out: Vec<ItemSet> = found
        .into_iter()
        .map(|(ids, count)| ItemSet {
            items: ids.iter().map(|&i| String::from(vocab[i as usize])).collect(),
            support_count: count,
            support: count as f64 / total as f64,
        })
        .collect();
    out.sort_by(|a, b| {
        a.items
            .len()
            .cmp(&b.items.len())
            .then_with(|| a.items.cmp(&b.items))
    });
    Ok(out)
}

/// All rules `A -> C` with `A ∪ C` frequent, both sides non-empty and
/// disjoint, and `confidence = count(A ∪ C) / count(A) >= min_confidence`.
///
/// `itemsets` must be downward closed (as returned by [`mine_frequent`]).
pub fn generate_rules(itemsets: &[ItemSet], min_confidence: f64) -> Result<Vec<Rule>> {
    validate_confidence(min_confidence)?;
    let counts: BTreeMap<&[String], usize> = itemsets
        .iter()
        .map(|s| (s.items.as_slice(), s.support_count))
        .collect();

    let mut rules = Vec::new();
    for set in itemsets.iter().filter(|s| s.items.len() >= 2) {
        let n = set.items.len();
        assert!(n < 64, "itemset too large for rule enumeration");
        for mask in 1u64..(1u64 << n) - 1 {
            let mut antecedent = Vec::new();
            let mut consequent = Vec::new();
            for (i, item) in set.items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    antecedent.push(item.clone());
                } else {
                    consequent.push(item.clone());
                }
            }
            let Some(&ante_count) = counts.get(antecedent.as_slice()) else {
                continue;
            };
            let confidence = set.support_count as f64 / ante_count as f64;
            if confidence >= min_confidence {
                rules.push(Rule {
                    antecedent,
                    consequent,
                    support: set.support,
                    confidence,
                });
            }
        }
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tx(items: &[&str]) -> Transaction {
        Transaction::new(items.iter().map(|s| String::from(*s))).unwrap()
    }

    fn names(sets: &[ItemSet]) -> Vec<(Vec<&str>, usize)> {
        sets.iter()
            .map(|s| (s.items.iter().map(String::as_str).collect(), s.support_count))
            .collect()
    }

    #[test]
    fn frequent_example() {
        let t = [tx(&["a", "b"]), tx(&["a", "b"]), tx(&["a", "c"])];
        let f = mine_frequent(&t, 0.5).unwrap();
        assert_eq!(
            names(&f),
            [(alloc::vec!["a"], 3), (alloc::vec!["b"], 2), (alloc::vec!["a", "b"], 2)]
        );
        assert_eq!(f[0].support, 1.0);
        assert!((f[2].support - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_and_invalid() {
        assert!(mine_frequent(&[], 0.5).unwrap().is_empty());
        assert!(mine_frequent(&[tx(&["a"])], 0.0).is_err());
        assert!(mine_frequent(&[tx(&["a"])], 1.5).is_err());
        assert!(mine_frequent(&[tx(&["a"])], 1.0).is_ok());
        assert!(generate_rules(&[], 1.1).is_err());
    }

    #[test]
    fn rules_example() {
        let t = [tx(&["a", "b"]), tx(&["a", "b"]), tx(&["a", "c"])];
        let f = mine_frequent(&t, 0.5).unwrap();
        let rules = generate_rules(&f, 0.6).unwrap();
        assert_eq!(rules.len(), 2);
        let ab = rules.iter().find(|r| r.antecedent == ["a"]).unwrap();
        assert_eq!(ab.consequent, ["b"]);
        assert!((ab.confidence - 2.0 / 3.0).abs() < 1e-15);
        let ba = rules.iter().find(|r| r.antecedent == ["b"]).unwrap();
        assert_eq!(ba.confidence, 1.0);

        assert_eq!(generate_rules(&f, 1.0).unwrap().len(), 1);
    }

    #[test]
    fn perfect_implication_both_ways() {
        let t = [tx(&["a", "b"]), tx(&["a", "b"]), tx(&["c"])];
        let f = mine_frequent(&t, 0.5).unwrap();
        let rules = generate_rules(&f, 1.0).unwrap();
        assert_eq!(rules.len(), 2);
        assert!(rules.iter().all(|r| r.confidence == 1.0));
    }

    #[test]
    fn no_perfect_implication() {
        let t = [tx(&["a", "b"]), tx(&["a"]), tx(&["b"])];
        let f = mine_frequent(&t, 0.3).unwrap();
        assert!(generate_rules(&f, 1.0).unwrap().is_empty());
    }

    #[test]
    fn long_transactions_use_candidate_scan() {
        let long: Vec<String> = (0..20).map(|i| alloc::format!("w{i:02}")).collect();
        let t = [
            Transaction::new(long.iter().cloned()).unwrap(),
            Transaction::new(long.iter().take(3).cloned()).unwrap(),
        ];
        let f = mine_frequent(&t, 1.0).unwrap();
        // All subsets of the first three items: 2^3 - 1.
        assert_eq!(f.len(), 7);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(20, 10), 184_756);
    }
}
