//! Ordered, gap-bounded phrase matching over normalized token streams.

use alloc::vec::Vec;

/// One match of a phrase: the token position of each phrase word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub positions: Vec<usize>,
}

impl Occurrence {
    pub fn start(&self) -> usize {
        self.positions[0]
    }

    pub fn end(&self) -> usize {
        *self.positions.last().expect("occurrence is non-empty")
    }

    /// Whether `pos` falls inside the inclusive `[start, end]` span.
    pub fn covers(&self, pos: usize) -> bool {
        pos >= self.start() && pos <= self.end()
    }

    /// Smallest position difference between `pos` and a matched token.
    pub fn distance(&self, pos: usize) -> usize {
        self.positions
            .iter()
            .map(|&p| p.abs_diff(pos))
            .min()
            .expect("occurrence is non-empty")
    }
}

fn extend<S: AsRef<str>>(
    tokens: &[&str],
    phrase: &[S],
    max_gap: usize,
    positions: &mut Vec<usize>,
) -> bool {
    let k = positions.len();
    if k == phrase.len() {
        return true;
    }
    let prev = positions[k - 1];
    let last = (prev + 1 + max_gap).min(tokens.len().saturating_sub(1));
    for next in prev + 1..=last {
        if next >= tokens.len() {
            break;
        }
        if tokens[next] == phrase[k].as_ref() {
            positions.push(next);
            if extend(tokens, phrase, max_gap, positions) {
                return true;
            }
            positions.pop();
        }
    }
    false
}

/// Finds every occurrence of `phrase` in `tokens`: the words in order, with
/// at most `max_gap` unrelated tokens between consecutive words. At most one
/// occurrence is reported per starting position, preferring the earliest
/// continuation.
pub fn find_occurrences<S: AsRef<str>>(
    tokens: &[&str],
    phrase: &[S],
    max_gap: usize,
) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let Some(first) = phrase.first() else {
        return out;
    };
    for (start, tok) in tokens.iter().enumerate() {
        if *tok != first.as_ref() {
            continue;
        }
        let mut positions = Vec::with_capacity(phrase.len());
        positions.push(start);
        if extend(tokens, phrase, max_gap, &mut positions) {
            out.push(Occurrence { positions });
        }
    }
    out
}

pub fn contains_phrase<S: AsRef<str>>(tokens: &[&str], phrase: &[S], max_gap: usize) -> bool {
    !find_occurrences(tokens, phrase, max_gap).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguous_and_gapped() {
        let toks = ["the", "video", "group", "call", "was", "video", "call"];
        let occ = find_occurrences(&toks, &["video", "call"], 0);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].positions, [5, 6]);
        let occ = find_occurrences(&toks, &["video", "call"], 1);
        assert_eq!(occ.len(), 2);
        assert_eq!(occ[0].positions, [1, 3]);
    }

    #[test]
    fn backtracks_past_a_dead_end() {
        // Taking the first "b" leaves "c" out of reach.
        let toks = ["a", "b", "b", "x", "c"];
        assert!(!contains_phrase(&toks, &["a", "b", "c"], 0));
        let occ = find_occurrences(&toks, &["a", "b", "c"], 1);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].positions, [0, 2, 4]);
    }

    #[test]
    fn distance_and_cover() {
        let o = Occurrence {
            positions: alloc::vec![3, 5],
        };
        assert!(o.covers(4));
        assert!(!o.covers(6));
        assert_eq!(o.distance(0), 3);
        assert_eq!(o.distance(8), 3);
    }

    #[test]
    fn empty_phrase_matches_nothing() {
        let empty: [&str; 0] = [];
        assert!(find_occurrences(&["a"], &empty, 2).is_empty());
    }
}
