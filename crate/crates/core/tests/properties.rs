use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use revkano_core::eval::{match_features, precision, recall, GoldFeature};
use revkano_core::kano::{majority, tally, KanoBucket, SurveyVote};
use revkano_core::mining::{
    extract_aspects, mine_frequent, prune_singletons, rule_itemsets, rule_words, AspectTerm,
    MiningParams, SentenceIndex, Transaction,
};
use revkano_core::sentiment::{
    merge_term_tallies, score_corpus, sentiment_matches, tally_sentences, OpinionLexicon,
};
use revkano_core::summary::{bar, SentimentBar};
use revkano_core::tagger::{noun_phrases, ChunkOptions, LexiconTagger, Tagger};
use revkano_core::text::{segment, tokenize, Corpus, Review};

const VOCAB: [&str; 16] = [
    "the", "video", "call", "quality", "is", "great", "bad", "sticker", "app", "crash", "love",
    "group", "chat", "slow", "good", "and",
];

fn sentence_text() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(&VOCAB[..]), 1..14).prop_map(|w| w.join(" "))
}

fn reviews() -> impl Strategy<Value = Vec<(usize, String)>> {
    prop::collection::vec((0usize..3, sentence_text()), 1..60)
}

fn corpus_of(rows: &[(usize, String)]) -> Corpus {
    let mut c = Corpus::default();
    for (i, (e, text)) in rows.iter().enumerate() {
        c.insert(Review {
            entity_id: format!("E{e}"),
            review_id: format!("r{i}"),
            text: text.clone(),
            rating: None,
            timestamp: None,
        })
        .unwrap();
    }
    c
}

fn lexicon() -> OpinionLexicon {
    OpinionLexicon::from_lines(["great", "love", "good"], ["bad", "crash", "slow"]).0
}

fn terms() -> Vec<AspectTerm> {
    [&["video", "call"][..], &["sticker"], &["app"], &["group", "chat"], &["quality"]]
        .iter()
        .map(|w| AspectTerm {
            words: w.iter().map(|s| s.to_string()).collect(),
            occurrence_count: 1,
        })
        .collect()
}

fn transactions(rows: &[BTreeSet<String>]) -> Vec<Transaction> {
    rows.iter().filter_map(|r| Transaction::new(r.iter().cloned())).collect()
}

fn item_rows() -> impl Strategy<Value = Vec<BTreeSet<String>>> {
    prop::collection::vec(
        prop::collection::btree_set(prop::sample::select(&VOCAB[..8]).prop_map(String::from), 1..5),
        0..50,
    )
}

proptest! {
    #[test]
    fn frequent_sets_are_downward_closed(rows in item_rows(), s in 0.02f64..0.6) {
        let freq = mine_frequent(&transactions(&rows), s).unwrap();
        let sets: BTreeSet<Vec<String>> = freq.iter().map(|f| f.items.clone()).collect();
        for f in &freq {
            prop_assert!(f.support >= s);
            for skip in 0..f.items.len() {
                if f.items.len() == 1 {
                    break;
                }
                let mut sub = f.items.clone();
                sub.remove(skip);
                prop_assert!(sets.contains(&sub), "{:?} missing subset {:?}", f.items, sub);
            }
        }
    }

    #[test]
    fn raising_support_never_adds_itemsets(rows in item_rows(), a in 0.02f64..0.5, b in 0.02f64..0.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let tx = transactions(&rows);
        let low: BTreeSet<Vec<String>> = mine_frequent(&tx, lo).unwrap().into_iter().map(|f| f.items).collect();
        let high: BTreeSet<Vec<String>> = mine_frequent(&tx, hi).unwrap().into_iter().map(|f| f.items).collect();
        prop_assert!(high.is_subset(&low));
    }

    #[test]
    fn pruned_vocabulary_comes_from_rules(rows in reviews(), t1 in 0usize..6, t2 in 0usize..6) {
        let corpus = corpus_of(&rows);
        let tagger = LexiconTagger::embedded();
        let phrases: Vec<_> = corpus
            .sentences()
            .flat_map(|s| noun_phrases(&tagger, s, ChunkOptions::default()))
            .collect();
        let params = MiningParams { min_support: 0.05, min_confidence: 0.3, ..MiningParams::default() };
        let out = extract_aspects(&phrases, corpus.sentences(), &params).unwrap();
        let words = rule_words(&out.rules);
        let itemsets = rule_itemsets(&out.rules);
        for term in &out.terms {
            if term.words.len() == 1 {
                prop_assert!(words.contains(&term.words[0]));
            } else {
                let content: BTreeSet<String> =
                    term.words.iter().filter(|w| w.as_str() != "to").cloned().collect();
                let as_vec: Vec<String> = content.into_iter().collect();
                prop_assert!(itemsets.contains(&as_vec), "{:?} not a rule itemset", term.words);
            }
        }

        let index = SentenceIndex::new(corpus.sentences());
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let keep = |t| -> BTreeSet<String> {
            prune_singletons(&out.rules, &index, t).into_iter().map(|a| a.key()).collect()
        };
        prop_assert!(keep(hi).is_subset(&keep(lo)));
    }

    #[test]
    fn scores_are_additive_over_partitions(rows in reviews(), cut in 0usize..200) {
        let corpus = corpus_of(&rows);
        let sentences: Vec<_> = corpus.sentences().collect();
        let cut = cut % (sentences.len() + 1);
        let lex = lexicon();
        let whole = tally_sentences(sentences.iter().copied(), &terms(), &lex, 2);
        let mut parts = tally_sentences(sentences[..cut].iter().copied(), &terms(), &lex, 2);
        merge_term_tallies(&mut parts, &tally_sentences(sentences[cut..].iter().copied(), &terms(), &lex, 2));
        prop_assert_eq!(&whole, &parts);
        for (k, t) in &whole {
            let a = t.score();
            let b = parts[k].score();
            prop_assert_eq!(a.positive.to_bits(), b.positive.to_bits());
            prop_assert_eq!(a.negative.to_bits(), b.negative.to_bits());
        }
    }

    #[test]
    fn contributions_are_bounded_by_match_counts(text in sentence_text()) {
        let toks = tokenize(&text);
        let norms: Vec<&str> = toks.iter().map(|t| t.norm.as_str()).collect();
        let lex = lexicon();
        let matches = sentiment_matches(&norms, &lex);
        let pos = matches.iter().filter(|m| m.polarity.value() > 0).count() as f64;
        let neg = matches.len() as f64 - pos;
        for term in terms() {
            let s = revkano_core::sentiment::score_sentence(&norms, &term.words, &lex, 2);
            prop_assert!(s.positive >= 0.0 && s.positive <= pos);
            prop_assert!(s.negative >= 0.0 && s.negative <= neg);
        }
    }

    #[test]
    fn duplicating_an_entity_keeps_normalized_scores(rows in reviews(), which in 0usize..3) {
        let once = corpus_of(&rows);
        let mut doubled_rows = rows.clone();
        doubled_rows.extend(rows.iter().filter(|(e, _)| *e == which).cloned());
        let twice = corpus_of(&doubled_rows);
        let lex = lexicon();
        let a = score_corpus(&once, &terms(), &lex, 2);
        let b = score_corpus(&twice, &terms(), &lex, 2);
        let entity = format!("E{which}");
        for term in terms() {
            let cat = revkano_core::mining::AspectCategory {
                category_id: term.key(),
                label: term.key(),
                members: vec![term.words.clone()],
            };
            let (x, y) = (a.normalized(&entity, &cat), b.normalized(&entity, &cat));
            match (x, y) {
                (Some(x), Some(y)) => {
                    prop_assert_eq!(x.positive.to_bits(), y.positive.to_bits());
                    prop_assert_eq!(x.negative.to_bits(), y.negative.to_bits());
                }
                (None, None) => {}
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}

fn bucket() -> impl Strategy<Value = KanoBucket> {
    prop::sample::select(&KanoBucket::ALL[..])
}

proptest! {
    #[test]
    fn majority_ignores_vote_order(buckets in prop::collection::vec(bucket(), 1..40), seed in any::<u64>()) {
        let votes: Vec<SurveyVote> = buckets
            .iter()
            .enumerate()
            .map(|(i, &b)| SurveyVote { subject_id: format!("s{i}"), category_id: "c".into(), bucket: b })
            .collect();
        let mut shuffled = votes.clone();
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let a = majority("c", &votes).unwrap();
        prop_assert_eq!(&a, &majority("c", &shuffled).unwrap());
        prop_assert_eq!(a.tally.iter().sum::<u32>(), votes.len() as u32);
        prop_assert_eq!(a.total_votes, votes.len() as u32);
        prop_assert_eq!(a.tally[a.bucket.index()], *a.tally.iter().max().unwrap());

        let mut more = votes.clone();
        more.push(SurveyVote { subject_id: "extra".into(), category_id: "c".into(), bucket: a.bucket });
        let b = majority("c", &more).unwrap();
        prop_assert_eq!(b.bucket, a.bucket);
        prop_assert!(!b.tied || a.tied);
    }

    #[test]
    fn tally_counts_every_bucket(buckets in prop::collection::vec(bucket(), 0..60)) {
        let t = tally(&buckets);
        for b in KanoBucket::ALL {
            prop_assert_eq!(t[b.index()] as usize, buckets.iter().filter(|&&x| x == b).count());
        }
    }

    #[test]
    fn bar_is_a_fraction(p in 0.0f64..1e6, n in 0.0f64..1e6) {
        match bar(p, n).unwrap() {
            SentimentBar::Empty => prop_assert!(p == 0.0 && n == 0.0),
            SentimentBar::Fraction(f) => prop_assert!((0.0..=1.0).contains(&f)),
        }
        if p > 0.0 {
            prop_assert_eq!(bar(p, 0.0).unwrap(), SentimentBar::Fraction(1.0));
            prop_assert_eq!(bar(0.0, p).unwrap(), SentimentBar::Fraction(0.0));
        }
    }

    #[test]
    fn segments_keep_every_visible_character(text in "[a-zA-Z .!?\"'\n]{0,80}") {
        let visible = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        let joined: String = segment(&text).iter().map(|s| visible(s)).collect();
        prop_assert_eq!(joined, visible(&text));
    }

    #[test]
    fn token_positions_are_contiguous(text in "[a-zA-Z&,.!? ]{0,80}") {
        let toks = tokenize(&text);
        for (i, t) in toks.iter().enumerate() {
            prop_assert_eq!(t.pos, i);
            prop_assert!(!t.norm.is_empty());
            prop_assert_eq!(t.norm.to_lowercase(), t.norm.clone());
        }
    }

    #[test]
    fn chunks_are_ordered_disjoint_and_nominal(text in sentence_text()) {
        let mut c = Corpus::default();
        c.insert(Review { entity_id: "A".into(), review_id: "1".into(), text, rating: None, timestamp: None }).unwrap();
        let tagger = LexiconTagger::embedded();
        for s in c.sentences() {
            let tags = tagger.tag(&s.tokens);
            prop_assert_eq!(tags.len(), s.tokens.len());
            prop_assert_eq!(&tags, &tagger.tag(&s.tokens));
            let nps = noun_phrases(&tagger, s, ChunkOptions::default());
            let mut last_end = 0;
            for np in &nps {
                prop_assert!(np.span.0 >= last_end && np.span.0 < np.span.1 && np.span.1 <= s.tokens.len());
                last_end = np.span.1;
                prop_assert!(!np.terms.is_empty());
                prop_assert!(np.tags.iter().any(|t| t.is_noun()));
            }
        }
    }

    #[test]
    fn unmatched_extra_term_never_helps(extra in "[q-z]{3,6}") {
        let gold = vec![
            GoldFeature { name: "Sticker".into(), aliases: vec!["emoji".into()], offered_by: ["A".to_string()].into() },
            GoldFeature { name: "Video Call".into(), aliases: vec![], offered_by: ["A".to_string(), "B".to_string()].into() },
        ];
        let base = vec!["sticker".to_string(), "camera".to_string()];
        let mut more = base.clone();
        more.push(extra);
        let r1 = match_features(&gold, &base, &[]).unwrap();
        let r2 = match_features(&gold, &more, &[]).unwrap();
        let p1 = precision(r1.true_positives(), r1.false_positives()).unwrap();
        let p2 = precision(r2.true_positives(), r2.false_positives()).unwrap();
        prop_assert!(p2 <= p1);
        for e in [None, Some("A"), Some("B")] {
            prop_assert_eq!(recall(&r1, &gold, e), recall(&r2, &gold, e));
        }
        prop_assert_eq!(r2.true_positives() + r2.unmatched_extracted.len(), more.len());
    }
}

#[test]
fn category_score_is_sum_of_members() {
    let corpus = corpus_of(&[
        (0, "great sticker but bad app".into()),
        (1, "love the app. sticker crash".into()),
    ]);
    let lex = lexicon();
    let s = score_corpus(&corpus, &terms(), &lex, 2);
    let cat = revkano_core::mining::AspectCategory {
        category_id: "c".into(),
        label: "c".into(),
        members: vec![vec!["sticker".into()], vec!["app".into()]],
    };
    let totals: BTreeMap<_, _> = s.category_totals(std::slice::from_ref(&cat)).into_iter().collect();
    let t = s.term_totals();
    let sum = t["sticker"].score() + t["app"].score();
    let got = totals["c"].score();
    assert!((got.positive - sum.positive).abs() < 1e-12);
    assert!((got.negative - sum.negative).abs() < 1e-12);
}
