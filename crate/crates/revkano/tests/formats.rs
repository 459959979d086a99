use std::fs;
use std::path::{Path, PathBuf};

use revkano::io::{
    ingest_reviews, read_assignments, read_categories, read_gold, read_lexicon_dir, read_overrides,
    read_tag_lexicon, read_votes,
};
use revkano::Error;
use revkano_core::kano::KanoBucket;
use revkano_core::mining::AspectCategory;
use revkano_core::sentiment::Polarity;
use revkano_core::tagger::PosTag;
use revkano_core::text::TokenizeOptions;

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn empty_file_is_an_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "r.jsonl", "");
    let got = ingest_reviews(&p, TokenizeOptions::default()).unwrap();
    assert!(got.corpus.entities.is_empty());
    assert!(got.rejects.is_empty());
}

#[test]
fn counts_per_entity_and_rejects_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "r.jsonl",
        concat!(
            "{\"entity\":\"A\",\"review_id\":\"1\",\"text\":\"Great app.\"}\n",
            "{\"entity\":\"A\",\"review_id\":\"2\",\"text\":\"Love it!\",\"rating\":5}\n",
            "\n",
            "{\"entity\":\"A\",\"review_id\":\"3\",\"rating\":4}\n",
            "{\"entity\":\"B\",\"review_id\":\"1\",\"text\":\"ok\",\"timestamp\":\"2017-03-01T10:00:00Z\"}\n",
            "{\"entity\":\"A\",\"review_id\":\"1\",\"text\":\"again\"}\n",
            "{\"entity\":\"B\",\"review_id\":\"9\",\"text\":\"bad\",\"rating\":7}\n",
            "not json\n",
            "{\"entity\":\"B\",\"review_id\":\"8\",\"text\":\"   \"}\n",
        ),
    );
    let got = ingest_reviews(&p, TokenizeOptions::default()).unwrap();
    let counts = got.corpus.review_counts();
    assert_eq!(counts["A"], 2);
    assert_eq!(counts["B"], 1);
    let lines: Vec<usize> = got.rejects.iter().map(|r| r.line).collect();
    assert_eq!(lines, [4, 6, 7, 8, 9]);
    assert!(got.rejects[0].reason.contains("missing `text`"));
    assert!(got.rejects[1].reason.contains("duplicate"));
    assert!(got.rejects[2].reason.contains("rating 7"));
    assert!(got.rejects[3].reason.contains("invalid JSON"));
    assert!(got.rejects[4].reason.contains("empty"));
}

#[test]
fn ingestion_is_deterministic() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/reviews.jsonl");
    let a = ingest_reviews(&fixture, TokenizeOptions::default()).unwrap();
    let b = ingest_reviews(&fixture, TokenizeOptions::default()).unwrap();
    assert_eq!(
        serde_json::to_vec(&a.corpus).unwrap(),
        serde_json::to_vec(&b.corpus).unwrap()
    );
    assert_eq!(a.corpus.review_counts().values().sum::<usize>(), 500);
}

#[test]
fn lexicon_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "positive-words.txt", ";\n; comment\n;\ngood\nGreat\nfunny\n\n");
    fs::write(dir.path().join("negative-words.txt"), b"bad\nfunny\n\xe9chec\n").unwrap();
    let (lex, conflicts) = read_lexicon_dir(dir.path()).unwrap();
    assert_eq!(conflicts, ["funny"]);
    assert_eq!(lex.sizes(), (2, 2));
    assert_eq!(lex.polarity("great"), Some(Polarity::Positive));
    assert_eq!(lex.polarity("funny"), None);

    let missing = read_lexicon_dir(&dir.path().join("nope")).unwrap_err();
    assert!(matches!(missing, Error::Io { .. }));
}

#[test]
fn tag_lexicon_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "tags.tsv", "# overrides\nsnap\tNOUN\nfab\tadj\n");
    assert_eq!(
        read_tag_lexicon(&p).unwrap(),
        [("snap".to_string(), PosTag::Noun), ("fab".to_string(), PosTag::Adj)]
    );
    let bad = write(dir.path(), "bad.tsv", "snap NOUN\n");
    assert!(matches!(read_tag_lexicon(&bad), Err(Error::Parse { line: 1, .. })));
}

fn categories(n: usize) -> Vec<AspectCategory> {
    (0..n)
        .map(|i| AspectCategory {
            category_id: format!("c{i}"),
            label: format!("c{i}"),
            members: vec![vec![format!("w{i}")]],
        })
        .collect()
}

#[test]
fn full_survey_of_31_subjects() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("subject_id,category_id,bucket\n");
    for s in 0..31 {
        for c in 0..24 {
            body.push_str(&format!("s{s},c{c},{}\n", KanoBucket::ALL[(s * 7 + c) % 5].as_str()));
        }
    }
    let p = write(dir.path(), "votes.csv", &body);
    let got = read_votes(&p, &categories(24)).unwrap();
    assert_eq!(got.book.len(), 744);
    assert!(got.rejects.is_empty());
    assert!(got.book.assignments().values().all(|a| a.total_votes == 31));
}

#[test]
fn vote_lines_are_rejected_individually() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "votes.csv",
        "subject_id,category_id,bucket\ns1,c0,Delighter\ns1,c0,reverse\ns2,c0,awesome\ns2,zz,reverse\ns2,c1,MUST_HAVE\n",
    );
    let got = read_votes(&p, &categories(2)).unwrap();
    assert_eq!(got.book.len(), 2);
    assert_eq!(got.book.votes()[0].bucket, KanoBucket::Delighter);
    let lines: Vec<usize> = got.rejects.iter().map(|r| r.line).collect();
    assert_eq!(lines, [3, 4, 5]);
}

#[test]
fn assignments_and_categories() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "a.json",
        r#"[{"category_id":"stickers","bucket":"Delighter"},{"category_id":"chat","bucket":"must_have"}]"#,
    );
    let a = read_assignments(&p).unwrap();
    assert_eq!(a["stickers"], KanoBucket::Delighter);
    assert_eq!(a["chat"], KanoBucket::MustHave);

    let c = write(
        dir.path(),
        "c.json",
        r#"[{"category_id":"stickers","label":"sticker, emoji","members":[["Sticker"],["emoji"]]}]"#,
    );
    let cats = read_categories(&c).unwrap();
    assert_eq!(cats[0].members, [vec!["sticker".to_string()], vec!["emoji".to_string()]]);
}

#[test]
fn gold_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "gold.csv",
        "name,aliases,entities\nSticker,emoji|smiley,LINE|HIKE\nPhoto Editing,,HIKE\n",
    );
    let gold = read_gold(&g).unwrap();
    assert_eq!(gold[0].aliases, ["emoji", "smiley"]);
    assert!(gold[0].offered_by.contains("HIKE"));
    assert!(gold[1].aliases.is_empty());

    let dup = write(dir.path(), "dup.csv", "name,aliases,entities\nA,,\nA,,\n");
    assert!(matches!(read_gold(&dup), Err(Error::Parse { line: 3, .. })));

    let o = write(dir.path(), "o.csv", "gold_name,extracted_term\nSticker,Emoji\n");
    assert_eq!(read_overrides(&o).unwrap()[0].extracted_term, "emoji");
}
