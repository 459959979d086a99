//! Readers and writers for every on-disk format the pipeline touches.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use revkano_core::eval::{GoldFeature, MatchOverride};
use revkano_core::kano::{KanoBucket, SurveyVote, VoteBook, VoteRejection};
use revkano_core::mining::AspectCategory;
use revkano_core::sentiment::OpinionLexicon;
use revkano_core::tagger::PosTag;
use revkano_core::text::{validate_rating, Corpus, RejectReason, Review, TokenizeOptions};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const POSITIVE_WORDS: &str = "positive-words.txt";
pub const NEGATIVE_WORDS: &str = "negative-words.txt";

/// A refused input line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

pub fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(match String::from_utf8(bytes) {
        Ok(s) => s,
        // Published word lists ship as Latin-1.
        Err(e) => String::from_utf8_lossy(e.as_bytes()).into_owned(),
    })
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable value");
    out.push(b'\n');
    write_bytes(path, &out)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, e.line(), e.to_string()))
}

pub fn write_jsonl<'a, T, I>(path: &Path, rows: I) -> Result<()>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let mut out = Vec::new();
    for row in rows {
        serde_json::to_writer(&mut out, row).expect("serializable row");
        out.push(b'\n');
    }
    write_bytes(path, &out)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line).map_err(|e| Error::parse(path, i + 1, e.to_string()))?);
    }
    Ok(rows)
}

pub fn write_rejects(path: &Path, rejects: &[Reject]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(["line", "reason"]).expect("in-memory write");
    for r in rejects {
        w.write_record([r.line.to_string(), r.reason.clone()])
            .expect("in-memory write");
    }
    write_bytes(path, &w.into_inner().expect("in-memory flush"))
}

#[derive(Debug, Default)]
pub struct Ingested {
    pub corpus: Corpus,
    pub rejects: Vec<Reject>,
}

fn parse_review(line: &str) -> std::result::Result<Review, String> {
    let value: serde_json::Value = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value.as_object().ok_or("not a JSON object")?;
    let string_field = |key: &str| -> std::result::Result<String, String> {
        match obj.get(key) {
            Some(serde_json::Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(format!("`{key}` is not a string")),
            None => Err(format!("missing `{key}`")),
        }
    };
    let rating = match obj.get("rating") {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => {
            let r = v.as_i64().ok_or("`rating` is not an integer")?;
            Some(validate_rating(r).map_err(|e| e.to_string())?)
        }
    };
    let timestamp = match obj.get("timestamp") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(s.clone()),
        Some(_) => return Err("`timestamp` is not a string".into()),
    };
    Ok(Review {
        entity_id: string_field("entity")?,
        review_id: string_field("review_id")?,
        text: string_field("text")?,
        rating,
        timestamp,
    })
}

/// Reads a reviews-jsonl file. Bad lines go to `rejects` with their 1-based
/// line number; blank lines are ignored.
pub fn ingest_reviews(path: &Path, options: TokenizeOptions) -> Result<Ingested> {
    let text = read_text(path)?;
    let mut out = Ingested {
        corpus: Corpus::new(options),
        rejects: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let result = parse_review(line).and_then(|review| {
            out.corpus.insert(review).map_err(|e: RejectReason| e.to_string())
        });
        if let Err(reason) = result {
            out.rejects.push(Reject { line: i + 1, reason });
        }
    }
    Ok(out)
}

/// Loads `positive-words.txt` and `negative-words.txt` from `dir`. Also
/// returns the words dropped for being in both lists.
pub fn read_lexicon_dir(dir: &Path) -> Result<(OpinionLexicon, Vec<String>)> {
    let pos = read_text(&dir.join(POSITIVE_WORDS))?;
    let neg = read_text(&dir.join(NEGATIVE_WORDS))?;
    Ok(OpinionLexicon::from_lines(pos.lines(), neg.lines()))
}

/// `word<TAB>tag` lines; `#` starts a comment line.
pub fn read_tag_lexicon(path: &Path) -> Result<Vec<(String, PosTag)>> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, i + 1, "expected `word<TAB>tag`"))?;
        let tag = tag
            .trim()
            .parse::<PosTag>()
            .map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        out.push((word.trim().to_string(), tag));
    }
    Ok(out)
}

/// Categories file: a JSON array of categories. Member words are lowercased.
pub fn read_categories(path: &Path) -> Result<Vec<AspectCategory>> {
    let mut cats: Vec<AspectCategory> = read_json(path)?;
    for c in &mut cats {
        for m in &mut c.members {
            for w in m.iter_mut() {
                *w = w.to_lowercase();
            }
        }
    }
    Ok(cats)
}

#[derive(Debug, Default)]
pub struct LoadedVotes {
    pub book: VoteBook,
    pub rejects: Vec<Reject>,
}

/// Reads `votes.csv` (`subject_id,category_id,bucket`). Unknown buckets,
/// unknown categories and repeated (subject, category) pairs are rejected
/// line by line.
pub fn read_votes(path: &Path, categories: &[AspectCategory]) -> Result<LoadedVotes> {
    let text = read_text(path)?;
    let mut out = LoadedVotes {
        book: VoteBook::for_categories(categories.iter().map(|c| c.category_id.clone())),
        rejects: Vec::new(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(path, 1, format!("missing column `{name}`")))
    };
    let (s, c, b) = (col("subject_id")?, col("category_id")?, col("bucket")?);
    for record in reader.records() {
        let record = record.map_err(|e| {
            Error::parse(path, e.position().map_or(0, |p| p.line() as usize), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let reason = match field(b).parse::<KanoBucket>() {
            Err(e) => Some(e.to_string()),
            Ok(bucket) => {
                let vote = SurveyVote {
                    subject_id: field(s),
                    category_id: field(c),
                    bucket,
                };
                if vote.subject_id.is_empty() {
                    Some("empty subject_id".to_string())
                } else {
                    match out.book.add(vote) {
                        Ok(()) => None,
                        Err(VoteRejection::Duplicate) => {
                            Some(format!("duplicate vote for `{}` by `{}`", field(c), field(s)))
                        }
                        Err(VoteRejection::UnknownCategory) => {
                            Some(format!("unknown category `{}`", field(c)))
                        }
                    }
                }
            }
        };
        if let Some(reason) = reason {
            out.rejects.push(Reject { line, reason });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub category_id: String,
    pub bucket: String,
}

/// `assignments.json`: `[{"category_id": .., "bucket": ..}]`. Bucket names
/// parse like vote buckets.
pub fn read_assignments(path: &Path) -> Result<BTreeMap<String, KanoBucket>> {
    let entries: Vec<AssignmentEntry> = read_json(path)?;
    let mut out = BTreeMap::new();
    for (i, e) in entries.into_iter().enumerate() {
        let bucket = e
            .bucket
            .parse::<KanoBucket>()
            .map_err(|err| Error::parse(path, i + 1, err.to_string()))?;
        if out.insert(e.category_id.clone(), bucket).is_some() {
            return Err(Error::parse(path, i + 1, format!("category `{}` assigned twice", e.category_id)));
        }
    }
    Ok(out)
}

fn split_list(s: &str) -> Vec<String> {
    s.split('|')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn csv_rows(path: &Path, columns: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let idx: Vec<usize> = columns
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| Error::parse(path, 1, format!("missing column `{name}`")))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            Error::parse(path, e.position().map_or(0, |p| p.line() as usize), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, idx.iter().map(|&i| record.get(i).unwrap_or("").to_string()).collect()));
    }
    Ok(rows)
}

/// `gold.csv`: `name,aliases,entities` with `|`-separated lists.
pub fn read_gold(path: &Path) -> Result<Vec<GoldFeature>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, row) in csv_rows(path, &["name", "aliases", "entities"])? {
        let name = row[0].clone();
        if name.is_empty() {
            return Err(Error::parse(path, line, "empty gold feature name"));
        }
        if !seen.insert(name.clone()) {
            return Err(Error::parse(path, line, format!("gold feature `{name}` listed twice")));
        }
        out.push(GoldFeature {
            name,
            aliases: split_list(&row[1]),
            offered_by: split_list(&row[2]).into_iter().collect(),
        });
    }
    Ok(out)
}

/// `overrides.csv`: `gold_name,extracted_term`.
pub fn read_overrides(path: &Path) -> Result<Vec<MatchOverride>> {
    Ok(csv_rows(path, &["gold_name", "extracted_term"])?
        .into_iter()
        .map(|(_, row)| MatchOverride {
            gold_name: row[0].clone(),
            extracted_term: row[1].to_lowercase(),
        })
        .collect())
}

/// One term per line, `#` comments allowed.
pub fn read_term_list(path: &Path) -> Result<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect())
}

/// Appends one JSON line and syncs it to disk.
pub fn append_jsonl<T: Serialize>(file: &mut File, path: &Path, row: &T) -> Result<()> {
    let mut line = serde_json::to_vec(row).expect("serializable row");
    line.push(b'\n');
    let mut w = BufWriter::new(&mut *file);
    w.write_all(&line).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))?;
    drop(w);
    file.sync_data().map_err(|e| Error::io(path, e))
}
