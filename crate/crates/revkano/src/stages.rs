//! The pipeline stages. Each stage reads the artifacts of earlier stages from
//! the output directory, writes its own, and records both in the manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use revkano_core::eval::{match_features, precision, recall};
use revkano_core::kano::{BucketAssignment, KanoBucket};
use revkano_core::matching::contains_phrase;
use revkano_core::mining::{check_categories, extract_aspects, AspectCategory, AspectTerm, MiningParams};
use revkano_core::sentiment::{merge_term_tallies, CorpusScores, DistanceTally, OpinionLexicon};
use revkano_core::summary::{entity_table, overall_table, EntityTable, OverallTable};
use revkano_core::tagger::{noun_phrases, ChunkOptions, LexiconTagger, NounPhrase};
use revkano_core::text::{Corpus, Review, Sentence, TokenizeOptions};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::manifest::{Manifest, StageRecord};
use crate::render::{self, EvalSummary, Format};

pub const REVIEWS: &str = "reviews.jsonl";
pub const SENTENCES: &str = "sentences.jsonl";
pub const REJECTS: &str = "rejects.csv";
pub const INGEST_INFO: &str = "ingest.json";
pub const NOUN_PHRASES: &str = "noun_phrases.jsonl";
pub const TRANSACTIONS: &str = "transactions.jsonl";
pub const ITEMSETS: &str = "itemsets.jsonl";
pub const RULES: &str = "rules.jsonl";
pub const ASPECT_TERMS: &str = "aspect_terms.jsonl";
pub const CATEGORY_CHECK: &str = "category_check.json";
pub const SURVEY: &str = "survey.json";
pub const ASSIGNMENTS: &str = "assignments.json";
pub const TALLIES: &str = "tallies.jsonl";
pub const VOTE_REJECTS: &str = "vote_rejects.csv";
pub const TERM_SCORES: &str = "term_scores.jsonl";
pub const CATEGORY_SCORES: &str = "category_scores.jsonl";
pub const SUMMARY: &str = "summary.json";
pub const EVAL: &str = "eval.json";

/// Sentences per parallel scoring batch.
const SCORE_BATCH: usize = 256;
const MAX_SNIPPETS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestInfo {
    pub tokenize: TokenizeOptions,
    pub review_counts: BTreeMap<String, usize>,
    pub sentence_count: usize,
    pub rejected_lines: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermScoreRow {
    pub entity: String,
    pub term: String,
    pub positive: f64,
    pub negative: f64,
    pub mentions: u64,
    /// Opinion-word counts per distance; the scores are derived from these.
    pub tally: DistanceTally,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryScoreRow {
    pub category_id: String,
    pub positive: f64,
    pub negative: f64,
    pub mentions: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyCategory {
    pub category_id: String,
    pub label: String,
    pub members: Vec<Vec<String>>,
    #[serde(default)]
    pub sample_snippets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub survey_id: String,
    pub categories: Vec<SurveyCategory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub overall: OverallTable,
    pub entities: EntityTable,
}

/// Output directory plus the shared run settings.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub out: PathBuf,
    pub jobs: Option<usize>,
    /// Accepted and recorded, never used: the pipeline has no randomness.
    pub seed: Option<u64>,
}

impl Workspace {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Workspace {
            out: out.into(),
            jobs: None,
            seed: None,
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn require(&self, name: &str, what: &'static str, producer: &'static str) -> Result<PathBuf> {
        let path = self.path(name);
        if path.is_file() {
            Ok(path)
        } else {
            Err(Error::MissingStageInput { what, path, producer })
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            if n == 0 {
                return Err(Error::Usage("--jobs must be at least 1".into()));
            }
            b = b.num_threads(n);
        }
        b.build().map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))
    }

    fn finish(&self, stage: &str, mut record: StageRecord, artifacts: &[&str]) -> Result<()> {
        for a in artifacts {
            record.artifact(&self.out, a)?;
        }
        if let Some(seed) = self.seed {
            if let serde_json::Value::Object(m) = &mut record.params {
                m.insert("seed".into(), seed.into());
            }
        }
        Manifest::record(&self.out, stage, record)
    }

    /// Rebuilds the corpus from the `ingest` artifacts.
    pub fn load_corpus(&self) -> Result<Corpus> {
        let info: IngestInfo = io::read_json(&self.require(INGEST_INFO, "ingest summary", "ingest")?)?;
        let reviews: Vec<Review> = io::read_jsonl(&self.require(REVIEWS, "ingested reviews", "ingest")?)?;
        let mut corpus = Corpus::new(info.tokenize);
        for r in reviews {
            let id = r.review_id.clone();
            corpus
                .insert(r)
                .map_err(|e| Error::parse(self.path(REVIEWS), 0, format!("review `{id}`: {e}")))?;
        }
        Ok(corpus)
    }

    pub fn load_terms(&self) -> Result<Vec<AspectTerm>> {
        io::read_jsonl(&self.require(ASPECT_TERMS, "aspect terms", "mine")?)
    }

    pub fn load_summary(&self) -> Result<Summary> {
        io::read_json(&self.require(SUMMARY, "report summary", "report")?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestOutcome {
    pub reviews: usize,
    pub entities: usize,
    pub rejects: usize,
}

pub fn ingest(ws: &Workspace, reviews: &Path, options: TokenizeOptions) -> Result<IngestOutcome> {
    let ingested = io::ingest_reviews(reviews, options)?;
    let corpus = &ingested.corpus;
    let all_reviews: Vec<&Review> = corpus.entities.values().flat_map(|e| &e.reviews).collect();
    io::write_jsonl(&ws.path(REVIEWS), all_reviews)?;
    io::write_jsonl(&ws.path(SENTENCES), corpus.sentences())?;
    io::write_rejects(&ws.path(REJECTS), &ingested.rejects)?;
    let info = IngestInfo {
        tokenize: options,
        review_counts: corpus.review_counts(),
        sentence_count: corpus.sentence_count(),
        rejected_lines: ingested.rejects.len(),
    };
    io::write_json(&ws.path(INGEST_INFO), &info)?;

    let mut record = StageRecord::new(options);
    record.input("reviews", reviews)?;
    ws.finish("ingest", record, &[REVIEWS, SENTENCES, REJECTS, INGEST_INFO])?;
    Ok(IngestOutcome {
        reviews: info.review_counts.values().sum(),
        entities: info.review_counts.len(),
        rejects: ingested.rejects.len(),
    })
}

#[derive(Debug, Clone, Default)]
pub struct MineInputs<'a> {
    pub tag_lexicon: Option<&'a Path>,
    pub categories: Option<&'a Path>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MineOutcome {
    pub noun_phrases: usize,
    pub transactions: usize,
    pub itemsets: usize,
    pub rules: usize,
    pub terms: usize,
    pub warnings: Vec<String>,
}

/// Sentences of `corpus` holding `words` in order, first `limit` in corpus order.
pub fn snippets(corpus: &Corpus, members: &[Vec<String>], max_gap: usize, limit: usize) -> Vec<String> {
    corpus
        .sentences()
        .filter(|s| {
            let toks = s.norm_vec();
            members.iter().any(|m| contains_phrase(&toks, m, max_gap))
        })
        .take(limit)
        .map(Sentence::surface_text)
        .collect()
}

pub fn mine(ws: &Workspace, params: &MiningParams, inputs: &MineInputs<'_>) -> Result<MineOutcome> {
    params.validate()?;
    let corpus = ws.load_corpus()?;
    let mut tagger = LexiconTagger::embedded();
    if let Some(path) = inputs.tag_lexicon {
        tagger = tagger.with_overrides(io::read_tag_lexicon(path)?);
    }
    let sentences: Vec<&Sentence> = corpus.sentences().collect();
    let phrases: Vec<NounPhrase> = ws.pool()?.install(|| {
        sentences
            .par_iter()
            .map(|s| noun_phrases(&tagger, s, ChunkOptions::default()))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    let out = extract_aspects(&phrases, sentences.iter().copied(), params)?;

    io::write_jsonl(&ws.path(NOUN_PHRASES), &phrases)?;
    io::write_jsonl(&ws.path(TRANSACTIONS), &out.transactions)?;
    io::write_jsonl(&ws.path(ITEMSETS), &out.itemsets)?;
    io::write_jsonl(&ws.path(RULES), &out.rules)?;
    io::write_jsonl(&ws.path(ASPECT_TERMS), &out.terms)?;
    let mut artifacts = vec![NOUN_PHRASES, TRANSACTIONS, ITEMSETS, RULES, ASPECT_TERMS];

    let mut record = StageRecord::new(params);
    if let Some(path) = inputs.tag_lexicon {
        record.input("tag_lexicon", path)?;
    }
    let mut warnings = Vec::new();
    if let Some(path) = inputs.categories {
        let categories = io::read_categories(path)?;
        let check = check_categories(&categories, &out.terms)?;
        for m in &check.unknown_members {
            warnings.push(format!("category member `{m}` is not a mined aspect term"));
        }
        if !check.uncategorized.is_empty() {
            warnings.push(format!(
                "{} mined terms are in no category: {}",
                check.uncategorized.len(),
                check.uncategorized.join(", ")
            ));
        }
        io::write_json(&ws.path(CATEGORY_CHECK), &check)?;
        let survey = SurveyConfig {
            survey_id: "survey".into(),
            categories: categories
                .iter()
                .map(|c| SurveyCategory {
                    category_id: c.category_id.clone(),
                    label: c.label.clone(),
                    members: c.members.clone(),
                    sample_snippets: snippets(&corpus, &c.members, params.max_gap, MAX_SNIPPETS),
                })
                .collect(),
        };
        io::write_json(&ws.path(SURVEY), &survey)?;
        record.input("categories", path)?;
        artifacts.extend([CATEGORY_CHECK, SURVEY]);
    }
    ws.finish("mine", record, &artifacts)?;
    Ok(MineOutcome {
        noun_phrases: phrases.len(),
        transactions: out.transactions.len(),
        itemsets: out.itemsets.len(),
        rules: out.rules.len(),
        terms: out.terms.len(),
        warnings,
    })
}

/// Where the Kano buckets come from.
#[derive(Debug, Clone, Copy)]
pub enum BucketSource<'a> {
    Votes(&'a Path),
    Assignments(&'a Path),
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketizeOutcome {
    pub assigned: usize,
    pub unassigned: Vec<String>,
    pub tied: Vec<String>,
    pub rejected_votes: usize,
}

pub fn bucketize(ws: &Workspace, categories_path: &Path, source: BucketSource<'_>) -> Result<BucketizeOutcome> {
    let categories = io::read_categories(categories_path)?;
    check_categories(&categories, &[])?;
    let mut record = StageRecord::new(serde_json::json!({}));
    record.input("categories", categories_path)?;
    let mut artifacts = vec![ASSIGNMENTS];
    let mut outcome = BucketizeOutcome {
        assigned: 0,
        unassigned: Vec::new(),
        tied: Vec::new(),
        rejected_votes: 0,
    };

    let assignments: BTreeMap<String, KanoBucket> = match source {
        BucketSource::Votes(path) => {
            let loaded = io::read_votes(path, &categories)?;
            io::write_rejects(&ws.path(VOTE_REJECTS), &loaded.rejects)?;
            let by_id = loaded.book.assignments();
            let tallies: Vec<&BucketAssignment> = categories
                .iter()
                .filter_map(|c| by_id.get(&c.category_id))
                .collect();
            io::write_jsonl(&ws.path(TALLIES), tallies.iter().copied())?;
            outcome.rejected_votes = loaded.rejects.len();
            outcome.tied = tallies.iter().filter(|a| a.tied).map(|a| a.category_id.clone()).collect();
            record.input("votes", path)?;
            artifacts.extend([TALLIES, VOTE_REJECTS]);
            by_id.into_iter().map(|(k, a)| (k, a.bucket)).collect()
        }
        BucketSource::Assignments(path) => {
            record.input("assignments", path)?;
            let known: BTreeSet<&str> = categories.iter().map(|c| c.category_id.as_str()).collect();
            let loaded = io::read_assignments(path)?;
            if let Some(bad) = loaded.keys().find(|k| !known.contains(k.as_str())) {
                return Err(Error::parse(path, 0, format!("unknown category `{bad}`")));
            }
            loaded
        }
    };

    let entries: Vec<io::AssignmentEntry> = categories
        .iter()
        .filter_map(|c| {
            assignments.get(&c.category_id).map(|b| io::AssignmentEntry {
                category_id: c.category_id.clone(),
                bucket: b.as_str().to_string(),
            })
        })
        .collect();
    io::write_json(&ws.path(ASSIGNMENTS), &entries)?;
    outcome.assigned = entries.len();
    outcome.unassigned = categories
        .iter()
        .filter(|c| !assignments.contains_key(&c.category_id))
        .map(|c| c.category_id.clone())
        .collect();
    ws.finish("bucketize", record, &artifacts)?;
    Ok(outcome)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreOutcome {
    pub scored_terms: usize,
    pub lexicon_sizes: (usize, usize),
    pub lexicon_conflicts: Vec<String>,
}

/// Tallies every term over the corpus in parallel batches. Tallies are
/// integer histograms, so the merge order cannot change the result.
pub fn score_corpus_parallel(
    corpus: &Corpus,
    terms: &[AspectTerm],
    lexicon: &OpinionLexicon,
    max_gap: usize,
) -> CorpusScores {
    let by_entity = corpus
        .entities
        .par_iter()
        .map(|(id, e)| {
            let tallies = e
                .sentences
                .par_chunks(SCORE_BATCH)
                .map(|batch| revkano_core::sentiment::tally_sentences(batch, terms, lexicon, max_gap))
                .reduce(BTreeMap::new, |mut a, b| {
                    merge_term_tallies(&mut a, &b);
                    a
                });
            (id.clone(), tallies)
        })
        .collect();
    CorpusScores {
        by_entity,
        review_counts: corpus.review_counts(),
    }
}

pub fn load_scores(ws: &Workspace) -> Result<CorpusScores> {
    let info: IngestInfo = io::read_json(&ws.require(INGEST_INFO, "ingest summary", "ingest")?)?;
    let rows: Vec<TermScoreRow> = io::read_jsonl(&ws.require(TERM_SCORES, "term scores", "score")?)?;
    let mut scores = CorpusScores {
        by_entity: BTreeMap::new(),
        review_counts: info.review_counts,
    };
    for row in rows {
        scores
            .by_entity
            .entry(row.entity)
            .or_default()
            .insert(row.term, row.tally);
    }
    Ok(scores)
}

pub fn score(
    ws: &Workspace,
    lexicon_dir: &Path,
    categories: Option<&Path>,
    max_gap: usize,
) -> Result<ScoreOutcome> {
    let corpus = ws.load_corpus()?;
    let terms = ws.load_terms()?;
    let (lexicon, conflicts) = io::read_lexicon_dir(lexicon_dir)?;
    let scores = ws
        .pool()?
        .install(|| score_corpus_parallel(&corpus, &terms, &lexicon, max_gap));

    let rows: Vec<TermScoreRow> = scores
        .by_entity
        .iter()
        .flat_map(|(entity, terms)| {
            terms.iter().map(move |(term, tally)| {
                let s = tally.score();
                TermScoreRow {
                    entity: entity.clone(),
                    term: term.clone(),
                    positive: s.positive,
                    negative: s.negative,
                    mentions: tally.mentions,
                    tally: tally.clone(),
                }
            })
        })
        .collect();
    io::write_jsonl(&ws.path(TERM_SCORES), &rows)?;

    let mut record = StageRecord::new(serde_json::json!({ "max_gap": max_gap }));
    record.input("positive_words", &lexicon_dir.join(io::POSITIVE_WORDS))?;
    record.input("negative_words", &lexicon_dir.join(io::NEGATIVE_WORDS))?;
    let mut artifacts = vec![TERM_SCORES];
    if let Some(path) = categories {
        let cats = io::read_categories(path)?;
        let cat_rows: Vec<CategoryScoreRow> = scores
            .category_totals(&cats)
            .into_iter()
            .map(|(id, t)| {
                let s = t.score();
                CategoryScoreRow {
                    category_id: id,
                    positive: s.positive,
                    negative: s.negative,
                    mentions: t.mentions,
                }
            })
            .collect();
        io::write_jsonl(&ws.path(CATEGORY_SCORES), &cat_rows)?;
        record.input("categories", path)?;
        artifacts.push(CATEGORY_SCORES);
    }
    ws.finish("score", record, &artifacts)?;
    Ok(ScoreOutcome {
        scored_terms: scores.term_totals().len(),
        lexicon_sizes: lexicon.sizes(),
        lexicon_conflicts: conflicts,
    })
}

pub fn report_file_names(format: Format) -> Vec<String> {
    match format {
        Format::Csv => vec!["report_overall.csv".into(), "report_entities.csv".into()],
        Format::Md => vec!["report.md".into()],
        Format::Html => vec!["report.html".into()],
    }
}

pub fn build_summary(categories: &[AspectCategory], scores: &CorpusScores, assignments: &BTreeMap<String, KanoBucket>) -> Result<Summary> {
    let totals = scores
        .category_totals(categories)
        .into_iter()
        .map(|(id, t)| (id, t.score()))
        .collect();
    let overall = overall_table(categories, &totals, assignments)?;
    let entity_names: Vec<String> = scores.review_counts.keys().cloned().collect();
    let entities = entity_table(&overall, categories, scores, &entity_names);
    Ok(Summary { overall, entities })
}

pub fn report(ws: &Workspace, categories_path: &Path, formats: &[Format]) -> Result<Summary> {
    let categories = io::read_categories(categories_path)?;
    check_categories(&categories, &[])?;
    let scores = load_scores(ws)?;
    let assignments = io::read_assignments(&ws.require(ASSIGNMENTS, "Kano assignments", "bucketize")?)?;
    let summary = build_summary(&categories, &scores, &assignments)?;

    io::write_json(&ws.path(SUMMARY), &summary)?;
    let mut artifacts: Vec<String> = vec![SUMMARY.into()];
    let formats: BTreeSet<Format> = formats.iter().copied().collect();
    for f in &formats {
        let names = report_file_names(*f);
        match f {
            Format::Csv => {
                io::write_bytes(&ws.path(&names[0]), &render::overall_csv(&summary.overall))?;
                io::write_bytes(&ws.path(&names[1]), &render::entity_csv(&summary.entities))?;
            }
            Format::Md => io::write_bytes(
                &ws.path(&names[0]),
                render::report_md(&summary.overall, &summary.entities).as_bytes(),
            )?,
            Format::Html => io::write_bytes(
                &ws.path(&names[0]),
                render::report_html(&summary.overall, &summary.entities).as_bytes(),
            )?,
        }
        artifacts.extend(names);
    }
    let mut record = StageRecord::new(serde_json::json!({ "formats": formats }));
    record.input("categories", categories_path)?;
    let names: Vec<&str> = artifacts.iter().map(String::as_str).collect();
    ws.finish("report", record, &names)?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct EvalInputs<'a> {
    pub gold: &'a Path,
    pub overrides: Option<&'a Path>,
    /// Term list file; defaults to the mined aspect terms.
    pub extracted: Option<&'a Path>,
    /// Column order; defaults to the ingested entities, else gold-file order.
    pub entities: Option<Vec<String>>,
}

pub fn evaluate(ws: &Workspace, inputs: &EvalInputs<'_>, formats: &[Format]) -> Result<EvalSummary> {
    let gold = io::read_gold(inputs.gold)?;
    let overrides = match inputs.overrides {
        Some(p) => io::read_overrides(p)?,
        None => Vec::new(),
    };
    let extracted: Vec<String> = match inputs.extracted {
        Some(p) => io::read_term_list(p)?,
        None => ws.load_terms()?.iter().map(AspectTerm::key).collect(),
    };
    let entities = match &inputs.entities {
        Some(e) => e.clone(),
        None if ws.path(INGEST_INFO).is_file() => {
            let info: IngestInfo = io::read_json(&ws.path(INGEST_INFO))?;
            info.review_counts.into_keys().collect()
        }
        None => {
            let mut seen = BTreeSet::new();
            gold.iter()
                .flat_map(|g| g.offered_by.iter())
                .filter(|e| seen.insert(e.as_str()))
                .cloned()
                .collect()
        }
    };
    let matches = match_features(&gold, &extracted, &overrides)?;
    let (tp, fp) = (matches.true_positives(), matches.false_positives());
    let summary = EvalSummary {
        recall: entities.iter().map(|e| recall(&matches, &gold, Some(e))).collect(),
        overall_recall: recall(&matches, &gold, None),
        entities,
        gold,
        matches,
        true_positives: tp,
        false_positives: fp,
        precision: precision(tp, fp),
    };

    io::write_json(&ws.path(EVAL), &summary)?;
    let mut artifacts = vec![EVAL.to_string()];
    for f in formats.iter().collect::<BTreeSet<_>>() {
        let name = format!("eval.{}", f.extension());
        let bytes = match f {
            Format::Csv => render::eval_csv(&summary),
            Format::Md => render::eval_md(&summary).into_bytes(),
            Format::Html => render::eval_html(&summary).into_bytes(),
        };
        io::write_bytes(&ws.path(&name), &bytes)?;
        artifacts.push(name);
    }
    let mut record = StageRecord::new(serde_json::json!({ "entities": summary.entities }));
    record.input("gold", inputs.gold)?;
    if let Some(p) = inputs.overrides {
        record.input("overrides", p)?;
    }
    if let Some(p) = inputs.extracted {
        record.input("extracted", p)?;
    }
    let names: Vec<&str> = artifacts.iter().map(String::as_str).collect();
    ws.finish("eval", record, &names)?;
    Ok(summary)
}

/// Inputs for a full run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub reviews: PathBuf,
    pub lexicon_dir: PathBuf,
    pub categories: PathBuf,
    pub buckets: PipelineBuckets,
    pub tag_lexicon: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub tokenize: TokenizeOptions,
    pub mining: MiningParams,
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone)]
pub enum PipelineBuckets {
    Votes(PathBuf),
    Assignments(PathBuf),
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineOutcome {
    pub ingest: IngestOutcome,
    pub mine: MineOutcome,
    pub bucketize: BucketizeOutcome,
    pub score: ScoreOutcome,
    pub report_warnings: Vec<String>,
    pub precision: Option<f64>,
}

/// Extraction, bucketization, scoring, summarization, then evaluation when
/// a gold list is given.
pub fn pipeline(ws: &Workspace, cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.mining.validate()?;
    let ingest_out = ingest(ws, &cfg.reviews, cfg.tokenize)?;
    let mine_out = mine(
        ws,
        &cfg.mining,
        &MineInputs {
            tag_lexicon: cfg.tag_lexicon.as_deref(),
            categories: Some(&cfg.categories),
        },
    )?;
    let source = match &cfg.buckets {
        PipelineBuckets::Votes(p) => BucketSource::Votes(p),
        PipelineBuckets::Assignments(p) => BucketSource::Assignments(p),
    };
    let bucket_out = bucketize(ws, &cfg.categories, source)?;
    let score_out = score(ws, &cfg.lexicon_dir, Some(&cfg.categories), cfg.mining.max_gap)?;
    let summary = report(ws, &cfg.categories, &cfg.formats)?;
    let precision = match &cfg.gold {
        Some(gold) => {
            let inputs = EvalInputs {
                gold,
                overrides: cfg.overrides.as_deref(),
                extracted: None,
                entities: None,
            };
            evaluate(ws, &inputs, &cfg.formats)?.precision
        }
        None => None,
    };
    Ok(PipelineOutcome {
        ingest: ingest_out,
        mine: mine_out,
        bucketize: bucket_out,
        score: score_out,
        report_warnings: summary.overall.warnings,
        precision,
    })
}
