//! Command-line entry point.

use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use revkano_core::mining::MiningParams;
use revkano_core::text::TokenizeOptions;

use crate::error::{Error, Result};
use crate::render::{self, Format};
use crate::server::{self, ServerOptions};
use crate::stages::{self, BucketSource, EvalInputs, MineInputs, PipelineBuckets, PipelineConfig, Workspace};

#[derive(Debug, Parser)]
#[command(name = "revkano", version, about = "Aspect mining, sentiment scoring and Kano bucketization for app reviews")]
pub struct Cli {
    /// Directory for stage artifacts and the manifest.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Maximum worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Accepted for harness compatibility; the pipeline is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read reviews-jsonl, segment and tokenize.
    Ingest {
        #[arg(long)]
        reviews: PathBuf,
        #[command(flatten)]
        tokenize: TokenizeArgs,
    },
    /// Chunk noun phrases, mine rules and prune them into aspect terms.
    Mine {
        #[command(flatten)]
        mining: MiningArgs,
        /// `word<TAB>tag` overrides for the built-in tagger.
        #[arg(long)]
        tag_lexicon: Option<PathBuf>,
        /// Check categories against the mined terms and write survey.json.
        #[arg(long)]
        categories: Option<PathBuf>,
    },
    /// Assign each category a Kano bucket from survey votes or a fixed file.
    Bucketize {
        #[arg(long)]
        categories: PathBuf,
        #[command(flatten)]
        source: BucketArgs,
    },
    /// Score every aspect term with the opinion lexicon.
    Score {
        #[arg(long)]
        lexicon_dir: PathBuf,
        #[arg(long)]
        categories: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_gap: usize,
    },
    /// Render the bucketized overview and the per-entity table.
    Report {
        #[arg(long)]
        categories: PathBuf,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Recall and precision against a gold feature list.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        overrides: Option<PathBuf>,
        /// One extracted term per line; defaults to the mined aspect terms.
        #[arg(long)]
        extracted: Option<PathBuf>,
        /// Entity column order, comma separated.
        #[arg(long, value_delimiter = ',')]
        entities: Option<Vec<String>>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Host the Kano survey API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Survey definition; `mine --categories` writes one to <out>/survey.json.
        #[arg(long)]
        survey_config: Option<PathBuf>,
        #[arg(long, default_value = "votes.jsonl")]
        votes_log: PathBuf,
        /// Built survey UI bundle served at `/`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
    /// ingest, mine, bucketize, score, report and (with --gold) eval.
    Pipeline {
        #[arg(long)]
        reviews: PathBuf,
        #[arg(long)]
        lexicon_dir: PathBuf,
        #[arg(long)]
        categories: PathBuf,
        #[command(flatten)]
        source: BucketArgs,
        #[arg(long)]
        tag_lexicon: Option<PathBuf>,
        #[arg(long)]
        gold: Option<PathBuf>,
        #[arg(long)]
        overrides: Option<PathBuf>,
        #[command(flatten)]
        tokenize: TokenizeArgs,
        #[command(flatten)]
        mining: MiningArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
}

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    /// Reduce runs of 3+ identical letters to 2.
    #[arg(long)]
    pub collapse_elongation: bool,
}

impl TokenizeArgs {
    fn options(&self) -> TokenizeOptions {
        TokenizeOptions {
            collapse_elongation: self.collapse_elongation,
        }
    }
}

#[derive(Debug, Args)]
pub struct MiningArgs {
    #[arg(long, default_value_t = 0.0004)]
    pub min_support: f64,
    #[arg(long, default_value_t = 0.6)]
    pub min_confidence: f64,
    #[arg(long, default_value_t = 3)]
    pub prune_threshold: usize,
    #[arg(long, default_value_t = 2)]
    pub max_gap: usize,
    #[arg(long, default_value_t = 2)]
    pub min_sentences: usize,
    /// Also admit frequent single words that appear in no rule.
    #[arg(long)]
    pub include_frequent_singletons: bool,
    /// Let words never tagged as nouns become single-word aspects.
    #[arg(long)]
    pub allow_non_noun_singletons: bool,
}

impl MiningArgs {
    fn params(&self) -> MiningParams {
        MiningParams {
            min_support: self.min_support,
            min_confidence: self.min_confidence,
            prune_threshold: self.prune_threshold,
            max_gap: self.max_gap,
            min_sentences: self.min_sentences,
            include_frequent_singletons: self.include_frequent_singletons,
            singletons_must_be_nouns: !self.allow_non_noun_singletons,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BucketArgs {
    /// votes.csv with `subject_id,category_id,bucket`.
    #[arg(long)]
    pub votes: Option<PathBuf>,
    /// assignments.json with fixed buckets.
    #[arg(long)]
    pub assignments: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FormatArgs {
    /// Output formats, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "csv,md,html")]
    pub format: Vec<String>,
}

impl FormatArgs {
    fn formats(&self) -> Result<Vec<Format>> {
        self.format.iter().map(|f| f.parse()).collect()
    }
}

fn workspace(cli: &Cli) -> Workspace {
    Workspace {
        out: cli.out.clone(),
        jobs: cli.jobs,
        seed: cli.seed,
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let ws = workspace(&cli);
    if cli.jobs == Some(0) {
        return Err(Error::Usage("--jobs must be at least 1".into()));
    }
    match &cli.command {
        Command::Ingest { reviews, tokenize } => {
            let out = stages::ingest(&ws, reviews, tokenize.options())?;
            if out.rejects > 0 {
                eprintln!("warning: {} lines rejected, see {}", out.rejects, ws.path(stages::REJECTS).display());
            }
            print_json(&out);
        }
        Command::Mine { mining, tag_lexicon, categories } => {
            let params = mining.params();
            params.validate()?;
            let out = stages::mine(
                &ws,
                &params,
                &MineInputs {
                    tag_lexicon: tag_lexicon.as_deref(),
                    categories: categories.as_deref(),
                },
            )?;
            warn_all(&out.warnings);
            print_json(&out);
        }
        Command::Bucketize { categories, source } => {
            let src = match (&source.votes, &source.assignments) {
                (Some(v), _) => BucketSource::Votes(v),
                (None, Some(a)) => BucketSource::Assignments(a),
                (None, None) => return Err(Error::Usage("pass --votes or --assignments".into())),
            };
            let out = stages::bucketize(&ws, categories, src)?;
            for id in &out.unassigned {
                eprintln!("warning: category `{id}` received no votes");
            }
            for id in &out.tied {
                eprintln!("warning: category `{id}` is tied; bucket chosen by priority order");
            }
            print_json(&out);
        }
        Command::Score { lexicon_dir, categories, max_gap } => {
            let out = stages::score(&ws, lexicon_dir, categories.as_deref(), *max_gap)?;
            if !out.lexicon_conflicts.is_empty() {
                eprintln!(
                    "warning: dropped words listed as both positive and negative: {}",
                    out.lexicon_conflicts.join(", ")
                );
            }
            print_json(&out);
        }
        Command::Report { categories, format } => {
            let formats = format.formats()?;
            let summary = stages::report(&ws, categories, &formats)?;
            warn_all(&summary.overall.warnings);
            print!("{}", render::overall_md(&summary.overall));
        }
        Command::Eval { gold, overrides, extracted, entities, format } => {
            let formats = format.formats()?;
            let inputs = EvalInputs {
                gold,
                overrides: overrides.as_deref(),
                extracted: extracted.as_deref(),
                entities: entities.clone(),
            };
            let summary = stages::evaluate(&ws, &inputs, &formats)?;
            print!("{}", render::eval_md(&summary));
        }
        Command::Serve { port, host, survey_config, votes_log, ui_dir } => {
            let survey = match survey_config {
                Some(p) => Some(crate::io::read_json(p)?),
                None => None,
            };
            let options = ServerOptions {
                survey,
                votes_log: votes_log.clone(),
                ui_dir: ui_dir.clone(),
                report_dir: Some(ws.out.clone()),
            };
            let addr = SocketAddr::new(*host, *port);
            let rt = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Error::io("tokio runtime", e))?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .map_err(|e| Error::io(addr.to_string(), e))?;
                eprintln!("listening on http://{addr}");
                server::serve(listener, options).await
            })?;
        }
        Command::Pipeline {
            reviews,
            lexicon_dir,
            categories,
            source,
            tag_lexicon,
            gold,
            overrides,
            tokenize,
            mining,
            format,
        } => {
            let params = mining.params();
            params.validate()?;
            let buckets = match (&source.votes, &source.assignments) {
                (Some(v), _) => PipelineBuckets::Votes(v.clone()),
                (None, Some(a)) => PipelineBuckets::Assignments(a.clone()),
                (None, None) => return Err(Error::Usage("pass --votes or --assignments".into())),
            };
            let cfg = PipelineConfig {
                reviews: reviews.clone(),
                lexicon_dir: lexicon_dir.clone(),
                categories: categories.clone(),
                buckets,
                tag_lexicon: tag_lexicon.clone(),
                gold: gold.clone(),
                overrides: overrides.clone(),
                tokenize: tokenize.options(),
                mining: params,
                formats: format.formats()?,
            };
            let out = stages::pipeline(&ws, &cfg)?;
            warn_all(&out.mine.warnings);
            warn_all(&out.report_warnings);
            print_json(&out);
        }
    }
    Ok(())
}

/// Parses the process arguments, runs, and returns the exit status.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
