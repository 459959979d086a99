//! Pure algorithms for mining product aspects out of app-store reviews and
//! scoring them.
//!
//! The pipeline, in order:
//!
//! 1. [`text`] segments raw review text into sentences and normalized tokens.
//! 2. [`tagger`] assigns part-of-speech tags and chunks noun phrases.
//! 3. [`mining`] turns noun phrases into transactions, runs Apriori, and
//!    prunes the rule vocabulary down to single and multi-word aspect terms.
//! 4. [`sentiment`] scores each aspect with distance-weighted lexicon hits.
//! 5. [`kano`] folds survey votes into one Kano bucket per aspect category.
//! 6. [`summary`] builds the bucketized report rows and sentiment bars.
//! 7. [`eval`] measures extracted aspects against a gold feature list.
//!
//! Everything here is `no_std` (with `alloc`) and free of IO. File formats,
//! the CLI and the survey server live in the `revkano` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod kano;
pub mod matching;
pub mod mining;
pub mod sentiment;
pub mod summary;
pub mod tagger;
pub mod text;

pub use error::Error;
