//! File formats, the staged pipeline, report rendering and the survey server
//! on top of `revkano-core`.

pub mod cli;
pub mod error;
pub mod io;
pub mod manifest;
pub mod render;
pub mod server;
pub mod stages;

pub use error::{Error, Result};
