//! Batch front end: JSON inputs, result envelopes and SVG figures for the `okounkov` crate.

mod cache;
pub mod envelope;
pub mod error;
pub mod job;
mod run;
pub mod schema;
pub mod svg;

pub use cache::CACHE_ENV;
pub use envelope::ResultEnvelope;
pub use error::CliError;
pub use job::{Command, FlagSpec, JobSpec};
pub use run::{run, sigma_prefixes};
pub use schema::{parse_series_file, parse_series_str, parse_surface_file, serialize_series};
pub use svg::{emit_svg, Plot};
