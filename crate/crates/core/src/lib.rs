//! Preparation, scoring, and statistics for building detection on
//! multi-band, high-bit-depth overhead imagery.
//!
//! - [`raster`]: TIFF scene loading, requantization, rescaling, band selection
//! - [`annotate`]: footprint boxes, padding, size and density bins, splits, patches
//! - [`matcheval`]: greedy IoU matching and stratified precision/recall/F1
//! - [`stats`]: k-fold summaries and unpaired t-tests
//! - [`netexpand`]: RGB-to-multispectral first-layer weight expansion
//! - [`synth`]: seeded synthetic scenes and detections
//! - [`cli`]: the `spectra-eval` command-line front end

pub mod annotate;
pub mod cli;
pub mod error;
pub mod jsonl;
pub mod matcheval;
pub mod netexpand;
pub mod raster;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
