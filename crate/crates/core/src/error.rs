use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("unsupported raster format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt raster: {0}")]
    CorruptRaster(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("no band within 1 nm of {0} nm")]
    BandNotFound(f64),

    #[error("missing band metadata: {0}")]
    MissingBandMetadata(String),

    #[error("invalid bounding box ({x_min}, {y_min}, {x_max}, {y_max})")]
    InvalidBBox { x_min: f64, y_min: f64, x_max: f64, y_max: f64 },

    #[error("degenerate footprint: {0}")]
    DegenerateFootprint(String),

    #[error("invalid area {0}")]
    InvalidArea(f64),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid split request: {0}")]
    InvalidSplit(String),

    #[error("negative sampling exhausted: found {found} of {needed} negatives")]
    NegativeSamplingExhausted { found: usize, needed: usize },

    #[error("scene mismatch: expected {expected}, found {found}")]
    SceneMismatch { expected: String, found: String },

    #[error("duplicate scene id {0}")]
    DuplicateScene(String),

    #[error("invalid threshold {0}; must lie in [0, 1]")]
    InvalidThreshold(f64),

    #[error("invalid detection: {0}")]
    InvalidDetection(String),

    #[error("need at least 2 fold values, got {0}")]
    InsufficientFolds(usize),

    #[error("zero variance with unequal means")]
    DegenerateVariance,

    #[error("invalid fold score: {0}")]
    InvalidScore(String),

    #[error("missing wavelengths: {0}")]
    MissingWavelengths(String),

    #[error("invalid weight tensor: {0}")]
    InvalidTensor(String),

    #[error("corrupt tensor file: {0}")]
    CorruptTensorFile(String),

    #[error("invalid synth spec: {0}")]
    InvalidSynthSpec(String),

    #[error("placement exhausted in scene {scene}: placed {placed} of {requested} boxes")]
    PlacementExhausted { scene: String, placed: usize, requested: usize },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse { context: context.into(), message: message.to_string() }
    }
}
