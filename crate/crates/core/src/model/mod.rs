//! Boosted trees, metrics and cross-validation.

pub mod cv;
pub mod gbdt;
pub mod metrics;

use thiserror::Error;

pub use cv::{cross_validate, evaluate_on_training, stratified_folds, CvReport};
pub use gbdt::{fit, fit_traced, GbdtModel, GbdtParams, Node};
pub use metrics::{compute_metrics, roc_auc, Metrics, MetricsError, ThresholdMetrics};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("training labels contain a single class")]
    DegenerateLabels,
    #[error("matrix has {rows} rows but {labels} labels were given")]
    ShapeMismatch { rows: usize, labels: usize },
    #[error("need at least 2 training rows, got {0}")]
    TooFewRows(usize),
    #[error("labels must be 0 or 1, found {0}")]
    InvalidLabel(u8),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("model expects {expected} columns, input has {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("cross-validation needs at least 2 folds, got {0}")]
    InvalidFolds(usize),
    #[error("class {class} has {count} samples, fewer than {folds} folds")]
    TooFewSamples {
        class: u8,
        count: usize,
        folds: usize,
    },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("model file: {0}")]
    Format(String),
}
