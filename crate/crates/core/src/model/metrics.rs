//! Binary classification metrics.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ThresholdMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Metrics {
    pub auc: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
}

impl Metrics {
    /// Arithmetic mean of each field.
    pub fn mean(all: &[Metrics]) -> Metrics {
        let n = all.len() as f64;
        let sum = |f: fn(&Metrics) -> f64| all.iter().map(f).sum::<f64>() / n;
        Metrics {
            auc: sum(|m| m.auc),
            f1: sum(|m| m.f1),
            precision: sum(|m| m.precision),
            recall: sum(|m| m.recall),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MetricsError {
    #[error("{labels} labels but {scores} scores")]
    LengthMismatch { labels: usize, scores: usize },
    #[error("no samples")]
    Empty,
    #[error("labels must be 0 or 1, found {0}")]
    InvalidLabel(u8),
    #[error("score at index {0} is not a finite number")]
    NonFiniteScore(usize),
    /// AUC needs both classes; the threshold metrics are still reported.
    #[error("only one class present, AUC is undefined")]
    SingleClass(ThresholdMetrics),
}

/// Precision, recall and F1 for the positive class, predicting positive when
/// `score > threshold`. Empty denominators yield 0.
pub fn threshold_metrics(y_true: &[u8], scores: &[f64], threshold: f64) -> ThresholdMetrics {
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (&y, &s) in y_true.iter().zip(scores) {
        match (s > threshold, y == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fneg);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    ThresholdMetrics {
        precision,
        recall,
        f1,
    }
}

/// Area under the ROC curve from the Mann-Whitney rank statistic, with tied
/// scores sharing their average rank. Returns `None` unless both classes are
/// present.
pub fn roc_auc(y_true: &[u8], scores: &[f64]) -> Option<f64> {
    let n_pos = y_true.iter().filter(|&&y| y == 1).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // 1-based ranks start+1 ..= end share their mean
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        let pos_in_group = order[start..end]
            .iter()
            .filter(|&&i| y_true[i] == 1)
            .count();
        rank_sum_pos += avg_rank * pos_in_group as f64;
        start = end;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos * n_neg) as f64)
}

pub fn compute_metrics(
    y_true: &[u8],
    scores: &[f64],
    threshold: f64,
) -> Result<Metrics, MetricsError> {
    if y_true.len() != scores.len() {
        return Err(MetricsError::LengthMismatch {
            labels: y_true.len(),
            scores: scores.len(),
        });
    }
    if y_true.is_empty() {
        return Err(MetricsError::Empty);
    }
    if let Some(&bad) = y_true.iter().find(|&&y| y > 1) {
        return Err(MetricsError::InvalidLabel(bad));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(MetricsError::NonFiniteScore(i));
    }
    let t = threshold_metrics(y_true, scores, threshold);
    let auc = roc_auc(y_true, scores).ok_or(MetricsError::SingleClass(t))?;
    Ok(Metrics {
        auc,
        f1: t.f1,
        precision: t.precision,
        recall: t.recall,
    })
}
