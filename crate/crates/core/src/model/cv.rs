//! Stratified k-fold cross-validation.

use serde::Serialize;

use super::gbdt::{fit, GbdtParams};
use super::metrics::{compute_metrics, Metrics};
use super::ModelError;
use crate::sparse::SparseMatrix;

pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub folds: Vec<Metrics>,
    pub mean: Metrics,
}

/// Fold id of every row. Within each class, rows are dealt round-robin to
/// folds `0..folds` in input order.
pub fn stratified_folds(y: &[u8], folds: usize) -> Result<Vec<usize>, ModelError> {
    if folds < 2 {
        return Err(ModelError::InvalidFolds(folds));
    }
    for class in [0u8, 1] {
        let count = y.iter().filter(|&&l| l == class).count();
        if count < folds {
            return Err(ModelError::TooFewSamples {
                class,
                count,
                folds,
            });
        }
    }
    let mut next = [0usize; 2];
    Ok(y.iter()
        .map(|&l| {
            let slot = &mut next[usize::from(l == 1)];
            let fold = *slot % folds;
            *slot += 1;
            fold
        })
        .collect())
}

/// Train on all folds but one, score the held-out fold, and average each
/// metric over folds.
pub fn cross_validate(
    x: &SparseMatrix,
    y: &[u8],
    params: &GbdtParams,
    folds: usize,
) -> Result<CvReport, ModelError> {
    if x.n_rows() != y.len() {
        return Err(ModelError::ShapeMismatch {
            rows: x.n_rows(),
            labels: y.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&l| l > 1) {
        return Err(ModelError::InvalidLabel(bad));
    }
    let assignment = stratified_folds(y, folds)?;
    let mut per_fold = Vec::with_capacity(folds);
    for fold in 0..folds {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..y.len()).partition(|&i| assignment[i] == fold);
        let pick = |rows: &[usize]| rows.iter().map(|&i| y[i]).collect::<Vec<u8>>();
        let model = fit(&x.select_rows(&train), &pick(&train), params)?;
        let scores = model.predict_proba(&x.select_rows(&test))?;
        per_fold.push(compute_metrics(&pick(&test), &scores, DEFAULT_THRESHOLD)?);
    }
    Ok(CvReport {
        mean: Metrics::mean(&per_fold),
        folds: per_fold,
    })
}

/// Fit on everything and score the same rows.
pub fn evaluate_on_training(
    x: &SparseMatrix,
    y: &[u8],
    params: &GbdtParams,
) -> Result<Metrics, ModelError> {
    let model = fit(x, y, params)?;
    let scores = model.predict_proba(x)?;
    Ok(compute_metrics(y, &scores, DEFAULT_THRESHOLD)?)
}
