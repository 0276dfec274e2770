//! Gradient-boosted decision trees for binary classification with
//! logistic loss and exact greedy split search.
//!
//! Gradient and hessian sums are accumulated in fixed point (`i128`, scale
//! 2^-[`FIXED_FRAC_BITS`]) so that the sum over a set of rows is exact and
//! independent of visiting order. Two candidate splits that induce the same
//! partition therefore score bit-identical gains, and tie-breaking (lowest
//! feature, then lowest threshold) is well defined.

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::sparse::SparseMatrix;

pub const MODEL_FORMAT: u32 = 1;
const FIXED_FRAC_BITS: i32 = 100;
/// Gains at or below this are treated as zero (rounding noise of splits
/// whose exact gain is 0). A candidate must also beat the current best by
/// this relative margin, so gains that differ only by rounding count as
/// ties and the earlier candidate is kept.
pub const SPLIT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbdtParams {
    pub n_rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub min_gain: f64,
}

impl Default for GbdtParams {
    fn default() -> Self {
        Self {
            n_rounds: 100,
            max_depth: 3,
            learning_rate: 0.3,
            l2_lambda: 1.0,
            min_gain: 0.0,
        }
    }
}

impl GbdtParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: &str| Err(ModelError::InvalidParams(msg.to_owned()));
        if self.n_rounds < 1 {
            return bad("n_rounds must be at least 1");
        }
        if self.max_depth < 1 {
            return bad("max_depth must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad("learning_rate must be in (0, 1]");
        }
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return bad("l2_lambda must be a finite non-negative number");
        }
        if !self.min_gain.is_finite() {
            return bad("min_gain must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Leaf {
        weight: f64,
    },
    /// Rows with `x[feature] < threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                Node::Leaf { weight } => return *weight,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] < *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Number of split levels on the longest path.
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_splits(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.n_splits() + right.n_splits(),
        }
    }

    fn max_feature(&self) -> Option<usize> {
        match self {
            Node::Leaf { .. } => None,
            Node::Split {
                feature,
                left,
                right,
                ..
            } => [Some(*feature), left.max_feature(), right.max_feature()]
                .into_iter()
                .flatten()
                .max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtModel {
    /// Log-odds of the positive class prior.
    pub base_score: f64,
    pub learning_rate: f64,
    pub n_cols: usize,
    pub trees: Vec<Node>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: u32,
    #[serde(flatten)]
    model: GbdtModel,
}

impl GbdtModel {
    /// Raw additive score (log-odds) for a dense row.
    pub fn margin(&self, row: &[f64]) -> f64 {
        self.base_score
            + self.learning_rate * self.trees.iter().map(|t| t.predict(row)).sum::<f64>()
    }

    pub fn predict_proba(&self, x: &SparseMatrix) -> Result<Vec<f64>, ModelError> {
        if x.n_cols() != self.n_cols {
            return Err(ModelError::WidthMismatch {
                expected: self.n_cols,
                found: x.n_cols(),
            });
        }
        let mut row = vec![0.0; self.n_cols];
        Ok((0..x.n_rows())
            .map(|i| {
                row.iter_mut().for_each(|v| *v = 0.0);
                for (j, v) in x.row_entries(i) {
                    row[j] = v;
                }
                probability(self.margin(&row))
            })
            .collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile {
            format: MODEL_FORMAT,
            model: self.clone(),
        })
        .expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        if file.format != MODEL_FORMAT {
            return Err(ModelError::Format(format!(
                "unsupported model format {}",
                file.format
            )));
        }
        if file
            .model
            .trees
            .iter()
            .filter_map(Node::max_feature)
            .any(|f| f >= file.model.n_cols)
        {
            return Err(ModelError::Format("split feature out of range".into()));
        }
        Ok(file.model)
    }
}

/// Logistic function, written so that `sigmoid(-x)` is computed by the same
/// operations as `sigmoid(x)` with the sign flipped.
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// [`sigmoid`] clamped into the open unit interval.
pub fn probability(margin: f64) -> f64 {
    sigmoid(margin).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Mean logistic loss of margins against 0/1 labels.
pub fn logistic_loss(y: &[u8], margins: &[f64]) -> f64 {
    let total: f64 = y
        .iter()
        .zip(margins)
        .map(|(&yi, &f)| if yi == 1 { softplus(-f) } else { softplus(f) })
        .sum();
    total / y.len() as f64
}

fn to_fixed(v: f64) -> i128 {
    (v * 2f64.powi(FIXED_FRAC_BITS)).round() as i128
}

fn from_fixed(v: i128) -> f64 {
    v as f64 * 2f64.powi(-FIXED_FRAC_BITS)
}

#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    grad: i128,
    hess: i128,
}

impl Stats {
    fn add(&mut self, g: i128, h: i128) {
        self.grad += g;
        self.hess += h;
    }

    fn minus(self, other: Stats) -> Stats {
        Stats {
            grad: self.grad - other.grad,
            hess: self.hess - other.hess,
        }
    }

    /// `G^2 / (H + lambda)`.
    fn score(self, lambda: f64) -> f64 {
        let g = from_fixed(self.grad);
        let denom = from_fixed(self.hess) + lambda;
        if denom > 0.0 {
            g * g / denom
        } else {
            0.0
        }
    }

    /// `-G / (H + lambda)`.
    fn weight(self, lambda: f64) -> f64 {
        let denom = from_fixed(self.hess) + lambda;
        if denom > 0.0 {
            -from_fixed(self.grad) / denom
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct TreeBuilder<'a> {
    columns: &'a [Vec<f64>],
    /// Per feature, row indices ordered by value (ties by row index).
    sorted: &'a [Vec<usize>],
    grad: &'a [i128],
    hess: &'a [i128],
    params: &'a GbdtParams,
    in_node: Vec<bool>,
}

impl TreeBuilder<'_> {
    fn build(&mut self, rows: &[usize], depth: usize) -> Node {
        let mut total = Stats::default();
        for &r in rows {
            total.add(self.grad[r], self.hess[r]);
        }
        let lambda = self.params.l2_lambda;
        let leaf = Node::Leaf {
            weight: total.weight(lambda),
        };
        if depth >= self.params.max_depth || rows.len() < 2 {
            return leaf;
        }
        let Some(best) = self.best_split(rows, total) else {
            return leaf;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| self.columns[best.feature][r] < best.threshold);
        Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: Box::new(self.build(&left, depth + 1)),
            right: Box::new(self.build(&right, depth + 1)),
        }
    }

    fn best_split(&mut self, rows: &[usize], total: Stats) -> Option<Candidate> {
        let lambda = self.params.l2_lambda;
        let parent = total.score(lambda);
        for &r in rows {
            self.in_node[r] = true;
        }
        let mut best: Option<Candidate> = None;
        for (feature, order) in self.sorted.iter().enumerate() {
            let column = &self.columns[feature];
            let mut left = Stats::default();
            let mut prev: Option<f64> = None;
            for &r in order.iter().filter(|&&r| self.in_node[r]) {
                let x = column[r];
                if let Some(p) = prev {
                    if x != p {
                        let right = total.minus(left);
                        let gain = 0.5 * (left.score(lambda) + right.score(lambda) - parent);
                        let beats = match best {
                            Some(b) => gain > b.gain + SPLIT_EPS * b.gain.abs(),
                            None => gain > self.params.min_gain && gain > SPLIT_EPS,
                        };
                        if beats {
                            best = Some(Candidate {
                                feature,
                                threshold: midpoint(p, x),
                                gain,
                            });
                        }
                    }
                }
                left.add(self.grad[r], self.hess[r]);
                prev = Some(x);
            }
        }
        for &r in rows {
            self.in_node[r] = false;
        }
        best
    }
}

/// Midpoint of `lo < hi`, nudged so that `lo < t <= hi` holds in floating
/// point.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mut t = (lo + hi) / 2.0;
    if t.is_infinite() {
        t = lo / 2.0 + hi / 2.0;
    }
    if t > lo {
        t
    } else {
        hi
    }
}

fn check_inputs(
    x: &SparseMatrix,
    y: &[u8],
    params: &GbdtParams,
) -> Result<(usize, usize), ModelError> {
    params.validate()?;
    if x.n_rows() != y.len() {
        return Err(ModelError::ShapeMismatch {
            rows: x.n_rows(),
            labels: y.len(),
        });
    }
    if y.len() < 2 {
        return Err(ModelError::TooFewRows(y.len()));
    }
    if let Some(&bad) = y.iter().find(|&&l| l > 1) {
        return Err(ModelError::InvalidLabel(bad));
    }
    let pos = y.iter().filter(|&&l| l == 1).count();
    let neg = y.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(ModelError::DegenerateLabels);
    }
    Ok((pos, neg))
}

pub fn fit(x: &SparseMatrix, y: &[u8], params: &GbdtParams) -> Result<GbdtModel, ModelError> {
    fit_traced(x, y, params).map(|(m, _)| m)
}

/// Fit and also return the mean training loss before the first round and
/// after every round (`n_rounds + 1` values).
pub fn fit_traced(
    x: &SparseMatrix,
    y: &[u8],
    params: &GbdtParams,
) -> Result<(GbdtModel, Vec<f64>), ModelError> {
    let (pos, neg) = check_inputs(x, y, params)?;
    let n = y.len();
    let clamp = |c: usize| (c as f64).max(1e-6 * n as f64);
    // ln(p / (1 - p)) with p = pos / n, split so that swapping the classes
    // negates it exactly.
    let base_score = clamp(pos).ln() - clamp(neg).ln();

    let columns = x.to_dense_columns();
    let sorted: Vec<Vec<usize>> = columns
        .iter()
        .map(|col| {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| col[a].total_cmp(&col[b]).then(a.cmp(&b)));
            order
        })
        .collect();
    let dense_rows = x.to_dense();

    let mut margins = vec![base_score; n];
    let mut grad = vec![0i128; n];
    let mut hess = vec![0i128; n];
    let mut trees = Vec::with_capacity(params.n_rounds);
    let mut losses = Vec::with_capacity(params.n_rounds + 1);
    losses.push(logistic_loss(y, &margins));
    let all_rows: Vec<usize> = (0..n).collect();

    for _ in 0..params.n_rounds {
        for i in 0..n {
            let p = sigmoid(margins[i]);
            let q = sigmoid(-margins[i]);
            // p - y, using 1 - p = sigmoid(-margin) for positives
            let g = if y[i] == 1 { -q } else { p };
            grad[i] = to_fixed(g);
            hess[i] = to_fixed(p * q);
        }
        let mut builder = TreeBuilder {
            columns: &columns,
            sorted: &sorted,
            grad: &grad,
            hess: &hess,
            params,
            in_node: vec![false; n],
        };
        let tree = builder.build(&all_rows, 0);
        for (m, row) in margins.iter_mut().zip(&dense_rows) {
            *m += params.learning_rate * tree.predict(row);
        }
        losses.push(logistic_loss(y, &margins));
        trees.push(tree);
    }

    Ok((
        GbdtModel {
            base_score,
            learning_rate: params.learning_rate,
            n_cols: x.n_cols(),
            trees,
        },
        losses,
    ))
}
