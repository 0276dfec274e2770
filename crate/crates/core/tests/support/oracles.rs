//! Independent reference implementations used to check the library.
//! Nothing here calls into the code paths it is compared against.

#![allow(dead_code)]

use std::cmp::Ordering;

/// Top `k` tokens by count, ties broken by byte order, via a full sort of
/// (count, token) pairs.
pub fn naive_top_k(rows: &[Vec<String>], k: usize) -> Vec<String> {
    let mut distinct: Vec<&String> = rows.iter().flatten().collect();
    distinct.sort();
    distinct.dedup();
    let mut counted: Vec<(usize, &String)> = distinct
        .into_iter()
        .map(|t| (rows.iter().flatten().filter(|u| *u == t).count(), t))
        .collect();
    counted.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then_with(|| a.1.as_bytes().cmp(b.1.as_bytes()))
    });
    counted
        .into_iter()
        .take(k)
        .map(|(_, t)| t.clone())
        .collect()
}

/// Dense one-hot: presence of `vocab[j]` in each row.
pub fn naive_onehot(rows: &[Vec<String>], vocab: &[String]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|row| {
            vocab
                .iter()
                .map(|v| if row.contains(v) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Dense TF-IDF with smoothed idf and L2 row normalization, computed
/// straight from the definition.
pub fn naive_tfidf(rows: &[Vec<String>], vocab: &[String]) -> Vec<Vec<f64>> {
    let n = rows.len() as f64;
    let idf: Vec<f64> = vocab
        .iter()
        .map(|v| {
            let df = rows.iter().filter(|r| r.contains(v)).count() as f64;
            ((1.0 + n) / (1.0 + df)).ln() + 1.0
        })
        .collect();
    rows.iter()
        .map(|row| {
            let raw: Vec<f64> = vocab
                .iter()
                .zip(&idf)
                .map(|(v, w)| row.iter().filter(|t| *t == v).count() as f64 * w)
                .collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                raw
            } else {
                raw.iter().map(|x| x / norm).collect()
            }
        })
        .collect()
}

pub fn naive_label(rows: &[Vec<String>], vocab: &[String], seq_len: usize) -> Vec<Vec<u32>> {
    rows.iter()
        .map(|row| {
            (0..seq_len)
                .map(|i| match row.get(i) {
                    None => 0,
                    Some(t) => match vocab.iter().position(|v| v == t) {
                        Some(j) => j as u32 + 2,
                        None => 1,
                    },
                })
                .collect()
        })
        .collect()
}

/// Brute-force AUC: concordant positive/negative pairs plus half the ties,
/// divided by the number of positive/negative pairs.
pub fn pairwise_auc(y: &[u8], scores: &[f64]) -> f64 {
    let mut halves = 0u64;
    let mut pairs = 0u64;
    for (i, &yi) in y.iter().enumerate() {
        if yi != 1 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 {
                continue;
            }
            pairs += 1;
            halves += match scores[i].partial_cmp(&scores[j]).unwrap() {
                Ordering::Greater => 2,
                Ordering::Equal => 1,
                Ordering::Less => 0,
            };
        }
    }
    (halves as f64 / 2.0) / pairs as f64
}

/// Exact non-negative fraction `num / den`.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    fn add(self, o: Frac) -> Frac {
        Frac {
            num: self.num * o.den + o.num * self.den,
            den: self.den * o.den,
        }
    }

    fn cmp(self, o: Frac) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StumpChoice {
    pub feature: usize,
    pub threshold: f64,
}

/// Exhaustive first-round stump search for logistic loss, in exact rational
/// arithmetic. With p = P/n the gradient is `p - y` and the hessian
/// `p(1 - p)`, so a child holding k rows of which k_pos are positive has
/// `G = (kP - n k_pos)/n` and `H = kPN/n²`; the parent's G is 0. Twice the
/// gain is then `Σ_child (kP - n k_pos)² / (kPN + λn²)`.
///
/// Every feature and every midpoint between consecutive distinct values is
/// tried; the first strictly larger gain wins, so ties go to the lowest
/// feature and then the lowest threshold. `None` when no split has positive
/// gain.
pub fn exhaustive_stump(columns: &[Vec<f64>], y: &[u8], lambda: i128) -> Option<StumpChoice> {
    let n = y.len() as i128;
    let pos = y.iter().filter(|&&l| l == 1).count() as i128;
    let neg = n - pos;
    let child = |k: i128, k_pos: i128| {
        let g = k * pos - n * k_pos;
        Frac {
            num: g * g,
            den: k * pos * neg + lambda * n * n,
        }
    };
    let mut best: Option<(Frac, StumpChoice)> = None;
    for (feature, col) in columns.iter().enumerate() {
        let mut values: Vec<f64> = col.clone();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let threshold = (w[0] + w[1]) / 2.0;
            let left: Vec<usize> = (0..y.len()).filter(|&i| col[i] < threshold).collect();
            let k = left.len() as i128;
            let k_pos = left.iter().filter(|&&i| y[i] == 1).count() as i128;
            let gain = child(k, k_pos).add(child(n - k, pos - k_pos));
            if gain.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, _)) => gain.cmp(*b) == Ordering::Greater,
            };
            if better {
                best = Some((gain, StumpChoice { feature, threshold }));
            }
        }
    }
    best.map(|(_, c)| c)
}
