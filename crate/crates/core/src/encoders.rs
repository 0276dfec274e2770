//! Numeric encodings of a tokenized corpus over a fixed vocabulary.
//!
//! Column `j` of the one-hot and TF-IDF matrices is `vocab.entries()[j]`;
//! the label encoding uses id `j + 2` for the same token, reserving
//! [`PAD_ID`] and [`UNK_ID`].

use std::fmt::Write as _;

use crate::corpus::{Corpus, Vocabulary};
use crate::sparse::SparseMatrix;

pub const PAD_ID: u32 = 0;
pub const UNK_ID: u32 = 1;
pub const DEFAULT_SEQ_LEN: usize = 32;

/// Fixed-length id sequences, one row per command, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix {
    n_rows: usize,
    seq_len: usize,
    ids: Vec<u32>,
}

impl LabelMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn seq_len(&self) -> usize {
        self.seq_len
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.ids[i * self.seq_len..(i + 1) * self.seq_len]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.ids.chunks(self.seq_len)
    }

    /// As a dense numeric matrix with one column per sequence position.
    pub fn to_sparse(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.seq_len);
        for row in self.rows() {
            m.push_row(row.iter().enumerate().map(|(j, &id)| (j, f64::from(id))))
                .expect("positions are in range and increasing");
        }
        m
    }

    /// One line per row, ids separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

/// Vocabulary column hits of one command, in token order.
fn columns<'a>(
    corpus: &'a Corpus,
    vocab: &'a Vocabulary,
    row: usize,
) -> impl Iterator<Item = usize> + 'a {
    corpus.commands[row]
        .values()
        .filter_map(|t| vocab.index_of(t))
}

/// Presence (1.0) of each vocabulary token per command.
pub fn encode_onehot(corpus: &Corpus, vocab: &Vocabulary) -> SparseMatrix {
    let mut m = SparseMatrix::new(vocab.len());
    for i in 0..corpus.len() {
        let mut cols: Vec<usize> = columns(corpus, vocab, i).collect();
        cols.sort_unstable();
        cols.dedup();
        m.push_row(cols.into_iter().map(|j| (j, 1.0)))
            .expect("vocabulary columns are in range");
    }
    m
}

/// Smoothed inverse document frequency `ln((1 + n) / (1 + df)) + 1` for
/// every vocabulary column.
pub fn idf(corpus: &Corpus, vocab: &Vocabulary) -> Vec<f64> {
    let mut df = vec![0u64; vocab.len()];
    for i in 0..corpus.len() {
        let mut cols: Vec<usize> = columns(corpus, vocab, i).collect();
        cols.sort_unstable();
        cols.dedup();
        for j in cols {
            df[j] += 1;
        }
    }
    let n = corpus.len() as f64;
    df.into_iter()
        .map(|d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
        .collect()
}

/// Raw term counts weighted by [`idf`], each non-empty row scaled to unit
/// L2 norm.
pub fn encode_tfidf(corpus: &Corpus, vocab: &Vocabulary) -> SparseMatrix {
    let weights = idf(corpus, vocab);
    let mut m = SparseMatrix::new(vocab.len());
    for i in 0..corpus.len() {
        let mut tf = vec![0u64; vocab.len()];
        let mut cols: Vec<usize> = Vec::new();
        for j in columns(corpus, vocab, i) {
            if tf[j] == 0 {
                cols.push(j);
            }
            tf[j] += 1;
        }
        cols.sort_unstable();
        let raw: Vec<f64> = cols.iter().map(|&j| tf[j] as f64 * weights[j]).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let row = cols
            .iter()
            .zip(&raw)
            .map(|(&j, &v)| (j, if norm > 0.0 { v / norm } else { v }));
        m.push_row(row).expect("vocabulary columns are in range");
    }
    m
}

/// Per-command id sequences: `2 + index` for vocabulary tokens, [`UNK_ID`]
/// otherwise, truncated to `seq_len` and right-padded with [`PAD_ID`].
pub fn encode_label(corpus: &Corpus, vocab: &Vocabulary, seq_len: usize) -> LabelMatrix {
    assert!(seq_len >= 1, "sequence length must be at least 1");
    let mut ids = Vec::with_capacity(corpus.len() * seq_len);
    for cmd in &corpus.commands {
        let start = ids.len();
        ids.extend(cmd.values().take(seq_len).map(|t| match vocab.index_of(t) {
            Some(j) => j as u32 + 2,
            None => UNK_ID,
        }));
        ids.resize(start + seq_len, PAD_ID);
    }
    LabelMatrix {
        n_rows: corpus.len(),
        seq_len,
        ids,
    }
}
