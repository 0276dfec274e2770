//! Benign-vs-malicious classification experiment: tokenize, encode, train
//! boosted trees, and report training-set and cross-validated metrics per
//! tokenizer.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{
    build_corpus_with, top_k_vocabulary, CorpusError, CorpusOptions, Tokenizer, Vocabulary,
};
use crate::encoders::{encode_label, encode_onehot, encode_tfidf, DEFAULT_SEQ_LEN};
use crate::model::{cross_validate, evaluate_on_training, GbdtParams, Metrics, ModelError};
use crate::normalize::Normalizer;
use crate::sparse::SparseMatrix;

pub const DEFAULT_TOP_TOKENS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Tfidf,
    Onehot,
    Label,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Tfidf => "tfidf",
            Encoding::Onehot => "onehot",
            Encoding::Label => "label",
        }
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tfidf" => Ok(Encoding::Tfidf),
            "onehot" => Ok(Encoding::Onehot),
            "label" => Ok(Encoding::Label),
            other => Err(format!(
                "unknown encoding `{other}` (expected tfidf, onehot or label)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub tokenizer: Tokenizer,
    pub encoding: Encoding,
    pub top_tokens: usize,
    pub seq_len: usize,
    pub folds: usize,
    /// `None` disables normalization.
    pub normalizer: Option<Normalizer>,
    pub params: GbdtParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            tokenizer: Tokenizer::Slp,
            encoding: Encoding::Tfidf,
            top_tokens: DEFAULT_TOP_TOKENS,
            seq_len: DEFAULT_SEQ_LEN,
            folds: crate::model::cv::DEFAULT_FOLDS,
            normalizer: Some(Normalizer::default()),
            params: GbdtParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.top_tokens < 1 {
            return Err(ExperimentError::InvalidConfig(
                "top_tokens must be at least 1".into(),
            ));
        }
        if self.seq_len < 1 {
            return Err(ExperimentError::InvalidConfig(
                "seq_len must be at least 1".into(),
            ));
        }
        if self.folds < 2 {
            return Err(ExperimentError::InvalidConfig(
                "folds must be at least 2 for cross-validation".into(),
            ));
        }
        self.params.validate()?;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{0} input is empty")]
    EmptyInput(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Feature matrix for `lines` under `config`; the vocabulary is the top
/// tokens of these same lines.
pub fn featurize<S: AsRef<str>>(
    lines: &[S],
    config: &ExperimentConfig,
) -> Result<(SparseMatrix, Vocabulary), ExperimentError> {
    let build = build_corpus_with(
        lines,
        &CorpusOptions {
            tokenizer: config.tokenizer,
            normalizer: config.normalizer.clone(),
        },
    )?;
    let vocab = top_k_vocabulary(&build.counter, config.top_tokens);
    let x = match config.encoding {
        Encoding::Tfidf => encode_tfidf(&build.corpus, &vocab),
        Encoding::Onehot => encode_onehot(&build.corpus, &vocab),
        Encoding::Label => encode_label(&build.corpus, &vocab, config.seq_len).to_sparse(),
    };
    Ok((x, vocab))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub tokenizer: Tokenizer,
    pub vocabulary_size: usize,
    pub train: Metrics,
    pub cv: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub encoding: Encoding,
    pub folds: usize,
    pub n_benign: usize,
    pub n_malicious: usize,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentReport {
    pub fn row(&self, tokenizer: Tokenizer) -> Option<&ExperimentRow> {
        self.rows.iter().find(|r| r.tokenizer == tokenizer)
    }

    /// Two fixed-width tables: training-set evaluation, then k-fold CV.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# encoding={} benign={} malicious={}",
            self.encoding.name(),
            self.n_benign,
            self.n_malicious
        );
        let cv_title = format!("{}-fold cross-validation (mean over folds)", self.folds);
        type Pick = fn(&ExperimentRow) -> &Metrics;
        let sections: [(&str, Pick); 2] = [
            ("train (fit and score on all rows)", |r| &r.train),
            (&cv_title, |r| &r.cv),
        ];
        for (title, pick) in sections {
            let _ = writeln!(out, "\n## {title}");
            let _ = writeln!(
                out,
                "{:<12} {:>6} {:>7} {:>7} {:>10} {:>7}",
                "tokenizer", "vocab", "AUC", "F1", "Precision", "Recall"
            );
            for row in &self.rows {
                let m = pick(row);
                let _ = writeln!(
                    out,
                    "{:<12} {:>6} {:>7.4} {:>7.4} {:>10.4} {:>7.4}",
                    row.tokenizer.name(),
                    row.vocabulary_size,
                    m.auc,
                    m.f1,
                    m.precision,
                    m.recall
                );
            }
        }
        out
    }
}

/// Label benign lines 0 and malicious lines 1, then evaluate every listed
/// tokenizer with otherwise identical settings.
pub fn run_experiment<S: AsRef<str>>(
    benign: &[S],
    malicious: &[S],
    config: &ExperimentConfig,
    tokenizers: &[Tokenizer],
) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    if benign.is_empty() {
        return Err(ExperimentError::EmptyInput("benign"));
    }
    if malicious.is_empty() {
        return Err(ExperimentError::EmptyInput("malicious"));
    }
    let lines: Vec<&str> = benign.iter().chain(malicious).map(AsRef::as_ref).collect();
    let y: Vec<u8> = std::iter::repeat_n(0, benign.len())
        .chain(std::iter::repeat_n(1, malicious.len()))
        .collect();

    let mut rows = Vec::with_capacity(tokenizers.len());
    for &tokenizer in tokenizers {
        let cfg = ExperimentConfig {
            tokenizer,
            ..config.clone()
        };
        let (x, vocab) = featurize(&lines, &cfg)?;
        let train = evaluate_on_training(&x, &y, &cfg.params)?;
        let cv = cross_validate(&x, &y, &cfg.params, cfg.folds)?;
        rows.push(ExperimentRow {
            tokenizer,
            vocabulary_size: vocab.len(),
            train,
            cv: cv.mean,
        });
    }
    Ok(ExperimentReport {
        encoding: config.encoding,
        folds: config.folds,
        n_benign: benign.len(),
        n_malicious: malicious.len(),
        rows,
    })
}
