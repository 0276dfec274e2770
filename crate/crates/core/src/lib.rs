//! Shell language preprocessing: shell-aware tokenization of command lines,
//! normalization of volatile literals, vocabulary building, label / one-hot /
//! TF-IDF encodings, and a small boosted-trees classifier for evaluating
//! the resulting features.
//!
//! ```
//! use slp_core::{build_corpus, encode_tfidf, top_k_vocabulary};
//!
//! let lines = ["export IP=$(dig +short evil.ru)", "ls -la /tmp"];
//! let built = build_corpus(&lines, true).unwrap();
//! let vocab = top_k_vocabulary(&built.counter, 100);
//! let x = encode_tfidf(&built.corpus, &vocab);
//! assert_eq!(x.n_rows(), 2);
//! assert!(vocab.index_of("example.com").is_some());
//! ```

pub mod baselines;
pub mod corpus;
pub mod encoders;
pub mod experiment;
pub mod fixtures;
pub mod lexer;
pub mod model;
pub mod normalize;
pub mod sparse;
pub mod svmlight;

pub use baselines::{whitespace_tokenize, wordpunct_tokenize};
pub use corpus::{
    build_corpus, build_corpus_with, top_k_vocabulary, Corpus, CorpusBuild, CorpusError,
    CorpusOptions, TokenCounter, Tokenizer, Vocabulary,
};
pub use encoders::{encode_label, encode_onehot, encode_tfidf, LabelMatrix};
pub use experiment::{
    run_experiment, Encoding, ExperimentConfig, ExperimentError, ExperimentReport,
};
pub use lexer::{tokenize, tokenize_strict, LexWarning, Token, TokenKind, TokenizedCommand};
pub use model::{GbdtModel, GbdtParams, Metrics, ModelError};
pub use normalize::{normalize, Normalizer};
pub use sparse::SparseMatrix;
