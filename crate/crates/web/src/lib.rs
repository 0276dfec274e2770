//! Browser bindings for the demo page. Every export returns a JSON string;
//! failures come back as `{"error": "..."}` so the page has one code path.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use slp_core::experiment::{run_experiment, ExperimentConfig};
use slp_core::{
    build_corpus_with, encode_label, encode_onehot, encode_tfidf, fixtures, normalize,
    top_k_vocabulary, CorpusOptions, Encoding, GbdtParams, Token, Tokenizer,
};

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    let text = match result {
        Ok(body) => serde_json::to_string(&body),
        Err(error) => serde_json::to_string(&ErrorBody { error }),
    };
    text.expect("response types serialize")
}

#[derive(Serialize)]
struct Split {
    tokenizer: &'static str,
    tokens: Vec<String>,
}

#[derive(Serialize)]
struct Comparison {
    normalized: String,
    slp: Vec<Token>,
    warnings: Vec<String>,
    splits: Vec<Split>,
}

fn compare(command: &str, use_normalization: bool) -> Comparison {
    let text = if use_normalization {
        normalize(command)
    } else {
        command.to_owned()
    };
    let slp = Tokenizer::Slp.tokenize(&text);
    Comparison {
        splits: Tokenizer::ALL
            .iter()
            .map(|&t| Split {
                tokenizer: t.name(),
                tokens: t.tokenize(&text).values().map(str::to_owned).collect(),
            })
            .collect(),
        warnings: slp.warnings.iter().map(ToString::to_string).collect(),
        slp: slp.tokens,
        normalized: text,
    }
}

/// Tokenize one command with every tokenizer, plus typed slp tokens.
#[wasm_bindgen]
pub fn compare_tokenizers(command: &str, use_normalization: bool) -> String {
    respond(Ok(compare(command, use_normalization)))
}

#[derive(Serialize)]
struct Encoded {
    vocabulary: Vec<String>,
    /// Dense rows; for `label` these are token ids.
    rows: Vec<Vec<f64>>,
}

fn encode(
    corpus_text: &str,
    encoding: &str,
    top_tokens: usize,
    seq_len: usize,
) -> Result<Encoded, String> {
    let encoding: Encoding = encoding.parse()?;
    let lines: Vec<&str> = fixtures::lines(corpus_text);
    let build = build_corpus_with(&lines, &CorpusOptions::new(Tokenizer::Slp, true))
        .map_err(|e| e.to_string())?;
    let vocab = top_k_vocabulary(&build.counter, top_tokens.max(1));
    let x = match encoding {
        Encoding::Tfidf => encode_tfidf(&build.corpus, &vocab),
        Encoding::Onehot => encode_onehot(&build.corpus, &vocab),
        Encoding::Label => encode_label(&build.corpus, &vocab, seq_len.max(1)).to_sparse(),
    };
    Ok(Encoded {
        vocabulary: vocab.entries().to_vec(),
        rows: x.to_dense(),
    })
}

/// Encode one command per non-blank line of `corpus_text`.
#[wasm_bindgen]
pub fn encode_corpus(
    corpus_text: &str,
    encoding: &str,
    top_tokens: usize,
    seq_len: usize,
) -> String {
    respond(encode(corpus_text, encoding, top_tokens, seq_len))
}

fn experiment(
    rounds: usize,
    depth: usize,
    folds: usize,
) -> Result<slp_core::ExperimentReport, String> {
    let config = ExperimentConfig {
        folds,
        params: GbdtParams {
            n_rounds: rounds,
            max_depth: depth,
            ..GbdtParams::default()
        },
        ..ExperimentConfig::default()
    };
    run_experiment(
        &fixtures::benign(),
        &fixtures::malicious(),
        &config,
        &Tokenizer::ALL,
    )
    .map_err(|e| e.to_string())
}

/// Compare the three tokenizers on the bundled corpora.
#[wasm_bindgen]
pub fn run_fixture_experiment(rounds: usize, depth: usize, folds: usize) -> String {
    respond(experiment(rounds, depth, folds))
}
