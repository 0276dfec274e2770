//! Corpus construction, token counting and top-K vocabulary selection.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::baselines::{whitespace_tokenize, wordpunct_tokenize};
use crate::lexer::{self, LexWarning, Token, TokenizedCommand};
use crate::normalize::Normalizer;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("no commands to build a corpus from")]
    Empty,
    #[error("{labels} labels given for {commands} commands")]
    LabelLengthMismatch { commands: usize, labels: usize },
    #[error("labels must be 0 or 1, found {0}")]
    InvalidLabel(u8),
}

/// Which tokenizer turns raw lines into token sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tokenizer {
    #[default]
    Slp,
    WordPunct,
    Whitespace,
}

impl Tokenizer {
    pub const ALL: [Tokenizer; 3] = [Tokenizer::Slp, Tokenizer::WordPunct, Tokenizer::Whitespace];

    pub fn name(self) -> &'static str {
        match self {
            Tokenizer::Slp => "slp",
            Tokenizer::WordPunct => "wordpunct",
            Tokenizer::Whitespace => "whitespace",
        }
    }

    /// Baseline tokenizers yield plain words and never warn.
    pub fn tokenize(self, raw: &str) -> TokenizedCommand {
        let words = match self {
            Tokenizer::Slp => return lexer::tokenize(raw),
            Tokenizer::WordPunct => wordpunct_tokenize(raw),
            Tokenizer::Whitespace => whitespace_tokenize(raw),
        };
        TokenizedCommand {
            raw: raw.to_owned(),
            tokens: words.into_iter().map(Token::word).collect(),
            warnings: Vec::new(),
        }
    }
}

impl FromStr for Tokenizer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "slp" => Ok(Tokenizer::Slp),
            "wordpunct" => Ok(Tokenizer::WordPunct),
            "whitespace" => Ok(Tokenizer::Whitespace),
            other => Err(format!(
                "unknown tokenizer `{other}` (expected slp, wordpunct or whitespace)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub commands: Vec<TokenizedCommand>,
    pub labels: Option<Vec<u8>>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    pub fn with_labels(mut self, labels: Vec<u8>) -> Result<Self, CorpusError> {
        if labels.len() != self.commands.len() {
            return Err(CorpusError::LabelLengthMismatch {
                commands: self.commands.len(),
                labels: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(CorpusError::InvalidLabel(bad));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Build a corpus from pre-split token values (all tokens are words).
    pub fn from_token_lists<I, R, S>(rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let commands = rows
            .into_iter()
            .map(|row| {
                let tokens: Vec<Token> = row.into_iter().map(Token::word).collect();
                let raw = tokens
                    .iter()
                    .map(|t| t.value.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                TokenizedCommand {
                    raw,
                    tokens,
                    warnings: Vec::new(),
                }
            })
            .collect();
        Self {
            commands,
            labels: None,
        }
    }
}

/// Token value → occurrence count over a whole corpus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenCounter {
    counts: BTreeMap<String, u64>,
}

impl TokenCounter {
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let mut counter = Self::default();
        for cmd in &corpus.commands {
            counter.add_command(cmd);
        }
        counter
    }

    pub fn add_command(&mut self, cmd: &TokenizedCommand) {
        for value in cmd.values() {
            *self.counts.entry(value.to_owned()).or_default() += 1;
        }
    }

    /// Commutative merge.
    pub fn merge(&mut self, other: &TokenCounter) {
        for (token, n) in &other.counts {
            *self.counts.entry(token.clone()).or_default() += n;
        }
    }

    pub fn get(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Count descending, then token ascending by bytes.
    pub fn most_common(&self) -> Vec<(&str, u64)> {
        let mut entries: Vec<(&str, u64)> =
            self.counts.iter().map(|(t, &n)| (t.as_str(), n)).collect();
        entries.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| a.0.as_bytes().cmp(b.0.as_bytes()))
        });
        entries
    }

    /// `token<TAB>count` lines in [`most_common`](Self::most_common) order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (token, n) in self.most_common() {
            let _ = writeln!(out, "{token}\t{n}");
        }
        out
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for TokenCounter {
    fn from_iter<T: IntoIterator<Item = (S, u64)>>(iter: T) -> Self {
        let mut counts = BTreeMap::new();
        for (token, n) in iter {
            if n > 0 {
                *counts.entry(token.into()).or_default() += n;
            }
        }
        Self { counts }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    entries: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Duplicates after the first occurrence are dropped.
    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = Self::default();
        for e in entries {
            let e = e.into();
            if !vocab.index.contains_key(&e) {
                vocab.index.insert(e.clone(), vocab.entries.len());
                vocab.entries.push(e);
            }
        }
        vocab
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One token per line; line order is the index.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(e);
            out.push('\n');
        }
        out
    }
}

/// The `k` most frequent tokens; ties go to the lexicographically smaller
/// token.
pub fn top_k_vocabulary(counter: &TokenCounter, k: usize) -> Vocabulary {
    Vocabulary::from_entries(counter.most_common().into_iter().take(k).map(|(t, _)| t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusBuild {
    pub corpus: Corpus,
    pub counter: TokenCounter,
    /// Row index and warning for every lexer warning raised.
    pub warnings: Vec<(usize, LexWarning)>,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusOptions {
    pub tokenizer: Tokenizer,
    /// `None` disables normalization.
    pub normalizer: Option<Normalizer>,
}

impl CorpusOptions {
    pub fn new(tokenizer: Tokenizer, normalize: bool) -> Self {
        Self {
            tokenizer,
            normalizer: normalize.then(Normalizer::default),
        }
    }
}

/// Shell lexer with default normalization.
pub fn build_corpus<S: AsRef<str>>(
    raw_commands: &[S],
    use_normalization: bool,
) -> Result<CorpusBuild, CorpusError> {
    build_corpus_with(
        raw_commands,
        &CorpusOptions::new(Tokenizer::Slp, use_normalization),
    )
}

pub fn build_corpus_with<S: AsRef<str>>(
    raw_commands: &[S],
    options: &CorpusOptions,
) -> Result<CorpusBuild, CorpusError> {
    if raw_commands.is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut commands = Vec::with_capacity(raw_commands.len());
    let mut counter = TokenCounter::default();
    let mut warnings = Vec::new();
    for (row, raw) in raw_commands.iter().enumerate() {
        let raw = raw.as_ref();
        let cmd = match &options.normalizer {
            Some(n) => options.tokenizer.tokenize(&n.normalize(raw)),
            None => options.tokenizer.tokenize(raw),
        };
        warnings.extend(cmd.warnings.iter().map(|w| (row, *w)));
        counter.add_command(&cmd);
        commands.push(cmd);
    }
    Ok(CorpusBuild {
        corpus: Corpus {
            commands,
            labels: None,
        },
        counter,
        warnings,
    })
}
