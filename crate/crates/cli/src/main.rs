use std::error::Error;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slp_core::corpus::TokenCounter;
use slp_core::encoders::DEFAULT_SEQ_LEN;
use slp_core::experiment::DEFAULT_TOP_TOKENS;
use slp_core::model::cv::DEFAULT_FOLDS;
use slp_core::svmlight::write_svmlight;
use slp_core::{
    build_corpus_with, encode_label, encode_onehot, encode_tfidf, run_experiment, top_k_vocabulary,
    CorpusOptions, Encoding, ExperimentConfig, GbdtParams, Normalizer, Tokenizer,
};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "slp",
    version,
    about = "Shell command tokenization, encoding and classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one JSON array of tokens per input line.
    Tokenize(TokenizeArgs),
    /// Encode commands as svmlight rows (or id rows for `label`).
    Encode(EncodeArgs),
    /// Train and evaluate boosted trees on benign vs malicious commands.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct Preprocessing {
    #[arg(long, value_enum, default_value_t = TokenizerArg::Slp)]
    tokenizer: TokenizerArg,
    /// Keep IPs and domains as written.
    #[arg(long)]
    no_normalize: bool,
    /// TLD allow-list for domain normalization, one per line.
    #[arg(long, value_name = "F")]
    tlds: Option<PathBuf>,
}

impl Preprocessing {
    fn normalizer(&self) -> Result<Option<Normalizer>> {
        if self.no_normalize {
            return Ok(None);
        }
        match &self.tlds {
            Some(path) => Ok(Some(Normalizer::from_tld_list(&read_text(path)?))),
            None => Ok(Some(Normalizer::default())),
        }
    }

    fn options(&self) -> Result<CorpusOptions> {
        Ok(CorpusOptions {
            tokenizer: self.tokenizer.into(),
            normalizer: self.normalizer()?,
        })
    }
}

#[derive(Args)]
struct TokenizeArgs {
    #[arg(long, value_name = "F")]
    input: PathBuf,
    #[command(flatten)]
    pre: Preprocessing,
    /// Write `token<TAB>count` lines, most frequent first.
    #[arg(long, value_name = "F")]
    counter: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long, value_name = "F")]
    input: PathBuf,
    /// One `0` or `1` per line, matching the input lines.
    #[arg(long, value_name = "F")]
    labels: Option<PathBuf>,
    #[arg(long, value_enum)]
    encoding: EncodingArg,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_TOP_TOKENS, value_parser = at_least_one)]
    top_tokens: usize,
    #[arg(long, value_name = "L", default_value_t = DEFAULT_SEQ_LEN, value_parser = at_least_one)]
    seq_len: usize,
    #[arg(long, value_name = "F")]
    out: Option<PathBuf>,
    /// Write the vocabulary, one token per line in column order.
    #[arg(long, value_name = "F")]
    vocab: Option<PathBuf>,
    #[command(flatten)]
    pre: Preprocessing,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_name = "F")]
    benign: PathBuf,
    #[arg(long, value_name = "F")]
    malicious: PathBuf,
    /// Compare slp, wordpunct and whitespace with identical settings.
    #[arg(long)]
    all_tokenizers: bool,
    #[arg(long, value_enum, default_value_t = EncodingArg::Tfidf)]
    encoding: EncodingArg,
    #[arg(long, value_name = "N", default_value_t = DEFAULT_TOP_TOKENS, value_parser = at_least_one)]
    top_tokens: usize,
    #[arg(long, value_name = "L", default_value_t = DEFAULT_SEQ_LEN, value_parser = at_least_one)]
    seq_len: usize,
    #[arg(long, value_name = "K", default_value_t = DEFAULT_FOLDS, value_parser = at_least_two)]
    folds: usize,
    #[arg(long, value_name = "N", default_value_t = GbdtParams::default().n_rounds, value_parser = at_least_one)]
    rounds: usize,
    #[arg(long, value_name = "D", default_value_t = GbdtParams::default().max_depth, value_parser = at_least_one)]
    depth: usize,
    #[arg(long, default_value_t = GbdtParams::default().learning_rate)]
    learning_rate: f64,
    /// Print the report as JSON instead of tables.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    pre: Preprocessing,
}

#[derive(Clone, Copy, ValueEnum)]
enum TokenizerArg {
    Slp,
    Wordpunct,
    Whitespace,
}

impl From<TokenizerArg> for Tokenizer {
    fn from(t: TokenizerArg) -> Self {
        match t {
            TokenizerArg::Slp => Tokenizer::Slp,
            TokenizerArg::Wordpunct => Tokenizer::WordPunct,
            TokenizerArg::Whitespace => Tokenizer::Whitespace,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Tfidf,
    Onehot,
    Label,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Tfidf => Encoding::Tfidf,
            EncodingArg::Onehot => Encoding::Onehot,
            EncodingArg::Label => Encoding::Label,
        }
    }
}

fn at_least(min: usize, s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= min => Ok(n),
        Ok(_) => Err(format!("must be at least {min}")),
        Err(e) => Err(e.to_string()),
    }
}

fn at_least_one(s: &str) -> std::result::Result<usize, String> {
    at_least(1, s)
}

/// Cross-validation needs a held-out fold and a training remainder.
fn at_least_two(s: &str) -> std::result::Result<usize, String> {
    at_least(2, s)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Every line of the file, blank ones included, so rows line up with a
/// labels file.
fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_owned())
        .collect())
}

/// Non-blank lines only; used where each line is a sample.
fn read_samples(path: &Path) -> Result<Vec<String>> {
    Ok(read_lines(path)?
        .into_iter()
        .filter(|l| !l.trim().is_empty())
        .collect())
}

fn read_labels(path: &Path) -> Result<Vec<u8>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, l)| match l.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(format!(
                "{}:{}: expected 0 or 1, found `{other}`",
                path.display(),
                i + 1
            )
            .into()),
        })
        .collect()
}

fn tokenize(args: &TokenizeArgs) -> Result<()> {
    let lines = read_lines(&args.input)?;
    let options = args.pre.options()?;
    let mut counter = TokenCounter::default();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    for (i, line) in lines.iter().enumerate() {
        let text = match &options.normalizer {
            Some(n) => n.normalize(line),
            None => line.clone(),
        };
        let cmd = options.tokenizer.tokenize(&text);
        for w in &cmd.warnings {
            eprintln!("{}:{}: warning: {w}", args.input.display(), i + 1);
        }
        let values: Vec<&str> = cmd.values().collect();
        writeln!(out, "{}", serde_json::to_string(&values)?)?;
        counter.add_command(&cmd);
    }
    out.flush()?;
    if let Some(path) = &args.counter {
        write_text(path, &counter.to_tsv())?;
    }
    Ok(())
}

fn encode(args: &EncodeArgs) -> Result<()> {
    let lines = read_lines(&args.input)?;
    let build = build_corpus_with(&lines, &args.pre.options()?)?;
    for (row, w) in &build.warnings {
        eprintln!("{}:{}: warning: {w}", args.input.display(), row + 1);
    }
    let corpus = match &args.labels {
        Some(path) => build.corpus.with_labels(read_labels(path)?)?,
        None => build.corpus,
    };
    let vocab = top_k_vocabulary(&build.counter, args.top_tokens);
    let text = match args.encoding.into() {
        Encoding::Tfidf => {
            write_svmlight(&encode_tfidf(&corpus, &vocab), corpus.labels.as_deref())?
        }
        Encoding::Onehot => {
            write_svmlight(&encode_onehot(&corpus, &vocab), corpus.labels.as_deref())?
        }
        Encoding::Label => encode_label(&corpus, &vocab, args.seq_len).to_text(),
    };
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(path) = &args.vocab {
        write_text(path, &vocab.to_lines())?;
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs) -> Result<()> {
    let benign = read_samples(&args.benign)?;
    let malicious = read_samples(&args.malicious)?;
    let config = ExperimentConfig {
        tokenizer: args.pre.tokenizer.into(),
        encoding: args.encoding.into(),
        top_tokens: args.top_tokens,
        seq_len: args.seq_len,
        folds: args.folds,
        normalizer: args.pre.normalizer()?,
        params: GbdtParams {
            n_rounds: args.rounds,
            max_depth: args.depth,
            learning_rate: args.learning_rate,
            ..GbdtParams::default()
        },
    };
    let tokenizers: Vec<Tokenizer> = if args.all_tokenizers {
        Tokenizer::ALL.to_vec()
    } else {
        vec![config.tokenizer]
    };
    let report = run_experiment(&benign, &malicious, &config, &tokenizers)?;
    let text = if args.json {
        serde_json::to_string_pretty(&report)? + "\n"
    } else {
        report.to_table()
    };
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tokenize(args) => tokenize(args),
        Command::Encode(args) => encode(args),
        Command::Experiment(args) => experiment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
