//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p slp-cli --test acceptance`.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slp_core::experiment::{run_experiment, ExperimentConfig};
use slp_core::lexer::{tokenize, Token, TokenKind};
use slp_core::model::{fit, fit_traced, roc_auc, GbdtParams, Node};
use slp_core::{
    build_corpus_with, encode_label, encode_onehot, encode_tfidf, fixtures, normalize,
    top_k_vocabulary, whitespace_tokenize, wordpunct_tokenize, Corpus, CorpusOptions, SparseMatrix,
    TokenCounter, Tokenizer,
};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn golden_tokenization() -> Check {
    use TokenKind::*;
    let start = Instant::now();
    // input, typed slp tokens, whitespace split, wordpunct split
    type Case = (
        &'static str,
        Vec<(&'static str, TokenKind)>,
        Vec<&'static str>,
        Vec<&'static str>,
    );
    let cases: [Case; 3] = [
        (
            r"sed 's/^chr//;s/\..* / /' filename",
            vec![
                ("sed", Word),
                (r"s/^chr//;s/\..* / /", Word),
                ("filename", Word),
            ],
            vec!["sed", r"'s/^chr//;s/\..*", "/", "/'", "filename"],
            vec![
                "sed", "'", "s", "/^", "chr", "//;", "s", r"/\..*", "/", "/'", "filename",
            ],
        ),
        (
            "java -Xms256m -Xmx2048m -jar remoting.jar",
            vec![
                ("java", Word),
                ("-Xms256m", Flag),
                ("-Xmx2048m", Flag),
                ("-jar", Flag),
                ("remoting.jar", Word),
            ],
            vec!["java", "-Xms256m", "-Xmx2048m", "-jar", "remoting.jar"],
            vec![
                "java", "-", "Xms256m", "-", "Xmx2048m", "-", "jar", "remoting", ".", "jar",
            ],
        ),
        (
            "export IP=$(dig +short example.com)",
            vec![
                ("export", Word),
                ("IP=", Assignment),
                ("$(", SubstitutionOpen),
                ("dig", Word),
                ("+short", Flag),
                ("example.com", Word),
                (")", SubstitutionClose),
            ],
            vec!["export", "IP=$(dig", "+short", "example.com)"],
            vec![
                "export", "IP", "=$(", "dig", "+", "short", "example", ".", "com", ")",
            ],
        ),
    ];
    let (mut ws_differs, mut wp_differs) = (0, 0);
    for (raw, want, want_ws, want_wp) in cases {
        let got = tokenize(raw);
        let want: Vec<Token> = want.into_iter().map(|(v, k)| Token::new(v, k)).collect();
        ensure(got.tokens == want, || {
            format!("slp on {raw:?}: {:?}", got.tokens)
        })?;
        ensure(got.is_clean(), || format!("warnings on {raw:?}"))?;
        let slp: Vec<&str> = got.values().collect();
        let ws = whitespace_tokenize(raw);
        let wp = wordpunct_tokenize(raw);
        ensure(ws == want_ws, || format!("whitespace on {raw:?}: {ws:?}"))?;
        ensure(wp == want_wp, || format!("wordpunct on {raw:?}: {wp:?}"))?;
        ws_differs += usize::from(slp != ws);
        wp_differs += usize::from(slp != wp);
    }
    // whitespace splitting happens to get the java line right
    ensure(ws_differs > 0 && wp_differs > 0, || {
        "a baseline matches slp everywhere".to_owned()
    })?;
    within(Duration::from_secs(1), start)?;
    Ok(format!(
        "3 examples exact; whitespace differs on {ws_differs}, wordpunct on {wp_differs} ({:.2?})",
        start.elapsed()
    ))
}

fn encoder_oracles() -> Check {
    const ALPHABET: [&str; 6] = ["cat", "-n", "|", "nc", "1.1.1.1", "X=1"];
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let distinct = rng.gen_range(1..=ALPHABET.len());
        let rows: Vec<Vec<String>> = (0..rng.gen_range(1..=5))
            .map(|_| {
                (0..rng.gen_range(0..=8))
                    .map(|_| ALPHABET[rng.gen_range(0..distinct)].to_owned())
                    .collect()
            })
            .collect();
        let corpus = Corpus::from_token_lists(rows.clone());
        let k = rng.gen_range(1..=6);
        let vocab = top_k_vocabulary(&TokenCounter::from_corpus(&corpus), k);
        let entries = oracles::naive_top_k(&rows, k);
        ensure(vocab.entries() == &entries[..], || {
            format!("vocabulary, trial {trial}")
        })?;
        ensure(
            encode_onehot(&corpus, &vocab).to_dense() == oracles::naive_onehot(&rows, &entries),
            || format!("one-hot, trial {trial}"),
        )?;
        let got = encode_tfidf(&corpus, &vocab).to_dense();
        let want = oracles::naive_tfidf(&rows, &entries);
        for (g, w) in got.iter().flatten().zip(want.iter().flatten()) {
            worst = worst.max((g - w).abs());
        }
        ensure(worst <= 1e-9, || {
            format!("tf-idf, trial {trial}: deviation {worst:e}")
        })?;
        let seq_len = rng.gen_range(1..=8);
        let label: Vec<Vec<u32>> = encode_label(&corpus, &vocab, seq_len)
            .rows()
            .map(<[u32]>::to_vec)
            .collect();
        ensure(
            label == oracles::naive_label(&rows, &entries, seq_len),
            || format!("label, trial {trial}"),
        )?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "200 trials, max tf-idf deviation {worst:.1e} ({:.2?})",
        start.elapsed()
    ))
}

fn tfidf_row_norms() -> Check {
    let benign = fixtures::benign();
    let malicious = fixtures::malicious();
    let both: Vec<&str> = benign.iter().chain(&malicious).copied().collect();
    let mut rows_checked = 0;
    let mut worst = 0.0f64;
    for lines in [&benign, &malicious, &both] {
        for tokenizer in Tokenizer::ALL {
            let built = build_corpus_with(lines, &CorpusOptions::new(tokenizer, true))
                .map_err(|e| e.to_string())?;
            let vocab = top_k_vocabulary(&built.counter, 100);
            let x = encode_tfidf(&built.corpus, &vocab);
            for i in 0..x.n_rows() {
                let (_, values) = x.row(i);
                if values.is_empty() {
                    continue;
                }
                let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
                worst = worst.max((norm - 1.0).abs());
                rows_checked += 1;
            }
        }
    }
    ensure(worst <= 1e-9, || format!("max |norm - 1| = {worst:e}"))?;
    Ok(format!(
        "{rows_checked} nonzero rows, max |norm - 1| = {worst:.1e}"
    ))
}

fn fixture_task() -> Result<(SparseMatrix, Vec<u8>), String> {
    let benign = fixtures::benign();
    let malicious = fixtures::malicious();
    let lines: Vec<&str> = benign.iter().chain(&malicious).copied().collect();
    let y = std::iter::repeat_n(0, benign.len())
        .chain(std::iter::repeat_n(1, malicious.len()))
        .collect();
    let built = build_corpus_with(&lines, &CorpusOptions::new(Tokenizer::Slp, true))
        .map_err(|e| e.to_string())?;
    let vocab = top_k_vocabulary(&built.counter, 100);
    Ok((encode_tfidf(&built.corpus, &vocab), y))
}

fn stump_oracle_and_loss() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let params = GbdtParams {
        n_rounds: 1,
        max_depth: 1,
        ..GbdtParams::default()
    };
    let mut splits = 0;
    let mut instance = 0;
    while instance < 100 {
        let n = rng.gen_range(2..=20);
        let m = rng.gen_range(1..=10);
        let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        if y.iter().all(|&l| l == y[0]) {
            continue;
        }
        let levels = rng.gen_range(1..=6);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| rng.gen_range(0..levels) as f64 / 4.0)
                    .collect()
            })
            .collect();
        let columns: Vec<Vec<f64>> = (0..m)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        let x = SparseMatrix::from_dense(&rows, m).map_err(|e| e.to_string())?;
        let model = fit(&x, &y, &params).map_err(|e| e.to_string())?;
        let got = match &model.trees[0] {
            Node::Leaf { .. } => None,
            Node::Split {
                feature, threshold, ..
            } => Some(oracles::StumpChoice {
                feature: *feature,
                threshold: *threshold,
            }),
        };
        let want = oracles::exhaustive_stump(&columns, &y, 1);
        ensure(got == want, || {
            format!("instance {instance}: got {got:?}, want {want:?}")
        })?;
        splits += usize::from(got.is_some());
        instance += 1;
    }
    let (x, y) = fixture_task()?;
    let (_, losses) = fit_traced(&x, &y, &GbdtParams::default()).map_err(|e| e.to_string())?;
    for (round, w) in losses.windows(2).enumerate() {
        ensure(w[1] <= w[0], || {
            format!("loss rose at round {}: {} -> {}", round + 1, w[0], w[1])
        })?;
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "100 stumps exact ({splits} splits), loss {:.4} -> {:.4} non-increasing ({:.2?})",
        losses[0],
        losses[losses.len() - 1],
        start.elapsed()
    ))
}

fn auc_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.gen_range(2..=50);
        let y: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        if y.iter().all(|&l| l == y[0]) {
            continue;
        }
        let levels = rng.gen_range(1..=10);
        let scores: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0..levels) as f64 / 10.0)
            .collect();
        let got = roc_auc(&y, &scores);
        let want = oracles::pairwise_auc(&y, &scores);
        ensure(got == Some(want), || {
            format!("vector {checked}: {got:?} vs {want}")
        })?;
        checked += 1;
    }
    Ok("100 tied score vectors exact".to_owned())
}

fn directional_table() -> Check {
    let start = Instant::now();
    let report = run_experiment(
        &fixtures::benign(),
        &fixtures::malicious(),
        &ExperimentConfig::default(),
        &Tokenizer::ALL,
    )
    .map_err(|e| e.to_string())?;
    let cv = |t| report.row(t).expect("row per tokenizer").cv;
    let (slp, wp, ws) = (
        cv(Tokenizer::Slp),
        cv(Tokenizer::WordPunct),
        cv(Tokenizer::Whitespace),
    );
    let summary = format!(
        "F1 slp {:.4} / wordpunct {:.4} / whitespace {:.4}; recall {:.4} / {:.4} / {:.4} ({:.2?})",
        slp.f1,
        wp.f1,
        ws.f1,
        slp.recall,
        wp.recall,
        ws.recall,
        start.elapsed()
    );
    ensure(slp.f1 - wp.f1 >= 0.1 && slp.f1 - ws.f1 >= 0.1, || {
        format!("F1 margin below 0.1: {summary}")
    })?;
    ensure(slp.recall > wp.recall && slp.recall > ws.recall, || {
        format!("recall not highest: {summary}")
    })?;
    within(Duration::from_secs(60), start)?;
    Ok(summary)
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn deterministic_cli() -> Check {
    let dir = fixture_dir();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_slp"))
            .arg("experiment")
            .arg("--benign")
            .arg(dir.join("benign.txt"))
            .arg("--malicious")
            .arg(dir.join("malicious.txt"))
            .arg("--all-tokenizers")
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    ensure(first.status.success(), || {
        String::from_utf8_lossy(&first.stderr).into_owned()
    })?;
    ensure(first.stdout == second.stdout, || {
        "stdout differs between runs".to_owned()
    })?;
    Ok(format!("{} identical bytes", first.stdout.len()))
}

/// Maximal runs of digits and dots that split into exactly four numeric
/// parts.
fn dotted_quads(line: &str) -> Vec<&str> {
    line.split(|c: char| !(c.is_ascii_digit() || c == '.'))
        .map(|run| run.trim_matches('.'))
        .filter(|run| {
            let parts: Vec<&str> = run.split('.').collect();
            parts.len() == 4 && parts.iter().all(|p| (1..=3).contains(&p.len()))
        })
        .collect()
}

fn normalization_fixed_point() -> Check {
    let mut lines = 0;
    for line in fixtures::benign().into_iter().chain(fixtures::malicious()) {
        let once = normalize(line);
        ensure(normalize(&once) == once, || {
            format!("not idempotent: {line:?}")
        })?;
        ensure(once == line, || {
            format!("fixture not pre-normalized: {line:?}")
        })?;
        let stray: Vec<&str> = dotted_quads(&once)
            .into_iter()
            .filter(|q| *q != "1.1.1.1")
            .collect();
        ensure(stray.is_empty(), || format!("{stray:?} left in {once:?}"))?;
        lines += 1;
    }
    Ok(format!("{lines} lines idempotent, only 1.1.1.1 remains"))
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("golden tokenization", golden_tokenization),
        ("encoder oracles", encoder_oracles),
        ("tf-idf row norms", tfidf_row_norms),
        ("stump oracle + loss", stump_oracle_and_loss),
        ("auc oracle", auc_oracle),
        ("tokenizer comparison", directional_table),
        ("cli determinism", deterministic_cli),
        ("normalization", normalization_fixed_point),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
