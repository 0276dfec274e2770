//! Placeholder rewriting for volatile literals (IPv4 addresses and host
//! names) applied to raw command strings before lexing.

use std::collections::BTreeSet;
use std::path::Path;

pub const IP_PLACEHOLDER: &str = "1.1.1.1";
pub const DOMAIN_PLACEHOLDER: &str = "example.com";

pub const DEFAULT_TLDS: [&str; 11] = [
    "com", "net", "org", "io", "edu", "gov", "ru", "de", "uk", "info", "local",
];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalizationReport {
    pub output: String,
    pub ip_replacements: usize,
    pub domain_replacements: usize,
}

/// Rewrites IPs and domains. The TLD allow-list decides what counts as a
/// host name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalizer {
    tlds: BTreeSet<String>,
}

impl Default for Normalizer {
    fn default() -> Self {
        Self::with_tlds(DEFAULT_TLDS)
    }
}

impl Normalizer {
    pub fn with_tlds<I, S>(tlds: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            tlds: tlds
                .into_iter()
                .map(|t| {
                    t.as_ref()
                        .trim()
                        .trim_start_matches('.')
                        .to_ascii_lowercase()
                })
                .filter(|t| !t.is_empty())
                .collect(),
        }
    }

    /// One TLD per line; blank lines and `#` comments are skipped.
    pub fn from_tld_list(text: &str) -> Self {
        Self::with_tlds(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_tld_file(path: impl AsRef<Path>) -> std::io::Result<Self> {
        Ok(Self::from_tld_list(&std::fs::read_to_string(path)?))
    }

    pub fn tlds(&self) -> impl Iterator<Item = &str> {
        self.tlds.iter().map(String::as_str)
    }

    pub fn normalize_ips(&self, raw: &str) -> NormalizationReport {
        let (output, n) = rewrite_runs(raw, is_ip_run_char, |run, before, after| {
            let bounded = !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char);
            (bounded && is_dotted_quad(run)).then(|| IP_PLACEHOLDER.to_owned())
        });
        NormalizationReport {
            output,
            ip_replacements: n,
            domain_replacements: 0,
        }
    }

    pub fn normalize_domains(&self, raw: &str) -> NormalizationReport {
        let (output, n) = rewrite_runs(raw, is_host_run_char, |run, before, after| {
            if before.is_some_and(char::is_alphanumeric) || after.is_some_and(char::is_alphanumeric)
            {
                return None;
            }
            let host = run.trim_end_matches('.');
            self.is_hostname(host)
                .then(|| format!("{DOMAIN_PLACEHOLDER}{}", &run[host.len()..]))
        });
        NormalizationReport {
            output,
            ip_replacements: 0,
            domain_replacements: n,
        }
    }

    /// IPs first, then domains.
    pub fn normalize_report(&self, raw: &str) -> NormalizationReport {
        let ips = self.normalize_ips(raw);
        let domains = self.normalize_domains(&ips.output);
        NormalizationReport {
            output: domains.output,
            ip_replacements: ips.ip_replacements,
            domain_replacements: domains.domain_replacements,
        }
    }

    pub fn normalize(&self, raw: &str) -> String {
        self.normalize_report(raw).output
    }

    fn is_hostname(&self, candidate: &str) -> bool {
        let labels: Vec<&str> = candidate.split('.').collect();
        if labels.len() < 2 {
            return false;
        }
        let valid_labels = labels.iter().all(|l| {
            !l.is_empty()
                && !l.starts_with('-')
                && !l.ends_with('-')
                && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
        });
        let tld = labels[labels.len() - 1].to_ascii_lowercase();
        valid_labels && self.tlds.contains(&tld)
    }
}

pub fn normalize_ips(raw: &str) -> NormalizationReport {
    Normalizer::default().normalize_ips(raw)
}

pub fn normalize_domains(raw: &str) -> NormalizationReport {
    Normalizer::default().normalize_domains(raw)
}

pub fn normalize(raw: &str) -> String {
    Normalizer::default().normalize(raw)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_ip_run_char(c: char) -> bool {
    c.is_ascii_digit() || c == '.'
}

fn is_host_run_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_')
}

/// Four dot-separated octets of 1-3 digits, each at most 255.
fn is_dotted_quad(run: &str) -> bool {
    let octets: Vec<&str> = run.split('.').collect();
    octets.len() == 4
        && octets
            .iter()
            .all(|o| (1..=3).contains(&o.len()) && o.parse::<u16>().is_ok_and(|v| v <= 255))
}

/// Walk maximal runs of `in_run` characters and let `replace` substitute
/// each one, given the characters just outside the run.
fn rewrite_runs<F>(raw: &str, in_run: fn(char) -> bool, mut replace: F) -> (String, usize)
where
    F: FnMut(&str, Option<char>, Option<char>) -> Option<String>,
{
    let mut out = String::with_capacity(raw.len());
    let mut count = 0;
    let mut prev: Option<char> = None;
    let mut rest = raw;
    while let Some(c) = rest.chars().next() {
        if !in_run(c) {
            out.push(c);
            prev = Some(c);
            rest = &rest[c.len_utf8()..];
            continue;
        }
        let end = rest.find(|ch: char| !in_run(ch)).unwrap_or(rest.len());
        let run = &rest[..end];
        let after = rest[end..].chars().next();
        match replace(run, prev, after) {
            Some(placeholder) => {
                out.push_str(&placeholder);
                count += 1;
            }
            None => out.push_str(run),
        }
        prev = run.chars().next_back();
        rest = &rest[end..];
    }
    (out, count)
}
