//! Bundled benign and malicious command corpora (already normalized).

pub const BENIGN: &str = include_str!("../fixtures/benign.txt");
pub const MALICIOUS: &str = include_str!("../fixtures/malicious.txt");

/// Non-empty lines of a fixture file.
pub fn lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.trim().is_empty()).collect()
}

pub fn benign() -> Vec<&'static str> {
    lines(BENIGN)
}

pub fn malicious() -> Vec<&'static str> {
    lines(MALICIOUS)
}
