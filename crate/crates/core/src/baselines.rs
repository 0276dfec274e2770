//! Generic text tokenizers used as comparison points for the shell lexer.

/// Split on maximal runs of Unicode whitespace.
pub fn whitespace_tokenize(raw: &str) -> Vec<String> {
    raw.split_whitespace().map(str::to_owned).collect()
}

/// Maximal runs of word characters, or maximal runs of characters that are
/// neither word characters nor whitespace (the `\w+|[^\w\s]+` pattern).
pub fn wordpunct_tokenize(raw: &str) -> Vec<String> {
    #[derive(PartialEq, Clone, Copy)]
    enum Class {
        Word,
        Punct,
        Space,
    }
    let class = |c: char| {
        if c.is_alphanumeric() || c == '_' {
            Class::Word
        } else if c.is_whitespace() {
            Class::Space
        } else {
            Class::Punct
        }
    };

    let mut out = Vec::new();
    let mut current = String::new();
    let mut current_class = Class::Space;
    for c in raw.chars() {
        let cls = class(c);
        if cls != current_class && !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
        if cls != Class::Space {
            current.push(c);
        }
        current_class = cls;
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}
