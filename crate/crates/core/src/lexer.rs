//! Shell-aware lexer.
//!
//! Splits a single command line into [`Token`]s while honoring single and
//! double quotes, backslash escapes, control/redirection operators, flags,
//! `NAME=value` assignments and command substitution (`$(...)` and
//! backticks). Substitutions are lexed recursively and bracketed by explicit
//! [`TokenKind::SubstitutionOpen`] / [`TokenKind::SubstitutionClose`] tokens.
//!
//! Nothing is expanded: aliases, variables and globs stay literal.

use serde::Serialize;
use thiserror::Error;

/// Operators emitted as standalone tokens, longest first.
pub const OPERATORS: [&str; 12] = [
    "2>&1", "2>>", "2>", "||", "&&", ">>", "<<", "|", "&", ";", "<", ">",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Flag,
    Assignment,
    Operator,
    SubstitutionOpen,
    SubstitutionClose,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Token {
    pub value: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn new(value: impl Into<String>, kind: TokenKind) -> Self {
        Self {
            value: value.into(),
            kind,
        }
    }

    pub fn word(value: impl Into<String>) -> Self {
        Self::new(value, TokenKind::Word)
    }
}

/// Recoverable lexing problems. The lexer always produces a token stream;
/// these are attached to the result so strict callers can reject it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
pub enum LexWarning {
    #[error("unbalanced quote: remainder of the line taken as quoted text")]
    UnbalancedQuote,
    #[error("unbalanced command substitution: missing closing delimiter")]
    UnbalancedSubstitution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenizedCommand {
    pub raw: String,
    pub tokens: Vec<Token>,
    pub warnings: Vec<LexWarning>,
}

impl TokenizedCommand {
    pub fn values(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.value.as_str())
    }

    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// Tokenize a shell command line. Malformed input never fails; see
/// [`TokenizedCommand::warnings`].
pub fn tokenize(raw: &str) -> TokenizedCommand {
    let joined = raw.replace("\\\n", "");
    let mut lexer = Lexer {
        chars: joined.chars().collect(),
        pos: 0,
        tokens: Vec::new(),
        warnings: Vec::new(),
    };
    lexer.lex_until(Terminator::End);
    TokenizedCommand {
        raw: raw.to_owned(),
        tokens: lexer.tokens,
        warnings: lexer.warnings,
    }
}

/// Like [`tokenize`] but turns the first warning into an error.
pub fn tokenize_strict(raw: &str) -> Result<TokenizedCommand, LexWarning> {
    let cmd = tokenize(raw);
    match cmd.warnings.first() {
        Some(w) => Err(*w),
        None => Ok(cmd),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Terminator {
    End,
    Paren,
    Backtick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lead {
    Unquoted,
    Quoted,
    /// Text that directly follows a substitution inside the same word.
    Continuation,
}

#[derive(Debug, Default)]
struct Word {
    text: String,
    lead: Option<Lead>,
    after_substitution: bool,
}

impl Word {
    fn push(&mut self, c: char, quoted: bool) {
        if self.text.is_empty() {
            self.lead = Some(if self.after_substitution {
                Lead::Continuation
            } else if quoted {
                Lead::Quoted
            } else {
                Lead::Unquoted
            });
        }
        self.text.push(c);
    }

    fn at_start(&self) -> bool {
        self.text.is_empty() && !self.after_substitution
    }

    fn take(&mut self) -> Option<Token> {
        let lead = self.lead.take();
        if self.text.is_empty() {
            return None;
        }
        let value = std::mem::take(&mut self.text);
        let kind = match lead {
            Some(Lead::Unquoted) if value.starts_with(['-', '+']) => TokenKind::Flag,
            Some(Lead::Unquoted) if is_assignment(&value) => TokenKind::Assignment,
            _ => TokenKind::Word,
        };
        Some(Token { value, kind })
    }
}

/// `NAME=` optionally followed by text, NAME = `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_assignment(value: &str) -> bool {
    let Some(eq) = value.find('=') else {
        return false;
    };
    let name = &value[..eq];
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    tokens: Vec<Token>,
    warnings: Vec<LexWarning>,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        let want: Vec<char> = s.chars().collect();
        self.chars[self.pos..].starts_with(&want)
    }

    fn flush(&mut self, word: &mut Word) {
        if let Some(tok) = word.take() {
            self.tokens.push(tok);
        }
    }

    fn end_word(&mut self, word: &mut Word) {
        self.flush(word);
        word.after_substitution = false;
    }

    /// Lex until `term` (returns true) or end of input (returns false).
    fn lex_until(&mut self, term: Terminator) -> bool {
        let mut word = Word::default();
        let mut paren_depth = 0usize;
        while let Some(c) = self.peek() {
            match c {
                c if c.is_whitespace() => {
                    self.end_word(&mut word);
                    self.pos += 1;
                }
                '\\' => match self.peek_at(1) {
                    Some(next) => {
                        word.push(next, true);
                        self.pos += 2;
                    }
                    None => {
                        word.push('\\', false);
                        self.pos += 1;
                    }
                },
                '\'' => self.single_quoted(&mut word),
                '"' => self.double_quoted(&mut word),
                '`' if term == Terminator::Backtick => {
                    self.flush(&mut word);
                    self.pos += 1;
                    return true;
                }
                '`' => self.substitution(&mut word, Terminator::Backtick),
                '$' if self.peek_at(1) == Some('(') => {
                    self.substitution(&mut word, Terminator::Paren)
                }
                '$' if self.peek_at(1) == Some('{') => self.braced_parameter(&mut word),
                '(' if term == Terminator::Paren => {
                    paren_depth += 1;
                    word.push('(', false);
                    self.pos += 1;
                }
                ')' if term == Terminator::Paren => {
                    if paren_depth == 0 {
                        self.flush(&mut word);
                        self.pos += 1;
                        return true;
                    }
                    paren_depth -= 1;
                    word.push(')', false);
                    self.pos += 1;
                }
                '2' if word.at_start() && self.peek_at(1) == Some('>') => {
                    self.operator(&mut word);
                }
                '|' | '&' | ';' | '<' | '>' => self.operator(&mut word),
                _ => {
                    word.push(c, false);
                    self.pos += 1;
                }
            }
        }
        self.flush(&mut word);
        false
    }

    fn operator(&mut self, word: &mut Word) {
        self.end_word(word);
        let op = OPERATORS
            .iter()
            .find(|op| self.starts_with(op))
            .expect("caller checked an operator starts here");
        self.pos += op.chars().count();
        self.tokens.push(Token::new(*op, TokenKind::Operator));
    }

    fn single_quoted(&mut self, word: &mut Word) {
        self.pos += 1;
        loop {
            match self.peek() {
                None => {
                    self.warnings.push(LexWarning::UnbalancedQuote);
                    return;
                }
                Some('\'') => {
                    self.pos += 1;
                    return;
                }
                Some(c) => {
                    word.push(c, true);
                    self.pos += 1;
                }
            }
        }
    }

    fn double_quoted(&mut self, word: &mut Word) {
        self.pos += 1;
        loop {
            match self.peek() {
                None => {
                    self.warnings.push(LexWarning::UnbalancedQuote);
                    return;
                }
                Some('"') => {
                    self.pos += 1;
                    return;
                }
                Some('\\') => match self.peek_at(1) {
                    Some(next @ ('$' | '`' | '"' | '\\')) => {
                        word.push(next, true);
                        self.pos += 2;
                    }
                    _ => {
                        word.push('\\', true);
                        self.pos += 1;
                    }
                },
                Some('$') if self.peek_at(1) == Some('(') => {
                    self.substitution(word, Terminator::Paren)
                }
                Some('`') => self.substitution(word, Terminator::Backtick),
                Some(c) => {
                    word.push(c, true);
                    self.pos += 1;
                }
            }
        }
    }

    /// `${...}` is kept literal, including any whitespace inside the braces.
    fn braced_parameter(&mut self, word: &mut Word) {
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            word.push(c, false);
            self.pos += 1;
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return;
                    }
                }
                _ => {}
            }
        }
    }

    fn substitution(&mut self, word: &mut Word, kind: Terminator) {
        self.flush(word);
        let (open, close) = match kind {
            Terminator::Paren => ("$(", ")"),
            _ => ("`", "`"),
        };
        self.pos += open.chars().count();
        self.tokens
            .push(Token::new(open, TokenKind::SubstitutionOpen));
        if self.lex_until(kind) {
            self.tokens
                .push(Token::new(close, TokenKind::SubstitutionClose));
        } else {
            self.warnings.push(LexWarning::UnbalancedSubstitution);
        }
        word.after_substitution = true;
    }
}
