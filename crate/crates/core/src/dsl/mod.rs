//! Line-oriented text formats for models (`.mas`), norms (`.norm`),
//! formulas (`.ctl`) and automata (`.nfa`).
//!
//! All formats share the same lexical rules: UTF-8, any newline convention,
//! `#` starts a comment that runs to the end of the line, and tokens are
//! separated by whitespace. Identifiers are any run of characters other than
//! whitespace, `#` and `:`. `bot` stands for the undefined value.
//!
//! Model document:
//!
//! ```text
//! [agents]
//! p_1 c_1
//! [actions]
//! p_1 : bot {c_1}
//! c_1 : bot p_1
//! [states]
//! s0 s1
//! [initial]
//! s0
//! [availability]
//! s0 p_1 : bot            # state agent : actions
//! [observations]
//! s0 c_1 : idle           # state agent : value (default: the state name)
//! [transitions]
//! s0 -> s1 : bot p_1      # one action per agent, in agent order
//! [labels]
//! s1 : k=2 t_1=p_1
//! ```
//!
//! Norm document (unlisted updates keep the normative state):
//!
//! ```text
//! [norm-states]
//! q0 q1
//! [initial]
//! q0
//! [forbids]
//! s1 q0 : {c_1} bot       # state norm-state : joint action
//! [updates]
//! q0 s0 -> q1             # norm-state state -> norm-state
//! ```
//!
//! Automaton document: `states`, `alphabet`, `initial` and `final` header
//! lines followed by one `state symbol state` line per transition.

mod formula;
mod model;
mod nfa;
mod norm;

use std::fmt;

pub use formula::parse_formula;
pub use model::{parse_model, write_model};
pub use nfa::{parse_nfa, write_nfa};
pub use norm::{parse_norm, write_norm};

/// A syntax or reference error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(tok: &Token<'_>, message: impl Into<String>) -> Self {
        ParseError { line: tok.line, column: tok.column, message: message.into() }
    }

    pub(crate) fn new(line: usize, column: usize, message: impl fmt::Display) -> Self {
        ParseError { line, column, message: message.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

/// A non-empty, comment-stripped source line split into tokens. A `:` splits
/// the line into a head and a tail.
#[derive(Clone, Debug)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub head: Vec<Token<'a>>,
    pub colon: Option<Token<'a>>,
    pub tail: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn start(&self) -> Token<'a> {
        self.head.first().or(self.colon.as_ref()).copied().unwrap_or(Token { text: "", line: self.number, column: 1 })
    }
}

fn tokenize(text: &str, line: usize, column_offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(mk_token(text, s, i, line, column_offset));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(mk_token(text, s, text.len(), line, column_offset));
    }
    out
}

fn mk_token(text: &str, start: usize, end: usize, line: usize, column_offset: usize) -> Token<'_> {
    Token { text: &text[start..end], line, column: column_offset + text[..start].chars().count() + 1 }
}

pub(crate) fn lines(src: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let number = idx + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        match content.find(':') {
            Some(p) => {
                let colon_col = content[..p].chars().count() + 1;
                let head = tokenize(&content[..p], number, 0);
                let tail_text = &content[p + 1..];
                let tail = tokenize(tail_text, number, colon_col);
                out.push(Line {
                    number,
                    head,
                    colon: Some(Token { text: ":", line: number, column: colon_col }),
                    tail,
                });
            }
            None => out.push(Line { number, head: tokenize(content, number, 0), colon: None, tail: Vec::new() }),
        }
    }
    out
}

/// Splits a sectioned document into `(section header token, lines)` groups.
pub(crate) fn sections<'a>(src: &'a str, known: &[&str]) -> Result<Vec<(Token<'a>, Vec<Line<'a>>)>, ParseError> {
    let mut out: Vec<(Token<'a>, Vec<Line<'a>>)> = Vec::new();
    for line in lines(src) {
        let first = line.start();
        if line.colon.is_none() && line.head.len() == 1 && first.text.starts_with('[') && first.text.ends_with(']') {
            let name = &first.text[1..first.text.len() - 1];
            if !known.contains(&name) {
                return Err(ParseError::at(&first, format!("unknown section `{name}`")));
            }
            out.push((Token { text: name, ..first }, Vec::new()));
            continue;
        }
        match out.last_mut() {
            Some((_, body)) => body.push(line),
            None => return Err(ParseError::at(&first, "content before the first section header")),
        }
    }
    Ok(out)
}

/// Identifier check shared by the writers.
pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s != "->" && !s.chars().any(|c| c.is_whitespace() || c == '#' || c == ':')
}
