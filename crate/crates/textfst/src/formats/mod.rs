//! Text formats for every model the CLI reads or writes.

pub mod app;
pub mod dataset;
pub mod dlist;
pub mod fst;
pub mod lm;
pub mod tree;

/// A malformed line in an input file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

pub type Parsed<T> = Result<T, ParseError>;

pub(crate) fn err<T>(line: usize, msg: impl Into<String>) -> Parsed<T> {
    Err(ParseError { line, msg: msg.into() })
}

pub(crate) fn num(line: usize, s: &str) -> Parsed<f64> {
    match s.parse::<f64>() {
        Ok(x) if !x.is_nan() => Ok(x),
        _ => err(line, format!("bad number `{s}`")),
    }
}

/// Non-empty lines, numbered from 1.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r'))).filter(|(_, l)| !l.trim().is_empty())
}

/// Non-empty lines that are not `#` comments, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r'))).filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}
