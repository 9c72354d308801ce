//! Helpers shared by the line-oriented text formats.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message} (expected {expected})")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
    pub expected: &'static str,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>, expected: &'static str) -> Self {
        ParseError {
            line,
            message: message.into(),
            expected,
        }
    }
}

/// Nonempty lines with `#` comments stripped, numbered from 1.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Splits `key: value`, returning `None` when the line has another shape.
pub fn key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once(':')?;
    let k = k.trim();
    if k.is_empty() || k.contains(char::is_whitespace) {
        return None;
    }
    Some((k, v.trim()))
}

pub fn parse_usize(line: usize, token: &str, expected: &'static str) -> Result<usize, ParseError> {
    token
        .trim()
        .parse()
        .map_err(|_| ParseError::new(line, format!("`{token}` is not a natural number"), expected))
}
