//! Text format for PL maps: `x,y` pairs separated by `;`, rationals written
//! `p/q` or as integers. Whitespace (including newlines) is insignificant.
//!
//! ```
//! use pldyn::parse_plmap;
//! let m = parse_plmap("0,0; 1/3,1; 2/3,0; 1,1").unwrap();
//! assert_eq!(m.breakpoints().len(), 4);
//! ```

use thiserror::Error;

use crate::plmap::{PLMap, PlMapError};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error(transparent)]
    Map(#[from] PlMapError),
}

/// 1-based line and column of byte offset `at`.
fn locate(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, at: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = locate(text, at);
    ParseError::Syntax { line, column, message: message.into() }
}

/// Offset of the first non-whitespace character of `part` (which starts at
/// `base` in the original text).
fn first_non_ws(part: &str, base: usize) -> usize {
    base + part.len() - part.trim_start().len()
}

pub fn parse_plmap(text: &str) -> Result<PLMap, ParseError> {
    Ok(PLMap::new(parse_points(text)?)?)
}

/// The raw point list, without building a map.
pub fn parse_points(text: &str) -> Result<Vec<(Rational, Rational)>, ParseError> {
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    let mut offset = 0usize;
    for chunk in text.split(';') {
        let base = offset;
        offset += chunk.len() + 1;
        if chunk.trim().is_empty() {
            // Tolerate a trailing separator, nothing else.
            if base + chunk.len() >= text.len() && !points.is_empty() {
                continue;
            }
            return Err(syntax(text, first_non_ws(chunk, base), "empty point"));
        }
        let Some((xs, ys)) = chunk.split_once(',') else {
            return Err(syntax(text, first_non_ws(chunk, base), "expected `x,y`"));
        };
        if ys.contains(',') {
            let at = base + xs.len() + 1 + ys.find(',').unwrap_or(0);
            return Err(syntax(text, at, "too many coordinates"));
        }
        let x = parse_rational(xs)
            .ok_or_else(|| syntax(text, first_non_ws(xs, base), format!("bad rational `{}`", xs.trim())))?;
        let ybase = base + xs.len() + 1;
        let y = parse_rational(ys)
            .ok_or_else(|| syntax(text, first_non_ws(ys, ybase), format!("bad rational `{}`", ys.trim())))?;
        points.push((x, y));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_documented_examples() {
        let tent = parse_plmap("0,0; 1/2,1; 1,0").unwrap();
        assert_eq!(tent.to_string(), "0,0; 1/2,1; 1,0");
        let xi3 = parse_plmap(" 0 , 0 ;\n1/3,1;2/3, 0 ; 1,1 ").unwrap();
        assert_eq!(xi3.to_string(), "0,0; 1/3,1; 2/3,0; 1,1");
        assert!(parse_plmap("0,0; 1,1;").is_ok());
    }

    #[test]
    fn discontinuity_is_rejected() {
        assert_eq!(parse_plmap("0,0; 1,0; 1,1"), Err(ParseError::Map(PlMapError::NonMonotoneX { index: 2 })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_plmap("0,0;\n  1/x,1") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_plmap("0,0; 1") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_plmap("0,0; 1,1,1") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 9)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_plmap(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_plmap("0,0;;1,1"), Err(ParseError::Syntax { .. })));
    }
}
