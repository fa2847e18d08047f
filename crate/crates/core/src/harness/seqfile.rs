//! Text formats: sequences (one color per line) and query lists
//! (`a b [k]` per line). `#` starts a comment.

use std::fmt::Write as _;

use crate::{Color, Error, Result};

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_sequence(text: &str) -> Result<Vec<Color>> {
    let mut seq = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let c = line
            .parse::<Color>()
            .map_err(|_| Error::Format(format!("line {}: expected a color, got {line:?}", i + 1)))?;
        seq.push(c);
    }
    Ok(seq)
}

pub fn format_sequence(seq: &[Color]) -> String {
    let mut s = String::with_capacity(seq.len() * 4);
    for c in seq {
        let _ = writeln!(s, "{c}");
    }
    s
}

/// One query line: a window and an optional rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryLine {
    pub line: usize,
    pub a: usize,
    pub b: usize,
    pub k: Option<usize>,
}

pub fn parse_queries(text: &str) -> Result<Vec<QueryLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let err = || Error::Format(format!("line {}: expected `a b [k]`, got {line:?}", i + 1));
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err()))
            .collect::<Result<_>>()?;
        let (a, b, k) = match nums[..] {
            [a, b] => (a, b, None),
            [a, b, k] => (a, b, Some(k)),
            _ => return Err(err()),
        };
        out.push(QueryLine { line: i + 1, a, b, k });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_roundtrip_and_comments() {
        let seq = parse_sequence("# colors\n3\n 1 \n\n7 # seven\n").unwrap();
        assert_eq!(seq, vec![3, 1, 7]);
        assert_eq!(parse_sequence(&format_sequence(&seq)).unwrap(), seq);
    }

    #[test]
    fn bad_lines_are_located() {
        let e = parse_sequence("1\n2\nx\n").unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
        assert!(parse_sequence("-1").is_err());
        let e = parse_queries("1 2\n1\n").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn queries() {
        let q = parse_queries("1 4\n# skip\n2 3 1\n").unwrap();
        assert_eq!(q[0], QueryLine { line: 1, a: 1, b: 4, k: None });
        assert_eq!(q[1], QueryLine { line: 3, a: 2, b: 3, k: Some(1) });
    }
}
