//! Split-system input files.
//!
//! ```text
//! document  = { line } ;
//! line      = [ directive ] [ "#" comment ] newline ;
//! directive = "multiset:" tokens | "split:" tokens "|" tokens ;
//! tokens    = { token } ;
//! token     = name [ "^" count ] ;
//! ```
//!
//! Exactly one `multiset:` line is required and must precede every `split:`
//! line. Each split lists both sides explicitly; the sides must sum to the
//! ground. Element names may not contain whitespace or any of `^|#{}(),:/"`.

use std::fmt;

use splitcompat::{Multiset, Split, SplitSystem};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub ground: Multiset,
    pub system: SplitSystem,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a side of a split, checking every element against the ground.
fn parse_side(text: &str, line: usize, col0: usize, ground: &Multiset) -> Result<Multiset, ParseError> {
    let mut pos = 0;
    let mut out = Multiset::new();
    for tok in text.split_whitespace() {
        let at = pos + text[pos..].find(tok).unwrap_or(0);
        pos = at + tok.len();
        let column = col0 + at;
        let single: Multiset = tok.parse().map_err(|e| err(line, column, format!("{e}")))?;
        for (name, _) in single.iter() {
            if ground.multiplicity(name) == 0 {
                return Err(err(line, column, format!("unknown element `{name}`")));
            }
        }
        out = out.sum(&single);
    }
    Ok(out)
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut ground: Option<(Multiset, usize)> = None;
    let mut splits = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("multiset:") {
            if let Some((_, first)) = &ground {
                return Err(err(
                    line,
                    indent + 1,
                    format!("duplicate multiset line (first given on line {first})"),
                ));
            }
            let col0 = indent + "multiset:".len() + 1;
            let mut m = Multiset::new();
            let mut pos = 0;
            for tok in rest.split_whitespace() {
                let at = pos + rest[pos..].find(tok).unwrap_or(0);
                pos = at + tok.len();
                let single: Multiset = tok
                    .parse()
                    .map_err(|e| err(line, col0 + at, format!("{e}")))?;
                m = m.sum(&single);
            }
            if m.is_empty() {
                return Err(err(line, col0, "the ground multiset is empty"));
            }
            ground = Some((m, line));
        } else if let Some(rest) = trimmed.strip_prefix("split:") {
            let Some((g, _)) = &ground else {
                return Err(err(line, indent + 1, "split given before the multiset line"));
            };
            let col0 = indent + "split:".len() + 1;
            let Some(bar) = rest.find('|') else {
                return Err(err(line, col0, "expected `lhs | rhs`"));
            };
            if rest[bar + 1..].contains('|') {
                let second = bar + 1 + rest[bar + 1..].find('|').unwrap_or(0);
                return Err(err(line, col0 + second, "more than one `|`"));
            }
            let left = parse_side(&rest[..bar], line, col0, g)?;
            let right = parse_side(&rest[bar + 1..], line, col0 + bar + 1, g)?;
            let split = Split::new(g, left, right).map_err(|e| err(line, col0, format!("{e}")))?;
            splits.push(split);
        } else {
            let word: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
            return Err(err(line, indent + 1, format!("unknown directive `{word}`")));
        }
    }
    let Some((ground, _)) = ground else {
        return Err(err(1, 1, "missing `multiset:` line"));
    };
    let system = SplitSystem::new(ground.clone(), splits).map_err(|e| err(1, 1, format!("{e}")))?;
    Ok(Document { ground, system })
}

pub fn print_document(doc: &Document) -> String {
    doc.to_string()
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "multiset: {}", self.ground)?;
        for s in self.system.splits() {
            writeln!(f, "split: {} | {}", s.small(), s.large())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "# four splits\nmultiset: a^2 b^2 c^2 x y\nsplit: a b | a b c^2 x y\nsplit: a c | a b^2 c x y\nsplit: c x | a^2 b^2 c y\nsplit: a b c x | a b c y\n";

    #[test]
    fn parses_fig1() {
        let doc = parse_document(FIG1).unwrap();
        assert_eq!(doc.system.len(), 4);
        assert_eq!(doc.ground.len(), 8);
    }

    #[test]
    fn round_trip() {
        let doc = parse_document(FIG1).unwrap();
        let printed = print_document(&doc);
        assert_eq!(parse_document(&printed).unwrap(), doc);
        assert_eq!(print_document(&parse_document(&printed).unwrap()), printed);
    }

    #[test]
    fn thin_example_first_split() {
        let doc = parse_document("multiset: x^3 y z\nsplit: x x | x y z\n").unwrap();
        assert_eq!(doc.system.splits()[0].small(), &"x^2".parse().unwrap());
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_document("multiset: a b c\nsplit: a | b\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_document("multiset: a b\nsplit: a q | b\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        assert!(e.message.contains("unknown element `q`"));
        let e = parse_document("multiset: a b\nmultiset: a b\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("duplicate multiset line"));
        assert!(parse_document("split: a | b\n").is_err());
        assert!(parse_document("# nothing\n").is_err());
        assert!(parse_document("multiset: a b\nsplits: a | b\n").is_err());
    }
}
