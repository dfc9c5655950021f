use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ResolutionGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective,
    MissingField,
    TrailingField,
    BadName,
    BadWeight,
    DuplicateVertex,
    UnknownVertex,
    DuplicateEdge,
    SelfLoop,
    Empty,
}

impl ParseErrorKind {
    fn describe(self) -> &'static str {
        match self {
            ParseErrorKind::UnknownDirective => "unknown directive",
            ParseErrorKind::MissingField => "missing field",
            ParseErrorKind::TrailingField => "unexpected trailing field",
            ParseErrorKind::BadName => "vertex names must match [A-Za-z0-9_]+",
            ParseErrorKind::BadWeight => "weight must be a positive decimal integer",
            ParseErrorKind::DuplicateVertex => "duplicate vertex",
            ParseErrorKind::UnknownVertex => "edge references unknown vertex",
            ParseErrorKind::DuplicateEdge => "duplicate edge",
            ParseErrorKind::SelfLoop => "self-loop",
            ParseErrorKind::Empty => "graph has no vertices",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {}: `{token}`", kind.describe())]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub kind: ParseErrorKind,
}

fn err(line: usize, token: &str, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line,
        token: token.to_string(),
        kind,
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertex a 3
/// vertex b 2
/// edge a b
/// ```
///
/// Declarations may come in any order; an edge may precede its vertices.
pub fn parse_graph(text: &str) -> Result<ResolutionGraph, ParseError> {
    let mut vertices: BTreeMap<String, u32> = BTreeMap::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let directive = fields.next().unwrap();
        match directive {
            "vertex" => {
                let name = fields
                    .next()
                    .ok_or_else(|| err(line, trimmed, ParseErrorKind::MissingField))?;
                let weight = fields
                    .next()
                    .ok_or_else(|| err(line, trimmed, ParseErrorKind::MissingField))?;
                if let Some(extra) = fields.next() {
                    return Err(err(line, extra, ParseErrorKind::TrailingField));
                }
                if !valid_name(name) {
                    return Err(err(line, name, ParseErrorKind::BadName));
                }
                let w: u32 = weight
                    .parse()
                    .ok()
                    .filter(|&w| w > 0 && weight.chars().all(|c| c.is_ascii_digit()))
                    .ok_or_else(|| err(line, weight, ParseErrorKind::BadWeight))?;
                if vertices.insert(name.to_string(), w).is_some() {
                    return Err(err(line, name, ParseErrorKind::DuplicateVertex));
                }
            }
            "edge" => {
                let a = fields
                    .next()
                    .ok_or_else(|| err(line, trimmed, ParseErrorKind::MissingField))?;
                let b = fields
                    .next()
                    .ok_or_else(|| err(line, trimmed, ParseErrorKind::MissingField))?;
                if let Some(extra) = fields.next() {
                    return Err(err(line, extra, ParseErrorKind::TrailingField));
                }
                for n in [a, b] {
                    if !valid_name(n) {
                        return Err(err(line, n, ParseErrorKind::BadName));
                    }
                }
                edges.push((line, a.to_string(), b.to_string()));
            }
            other => return Err(err(line, other, ParseErrorKind::UnknownDirective)),
        }
    }

    let mut seen = BTreeSet::new();
    for (line, a, b) in &edges {
        for n in [a, b] {
            if !vertices.contains_key(n) {
                return Err(err(*line, n, ParseErrorKind::UnknownVertex));
            }
        }
        if a == b {
            return Err(err(*line, a, ParseErrorKind::SelfLoop));
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !seen.insert(key) {
            return Err(err(*line, &format!("{a} {b}"), ParseErrorKind::DuplicateEdge));
        }
    }
    if vertices.is_empty() {
        return Err(err(0, "", ParseErrorKind::Empty));
    }

    let vertex_list: Vec<(&str, u32)> = vertices.iter().map(|(n, &w)| (n.as_str(), w)).collect();
    let edge_list: Vec<(&str, &str)> = edges
        .iter()
        .map(|(_, a, b)| (a.as_str(), b.as_str()))
        .collect();
    Ok(ResolutionGraph::new(&vertex_list, &edge_list).expect("checked above"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertex_graph() {
        let g = parse_graph("vertex a 3\nvertex b 2\nedge a b").unwrap();
        assert_eq!(g.names(), ["a", "b"]);
        assert_eq!(g.weights(), [3, 2]);
        assert_eq!(g.edges(), [(0, 1)]);
    }

    #[test]
    fn single_vertex() {
        let g = parse_graph("vertex a 4").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.weight(0), 4);
    }

    #[test]
    fn declaration_order_is_irrelevant() {
        let g = parse_graph("# late vertices\nedge b a\n\nvertex b 2\nvertex a 3\n").unwrap();
        assert_eq!(g, parse_graph("vertex a 3\nvertex b 2\nedge a b").unwrap());
    }

    #[test]
    fn unknown_vertex_reports_line() {
        let e = parse_graph("edge a b").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(e.kind, ParseErrorKind::UnknownVertex);
        assert_eq!(e.token, "a");
    }

    #[test]
    fn error_kinds() {
        let kind = |t: &str| parse_graph(t).unwrap_err();
        let e = kind("vertex a 2\nvertex a 3");
        assert_eq!((e.line, e.kind, e.token.as_str()), (2, ParseErrorKind::DuplicateVertex, "a"));
        let e = kind("vertex a 2\nvertex b 2\nedge a b\nedge b a");
        assert_eq!((e.line, e.kind), (4, ParseErrorKind::DuplicateEdge));
        let e = kind("vertex a 2\nedge a a");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::SelfLoop));
        assert_eq!(kind("vertex a 0").kind, ParseErrorKind::BadWeight);
        assert_eq!(kind("vertex a -2").kind, ParseErrorKind::BadWeight);
        assert_eq!(kind("vertex a+ 2").kind, ParseErrorKind::BadName);
        assert_eq!(kind("node a 2").kind, ParseErrorKind::UnknownDirective);
        assert_eq!(kind("vertex a").kind, ParseErrorKind::MissingField);
        assert_eq!(kind("vertex a 2 3").kind, ParseErrorKind::TrailingField);
        assert_eq!(kind("# nothing\n").kind, ParseErrorKind::Empty);
    }
}
