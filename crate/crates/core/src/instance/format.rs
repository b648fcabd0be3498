//! Canonical text format and its structured (JSON) mirror.
//!
//! ```text
//! # comment
//! 3          <- n
//! 1 2 2      <- n-1 edge lines "a b cost"
//! 2 3 3
//! 5 1        <- n node lines "penalty radius", ids 1..n in order
//! 1 0
//! 4 2
//! ```
//!
//! If any value carries a decimal point, every value in the file is read as
//! fixed point and multiplied by [`DECIMAL_SCALE`].

use serde::{Deserialize, Serialize};

use super::{Dsu, Edge, Instance};
use crate::error::ParseError;

pub const DECIMAL_SCALE: u64 = 1_000_000;
const DECIMAL_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

struct Line<'a> {
    no: usize,
    fields: Vec<&'a str>,
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line { no: i + 1, fields: l.split_whitespace().collect() })
        .filter(|l| !l.fields.is_empty() && !l.fields[0].starts_with('#'))
        .collect();
    let Some(first) = lines.first() else {
        return Err(ParseError::Malformed { line: 1, msg: "empty input".into() });
    };
    if first.fields.len() != 1 {
        return Err(ParseError::Malformed { line: first.no, msg: "first line must hold the node count".into() });
    }
    let n: usize = first.fields[0]
        .parse()
        .map_err(|_| ParseError::Malformed { line: first.no, msg: format!("bad node count {:?}", first.fields[0]) })?;
    if n == 0 {
        return Err(ParseError::Malformed { line: first.no, msg: "node count must be positive".into() });
    }
    let decimal = lines[1..].iter().any(|l| l.fields.iter().any(|f| f.contains('.')));
    let value = |tok: &str, line: usize| parse_value(tok, decimal, line);

    let mut rest = lines[1..].iter().peekable();
    let mut edges = Vec::with_capacity(n - 1);
    let mut dsu = Dsu::new(n);
    while let Some(l) = rest.next_if(|l| l.fields.len() == 3) {
        let a = parse_id(l.fields[0], n, l.no)?;
        let b = parse_id(l.fields[1], n, l.no)?;
        let cost = value(l.fields[2], l.no)?;
        if edges.len() == n - 1 || a == b || !dsu.union(a, b) {
            return Err(ParseError::NotATree { line: l.no, msg: format!("edge {}-{} closes a cycle", a + 1, b + 1) });
        }
        edges.push(Edge { a, b, cost });
    }
    let mut penalty = Vec::with_capacity(n);
    let mut radius = Vec::with_capacity(n);
    let mut last_line = first.no;
    for l in rest {
        if l.fields.len() != 2 {
            return Err(ParseError::Malformed {
                line: l.no,
                msg: format!("expected \"penalty radius\", got {} fields", l.fields.len()),
            });
        }
        if penalty.len() == n {
            return Err(ParseError::Malformed { line: l.no, msg: format!("more than {n} node lines") });
        }
        penalty.push(value(l.fields[0], l.no)?);
        radius.push(value(l.fields[1], l.no)?);
        last_line = l.no;
    }
    if edges.len() != n - 1 {
        return Err(ParseError::NotATree {
            line: last_line,
            msg: format!("disconnected: {} nodes need {} edges, got {}", n, n - 1, edges.len()),
        });
    }
    if penalty.len() != n {
        return Err(ParseError::Malformed { line: last_line, msg: format!("expected {} node lines, got {}", n, penalty.len()) });
    }
    let scale = if decimal { DECIMAL_SCALE } else { 1 };
    Instance::new(edges, penalty, radius).map(|i| i.with_scale(scale))
}

fn parse_id(tok: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    match tok.parse::<usize>() {
        Ok(id) if (1..=n).contains(&id) => Ok(id - 1),
        _ => Err(ParseError::Malformed { line, msg: format!("node id {tok:?} not in 1..{n}") }),
    }
}

fn parse_value(tok: &str, decimal: bool, line: usize) -> Result<u64, ParseError> {
    if tok.starts_with('-') {
        return Err(ParseError::Negative { line, value: tok.to_string() });
    }
    let bad = || ParseError::Malformed { line, msg: format!("bad number {tok:?}") };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !decimal {
        return if digits(tok) { tok.parse().map_err(|_| bad()) } else { Err(bad()) };
    }
    let (int, frac) = tok.split_once('.').unwrap_or((tok, ""));
    if !digits(int) || !(frac.is_empty() || digits(frac)) || frac.len() > DECIMAL_DIGITS {
        return Err(bad());
    }
    let int: u64 = int.parse().map_err(|_| bad())?;
    let frac_val: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let frac_val = frac_val * 10u64.pow((DECIMAL_DIGITS - frac.len()) as u32);
    int.checked_mul(DECIMAL_SCALE).and_then(|v| v.checked_add(frac_val)).ok_or_else(bad)
}

fn format_value(v: u64, scale: u64) -> String {
    if scale == 1 {
        v.to_string()
    } else {
        format!("{}.{:06}", v / DECIMAL_SCALE, v % DECIMAL_SCALE)
    }
}

pub fn serialize(t: &Instance) -> String {
    let s = t.scale();
    let mut out = format!("{}\n", t.n());
    for e in t.edges() {
        out += &format!("{} {} {}\n", e.a + 1, e.b + 1, format_value(e.cost, s));
    }
    for u in 0..t.n() {
        out += &format!("{} {}\n", format_value(t.penalty(u), s), format_value(t.radius(u), s));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct StructuredEdge {
    a: usize,
    b: usize,
    cost: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructuredNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<usize>,
    penalty: u64,
    radius: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructuredInstance {
    n: usize,
    edges: Vec<StructuredEdge>,
    nodes: Vec<StructuredNode>,
}

/// Reads `{"n":..,"edges":[{"a","b","cost"}],"nodes":[{"id"?,"penalty","radius"}]}`.
/// Error "line" numbers refer to the 1-based entry index within `edges` or `nodes`.
pub fn parse_structured(text: &str) -> Result<Instance, ParseError> {
    let doc: StructuredInstance = serde_json::from_str(text).map_err(|e| ParseError::Structured(e.to_string()))?;
    let n = doc.n;
    if n == 0 {
        return Err(ParseError::Structured("n must be positive".into()));
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    let mut dsu = Dsu::new(n);
    for (i, e) in doc.edges.iter().enumerate() {
        let line = i + 1;
        let a = parse_id(&e.a.to_string(), n, line)?;
        let b = parse_id(&e.b.to_string(), n, line)?;
        if a == b || !dsu.union(a, b) {
            return Err(ParseError::NotATree { line, msg: format!("edge {}-{} closes a cycle", a + 1, b + 1) });
        }
        edges.push(Edge { a, b, cost: e.cost });
    }
    if doc.nodes.len() != n {
        return Err(ParseError::Structured(format!("expected {} nodes, got {}", n, doc.nodes.len())));
    }
    let mut penalty = vec![0; n];
    let mut radius = vec![0; n];
    let mut seen = vec![false; n];
    for (i, node) in doc.nodes.iter().enumerate() {
        let line = i + 1;
        let id = match node.id {
            Some(id) => parse_id(&id.to_string(), n, line)?,
            None => i,
        };
        if std::mem::replace(&mut seen[id], true) {
            return Err(ParseError::DuplicateNode { line, id: id + 1 });
        }
        penalty[id] = node.penalty;
        radius[id] = node.radius;
    }
    if edges.len() != n - 1 {
        return Err(ParseError::NotATree {
            line: edges.len(),
            msg: format!("disconnected: {} nodes need {} edges, got {}", n, n - 1, edges.len()),
        });
    }
    Instance::new(edges, penalty, radius)
}

pub fn serialize_structured(t: &Instance) -> String {
    let doc = StructuredInstance {
        n: t.n(),
        edges: t.edges().iter().map(|e| StructuredEdge { a: e.a + 1, b: e.b + 1, cost: e.cost }).collect(),
        nodes: (0..t.n())
            .map(|u| StructuredNode { id: Some(u + 1), penalty: t.penalty(u), radius: t.radius(u) })
            .collect(),
    };
    serde_json::to_string(&doc).expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const INSTANCE_A: &str = "# instance A\n3\n1 2 2\n2 3 3\n5 1\n1 0\n4 2\n";

    #[test]
    fn single_node() {
        let t = parse_instance("1\n\n0 0\n").unwrap();
        assert_eq!(t.n(), 1);
        assert!(t.edges().is_empty());
    }

    #[test]
    fn instance_a_transcription() {
        let t = parse_instance(INSTANCE_A).unwrap();
        assert_eq!(t, crate::instance::tests::instance_a());
        assert_eq!(serialize(&t), INSTANCE_A.trim_start_matches("# instance A\n"));
    }

    #[test]
    fn three_edges_on_three_nodes_is_not_a_tree() {
        let err = parse_instance("3\n1 2 1\n2 3 1\n1 3 1\n0 0\n0 0\n0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::NotATree { line: 4, .. }), "{err}");
    }

    #[test]
    fn disconnected_and_malformed() {
        assert!(matches!(parse_instance("3\n1 2 1\n0 0\n0 0\n0 0\n"), Err(ParseError::NotATree { .. })));
        assert!(matches!(parse_instance("2\n1 2 x\n0 0\n0 0\n"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_instance("2\n1 2 1\n0 0\n"), Err(ParseError::Malformed { .. })));
        assert!(matches!(parse_instance("2\n1 2 -1\n0 0\n0 0\n"), Err(ParseError::Negative { line: 2, .. })));
        assert!(matches!(parse_instance("2\n1 5 1\n0 0\n0 0\n"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_instance("2\n1 1 1\n0 0\n0 0\n"), Err(ParseError::NotATree { .. })));
    }

    #[test]
    fn decimals_are_scaled() {
        let t = parse_instance("2\n1 2 1.5\n2 0\n0.000001 3\n").unwrap();
        assert_eq!(t.scale(), DECIMAL_SCALE);
        assert_eq!(t.edges()[0].cost, 1_500_000);
        assert_eq!(t.penalty(0), 2_000_000);
        assert_eq!(t.penalty(1), 1);
        assert_eq!(parse_instance(&serialize(&t)).unwrap(), t);
        assert!(parse_instance("2\n1 2 1.1234567\n0 0\n0 0\n").is_err());
    }

    #[test]
    fn structured_mirror() {
        let t = parse_instance(INSTANCE_A).unwrap();
        let json = serialize_structured(&t);
        assert_eq!(parse_structured(&json).unwrap(), t);
        let dup = r#"{"n":2,"edges":[{"a":1,"b":2,"cost":1}],"nodes":[{"id":1,"penalty":0,"radius":0},{"id":1,"penalty":0,"radius":0}]}"#;
        assert_eq!(parse_structured(dup).unwrap_err(), ParseError::DuplicateNode { line: 2, id: 1 });
    }
}
