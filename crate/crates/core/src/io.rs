//! File formats: graphs as JSON or edge lists, frameworks and stresses as
//! JSON with exact scalar literals.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::numeric::{Field, Framework, NumericError, Quadratic, Rational, Stress};

/// Version stamped on every JSON document this crate emits.
pub const FORMAT_VERSION: u32 = 1;

/// A parse failure with a 1-based position when one is known.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
        }
    }
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError::at(0, 0, message)
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends its own position to the message; keep only the cause
        let msg = e.to_string();
        let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m).to_string();
        ParseError::at(e.line(), e.column(), msg)
    }
}

/// Parses a graph, detecting JSON (`{"n": .., "edges": [[u, v], ..]}`) by a
/// leading `{` and otherwise reading an edge list: `n` on the first line,
/// then one `u v` pair per line. `#` starts a comment in edge lists.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    if text.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    parse_edge_list(text)
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut fields = Vec::new();
        let mut col = 0;
        for tok in line.split_whitespace() {
            col += line[col..].find(tok).expect("token comes from this line");
            fields.push((col + 1, tok));
            col += tok.len();
        }
        if fields.is_empty() {
            continue;
        }
        let num = |(c, t): (usize, &str)| t.parse::<usize>().map_err(|_| ParseError::at(i + 1, c, format!("expected a vertex index, found {t:?}")));
        match n {
            None => {
                if fields.len() != 1 {
                    return Err(ParseError::at(i + 1, fields[1].0, "first line must hold only the vertex count"));
                }
                n = Some(num(fields[0])?);
            }
            Some(nv) => {
                if fields.len() != 2 {
                    return Err(ParseError::at(i + 1, fields[0].0, format!("expected \"u v\", found {} fields", fields.len())));
                }
                let (u, v) = (num(fields[0])?, num(fields[1])?);
                for (x, c) in [(u, fields[0].0), (v, fields[1].0)] {
                    if x >= nv {
                        return Err(ParseError::at(i + 1, c, format!("vertex {x} out of range for {nv} vertices")));
                    }
                }
                if u == v {
                    return Err(ParseError::at(i + 1, fields[0].0, format!("loop at vertex {u}")));
                }
                if edges.iter().any(|&(a, b)| (a, b) == (u.min(v), u.max(v))) {
                    return Err(ParseError::at(i + 1, fields[0].0, format!("duplicate edge ({u}, {v})")));
                }
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    let n = n.ok_or_else(|| ParseError::whole("empty edge list: missing vertex count"))?;
    Graph::new(n, edges).map_err(|e| ParseError::whole(e.to_string()))
}

/// Edge-list text for `g`.
pub fn edge_list(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Pretty JSON for `g`.
pub fn graph_json(g: &Graph) -> String {
    serde_json::to_string_pretty(g).expect("graphs serialise")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointLiteral {
    pub x: String,
    pub y: String,
    pub z: String,
}

/// On-disk framework: literals are `p/q` or, with `scalar = quadratic`,
/// `p/q+r/s*s` where `s` is `sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameworkFile {
    pub graph: Graph,
    pub scalar: ScalarKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    pub points: Vec<PointLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<String>>,
}

impl FrameworkFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("framework files serialise")
    }

    fn literal(&self, s: &str) -> Result<Quadratic, NumericError> {
        match self.scalar {
            ScalarKind::Rational => Ok(Quadratic::rational(crate::numeric::parse_rational(s)?)),
            ScalarKind::Quadratic => Quadratic::parse(s, self.d.unwrap_or(2)),
        }
    }

    /// Builds the framework, checking the cylinder equation exactly.
    pub fn framework(&self) -> Result<Framework<Quadratic>, NumericError> {
        let points = self
            .points
            .iter()
            .map(|p| Ok([self.literal(&p.x)?, self.literal(&p.y)?, self.literal(&p.z)?]))
            .collect::<Result<Vec<_>, NumericError>>()?;
        let radii = match &self.radii {
            None => None,
            Some(r) => Some(r.iter().map(|s| self.literal(s)).collect::<Result<Vec<_>, _>>()?),
        };
        Framework::new(self.graph.clone(), points, radii, 0.0)
    }

    pub fn from_quadratic(f: &Framework<Quadratic>) -> Self {
        let d = f.points().iter().flatten().chain(f.radii()).map(Quadratic::d).find(|&d| d != 0);
        let lit = |q: &Quadratic| q.to_string();
        FrameworkFile {
            graph: f.graph().clone(),
            scalar: if d.is_some() { ScalarKind::Quadratic } else { ScalarKind::Rational },
            d,
            points: f.points().iter().map(|p| PointLiteral { x: lit(&p[0]), y: lit(&p[1]), z: lit(&p[2]) }).collect(),
            radii: Some(f.radii().iter().map(lit).collect()),
        }
    }

    pub fn from_rational(f: &Framework<Rational>) -> Self {
        let q = f.map(|x| Quadratic::rational(x.clone()), 0.0).expect("rational frameworks embed");
        Self::from_quadratic(&q)
    }
}

/// A stress as emitted by the CLI, in edge order then vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StressFile {
    pub format: u32,
    pub edges: Vec<(usize, usize)>,
    pub omega: Vec<String>,
    pub lambda: Vec<String>,
}

impl StressFile {
    pub fn new<S: Field + fmt::Display>(f: &Framework<S>, s: &Stress<S>) -> Self {
        StressFile {
            format: FORMAT_VERSION,
            edges: f.graph().edges().to_vec(),
            omega: s.omega.iter().map(ToString::to_string).collect(),
            lambda: s.lambda.iter().map(ToString::to_string).collect(),
        }
    }

    /// Reads the stress back over `Q(sqrt d)`.
    pub fn stress(&self, d: u32) -> Result<Stress<Quadratic>, NumericError> {
        let p = |v: &[String]| v.iter().map(|s| Quadratic::parse(s, d)).collect::<Result<Vec<_>, _>>();
        Ok(Stress { omega: p(&self.omega)?, lambda: p(&self.lambda)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;

    #[test]
    fn json_and_edge_list_agree() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(parse_graph(&graph_json(&g)).unwrap(), g);
        assert_eq!(parse_graph(&edge_list(&g)).unwrap(), g);
        let commented = "# a square\n4\n0 1\n1 2 # side\n\n2 3\n3 0\n";
        assert_eq!(parse_graph(commented).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_carry_positions() {
        let e = parse_graph("3\n0 1\n1 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_graph("3\n0 1\n  2 7\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 5));
        let e = parse_graph("3\n1 0\n0 1\n").unwrap_err();
        assert!(e.message.contains("duplicate"));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn json_errors_carry_positions() {
        let e = parse_graph("{\"n\": 3,\n \"edges\": [[0, 1], [1]]}").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.column > 0);
        let e = parse_graph("{\"n\": 2, \"edges\": [[0, 5]]}").unwrap_err();
        assert!(e.to_string().contains("out of range"), "{e}");
    }

    #[test]
    fn framework_round_trip() {
        for case in golden::cases() {
            let f = case.framework();
            let file = FrameworkFile::from_quadratic(&f);
            assert_eq!(file.scalar, ScalarKind::Quadratic);
            let back = FrameworkFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.framework().unwrap(), f);
        }
    }

    #[test]
    fn off_cylinder_point_is_rejected() {
        let text = r#"{"graph": {"n": 2, "edges": [[0, 1]]}, "scalar": "rational",
            "points": [{"x": "1", "y": "0", "z": "0"}, {"x": "1", "y": "1", "z": "0"}]}"#;
        let file = FrameworkFile::parse(text).unwrap();
        assert_eq!(file.framework(), Err(NumericError::OffCylinder { vertex: 1 }));
    }

    #[test]
    fn stress_round_trip() {
        let case = golden::case("H1").unwrap();
        let f = case.framework();
        let s = case.stress();
        let file = StressFile::new(&f, &s);
        let back: StressFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.stress(2).unwrap(), s);
    }
}
