//! Inductive operations on circuits of the simple (2,2)-sparsity matroid:
//! extensions, splits and joins, their inverse reductions, a reduction search
//! and replayable construction traces.
//!
//! Labelling convention: every forward operation keeps the indices of the
//! surviving vertices and appends new vertices at the end. Joins are the
//! exception; they compact the index range after deleting vertices and report
//! the resulting maps in a [`JoinRecord`].

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, edge, Edge, Graph, GraphError};
use crate::sparsity::is_circuit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown base graph {0:?}")]
    UnknownBase(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no admissible reduction found for a graph on {} vertices", graph.n())]
    NoReduction { graph: Box<Graph> },
    #[error("trace does not reproduce the target graph")]
    TraceMismatch,
}

type Result<T> = std::result::Result<T, ConstructionError>;

fn pre<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConstructionError::Precondition(msg.into()))
}

/// The named small graphs circuits are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseName {
    #[serde(rename = "K5-e")]
    K5MinusE,
    H1,
    H2,
    K4,
}

impl BaseName {
    pub fn as_str(self) -> &'static str {
        match self {
            BaseName::K5MinusE => "K5-e",
            BaseName::H1 => "H1",
            BaseName::H2 => "H2",
            BaseName::K4 => "K4",
        }
    }

    pub fn graph(self) -> Graph {
        let one_based: &[(usize, usize)] = match self {
            BaseName::K5MinusE => &[(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (4, 5)],
            BaseName::H1 => &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 4), (3, 4), (4, 5), (4, 6), (5, 6)],
            BaseName::H2 => &[
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 7),
                (2, 3),
                (2, 4),
                (3, 4),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
            ],
            BaseName::K4 => return Graph::complete(4),
        };
        let n = one_based.iter().map(|&(_, b)| b).max().unwrap_or(0);
        Graph::new(n, one_based.iter().map(|&(a, b)| (a - 1, b - 1))).expect("static edge list")
    }
}

impl fmt::Display for BaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaseName {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K5-e" | "K5e" | "k5-e" => Ok(BaseName::K5MinusE),
            "H1" | "h1" => Ok(BaseName::H1),
            "H2" | "h2" => Ok(BaseName::H2),
            "K4" | "k4" => Ok(BaseName::K4),
            _ => Err(ConstructionError::UnknownBase(s.to_string())),
        }
    }
}

/// Looks a base graph up by name (`K5-e`, `H1`, `H2`, `K4`).
pub fn base_graph(name: &str) -> Result<Graph> {
    Ok(name.parse::<BaseName>()?.graph())
}

/// Adds vertex `n` joined to `u` and `v`.
pub fn zero_extension(g: &Graph, u: usize, v: usize) -> Result<Graph> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return pre("0-extension needs two distinct vertices");
    }
    let n = g.n();
    Ok(g.with_vertices(1).with_edge((u, n))?.with_edge((v, n))?)
}

/// Deletes `xy` and adds vertex `n` joined to `x`, `y`, `z`.
pub fn one_extension(g: &Graph, xy: Edge, z: usize) -> Result<Graph> {
    let (x, y) = g.check_edge(xy)?;
    g.check_vertex(z)?;
    if z == x || z == y {
        return pre("1-extension needs z outside the deleted edge");
    }
    let n = g.n();
    let h = g.without_edge((x, y))?.with_vertices(1);
    let edges = h.edges().iter().copied().chain([(x, n), (y, n), (z, n)]);
    let out = Graph::new(n + 1, edges)?;
    debug_assert_eq!(out.m(), g.m() + 2);
    Ok(out)
}

/// Deletes `ab` and glues a K4 minus an edge across it: new vertices `n`, `n+1`
/// adjacent to each other and to both `a` and `b`.
pub fn k4minus_extension(g: &Graph, ab: Edge) -> Result<Graph> {
    let (a, b) = g.check_edge(ab)?;
    let n = g.n();
    let h = g.without_edge((a, b))?;
    let edges = h.edges().iter().copied().chain([(a, n), (b, n), (a, n + 1), (b, n + 1), (n, n + 1)]);
    let out = Graph::new(n + 2, edges)?;
    debug_assert_eq!(out.m(), g.m() + 4);
    Ok(out)
}

/// A graph together with its circuit verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub graph: Graph,
    pub is_circuit: bool,
}

impl Outcome {
    fn judge(graph: Graph) -> Self {
        let is_circuit = is_circuit(&graph, true).is_some();
        Outcome { graph, is_circuit }
    }
}

/// Splits `v` into `v2` (keeping index `v`, adjacent to `N(v) - N1`) and a new
/// vertex `v1 = n` adjacent to `N1 + {x}`, plus the edge `v1 v2`.
///
/// `x` may be any vertex other than `v` and the members of `N1`; choosing it
/// among the neighbours kept by `v2` gives ordinary vertex splitting, and
/// `|N1| = 1` gives a 1-extension.
pub fn generalized_vertex_split(g: &Graph, v: usize, n1: &[usize], x: usize) -> Result<Outcome> {
    g.check_vertex(v)?;
    g.check_vertex(x)?;
    let mut n1 = n1.to_vec();
    n1.sort_unstable();
    if n1.windows(2).any(|w| w[0] == w[1]) {
        return pre("N1 lists a vertex twice");
    }
    if let Some(&w) = n1.iter().find(|&&w| !g.has_edge(v, w)) {
        return pre(format!("vertex {w} in N1 is not a neighbour of {v}"));
    }
    if x == v {
        return pre("x must differ from the split vertex");
    }
    if n1.binary_search(&x).is_ok() {
        return pre(format!("x = {x} already lies in N1, so the edge v1x would be doubled"));
    }
    let n = g.n();
    let v1 = n;
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| !((a == v && n1.contains(&b)) || (b == v && n1.contains(&a))))
        .chain(n1.iter().map(|&w| (w, v1)))
        .chain([(x, v1), (v, v1)]);
    let out = Graph::new(n + 1, edges)?;
    debug_assert_eq!(out.m(), g.m() + 2);
    Ok(Outcome::judge(out))
}

/// Candidate 1-reductions at a degree-3 vertex `v`: for each non-adjacent pair
/// of its neighbours (lexicographically), delete `v` and add that pair.
/// Surviving vertices are re-indexed in order.
pub fn one_reduction(g: &Graph, v: usize) -> Result<Vec<(Edge, Outcome)>> {
    g.check_vertex(v)?;
    if g.degree(v) != 3 {
        return pre(format!("1-reduction needs a degree-3 vertex; {v} has degree {}", g.degree(v)));
    }
    let nb = g.neighbours(v).to_vec();
    let (h, map) = g.remove_vertices(&[v]);
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (nb[i], nb[j]);
            if g.has_edge(a, b) {
                continue;
            }
            let r = h.with_edge((map[a].expect("kept"), map[b].expect("kept")))?;
            out.push(((a, b), Outcome::judge(r)));
        }
    }
    Ok(out)
}

/// Result of deleting `e` and contracting an adjacent `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReduction {
    /// The contracted graph with any parallel pair collapsed.
    pub graph: Graph,
    pub created_parallel: bool,
    pub is_circuit: bool,
    /// Old vertex index to new index; the endpoints of `f` share one target.
    pub map: Vec<usize>,
}

impl EdgeReduction {
    /// Admissible: simple and still a circuit.
    pub fn admissible(&self) -> bool {
        !self.created_parallel && self.is_circuit
    }
}

/// Deletes `e` and then contracts `f`, where `e` and `f` share exactly one endpoint.
pub fn edge_reduction(g: &Graph, e: Edge, f: Edge) -> Result<EdgeReduction> {
    let e = g.check_edge(e)?;
    let f = g.check_edge(f)?;
    if e == f {
        return pre("edge-reduction needs two different edges");
    }
    let shared = [e.0, e.1].into_iter().filter(|w| *w == f.0 || *w == f.1).count();
    if shared != 1 {
        return pre("edge-reduction needs edges sharing exactly one endpoint");
    }
    let h = g.without_edge(e)?;
    let c = graph::contract_edge(&h, f, true)?;
    let graph = c.simple();
    let is_circuit = !c.parallel_created && is_circuit(&graph, true).is_some();
    Ok(EdgeReduction { graph, created_parallel: c.parallel_created, is_circuit, map: c.map })
}

/// The designated elements of a join. K4 quadruples are `[a, b, c, d]` with
/// `c`, `d` the degree-3 vertices; degree-3 attachments are `(v, [a, b, c])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JoinAttach {
    /// `a1b1` in the first graph, a K4 in the second.
    One { ab: Edge, k4: [usize; 4] },
    /// A K4 in each graph.
    Two { k4_1: [usize; 4], k4_2: [usize; 4] },
    /// A degree-3 vertex in each graph with its neighbours in matching order.
    Three { v1: usize, n1: [usize; 3], v2: usize, n2: [usize; 3] },
}

impl JoinAttach {
    pub fn kind(&self) -> u8 {
        match self {
            JoinAttach::One { .. } => 1,
            JoinAttach::Two { .. } => 2,
            JoinAttach::Three { .. } => 3,
        }
    }
}

/// How the vertices of the two input graphs sit inside a join.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinRecord {
    pub attach: JoinAttach,
    pub n1: usize,
    pub n2: usize,
    /// Result index of each first-graph vertex (`None` when deleted).
    pub side1: Vec<Option<usize>>,
    pub side2: Vec<Option<usize>>,
}

fn check_k4_gadget(g: &Graph, q: [usize; 4]) -> Result<()> {
    for &w in &q {
        g.check_vertex(w)?;
    }
    let mut s = q;
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return pre("K4 attachment lists a vertex twice");
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if !g.has_edge(q[i], q[j]) {
                return pre(format!("vertices {:?} do not span a K4", q));
            }
        }
    }
    if g.degree(q[2]) != 3 || g.degree(q[3]) != 3 {
        return pre("the K4 attachment needs c and d of degree 3");
    }
    Ok(())
}

fn check_node(g: &Graph, v: usize, nb: [usize; 3]) -> Result<()> {
    g.check_vertex(v)?;
    let mut s = nb.to_vec();
    s.sort_unstable();
    if g.neighbours(v) != s.as_slice() {
        return pre(format!("{:?} is not the neighbourhood of vertex {v}", nb));
    }
    Ok(())
}

/// The 1-, 2- or 3-join of `g1` and `g2`.
///
/// First-graph vertices come first in the result, then the surviving
/// second-graph vertices; deleted vertices are squeezed out in both ranges.
pub fn join(g1: &Graph, g2: &Graph, attach: &JoinAttach) -> Result<(Graph, JoinRecord)> {
    let (n1, n2) = (g1.n(), g2.n());
    // old labels: first graph 0..n1, second graph n1..n1+n2
    let mut alias: Vec<usize> = (0..n1 + n2).collect();
    let mut deleted: Vec<usize> = Vec::new();
    let mut drop1: Vec<Edge> = Vec::new();
    let mut drop2: Vec<Edge> = Vec::new();
    let mut extra: Vec<Edge> = Vec::new();
    match *attach {
        JoinAttach::One { ab, k4 } => {
            let (a1, b1) = g1.check_edge(ab)?;
            check_k4_gadget(g2, k4)?;
            let [a2, b2, c2, d2] = k4;
            alias[n1 + a2] = a1;
            alias[n1 + b2] = b1;
            deleted.extend([n1 + c2, n1 + d2]);
            drop1.push((a1, b1));
            drop2.push(edge(a2, b2));
        }
        JoinAttach::Two { k4_1, k4_2 } => {
            check_k4_gadget(g1, k4_1)?;
            check_k4_gadget(g2, k4_2)?;
            let [a1, b1, c1, d1] = k4_1;
            let [a2, b2, c2, d2] = k4_2;
            alias[n1 + a2] = a1;
            alias[n1 + b2] = b1;
            deleted.extend([c1, d1, n1 + c2, n1 + d2]);
            drop2.push(edge(a2, b2));
        }
        JoinAttach::Three { v1, n1: nb1, v2, n2: nb2 } => {
            check_node(g1, v1, nb1)?;
            check_node(g2, v2, nb2)?;
            deleted.extend([v1, n1 + v2]);
            extra.extend((0..3).map(|i| (nb1[i], n1 + nb2[i])));
        }
    }
    let merged: Vec<usize> = (n1..n1 + n2).filter(|&w| alias[w] != w).collect();
    let mut index = vec![None; n1 + n2];
    let mut next = 0;
    for (w, slot) in index.iter_mut().enumerate() {
        if !deleted.contains(&w) && !merged.contains(&w) {
            *slot = Some(next);
            next += 1;
        }
    }
    for &w in &merged {
        index[w] = index[alias[w]];
    }
    let mut edges: Vec<Edge> = Vec::new();
    let push = |u: usize, v: usize, edges: &mut Vec<Edge>| {
        if let (Some(a), Some(b)) = (index[u], index[v]) {
            edges.push(edge(a, b));
        }
    };
    for &e in g1.edges() {
        if !drop1.contains(&e) {
            push(e.0, e.1, &mut edges);
        }
    }
    for &e in g2.edges() {
        if !drop2.contains(&e) {
            push(n1 + e.0, n1 + e.1, &mut edges);
        }
    }
    for &(u, v) in &extra {
        push(u, v, &mut edges);
    }
    let out = Graph::new(next, edges)?;
    let record = JoinRecord {
        attach: attach.clone(),
        n1,
        n2,
        side1: index[..n1].to_vec(),
        side2: index[n1..].to_vec(),
    };
    Ok((out, record))
}

/// Recovers the two joined graphs from a join result, in their original labels.
pub fn split_join(g: &Graph, record: &JoinRecord) -> Result<(Graph, Graph)> {
    let side = |map: &[Option<usize>], n: usize| -> Result<Graph> {
        let mut back = vec![None; g.n()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = *new {
                if new >= g.n() {
                    return pre("join record does not fit the graph");
                }
                back[new] = Some(old);
            }
        }
        let edges: Vec<Edge> = g
            .edges()
            .iter()
            .filter_map(|&(u, v)| Some(edge(back[u]?, back[v]?)))
            .collect();
        Ok(Graph::new(n, edges)?)
    };
    let mut h1 = side(&record.side1, record.n1)?;
    let mut h2 = side(&record.side2, record.n2)?;
    let k4_edges = |q: [usize; 4]| -> Vec<Edge> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                out.push(edge(q[i], q[j]));
            }
        }
        out
    };
    let add = |h: &Graph, es: Vec<Edge>| Graph::collapse(h.n(), h.edges().iter().copied().chain(es));
    match record.attach {
        JoinAttach::One { ab, k4 } => {
            h1 = add(&h1, vec![edge(ab.0, ab.1)])?;
            h2 = add(&h2, k4_edges(k4))?;
        }
        JoinAttach::Two { k4_1, k4_2 } => {
            h1 = add(&h1, k4_edges(k4_1))?;
            h2 = add(&h2, k4_edges(k4_2))?;
        }
        JoinAttach::Three { v1, n1, v2, n2 } => {
            h1 = add(&h1, n1.iter().map(|&w| edge(v1, w)).collect())?;
            h2 = add(&h2, n2.iter().map(|&w| edge(v2, w)).collect())?;
        }
    }
    Ok((h1, h2))
}

/// One forward construction step, in the labels of the graph it is applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum Step {
    ZeroExt { u: usize, v: usize },
    OneExt { x: usize, y: usize, z: usize },
    K4MinusExt { a: usize, b: usize },
    GenVertexSplit { v: usize, n1: Vec<usize>, x: usize },
    Join1 { other: Graph, attach: JoinAttach },
    Join2 { other: Graph, attach: JoinAttach },
    Join3 { other: Graph, attach: JoinAttach },
}

impl Step {
    /// Applies the step. Splits are returned regardless of their verdict.
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        let before = (g.n(), g.m());
        let out = match self {
            Step::ZeroExt { u, v } => zero_extension(g, *u, *v)?,
            Step::OneExt { x, y, z } => one_extension(g, edge(*x, *y), *z)?,
            Step::K4MinusExt { a, b } => k4minus_extension(g, edge(*a, *b))?,
            Step::GenVertexSplit { v, n1, x } => generalized_vertex_split(g, *v, n1, *x)?.graph,
            Step::Join1 { other, attach } | Step::Join2 { other, attach } | Step::Join3 { other, attach } => {
                let expected = match self {
                    Step::Join1 { .. } => 1,
                    Step::Join2 { .. } => 2,
                    _ => 3,
                };
                if attach.kind() != expected {
                    return pre("join step kind does not match its attachment");
                }
                join(g, other, attach)?.0
            }
        };
        let growth = match self {
            Step::ZeroExt { .. } => Some((1, 2)),
            Step::OneExt { .. } | Step::GenVertexSplit { .. } => Some((1, 2)),
            Step::K4MinusExt { .. } => Some((2, 4)),
            _ => None,
        };
        if let Some((dn, dm)) = growth {
            assert_eq!((out.n(), out.m()), (before.0 + dn, before.1 + dm), "vertex/edge bookkeeping");
        }
        Ok(out)
    }

    /// Rewrites vertex parameters through `f` (joins keep their own labels
    /// for the second graph).
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Step {
        match self {
            Step::ZeroExt { u, v } => Step::ZeroExt { u: f(*u), v: f(*v) },
            Step::OneExt { x, y, z } => Step::OneExt { x: f(*x), y: f(*y), z: f(*z) },
            Step::K4MinusExt { a, b } => Step::K4MinusExt { a: f(*a), b: f(*b) },
            Step::GenVertexSplit { v, n1, x } => {
                let mut n1: Vec<usize> = n1.iter().map(|&w| f(w)).collect();
                n1.sort_unstable();
                Step::GenVertexSplit { v: f(*v), n1, x: f(*x) }
            }
            Step::Join1 { other, attach } | Step::Join2 { other, attach } | Step::Join3 { other, attach } => {
                let attach = match *attach {
                    JoinAttach::One { ab, k4 } => JoinAttach::One { ab: edge(f(ab.0), f(ab.1)), k4 },
                    JoinAttach::Two { k4_1, k4_2 } => JoinAttach::Two { k4_1: k4_1.map(&f), k4_2 },
                    JoinAttach::Three { v1, n1, v2, n2 } => JoinAttach::Three { v1: f(v1), n1: n1.map(&f), v2, n2 },
                };
                let other = other.clone();
                match self {
                    Step::Join1 { .. } => Step::Join1 { other, attach },
                    Step::Join2 { .. } => Step::Join2 { other, attach },
                    _ => Step::Join3 { other, attach },
                }
            }
        }
    }

    fn appended(&self) -> usize {
        match self {
            Step::ZeroExt { .. } | Step::OneExt { .. } | Step::GenVertexSplit { .. } => 1,
            Step::K4MinusExt { .. } => 2,
            _ => 0,
        }
    }
}

/// A base graph, forward steps, and a final relabelling:
/// `target = replay(base, steps).relabel(relabel)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub base: BaseName,
    pub steps: Vec<Step>,
    pub relabel: Vec<usize>,
}

impl ConstructionTrace {
    /// Every intermediate graph, starting with the base (before relabelling).
    pub fn prefixes(&self) -> Result<Vec<Graph>> {
        let mut g = self.base.graph();
        let mut out = vec![g.clone()];
        for s in &self.steps {
            g = s.apply(&g)?;
            out.push(g.clone());
        }
        Ok(out)
    }

    /// The graph the trace builds, in target labels.
    pub fn replay(&self) -> Result<Graph> {
        let g = self.prefixes()?.pop().expect("base present");
        if self.relabel.len() != g.n() || !is_permutation(&self.relabel) {
            return pre("trace relabelling is not a permutation of the final vertex set");
        }
        Ok(g.relabel(&self.relabel))
    }

    /// Replays the trace, checks every prefix is a circuit and the result equals `target`.
    pub fn verify(&self, target: &Graph) -> Result<()> {
        for h in self.prefixes()? {
            if is_circuit(&h, true).is_none() {
                return pre(format!("an intermediate graph on {} vertices is not a circuit", h.n()));
            }
        }
        if &self.replay()? != target {
            return Err(ConstructionError::TraceMismatch);
        }
        Ok(())
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

/// A reduction found in some graph `G`: `step.apply(reduced).relabel(map) == G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub step: Step,
    pub reduced: Graph,
    pub map: Vec<usize>,
}

fn finish(g: &Graph, reduced: Graph, step: Step, back: Vec<usize>, created: &[usize]) -> Reduction {
    let mut map = back;
    map.extend_from_slice(created);
    debug_assert_eq!(step.apply(&reduced).expect("inverse applies").relabel(&map), *g);
    Reduction { step, reduced, map }
}

fn inverse_of(map: &[Option<usize>], len: usize) -> Vec<usize> {
    let mut back = vec![usize::MAX; len];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = *new {
            back[new] = old;
        }
    }
    back
}

/// K4-minus reductions: adjacent degree-3 vertices `u1 < u2` with the same two
/// further neighbours `a`, `b`, where `ab` is not already an edge.
pub fn k4minus_reductions(g: &Graph) -> Vec<(usize, usize, Edge)> {
    let mut out = Vec::new();
    for &(u1, u2) in g.edges() {
        if g.degree(u1) != 3 || g.degree(u2) != 3 {
            continue;
        }
        let r1: Vec<usize> = g.neighbours(u1).iter().copied().filter(|&w| w != u2).collect();
        let r2: Vec<usize> = g.neighbours(u2).iter().copied().filter(|&w| w != u1).collect();
        if r1 == r2 && !g.has_edge(r1[0], r1[1]) {
            out.push((u1, u2, (r1[0], r1[1])));
        }
    }
    out
}

/// Searches K4-minus reductions, then 1-reductions, then edge-reductions,
/// returning the first whose result is a circuit.
pub fn find_reduction(g: &Graph) -> Result<Reduction> {
    for (u1, u2, (a, b)) in k4minus_reductions(g) {
        let (h, map) = g.remove_vertices(&[u1, u2]);
        let (a2, b2) = (map[a].expect("kept"), map[b].expect("kept"));
        let r = h.with_edge((a2, b2))?;
        if is_circuit(&r, true).is_some() {
            let back = inverse_of(&map, r.n());
            return Ok(finish(g, r, Step::K4MinusExt { a: a2, b: b2 }, back, &[u1, u2]));
        }
    }
    for v in 0..g.n() {
        if g.degree(v) != 3 {
            continue;
        }
        for ((a, b), out) in one_reduction(g, v)? {
            if out.is_circuit {
                let (_, map) = g.remove_vertices(&[v]);
                let c = g.neighbours(v).iter().copied().find(|&w| w != a && w != b).expect("third neighbour");
                let step = Step::OneExt { x: map[a].unwrap(), y: map[b].unwrap(), z: map[c].unwrap() };
                let back = inverse_of(&map, out.graph.n());
                return Ok(finish(g, out.graph, step, back, &[v]));
            }
        }
    }
    for &e in g.edges() {
        for &f in g.edges() {
            if e == f {
                continue;
            }
            let s = if e.0 == f.0 || e.0 == f.1 {
                e.0
            } else if e.1 == f.0 || e.1 == f.1 {
                e.1
            } else {
                continue;
            };
            let x = if e.0 == s { e.1 } else { e.0 };
            let t = if f.0 == s { f.1 } else { f.0 };
            if x == t {
                continue;
            }
            let red = edge_reduction(g, e, f)?;
            if !red.admissible() {
                continue;
            }
            let w = red.map[s];
            let mut n1: Vec<usize> = g
                .neighbours(s)
                .iter()
                .copied()
                .filter(|&y| y != x && y != t)
                .map(|y| red.map[y])
                .collect();
            n1.sort_unstable();
            let step = Step::GenVertexSplit { v: w, n1, x: red.map[x] };
            // the merged vertex is re-created as t, the new one as s
            let mut back = vec![usize::MAX; red.graph.n()];
            for (old, &new) in red.map.iter().enumerate() {
                if old != s && old != t {
                    back[new] = old;
                }
            }
            back[w] = t;
            return Ok(finish(g, red.graph, step, back, &[s]));
        }
    }
    Err(ConstructionError::NoReduction { graph: Box::new(g.clone()) })
}

/// The base graph `g` is isomorphic to, with `base.relabel(perm) == g`.
pub fn match_base(g: &Graph) -> Option<(BaseName, Vec<usize>)> {
    [BaseName::K5MinusE, BaseName::H1]
        .into_iter()
        .find_map(|b| graph::find_isomorphism(&b.graph(), g).map(|p| (b, p)))
}

/// Reduces a circuit to `K5-e` or `H1` and returns the trace rebuilding it.
pub fn reduce_to_base(g: &Graph) -> Result<ConstructionTrace> {
    if is_circuit(g, true).is_none() {
        return pre("input is not a circuit");
    }
    let mut chain: Vec<Reduction> = Vec::new();
    let mut cur = g.clone();
    let (base, perm) = loop {
        if let Some(found) = match_base(&cur) {
            break found;
        }
        let red = find_reduction(&cur)?;
        cur = red.reduced.clone();
        chain.push(red);
    };
    // sigma: replay label -> label in the graph currently being rebuilt
    let mut sigma = perm;
    let mut steps = Vec::with_capacity(chain.len());
    for red in chain.iter().rev() {
        let mut inv = vec![0; sigma.len()];
        for (i, &s) in sigma.iter().enumerate() {
            inv[s] = i;
        }
        let step = red.step.map_vertices(|w| inv[w]);
        let mut ext = sigma.clone();
        let start = ext.len();
        ext.extend(start..start + red.step.appended());
        sigma = ext.iter().map(|&w| red.map[w]).collect();
        steps.push(step);
    }
    let trace = ConstructionTrace { base, steps, relabel: sigma };
    trace.verify(g)?;
    Ok(trace)
}

/// A random circuit on `n >= 5` vertices grown from `K5-e` or `H1` by
/// K4-minus extensions and generalised vertex splits.
pub fn random_circuit(n: usize, seed: u64) -> Result<(Graph, ConstructionTrace)> {
    if n < 5 {
        return pre("circuits have at least five vertices");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = if n >= 6 && rng.gen_bool(0.5) { BaseName::H1 } else { BaseName::K5MinusE };
    let mut g = base.graph();
    let mut steps = Vec::new();
    while g.n() < n {
        let step = if n - g.n() >= 2 && rng.gen_ratio(1, 3) {
            let &(a, b) = g.edges().choose(&mut rng).expect("circuits have edges");
            Step::K4MinusExt { a, b }
        } else {
            random_split(&g, &mut rng)
        };
        g = step.apply(&g)?;
        debug_assert!(is_circuit(&g, true).is_some());
        steps.push(step);
    }
    let relabel = (0..g.n()).collect();
    Ok((g, ConstructionTrace { base, steps, relabel }))
}

fn random_split(g: &Graph, rng: &mut ChaCha8Rng) -> Step {
    for _ in 0..64 {
        let v = rng.gen_range(0..g.n());
        let nb = g.neighbours(v);
        let n1: Vec<usize> = nb.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let x = rng.gen_range(0..g.n());
        if x == v || n1.contains(&x) {
            continue;
        }
        if let Ok(out) = generalized_vertex_split(g, v, &n1, x) {
            if out.is_circuit {
                return Step::GenVertexSplit { v, n1, x };
            }
        }
    }
    // |N1| = 1 is a 1-extension, which always preserves circuits
    let &(v, a) = g.edges().choose(rng).expect("circuits have edges");
    let x = (0..g.n()).filter(|&w| w != v && w != a).collect::<Vec<_>>()[rng.gen_range(0..g.n() - 2)];
    Step::GenVertexSplit { v, n1: vec![a], x }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5e() -> Graph {
        BaseName::K5MinusE.graph()
    }

    #[test]
    fn base_graph_sizes() {
        assert_eq!((k5e().n(), k5e().m()), (5, 9));
        assert!(!k5e().has_edge(2, 4));
        let h1 = base_graph("H1").unwrap();
        assert_eq!((h1.n(), h1.m()), (6, 11));
        let h2 = base_graph("H2").unwrap();
        assert_eq!((h2.n(), h2.m()), (7, 13));
        assert!(matches!(base_graph("K7"), Err(ConstructionError::UnknownBase(_))));
        for b in [BaseName::K5MinusE, BaseName::H1, BaseName::H2] {
            assert!(is_circuit(&b.graph(), true).is_some(), "{b}");
        }
    }

    #[test]
    fn one_extension_examples() {
        let g = one_extension(&k5e(), (0, 1), 3).unwrap();
        assert_eq!((g.n(), g.m()), (6, 11));
        assert!(is_circuit(&g, true).is_some());
        assert!(one_extension(&k5e(), (0, 1), 0).is_err());
        assert!(one_extension(&k5e(), (2, 4), 0).is_err());
    }

    #[test]
    fn k4minus_extension_examples() {
        for &e in k5e().edges() {
            let g = k4minus_extension(&k5e(), e).unwrap();
            assert_eq!((g.n(), g.m()), (7, 13));
            assert!(is_circuit(&g, true).is_some());
        }
        let h1 = BaseName::H1.graph();
        let g = k4minus_extension(&h1, (0, 1)).unwrap();
        assert_eq!(g.n(), 8);
        assert!(is_circuit(&g, true).is_some());
        assert!(matches!(k4minus_extension(&k5e(), (2, 4)), Err(ConstructionError::Graph(GraphError::MissingEdge(2, 4)))));
    }

    #[test]
    fn split_special_cases() {
        let g = k5e();
        // |N1| = 1 is a 1-extension on the edge (v, a) towards x
        let s = generalized_vertex_split(&g, 0, &[1], 3).unwrap();
        assert_eq!(s.graph, one_extension(&g, (0, 1), 3).unwrap());
        assert!(s.is_circuit);
        // x in N1 or x = v are rejected
        assert!(generalized_vertex_split(&g, 0, &[1, 2], 2).is_err());
        assert!(generalized_vertex_split(&g, 0, &[1, 2], 0).is_err());
        assert!(generalized_vertex_split(&g, 2, &[4], 1).is_err());
        // some split of a degree-4 vertex gives a 6-vertex circuit
        let v = (0..5).find(|&v| g.degree(v) == 4).unwrap();
        let nb = g.neighbours(v).to_vec();
        let mut found = false;
        for i in 0..4 {
            for j in i + 1..4 {
                for x in nb.iter().copied().filter(|&x| x != nb[i] && x != nb[j]) {
                    let out = generalized_vertex_split(&g, v, &[nb[i], nb[j]], x).unwrap();
                    assert_eq!((out.graph.n(), out.graph.m()), (6, 11));
                    found |= out.is_circuit;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn split_then_edge_reduction_round_trips() {
        // ordinary split of H1 at v4 with x among the neighbours kept by v2
        let h1 = BaseName::H1.graph();
        let out = generalized_vertex_split(&h1, 3, &[1, 2], 0).unwrap();
        assert!(out.is_circuit);
        let g = out.graph;
        let back = edge_reduction(&g, (0, 6), (3, 6)).unwrap();
        assert!(back.admissible());
        assert_eq!(back.graph, h1);
        assert!(graph::find_isomorphism(&g, &BaseName::H2.graph()).is_some());
    }

    #[test]
    fn edge_reduction_errors() {
        assert!(edge_reduction(&k5e(), (0, 1), (2, 3)).is_err());
        assert!(edge_reduction(&k5e(), (0, 1), (0, 1)).is_err());
        let tri = Graph::complete(3).with_vertices(1).with_edge((2, 3)).unwrap();
        let r = edge_reduction(&tri, (2, 3), (0, 2)).unwrap();
        assert!(r.created_parallel);
        assert!(!r.admissible());
    }

    #[test]
    fn one_reduction_examples() {
        let g = k5e();
        let v = (0..5).find(|&v| g.degree(v) == 3).unwrap();
        let cands = one_reduction(&g, v).unwrap();
        assert!(cands.iter().all(|(_, o)| !o.is_circuit));
        assert!(one_reduction(&g, 0).is_err());
    }

    #[test]
    fn joins_of_circuits() {
        let k = k5e();
        assert_eq!(k.neighbours(2), &[0, 1, 3]);
        assert_eq!(k.neighbours(4), &[0, 1, 3]);
        let three = JoinAttach::Three { v1: 2, n1: [0, 1, 3], v2: 4, n2: [0, 1, 3] };
        let (g, rec) = join(&k, &k, &three).unwrap();
        assert_eq!((g.n(), g.m()), (8, 15));
        assert!(is_circuit(&g, true).is_some());
        let (a, b) = split_join(&g, &rec).unwrap();
        assert_eq!((a, b), (k.clone(), k.clone()));

        let h1 = BaseName::H1.graph();
        let one = JoinAttach::One { ab: (0, 1), k4: [0, 3, 1, 2] };
        let (g, rec) = join(&k, &h1, &one).unwrap();
        assert_eq!(g, k4minus_extension(&k, (0, 1)).unwrap());
        assert!(is_circuit(&g, true).is_some());
        let (a, b) = split_join(&g, &rec).unwrap();
        assert_eq!((a, b), (k.clone(), h1.clone()));

        let two = JoinAttach::Two { k4_1: [0, 3, 1, 2], k4_2: [0, 3, 1, 2] };
        let (g, rec) = join(&h1, &h1, &two).unwrap();
        assert_eq!((g.n(), g.m()), (6, 11));
        assert!(is_circuit(&g, true).is_some());
        let (a, b) = split_join(&g, &rec).unwrap();
        assert_eq!((a, b), (h1.clone(), h1.clone()));

        assert!(join(&k, &k, &JoinAttach::Three { v1: 0, n1: [1, 2, 3], v2: 4, n2: [0, 1, 3] }).is_err());
    }

    #[test]
    fn reductions_of_small_circuits() {
        let h2 = BaseName::H2.graph();
        let red = find_reduction(&h2).unwrap();
        assert!(graph::find_isomorphism(&red.reduced, &BaseName::H1.graph()).is_some());
        let t = reduce_to_base(&h2).unwrap();
        assert_eq!(t.base, BaseName::H1);
        assert_eq!(t.steps.len(), 1);

        assert!(reduce_to_base(&k5e()).unwrap().steps.is_empty());

        let g = k4minus_extension(&k5e(), (0, 1)).unwrap();
        let red = find_reduction(&g).unwrap();
        assert!(matches!(red.step, Step::K4MinusExt { .. }));
        assert_eq!(red.reduced, k5e());
        assert!(reduce_to_base(&Graph::complete(4)).is_err());
    }

    #[test]
    fn random_circuits_replay() {
        let (g, t) = random_circuit(5, 3).unwrap();
        assert_eq!(g, k5e());
        assert!(t.steps.is_empty());
        for seed in 0..20 {
            let (g, t) = random_circuit(7 + (seed as usize % 4), seed).unwrap();
            t.verify(&g).unwrap();
            let back = reduce_to_base(&g).unwrap();
            back.verify(&g).unwrap();
        }
        let (g, _) = random_circuit(7, 11).unwrap();
        assert_eq!((g.n(), g.m()), (7, 13));
        assert!(random_circuit(4, 0).is_err());
    }

    #[test]
    fn trace_json_round_trip() {
        let (_, t) = random_circuit(9, 5).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"base\""));
        let back: ConstructionTrace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
