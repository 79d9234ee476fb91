//! Simple graphs and multigraphs on dense vertex indices `0..n`, with the
//! connectivity and separation queries used by the rigidity procedures.
//!
//! Edges are stored normalised as `(u, v)` with `u < v` and kept sorted, so
//! every iteration order in the crate is lexicographic and reproducible.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An unordered vertex pair, normalised so that `.0 < .1`.
pub type Edge = (usize, usize);

/// Normalises an unordered pair.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Default cap on `|E|` for 3-edge-separation enumeration.
pub const SEPARATION_EDGE_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(usize, usize),
    #[error("graph has {m} edges, above the enumeration cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("{0}")]
    Precondition(String),
}

/// A finite simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;
    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        Graph::new(raw.n, raw.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { n: g.n, edges: g.edges }
    }
}

impl Graph {
    /// Builds a simple graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let e = edge(u, v);
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    /// Like [`Graph::new`] but silently merges duplicate pairs.
    pub fn collapse(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { v: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            set.insert(edge(u, v));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::from_sorted(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<Edge> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            edges.push((0, n - 1));
        }
        edges.sort_unstable();
        Self::from_sorted(n, edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of an edge in the sorted edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&edge(u, v)).ok()
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        }
    }

    pub fn check_edge(&self, e: Edge) -> Result<Edge, GraphError> {
        let e = edge(e.0, e.1);
        if self.has_edge(e.0, e.1) {
            Ok(e)
        } else {
            Err(GraphError::MissingEdge(e.0, e.1))
        }
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn without_edge(&self, e: Edge) -> Result<Graph, GraphError> {
        let e = self.check_edge(e)?;
        let edges = self.edges.iter().copied().filter(|&f| f != e).collect();
        Ok(Self::from_sorted(self.n, edges))
    }

    pub fn with_edge(&self, e: Edge) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.edges.iter().copied().chain(std::iter::once(e)))
    }

    /// Adds `k` isolated vertices at indices `n..n+k`.
    pub fn with_vertices(&self, k: usize) -> Graph {
        Self::from_sorted(self.n + k, self.edges.clone())
    }

    /// Deletes a set of vertices and re-indexes the survivors in order.
    /// Returns the graph and the old-to-new map (`None` for deleted vertices).
    pub fn remove_vertices(&self, del: &[usize]) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if !del.contains(&v) {
                *slot = Some(next);
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some(edge(map[u]?, map[v]?)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        (Self::from_sorted(next, edges), map)
    }

    /// Induced subgraph on `keep` (in the given order); returns the new-to-old map.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| edge(pos[u], pos[v]))
            .collect();
        (Self::from_sorted(keep.len(), edges.into_iter().collect()), keep.to_vec())
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<Edge> = self.edges.iter().map(|&(u, v)| edge(perm[u], perm[v])).collect();
        edges.sort_unstable();
        Self::from_sorted(self.n, edges)
    }

    /// Subgraph formed by an edge subset, keeping all `n` vertices.
    pub fn edge_subgraph(&self, keep: &[Edge]) -> Graph {
        let mut edges: Vec<Edge> = keep.iter().map(|&(u, v)| edge(u, v)).collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted(self.n, edges)
    }

    pub fn to_multigraph(&self) -> MultiGraph {
        MultiGraph { n: self.n, edges: self.edges.clone() }
    }

    /// Vertices incident to at least one edge.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)))
            .collect();
        Self::from_sorted(self.n + other.n, edges)
    }
}

/// A multigraph: parallel edges allowed, loops not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl MultiGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { v: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            out.push(edge(u, v));
        }
        out.sort_unstable();
        Ok(MultiGraph { n, edges: out })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_parallel(&self) -> bool {
        self.edges.windows(2).any(|w| w[0] == w[1])
    }

    /// Collapses parallel classes; the flag reports whether any were present.
    pub fn to_simple(&self) -> (Graph, bool) {
        let g = Graph::collapse(self.n, self.edges.iter().copied()).expect("validated multigraph");
        let had = g.m() != self.m();
        (g, had)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Multigraph on the same vertices with only the listed edge positions.
    pub fn select(&self, idx: impl IntoIterator<Item = usize>) -> MultiGraph {
        let mut edges: Vec<Edge> = idx.into_iter().map(|i| self.edges[i]).collect();
        edges.sort_unstable();
        MultiGraph { n: self.n, edges }
    }
}

/// Anything that can be viewed as a vertex count plus an edge list.
pub trait EdgeSet {
    fn vertex_count(&self) -> usize;
    fn edge_list(&self) -> &[Edge];
}

impl EdgeSet for Graph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn edge_list(&self) -> &[Edge] {
        &self.edges
    }
}

impl EdgeSet for MultiGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn edge_list(&self) -> &[Edge] {
        &self.edges
    }
}

fn adjacency(n: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Connected component label per vertex, labels assigned in vertex order.
pub fn components<G: EdgeSet + ?Sized>(g: &G) -> Vec<usize> {
    let n = g.vertex_count();
    let adj = adjacency(n, g.edge_list());
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    comp
}

pub fn component_count<G: EdgeSet + ?Sized>(g: &G) -> usize {
    components(g).into_iter().max().map_or(0, |c| c + 1)
}

/// The empty and one-vertex graphs count as connected.
pub fn is_connected<G: EdgeSet + ?Sized>(g: &G) -> bool {
    component_count(g) <= 1
}

/// `|E| - |V| + c`.
pub fn cycle_space_dim<G: EdgeSet + ?Sized>(g: &G) -> usize {
    g.edge_list().len() + component_count(g) - g.vertex_count()
}

/// Cut vertices (Tarjan low-link, iterative), ascending.
pub fn articulation_points(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbour position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (u, parent, i) = *top;
            if i < g.degree(u) {
                top.2 += 1;
                let w = g.neighbours(u)[i];
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if parent != root && low[u] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

/// `n >= 3`, connected, and no cut vertex.
pub fn is_2connected(g: &Graph) -> bool {
    g.n() >= 3 && is_connected(g) && articulation_points(g).is_empty()
}

/// Result of merging two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub graph: MultiGraph,
    /// True when the merge produced at least one parallel pair.
    pub parallel_created: bool,
    /// Old vertex index to new vertex index.
    pub map: Vec<usize>,
}

impl Contraction {
    /// The simple graph underlying the result.
    pub fn simple(&self) -> Graph {
        self.graph.to_simple().0
    }
}

/// Identifies `u` and `v` (edge or not). The merged vertex takes the smaller
/// index; indices above the larger one shift down by one. Loops are dropped.
/// With `keep_simple`, parallel pairs collapse to a single edge.
pub fn identify_vertices(g: &Graph, u: usize, v: usize, keep_simple: bool) -> Result<Contraction, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(GraphError::Precondition("cannot identify a vertex with itself".into()));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let map: Vec<usize> = (0..g.n())
        .map(|w| match w.cmp(&gone) {
            std::cmp::Ordering::Less => w,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => w - 1,
        })
        .collect();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|&(a, b)| (map[a], map[b]))
        .filter(|&(a, b)| a != b)
        .map(|(a, b)| edge(a, b))
        .collect();
    edges.sort_unstable();
    let before = edges.len();
    let mut dedup = edges.clone();
    dedup.dedup();
    let parallel_created = dedup.len() != before;
    let graph = MultiGraph { n: g.n() - 1, edges: if keep_simple { dedup } else { edges } };
    Ok(Contraction { graph, parallel_created, map })
}

/// Contracts an existing edge; see [`identify_vertices`] for the labelling.
pub fn contract_edge(g: &Graph, e: Edge, keep_simple: bool) -> Result<Contraction, GraphError> {
    let e = g.check_edge(e)?;
    identify_vertices(g, e.0, e.1, keep_simple)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationKind {
    TwoVertex,
    ThreeEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shared {
    Vertices(usize, usize),
    Edges([Edge; 3]),
}

/// A 2-vertex- or 3-edge-separation `(F1, F2)`, given by the vertex sets of
/// the two induced subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub kind: SeparationKind,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub shared: Shared,
    pub trivial: bool,
}

fn induces_k4(g: &Graph, vs: &[usize]) -> bool {
    vs.len() == 4 && vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

fn components_avoiding(g: &Graph, removed_v: &[usize], removed_e: &[Edge]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX || removed_v.contains(&s) {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbours(u) {
                if comp[w] == usize::MAX && !removed_v.contains(&w) && !removed_e.contains(&edge(u, w)) {
                    comp[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Bipartitions of `parts` into two nonempty groups, part 0 always on side 1.
fn bipartitions(parts: &[Vec<usize>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let c = parts.len();
    let mut out = Vec::new();
    if !(2..=20).contains(&c) {
        return out;
    }
    for mask in 0u32..(1 << (c - 1)) {
        // bit i set => part i+1 goes to side 1
        if mask == (1 << (c - 1)) - 1 {
            continue;
        }
        let mut a = parts[0].clone();
        let mut b = Vec::new();
        for (i, p) in parts.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 1 {
                a.extend_from_slice(p);
            } else {
                b.extend_from_slice(p);
            }
        }
        a.sort_unstable();
        b.sort_unstable();
        out.push((a, b));
    }
    out
}

/// Enumerates every separation of the requested kind, ordered
/// lexicographically by the shared elements and then by `v1`.
///
/// Three-edge enumeration walks all 3-subsets of `E` and is guarded by
/// `edge_cap` (use [`SEPARATION_EDGE_CAP`] by default).
pub fn find_separations(g: &Graph, kind: SeparationKind, edge_cap: usize) -> Result<Vec<Separation>, GraphError> {
    let mut out = Vec::new();
    match kind {
        SeparationKind::TwoVertex => {
            for x in 0..g.n() {
                for y in x + 1..g.n() {
                    let parts = components_avoiding(g, &[x, y], &[]);
                    for (a, b) in bipartitions(&parts) {
                        let mut v1 = a;
                        let mut v2 = b;
                        v1.extend([x, y]);
                        v2.extend([x, y]);
                        v1.sort_unstable();
                        v2.sort_unstable();
                        let trivial = induces_k4(g, &v1) || induces_k4(g, &v2);
                        out.push(Separation { kind, v1, v2, shared: Shared::Vertices(x, y), trivial });
                    }
                }
            }
        }
        SeparationKind::ThreeEdge => {
            let m = g.m();
            if m > edge_cap {
                return Err(GraphError::TooLarge { m, cap: edge_cap });
            }
            let es = g.edges();
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        let s = [es[i], es[j], es[k]];
                        let parts = components_avoiding(g, &[], &s);
                        for (v1, v2) in bipartitions(&parts) {
                            let mut side = vec![false; g.n()];
                            for &v in &v1 {
                                side[v] = true;
                            }
                            if s.iter().all(|&(a, b)| side[a] != side[b]) {
                                let mut ends: Vec<usize> = s.iter().flat_map(|&(a, b)| [a, b]).collect();
                                ends.sort_unstable();
                                ends.dedup();
                                let trivial = ends.len() != 6;
                                out.push(Separation { kind, v1, v2, shared: Shared::Edges(s), trivial });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A vertex bijection `perm` with `g.relabel(perm) == h`, found by
/// degree-pruned backtracking. Intended for small graphs only.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.m() != h.m() {
        return None;
    }
    let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let n = g.n();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(g: &Graph, h: &Graph, v: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if v == g.n() {
            return true;
        }
        for w in 0..h.n() {
            if used[w] || g.degree(v) != h.degree(w) {
                continue;
            }
            let consistent = (0..v).all(|u| g.has_edge(u, v) == h.has_edge(perm[u], w));
            if !consistent {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            if extend(g, h, v + 1, perm, used) {
                return true;
            }
            used[w] = false;
        }
        perm[v] = usize::MAX;
        false
    }
    extend(g, h, 0, &mut perm, &mut used).then_some(perm)
}

/// Canonical edge list: the lexicographically smallest sorted edge list over
/// all vertex permutations. Exhaustive, so restricted to `n <= 8`.
pub fn canonical_form(g: &Graph) -> Result<Vec<Edge>, GraphError> {
    let n = g.n();
    if n > 8 {
        return Err(GraphError::Precondition(format!("canonical form is exhaustive; n = {n} exceeds 8")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<Edge>> = None;
    let mut scratch = Vec::with_capacity(g.m());
    loop {
        scratch.clear();
        scratch.extend(g.edges().iter().map(|&(u, v)| edge(perm[u], perm[v])));
        scratch.sort_unstable();
        if best.as_ref().is_none_or(|b| scratch < *b) {
            best = Some(scratch.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.unwrap_or_default())
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
