//! The (2,2)-sparsity matroid on multigraphs and its simple restriction.
//!
//! A set of edges `F` is independent in the (2,2)-count matroid when every
//! nonempty `F' ⊆ F` spans at least `|F'|/2 + 1` vertices, i.e.
//! `|F'| <= 2|V(F')| - 2`. The simple restriction additionally treats every
//! parallel pair as dependent. Independence is decided with a pebble game:
//! each vertex starts with two pebbles and an edge `uv` is accepted when three
//! pebbles can be collected on `{u, v}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Edge, EdgeSet, Graph, GraphError, MultiGraph};

/// Default cap on `|E|` for circuit enumeration and ear decompositions.
pub const CIRCUIT_EDGE_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SparsityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has {m} edges, above the circuit-enumeration cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Mutable pebble-game scratch state for a `(k, l)` count matroid.
///
/// Accepted edges are kept oriented away from the vertex whose pebble covers
/// them; `pebbles + accepted == k * n` holds after every insertion.
#[derive(Clone, Debug)]
pub(crate) struct PebbleGame {
    k: usize,
    l: usize,
    pebbles: Vec<usize>,
    out: Vec<Vec<usize>>,
    accepted: usize,
    // scratch
    seen: Vec<u32>,
    stamp: u32,
    parent: Vec<usize>,
}

impl PebbleGame {
    pub(crate) fn new22(n: usize) -> Self {
        Self::new(n, 2, 2)
    }

    fn new(n: usize, k: usize, l: usize) -> Self {
        assert!(l < 2 * k);
        PebbleGame {
            k,
            l,
            pebbles: vec![k; n],
            out: vec![Vec::new(); n],
            accepted: 0,
            seen: vec![0; n],
            stamp: 0,
            parent: vec![usize::MAX; n],
        }
    }

    #[cfg(test)]
    pub(crate) fn free_pebbles(&self) -> usize {
        self.pebbles.iter().sum()
    }

    #[cfg(test)]
    pub(crate) fn accepted(&self) -> usize {
        self.accepted
    }

    /// Moves one pebble onto `root` along a reversed path, never visiting `blocked`.
    fn gather(&mut self, root: usize, blocked: usize) -> bool {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.seen[root] = stamp;
        self.seen[blocked] = stamp;
        let mut stack = vec![root];
        let mut found = None;
        'search: while let Some(u) = stack.pop() {
            for &w in &self.out[u] {
                if self.seen[w] == stamp {
                    continue;
                }
                self.seen[w] = stamp;
                self.parent[w] = u;
                if self.pebbles[w] > 0 {
                    found = Some(w);
                    break 'search;
                }
                stack.push(w);
            }
        }
        let Some(mut w) = found else {
            return false;
        };
        self.pebbles[w] -= 1;
        while w != root {
            let p = self.parent[w];
            let pos = self.out[p].iter().position(|&x| x == w).expect("arc on search path");
            self.out[p].swap_remove(pos);
            self.out[w].push(p);
            w = p;
        }
        self.pebbles[root] += 1;
        true
    }

    /// Tries to accept `uv`; on success the edge is added to the oriented set.
    pub(crate) fn insert(&mut self, u: usize, v: usize) -> bool {
        debug_assert_ne!(u, v);
        while self.pebbles[u] < self.k && self.gather(u, v) {}
        while self.pebbles[v] < self.k && self.gather(v, u) {}
        if self.pebbles[u] + self.pebbles[v] > self.l {
            let from = if self.pebbles[u] > 0 { u } else { v };
            let to = if from == u { v } else { u };
            self.pebbles[from] -= 1;
            self.out[from].push(to);
            self.accepted += 1;
            true
        } else {
            false
        }
    }
}

/// Positions (into `edges`) of the edges accepted when inserting in the given order.
pub(crate) fn accepted_positions(n: usize, edges: &[Edge], simple: bool) -> Vec<usize> {
    let mut game = PebbleGame::new22(n);
    let mut taken: Vec<Edge> = Vec::new();
    let mut out = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if simple && taken.contains(&(u, v)) {
            continue;
        }
        if game.insert(u, v) {
            taken.push((u, v));
            out.push(i);
        }
    }
    out
}

fn rank_of(n: usize, edges: &[Edge], simple: bool) -> usize {
    accepted_positions(n, edges, simple).len()
}

/// Matroid rank of the edge set. With `simple_restriction`, parallel copies of
/// accepted edges are rejected (every parallel pair is dependent).
pub fn rank22<G: EdgeSet + ?Sized>(g: &G, simple_restriction: bool) -> usize {
    let mut edges = g.edge_list().to_vec();
    edges.sort_unstable();
    rank_of(g.vertex_count(), &edges, simple_restriction)
}

/// A maximal independent subset, as positions into `g.edge_list()`.
pub fn basis22<G: EdgeSet + ?Sized>(g: &G, simple_restriction: bool) -> Vec<usize> {
    accepted_positions(g.vertex_count(), g.edge_list(), simple_restriction)
}

pub fn is_independent<G: EdgeSet + ?Sized>(g: &G, simple_restriction: bool) -> bool {
    rank22(g, simple_restriction) == g.edge_list().len()
}

/// A circuit of the matroid: its edges and the vertices they touch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitWitness {
    pub edges: Vec<Edge>,
    pub vertex_support: Vec<usize>,
}

impl CircuitWitness {
    fn from_edges(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        let mut vs: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        CircuitWitness { edges, vertex_support: vs }
    }

    /// `|C| = 2|V(C)| - 1`.
    pub fn count_holds(&self) -> bool {
        self.edges.len() + 1 == 2 * self.vertex_support.len()
    }

    /// Re-checks minimal dependence from scratch.
    pub fn verify(&self, n: usize, simple_restriction: bool) -> bool {
        is_minimally_dependent(n, &self.edges, simple_restriction)
    }
}

fn is_minimally_dependent(n: usize, edges: &[Edge], simple: bool) -> bool {
    let m = edges.len();
    if m == 0 || rank_of(n, edges, simple) == m {
        return false;
    }
    let mut rest = Vec::with_capacity(m - 1);
    (0..m).all(|i| {
        rest.clear();
        rest.extend(edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e));
        rank_of(n, &rest, simple) == m - 1
    })
}

/// Decides whether `g` is a circuit: `E(g)` is minimally dependent and no
/// vertex is isolated. The returned witness always spans every vertex.
///
/// Minimally dependent sets satisfy `|C| = 2|V(C)| - 1`, except parallel pairs
/// under the simple restriction, so other edge counts are rejected up front.
pub fn is_circuit<G: EdgeSet + ?Sized>(g: &G, simple_restriction: bool) -> Option<CircuitWitness> {
    let n = g.vertex_count();
    let edges = g.edge_list();
    let m = edges.len();
    let mut touched = vec![false; n];
    for &(u, v) in edges {
        touched[u] = true;
        touched[v] = true;
    }
    if n == 0 || touched.iter().any(|t| !t) {
        return None;
    }
    let parallel_pair = simple_restriction && m == 2 && edges[0] == edges[1];
    if m + 1 != 2 * n && !parallel_pair {
        return None;
    }
    is_minimally_dependent(n, edges, simple_restriction).then(|| CircuitWitness::from_edges(edges.to_vec()))
}

/// Complete on at most three vertices, or rank `2n - 2`.
pub fn is_rigid_comb(g: &Graph) -> bool {
    (g.n() <= 3 && g.is_complete()) || rank22(g, true) + 2 == 2 * g.n()
}

/// First edge whose deletion destroys rigidity, if any.
pub fn non_redundant_edge(g: &Graph) -> Option<Edge> {
    g.edges().iter().copied().find(|&e| !is_rigid_comb(&g.without_edge(e).expect("own edge")))
}

/// `G - e` rigid for every edge `e`.
pub fn is_redundantly_rigid(g: &Graph) -> bool {
    non_redundant_edge(g).is_none()
}

/// Whether `e` lies in some circuit: `rank(E - e) = rank(E)`.
pub fn edge_in_circuit(g: &Graph, e: Edge) -> Result<bool, SparsityError> {
    let h = g.without_edge(e)?;
    Ok(rank22(&h, true) == rank22(g, true))
}

/// Whether `v` lies on some circuit (equivalently, some incident edge does).
pub fn vertex_in_circuit(g: &Graph, v: usize) -> Result<bool, SparsityError> {
    g.check_vertex(v)?;
    let full = rank22(g, true);
    Ok(g.neighbours(v)
        .iter()
        .any(|&w| rank22(&g.without_edge((v, w)).expect("incident edge"), true) == full))
}

/// The circuit formed by `e` with a basis of `E - e`, when `e` is spanned by `E - e`.
pub fn fundamental_circuit(g: &Graph, e: Edge) -> Result<Option<CircuitWitness>, SparsityError> {
    let e = g.check_edge(e)?;
    let rest: Vec<Edge> = g.edges().iter().copied().filter(|&f| f != e).collect();
    let basis: Vec<Edge> = accepted_positions(g.n(), &rest, true).into_iter().map(|i| rest[i]).collect();
    let mut with_e = basis.clone();
    with_e.push(e);
    if rank_of(g.n(), &with_e, true) == with_e.len() {
        return Ok(None);
    }
    // f belongs to the circuit iff removing it from B + e restores independence
    let mut circuit = vec![e];
    for (i, &f) in basis.iter().enumerate() {
        let trial: Vec<Edge> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .chain(std::iter::once(e))
            .collect();
        if rank_of(g.n(), &trial, true) == trial.len() {
            circuit.push(f);
        }
    }
    Ok(Some(CircuitWitness::from_edges(circuit)))
}

/// A circuit through `v`, if one exists.
pub fn circuit_through_vertex(g: &Graph, v: usize) -> Result<Option<CircuitWitness>, SparsityError> {
    g.check_vertex(v)?;
    for &w in g.neighbours(v) {
        if let Some(c) = fundamental_circuit(g, (v, w))? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Matroid connectivity via the 2-connected + redundantly rigid characterisation.
pub fn is_matroid_connected(g: &Graph) -> bool {
    graph::is_2connected(g) && is_redundantly_rigid(g)
}

struct Combinations {
    idx: Vec<usize>,
    n: usize,
    first: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { idx: (0..k).collect(), n, first: true }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] != i + self.n - k {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        None
    }
}

/// Every circuit of the simple matroid on `E(g)`, ordered by size and then
/// lexicographically. Exponential; refuses graphs with more than `cap` edges.
pub fn enumerate_circuits(g: &Graph, cap: usize) -> Result<Vec<Vec<Edge>>, SparsityError> {
    if g.m() > cap {
        return Err(SparsityError::TooLarge { m: g.m(), cap });
    }
    let n = g.n();
    if n > 24 {
        return Err(SparsityError::TooLarge { m: g.m(), cap });
    }
    let mut out = Vec::new();
    // a circuit on vertex set W has 2|W| - 1 edges inside W, so |W| >= 5
    for mask in 1u32..(1u32 << n) {
        let w = mask.count_ones() as usize;
        if w < 5 {
            continue;
        }
        let inside: Vec<Edge> = g.edges().iter().copied().filter(|&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).collect();
        let size = 2 * w - 1;
        if inside.len() < size || rank_of(n, &inside, true) + 2 != 2 * w {
            continue;
        }
        for pick in Combinations::new(inside.len(), size) {
            let cand: Vec<Edge> = pick.iter().map(|&i| inside[i]).collect();
            let mut cover = 0u32;
            for &(u, v) in &cand {
                cover |= 1 << u | 1 << v;
            }
            if cover == mask && is_minimally_dependent(n, &cand, true) {
                out.push(cand);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Definitional matroid connectivity: every pair of edges lies in a common
/// circuit. Brute force, for cross-checking on small graphs.
pub fn matroid_connected_by_circuits(g: &Graph, cap: usize) -> Result<bool, SparsityError> {
    let circuits = enumerate_circuits(g, cap)?;
    let m = g.m();
    if m == 0 {
        return Ok(false);
    }
    let mut together = vec![vec![false; m]; m];
    for c in &circuits {
        let ids: Vec<usize> = c.iter().map(|&(u, v)| g.edge_index(u, v).expect("edge")).collect();
        for &a in &ids {
            for &b in &ids {
                together[a][b] = true;
            }
        }
    }
    Ok((0..m).all(|a| (0..m).all(|b| together[a][b])))
}

fn difference(c: &[Edge], d: &[Edge]) -> Vec<Edge> {
    c.iter().copied().filter(|e| d.binary_search(e).is_err()).collect()
}

fn meets(c: &[Edge], d: &[Edge]) -> bool {
    c.iter().any(|e| d.binary_search(e).is_ok())
}

/// Greedy ear decomposition over the enumerated circuit list: each new ear
/// meets the covered set and adds the fewest new edges, which makes it
/// minimal in the containment order required of ears.
pub fn ear_decomposition(g: &Graph, cap: usize) -> Result<Vec<CircuitWitness>, SparsityError> {
    if g.m() > cap {
        return Err(SparsityError::TooLarge { m: g.m(), cap });
    }
    if !is_matroid_connected(g) {
        return Err(SparsityError::Precondition("the sparsity matroid is not connected".into()));
    }
    let circuits = enumerate_circuits(g, cap)?;
    let first = circuits.first().ok_or_else(|| SparsityError::Precondition("no circuits".into()))?;
    let mut covered: Vec<Edge> = first.clone();
    let mut ears = vec![CircuitWitness::from_edges(first.clone())];
    while covered.len() < g.m() {
        let next = circuits
            .iter()
            .filter(|c| meets(c, &covered))
            .map(|c| (difference(c, &covered).len(), c))
            .filter(|&(k, _)| k > 0)
            .min_by_key(|&(k, _)| k)
            .map(|(_, c)| c)
            .ok_or_else(|| SparsityError::Precondition("no ear extends the covered set".into()))?;
        covered.extend(difference(next, &covered));
        covered.sort_unstable();
        ears.push(CircuitWitness::from_edges(next.clone()));
    }
    Ok(ears)
}

/// Literal re-check of the three ear conditions against a circuit list.
pub fn verify_ear_decomposition(g: &Graph, ears: &[CircuitWitness], circuits: &[Vec<Edge>]) -> bool {
    if ears.is_empty() {
        return false;
    }
    let mut covered: Vec<Edge> = Vec::new();
    for (i, ear) in ears.iter().enumerate() {
        if !ear.verify(g.n(), true) || !circuits.contains(&ear.edges) {
            return false;
        }
        if i > 0 {
            let new = difference(&ear.edges, &covered);
            if !meets(&ear.edges, &covered) || new.is_empty() {
                return false;
            }
            let properly_smaller = circuits.iter().any(|c| {
                if !meets(c, &covered) {
                    return false;
                }
                let cn = difference(c, &covered);
                !cn.is_empty() && cn.len() < new.len() && cn.iter().all(|e| new.contains(e))
            });
            if properly_smaller {
                return false;
            }
        }
        covered.extend(difference(&ear.edges, &covered));
        covered.sort_unstable();
    }
    covered == g.edges()
}

/// `|E| = 2|V| - 1` for the multigraph of `edges` restricted to its support.
pub fn support_count(edges: &[Edge]) -> (usize, usize) {
    let mut vs: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vs.sort_unstable();
    vs.dedup();
    (edges.len(), vs.len())
}

/// The multigraph matroid's rank on the edges of `h`.
pub fn rank_multigraph(h: &MultiGraph) -> usize {
    rank22(h, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5e() -> Graph {
        Graph::new(5, Graph::complete(5).edges().iter().copied().filter(|&e| e != (2, 4))).unwrap()
    }

    fn h1() -> Graph {
        let e = [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 4), (3, 4), (4, 5), (4, 6), (5, 6)];
        Graph::new(6, e.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    #[test]
    fn pebble_count_invariant() {
        let g = Graph::complete(6);
        let mut game = PebbleGame::new22(6);
        for &(u, v) in g.edges() {
            game.insert(u, v);
            assert_eq!(game.free_pebbles() + game.accepted(), 12);
        }
        assert_eq!(game.accepted(), 10);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank22(&k5e(), true), 8);
        assert_eq!(rank22(&Graph::empty(4), true), 0);
        assert_eq!(rank22(&Graph::complete(4), true), 6);
        let par = MultiGraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(rank22(&par, false), 2);
        assert_eq!(rank22(&par, true), 1);
    }

    #[test]
    fn circuit_examples() {
        let w = is_circuit(&k5e(), true).expect("K5-e is a circuit");
        assert!(w.count_holds());
        assert!(is_circuit(&Graph::complete(4), true).is_none());
        assert!(is_circuit(&h1(), true).is_some());
        // isolated vertex disqualifies the graph
        assert!(is_circuit(&k5e().with_vertices(1), true).is_none());
        let pair = MultiGraph::new(2, [(0, 1), (0, 1)]).unwrap();
        let w = is_circuit(&pair, true).unwrap();
        assert!(!w.count_holds());
        assert!(is_circuit(&pair, false).is_none());
        let triple = MultiGraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(is_circuit(&triple, false).is_some());
    }

    #[test]
    fn rigidity_examples() {
        assert!(is_rigid_comb(&Graph::complete(3)));
        assert!(is_rigid_comb(&Graph::complete(1)));
        assert!(is_rigid_comb(&k5e()));
        assert!(!is_rigid_comb(&Graph::path(4)));
        assert!(is_redundantly_rigid(&k5e()));
        assert!(!is_redundantly_rigid(&Graph::complete(4)));
        assert!(is_redundantly_rigid(&h1()));
    }

    fn k5e_with_pendant() -> Graph {
        // vertex 5 joined to 0 and 1
        k5e().with_vertices(1).with_edge((5, 0)).unwrap().with_edge((5, 1)).unwrap()
    }

    #[test]
    fn circuit_membership() {
        let g = k5e();
        for &e in g.edges() {
            assert!(edge_in_circuit(&g, e).unwrap());
        }
        let p = k5e_with_pendant();
        assert!(!edge_in_circuit(&p, (0, 5)).unwrap());
        assert!(!edge_in_circuit(&p, (1, 5)).unwrap());
        assert!(!vertex_in_circuit(&p, 5).unwrap());
        for v in 0..5 {
            assert!(vertex_in_circuit(&p, v).unwrap());
            let c = circuit_through_vertex(&p, v).unwrap().unwrap();
            assert!(c.vertex_support.contains(&v));
            assert!(c.verify(6, true));
        }
        assert!(circuit_through_vertex(&p, 5).unwrap().is_none());
        assert!(matches!(edge_in_circuit(&p, (2, 4)), Err(SparsityError::Graph(GraphError::MissingEdge(2, 4)))));
        assert!(vertex_in_circuit(&p, 9).is_err());
    }

    #[test]
    fn matroid_connectivity_examples() {
        assert!(is_matroid_connected(&k5e()));
        let two = k5e().disjoint_union(&k5e());
        // glue vertex 0 of the second copy onto vertex 0 of the first
        let glued = crate::graph::identify_vertices(&two, 0, 5, true).unwrap().simple();
        assert!(!is_matroid_connected(&glued));
        assert!(!is_matroid_connected(&Graph::complete(4)));
    }

    #[test]
    fn ear_examples() {
        let ears = ear_decomposition(&k5e(), CIRCUIT_EDGE_CAP).unwrap();
        assert_eq!(ears.len(), 1);
        assert_eq!(ears[0].edges, k5e().edges());

        let k5 = Graph::complete(5);
        let ears = ear_decomposition(&k5, CIRCUIT_EDGE_CAP).unwrap();
        assert_eq!(ears.len(), 2);
        assert_eq!(ears[0].edges.len(), 9);
        let circuits = enumerate_circuits(&k5, CIRCUIT_EDGE_CAP).unwrap();
        assert_eq!(circuits.len(), 10);
        assert!(verify_ear_decomposition(&k5, &ears, &circuits));

        assert!(matches!(ear_decomposition(&Graph::complete(4), CIRCUIT_EDGE_CAP), Err(SparsityError::Precondition(_))));
        assert!(matches!(ear_decomposition(&Graph::complete(8), CIRCUIT_EDGE_CAP), Err(SparsityError::TooLarge { m: 28, cap: 24 })));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(6, 3).count(), 20);
        assert_eq!(Combinations::new(4, 0).count(), 1);
        assert_eq!(Combinations::new(3, 4).count(), 0);
    }
}
