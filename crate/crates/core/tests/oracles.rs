//! Brute-force oracles for separations, circuits and matroid connectivity on
//! small graphs.

use std::collections::BTreeSet;

use cylrig::graph::{self, Edge, Graph, SeparationKind, Shared};
use cylrig::sparsity::{self, CIRCUIT_EDGE_CAP};

fn pairs(n: usize) -> Vec<Edge> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let ps = pairs(n);
    Graph::new(n, ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap()
}

/// Graphs on `n` vertices, one per isomorphism class.
fn classes(n: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    (0u32..1 << pairs(n).len())
        .map(|m| graph_from_mask(n, m))
        .filter(|g| seen.insert(graph::canonical_form(g).unwrap()))
        .collect()
}

type Key = (Vec<usize>, Vec<usize>, String);

fn key(v1: &[usize], v2: &[usize], shared: &Shared) -> Key {
    (v1.to_vec(), v2.to_vec(), format!("{shared:?}"))
}

fn brute_two_vertex(g: &Graph) -> BTreeSet<Key> {
    let n = g.n();
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in x + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
            for mask in 0u32..1 << rest.len() {
                let side1: Vec<usize> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                let side2: Vec<usize> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &v)| v).collect();
                // orientation: the lowest non-shared vertex sits on side 1
                if side1.is_empty() || side2.is_empty() || side2[0] < side1[0] {
                    continue;
                }
                if side1.iter().any(|&a| side2.iter().any(|&b| g.has_edge(a, b))) {
                    continue;
                }
                let mut v1 = side1.clone();
                let mut v2 = side2.clone();
                v1.extend([x, y]);
                v2.extend([x, y]);
                v1.sort_unstable();
                v2.sort_unstable();
                out.insert(key(&v1, &v2, &Shared::Vertices(x, y)));
            }
        }
    }
    out
}

fn brute_three_edge(g: &Graph) -> BTreeSet<Key> {
    let n = g.n();
    let mut out = BTreeSet::new();
    // vertex 0 always on side 1
    for mask in 0u32..1 << (n - 1) {
        let in1 = |v: usize| v == 0 || mask >> (v - 1) & 1 == 1;
        let v1: Vec<usize> = (0..n).filter(|&v| in1(v)).collect();
        let v2: Vec<usize> = (0..n).filter(|&v| !in1(v)).collect();
        if v2.is_empty() {
            continue;
        }
        let cross: Vec<Edge> = g.edges().iter().copied().filter(|&(a, b)| in1(a) != in1(b)).collect();
        if cross.len() == 3 {
            out.insert(key(&v1, &v2, &Shared::Edges([cross[0], cross[1], cross[2]])));
        }
    }
    out
}

#[test]
fn separations_match_brute_force() {
    for n in 2..=7 {
        let sample: Vec<Graph> = if n <= 5 {
            classes(n)
        } else {
            // deterministic spread of labelled graphs
            let total = 1u64 << pairs(n).len();
            (0..400u64).map(|k| graph_from_mask(n, (k.wrapping_mul(0x9E37_79B9_7F4A_7C15) % total) as u32)).collect()
        };
        for g in sample {
            let two: BTreeSet<Key> = graph::find_separations(&g, SeparationKind::TwoVertex, 64)
                .unwrap()
                .iter()
                .map(|s| key(&s.v1, &s.v2, &s.shared))
                .collect();
            assert_eq!(two, brute_two_vertex(&g), "two-vertex separations of {:?}", g.edges());
            let three: BTreeSet<Key> = graph::find_separations(&g, SeparationKind::ThreeEdge, 64)
                .unwrap()
                .iter()
                .map(|s| key(&s.v1, &s.v2, &s.shared))
                .collect();
            assert_eq!(three, brute_three_edge(&g), "three-edge separations of {:?}", g.edges());
        }
    }
}

#[test]
fn trivial_three_edge_separations_share_an_endpoint() {
    let g = graph::Graph::complete(4);
    for s in graph::find_separations(&g, SeparationKind::ThreeEdge, 64).unwrap() {
        assert!(s.trivial);
        assert!(s.v1.len() == 1 || s.v2.len() == 1);
    }
}

#[test]
fn edge_in_circuit_matches_enumeration() {
    for n in 1..=6 {
        for g in classes(n) {
            let circuits = sparsity::enumerate_circuits(&g, CIRCUIT_EDGE_CAP).unwrap();
            for &e in g.edges() {
                let listed = circuits.iter().any(|c| c.contains(&e));
                assert_eq!(sparsity::edge_in_circuit(&g, e).unwrap(), listed, "{e:?} in {:?}", g.edges());
                let fund = sparsity::fundamental_circuit(&g, e).unwrap();
                assert_eq!(fund.is_some(), listed);
                if let Some(c) = fund {
                    assert!(circuits.contains(&c.edges), "fundamental circuit {:?} not enumerated", c.edges);
                }
            }
            for v in 0..n {
                let listed = circuits.iter().any(|c| c.iter().any(|&(a, b)| a == v || b == v));
                assert_eq!(sparsity::vertex_in_circuit(&g, v).unwrap(), listed);
            }
        }
    }
}

#[test]
fn enumerated_circuits_are_minimally_dependent() {
    for g in classes(6) {
        for c in sparsity::enumerate_circuits(&g, CIRCUIT_EDGE_CAP).unwrap() {
            let h = graph::Graph::new(6, c.clone()).unwrap();
            assert!(sparsity::rank22(&h, true) < c.len());
            for i in 0..c.len() {
                let mut rest = c.clone();
                rest.remove(i);
                let sub = graph::Graph::new(6, rest).unwrap();
                assert!(sparsity::is_independent(&sub, true));
            }
        }
    }
}

#[test]
fn circuit_elimination_axiom() {
    for g in classes(6).into_iter().filter(|g| g.m() >= 11) {
        let circuits = sparsity::enumerate_circuits(&g, CIRCUIT_EDGE_CAP).unwrap();
        for (i, c1) in circuits.iter().enumerate() {
            for c2 in &circuits[i + 1..] {
                for e in c1.iter().filter(|e| c2.contains(e)) {
                    let union: BTreeSet<Edge> = c1.iter().chain(c2).copied().filter(|f| f != e).collect();
                    assert!(
                        circuits.iter().any(|c3| c3.iter().all(|f| union.contains(f))),
                        "no circuit inside ({c1:?} u {c2:?}) - {e:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn matroid_connectivity_matches_two_connected_redundant_rigidity() {
    for n in 2..=6 {
        for g in classes(n).into_iter().filter(|g| g.m() >= 2 && g.min_degree() >= 1) {
            let brute = sparsity::matroid_connected_by_circuits(&g, CIRCUIT_EDGE_CAP).unwrap();
            let structural = graph::is_2connected(&g) && sparsity::is_redundantly_rigid(&g);
            assert_eq!(brute, structural, "{:?}", g.edges());
            assert_eq!(sparsity::is_matroid_connected(&g), brute);
        }
    }
}

#[test]
fn ear_decompositions_verify() {
    for g in classes(6).into_iter().filter(sparsity::is_matroid_connected) {
        let ears = sparsity::ear_decomposition(&g, CIRCUIT_EDGE_CAP).unwrap();
        let circuits = sparsity::enumerate_circuits(&g, CIRCUIT_EDGE_CAP).unwrap();
        assert!(sparsity::verify_ear_decomposition(&g, &ears, &circuits));
        let covered: BTreeSet<Edge> = ears.iter().flat_map(|c| c.edges.iter().copied()).collect();
        assert_eq!(covered.len(), g.m());
    }
}
