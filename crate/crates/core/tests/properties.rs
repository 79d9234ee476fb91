//! Property tests for the matroid, the constructions, the deciders and the
//! scalar tower.

use proptest::prelude::*;

use cylrig::constructions::{self, random_circuit, reduce_to_base, ConstructionTrace};
use cylrig::decide;
use cylrig::graph::{self, Edge, Graph};
use cylrig::io;
use cylrig::numeric::{self, Field, Quadratic, Rational, Sampling};
use cylrig::sparsity::{self, rank22};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap()
        })
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn subset(g: &Graph, mask: u64) -> Graph {
    let keep: Vec<Edge> = g.edges().iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &e)| e).collect();
    g.edge_subgraph(&keep)
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_is_label_invariant(
        (g, perm) in arb_graph(8).prop_flat_map(|g| { let n = g.n(); (Just(g), arb_perm(n)) })
    ) {
        prop_assert_eq!(rank22(&g, true), rank22(&g.relabel(&perm), true));
        prop_assert_eq!(decide::rigid(&g).unwrap().answer, decide::rigid(&g.relabel(&perm)).unwrap().answer);
    }

    #[test]
    fn rank_bounds(g in arb_graph(9)) {
        let r = rank22(&g, true);
        prop_assert!(r <= g.m());
        prop_assert!(r <= (2 * g.n()).saturating_sub(2));
        prop_assert_eq!(sparsity::basis22(&g, true).len(), r);
    }

    #[test]
    fn rank_is_submodular(g in arb_graph(7), a in any::<u64>(), b in any::<u64>()) {
        let ga = subset(&g, a);
        let gb = subset(&g, b);
        let union = subset(&g, a | b);
        let inter = subset(&g, a & b);
        prop_assert!(rank22(&union, true) + rank22(&inter, true) <= rank22(&ga, true) + rank22(&gb, true));
        prop_assert!(rank22(&inter, true) <= rank22(&ga, true));
    }

    #[test]
    fn rigidity_is_monotone(g in arb_graph(7), u in 0usize..7, v in 0usize..7) {
        prop_assume!(u < g.n() && v < g.n() && u != v && !g.has_edge(u, v));
        let h = g.with_edge((u.min(v), u.max(v))).unwrap();
        if decide::rigid(&g).unwrap().answer {
            prop_assert!(decide::rigid(&h).unwrap().answer);
        }
    }

    #[test]
    fn global_rigidity_implies_rigidity(g in arb_graph(7)) {
        let global = decide::globally_rigid(&g).unwrap();
        decide::recheck(&global, &g).unwrap();
        if global.answer {
            prop_assert!(decide::rigid(&g).unwrap().answer);
        }
    }

    #[test]
    fn vertex_free_implies_rigid(g in arb_graph(7), v in 0usize..7) {
        prop_assume!(v < g.n());
        if decide::vfree_rigid(&g, v).unwrap().answer {
            prop_assert!(decide::rigid(&g).unwrap().answer);
            prop_assert!(sparsity::vertex_in_circuit(&g, v).unwrap());
        }
    }

    #[test]
    fn vr_verdicts_are_nested(g in arb_graph(8)) {
        let v = decide::vr_deciders(&g).unwrap();
        if v.minimally_rigid.answer { prop_assert!(v.rigid.answer); }
        if v.globally_rigid.answer { prop_assert!(v.rigid.answer); }
    }

    #[test]
    fn edge_list_and_json_round_trip(g in arb_graph(9)) {
        prop_assert_eq!(io::parse_graph(&io::edge_list(&g)).unwrap(), g.clone());
        prop_assert_eq!(io::parse_graph(&io::graph_json(&g)).unwrap(), g);
    }

    #[test]
    fn identify_vertices_counts(g in arb_graph(7), u in 0usize..7, v in 0usize..7) {
        prop_assume!(u < g.n() && v < g.n() && u != v);
        let c = graph::identify_vertices(&g, u, v, false).unwrap();
        prop_assert_eq!(c.graph.n() + 1, g.n());
        let lost = usize::from(g.has_edge(u, v));
        prop_assert_eq!(c.graph.m() + lost, g.m());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_circuits_reduce_and_rebuild(n in 5usize..=11, seed in any::<u64>()) {
        let (g, trace) = random_circuit(n, seed).unwrap();
        prop_assert!(sparsity::is_circuit(&g, true).is_some());
        trace.verify(&g).unwrap();
        let back = reduce_to_base(&g).unwrap();
        back.verify(&g).unwrap();
        let text = serde_json::to_string(&back).unwrap();
        let parsed: ConstructionTrace = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(parsed, back);
    }

    #[test]
    fn circuits_minus_an_edge_are_minimally_rigid(n in 5usize..=10, seed in any::<u64>(), k in any::<usize>()) {
        let (g, _) = random_circuit(n, seed).unwrap();
        let e = g.edges()[k % g.m()];
        let h = g.without_edge(e).unwrap();
        prop_assert!(sparsity::is_independent(&h, true));
        prop_assert!(decide::rigid(&h).unwrap().answer);
        prop_assert!(decide::globally_rigid(&g).unwrap().answer);
    }

    #[test]
    fn reductions_invert_their_step(n in 6usize..=10, seed in any::<u64>()) {
        let (g, _) = random_circuit(n, seed).unwrap();
        prop_assume!(constructions::match_base(&g).is_none());
        let red = constructions::find_reduction(&g).unwrap();
        prop_assert!(sparsity::is_circuit(&red.reduced, true).is_some());
        prop_assert_eq!(red.step.apply(&red.reduced).unwrap().relabel(&red.map), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn circuits_have_maximum_rank_stress_certificates(n in 5usize..=8, seed in any::<u64>()) {
        let (g, _) = random_circuit(n, seed).unwrap();
        let v = decide::stress_certificate(&g, seed).unwrap();
        prop_assert!(v.answer);
        decide::recheck(&v, &g).unwrap();
    }

    #[test]
    fn float_and_exact_ranks_agree(g in arb_graph(7), seed in any::<u64>()) {
        let f = numeric::random_framework(&g, &Sampling { seed, bits: 8, radii: None }).unwrap();
        let ff = f.to_f64(1e-9).unwrap();
        prop_assert_eq!(ff.rigidity_matrix().rank(1e-9), f.rigidity_matrix().rank(0.0));
    }

    #[test]
    fn trivial_motions_lie_in_the_kernel(g in arb_graph(7), seed in any::<u64>()) {
        let f = numeric::random_framework(&g, &Sampling::seeded(seed)).unwrap();
        let r = f.rigidity_matrix();
        for motion in f.trivial_motions() {
            prop_assert!(r.right_mul(&motion).iter().all(Field::is_zero));
        }
    }
}

fn arb_quadratic() -> impl Strategy<Value = Quadratic> {
    (-40i64..40, 1i64..12, -40i64..40, 1i64..12).prop_map(|(a, b, c, d)| Quadratic::new(rational(a, b), rational(c, d), 2).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quadratic_field_laws(x in arb_quadratic(), y in arb_quadratic(), z in arb_quadratic()) {
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.add(&y).sub(&y), x.clone());
        if !Field::is_zero(&y) {
            prop_assert_eq!(x.mul(&y).div(&y), x.clone());
        }
        let approx = x.to_f64();
        prop_assert!(approx == 0.0 || approx.signum() as i32 == x.signum());
        prop_assert_eq!(Quadratic::parse(&x.to_string(), 2).unwrap(), x);
    }
}
