//! Deciders for rigidity properties on the cylinder, each returning a verdict
//! with a certificate that is re-checked before it is handed out, plus the
//! numeric counterparts used for cross-validation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Edge, Graph, GraphError};
use crate::numeric::{
    random_framework, stress_matrix_rank, verify_stress, Field, Framework, NumericError, Rational, Sampling, Stress,
    DEFAULT_BITS,
};
use crate::sparsity::{self, CircuitWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Construction(#[from] crate::constructions::ConstructionError),
    #[error("certificate failed re-verification: {0}")]
    Certificate(String),
}

type Result<T> = std::result::Result<T, DecideError>;

/// Which characterisation a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Rigidity,
    GlobalRigidity,
    VertexFree,
    VrMinimal,
    VrRigid,
    VrGlobal,
    StressSufficiency,
    Coincident,
    Concentric,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Rigidity => "rigidity",
            Basis::GlobalRigidity => "global-rigidity",
            Basis::VertexFree => "vertex-free",
            Basis::VrMinimal => "vr-minimal",
            Basis::VrRigid => "vr-rigid",
            Basis::VrGlobal => "vr-global",
            Basis::StressSufficiency => "stress-sufficiency",
            Basis::Coincident => "coincident",
            Basis::Concentric => "concentric",
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    /// Complete graph on few enough vertices to be covered by the base clause.
    CompleteSmall { n: usize },
    /// Matroid rank against the rigidity target, with a basis of the edge set.
    Rank { rank: usize, target: usize, basis: Vec<Edge> },
    Disconnected { components: usize },
    TooFewVertices { n: usize },
    CutVertex { vertex: usize },
    /// An edge whose removal destroys rigidity.
    NonRedundantEdge { edge: Edge },
    TwoConnectedRedundantlyRigid,
    CircuitContaining { vertex: usize, circuit: CircuitWitness },
    NoCircuitThrough { vertex: usize },
    /// Connectivity and cycle-space data for the vertically restricted deciders.
    CycleSpace { connected: bool, two_connected: bool, dim: usize, n: usize, m: usize },
    /// A maximum-rank equilibrium stress at the framework sampled from `seed`.
    Stress { seed: u64, bits: u32, omega: Vec<String>, lambda: Vec<String>, rank: usize },
    None { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: bool,
    pub basis: Basis,
    pub certificate: Certificate,
}

fn certify(v: Verdict, g: &Graph) -> Result<Verdict> {
    recheck(&v, g)?;
    Ok(v)
}

fn fail(msg: impl Into<String>) -> Result<()> {
    Err(DecideError::Certificate(msg.into()))
}

/// Re-verifies a certificate against `g` without reusing the decider's path.
pub fn recheck(v: &Verdict, g: &Graph) -> Result<()> {
    match &v.certificate {
        Certificate::CompleteSmall { n } => {
            let limit = if v.basis == Basis::GlobalRigidity { 4 } else { 3 };
            if *n != g.n() || !g.is_complete() || g.n() > limit || !v.answer {
                return fail("complete-graph clause does not apply");
            }
        }
        Certificate::Rank { rank, target, basis } => {
            // reverse insertion order gives an independent pebble-game run
            let mut rev = basis.clone();
            rev.reverse();
            let h = graph::MultiGraph::new(g.n(), rev)?;
            if sparsity::rank22(&h, true) != basis.len() || basis.len() != *rank {
                return fail("basis is not independent or has the wrong size");
            }
            for &e in g.edges() {
                if basis.contains(&e) {
                    continue;
                }
                let mut ext = basis.clone();
                ext.push(e);
                if sparsity::rank22(&graph::MultiGraph::new(g.n(), ext)?, true) != *rank {
                    return fail(format!("edge {e:?} extends the basis"));
                }
            }
            if (rank == target) != v.answer {
                return fail("rank certificate contradicts the answer");
            }
        }
        Certificate::Disconnected { components } => {
            if graph::component_count(g) != *components || *components < 2 || v.answer {
                return fail("graph is not disconnected as claimed");
            }
        }
        Certificate::TooFewVertices { n } => {
            if g.n() != *n || *n >= 3 || v.answer {
                return fail("vertex count claim is wrong");
            }
        }
        Certificate::CutVertex { vertex } => {
            let (h, _) = g.remove_vertices(&[*vertex]);
            if graph::component_count(&h) <= graph::component_count(g) || v.answer {
                return fail("vertex does not disconnect the graph");
            }
        }
        Certificate::NonRedundantEdge { edge } => {
            if sparsity::is_rigid_comb(&g.without_edge(*edge)?) || v.answer {
                return fail("edge removal keeps the graph rigid");
            }
        }
        Certificate::TwoConnectedRedundantlyRigid => {
            if !(graph::is_2connected(g) && sparsity::is_redundantly_rigid(g)) || !v.answer {
                return fail("graph is not 2-connected and redundantly rigid");
            }
        }
        Certificate::CircuitContaining { vertex, circuit } => {
            let inside = circuit.edges.iter().all(|&(a, b)| g.has_edge(a, b));
            if !inside || !circuit.verify(g.n(), true) || !circuit.vertex_support.contains(vertex) || !v.answer {
                return fail("circuit witness does not check out");
            }
        }
        Certificate::NoCircuitThrough { vertex } => {
            if sparsity::circuit_through_vertex(g, *vertex).map_err(|e| DecideError::Certificate(e.to_string()))?.is_some()
                || v.answer
            {
                return fail("a circuit through the vertex exists");
            }
        }
        Certificate::CycleSpace { connected, two_connected, dim, n, m } => {
            if *connected != graph::is_connected(g)
                || *two_connected != graph::is_2connected(g)
                || *dim != graph::cycle_space_dim(g)
                || (*n, *m) != (g.n(), g.m())
            {
                return fail("cycle-space data is wrong");
            }
        }
        Certificate::Stress { seed, bits, omega, lambda, rank } => {
            let f = random_framework(g, &Sampling { seed: *seed, bits: *bits, radii: None })?;
            let parse = |v: &[String]| v.iter().map(|s| crate::numeric::parse_rational(s)).collect::<std::result::Result<Vec<_>, _>>();
            let s = Stress { omega: parse(omega)?, lambda: parse(lambda)? };
            if !verify_stress(&f, &s)?.is_exact_zero() {
                return fail("stress is not in equilibrium");
            }
            if stress_matrix_rank(&f, &s, 0.0).0 != *rank || !crate::numeric::is_maximum_rank(g.n(), *rank) || !v.answer {
                return fail("stress rank is not maximal");
            }
        }
        Certificate::None { .. } => {}
    }
    Ok(())
}

/// Complete on at most three vertices, or rank `2n - 2` in the simple matroid.
pub fn rigid(g: &Graph) -> Result<Verdict> {
    if g.n() <= 3 && g.is_complete() {
        return certify(Verdict { answer: true, basis: Basis::Rigidity, certificate: Certificate::CompleteSmall { n: g.n() } }, g);
    }
    let basis: Vec<Edge> = sparsity::basis22(g, true).into_iter().map(|i| g.edges()[i]).collect();
    let target = (2 * g.n()).saturating_sub(2);
    let rank = basis.len();
    certify(Verdict { answer: rank == target, basis: Basis::Rigidity, certificate: Certificate::Rank { rank, target, basis } }, g)
}

/// Complete on at most four vertices, or 2-connected and redundantly rigid.
pub fn globally_rigid(g: &Graph) -> Result<Verdict> {
    let b = Basis::GlobalRigidity;
    let v = |answer, certificate| Verdict { answer, basis: b, certificate };
    if g.n() <= 4 && g.is_complete() {
        return certify(v(true, Certificate::CompleteSmall { n: g.n() }), g);
    }
    if g.n() < 3 {
        return certify(v(false, Certificate::TooFewVertices { n: g.n() }), g);
    }
    let comps = graph::component_count(g);
    if comps > 1 {
        return certify(v(false, Certificate::Disconnected { components: comps }), g);
    }
    if let Some(&cut) = graph::articulation_points(g).first() {
        return certify(v(false, Certificate::CutVertex { vertex: cut }), g);
    }
    if let Some(e) = non_redundant_edge(g) {
        return certify(v(false, Certificate::NonRedundantEdge { edge: e }), g);
    }
    certify(v(true, Certificate::TwoConnectedRedundantlyRigid), g)
}

fn non_redundant_edge(g: &Graph) -> Option<Edge> {
    sparsity::non_redundant_edge(g)
}

/// Rigid, and `v` lies on a circuit.
pub fn vfree_rigid(g: &Graph, v: usize) -> Result<Verdict> {
    g.check_vertex(v)?;
    let b = Basis::VertexFree;
    let r = rigid(g)?;
    if !r.answer {
        return certify(Verdict { answer: false, basis: b, certificate: r.certificate }, g);
    }
    let c = sparsity::circuit_through_vertex(g, v).map_err(|e| DecideError::Certificate(e.to_string()))?;
    let certificate = match c {
        Some(circuit) => Certificate::CircuitContaining { vertex: v, circuit },
        None => Certificate::NoCircuitThrough { vertex: v },
    };
    let answer = matches!(certificate, Certificate::CircuitContaining { .. });
    certify(Verdict { answer, basis: b, certificate }, g)
}

/// The three vertically restricted verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VrVerdicts {
    pub minimally_rigid: Verdict,
    pub rigid: Verdict,
    pub globally_rigid: Verdict,
}

/// Connected and unicyclic; connected with `|E| >= n`; 2-connected with `|E| >= n + 1`.
pub fn vr_deciders(g: &Graph) -> Result<VrVerdicts> {
    let connected = graph::is_connected(g);
    let two_connected = graph::is_2connected(g);
    let dim = graph::cycle_space_dim(g);
    let cert = Certificate::CycleSpace { connected, two_connected, dim, n: g.n(), m: g.m() };
    let mk = |answer, basis| Verdict { answer, basis, certificate: cert.clone() };
    Ok(VrVerdicts {
        minimally_rigid: certify(mk(connected && dim == 1, Basis::VrMinimal), g)?,
        rigid: certify(mk(connected && g.m() >= g.n(), Basis::VrRigid), g)?,
        globally_rigid: certify(mk(two_connected && g.m() > g.n(), Basis::VrGlobal), g)?,
    })
}

/// Upper bound on random cokernel combinations tried by [`stress_certificate`].
pub const STRESS_TRIES: usize = 16;

/// One-sided test: a maximum-rank equilibrium stress at a random framework
/// certifies global rigidity; failing to find one proves nothing.
pub fn stress_certificate(g: &Graph, seed: u64) -> Result<Verdict> {
    let b = Basis::StressSufficiency;
    let sampling = Sampling::seeded(seed);
    let f = random_framework(g, &sampling)?;
    let basis = f.rigidity_matrix().cokernel(0.0);
    if basis.is_empty() {
        let certificate = Certificate::None { reason: "no nonzero equilibrium stress".into() };
        return certify(Verdict { answer: false, basis: b, certificate }, g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let tries = if basis.len() == 1 { 1 } else { STRESS_TRIES };
    for _ in 0..tries {
        let combo: Vec<Rational> = if basis.len() == 1 {
            basis[0].clone()
        } else {
            let coef: Vec<Rational> = (0..basis.len()).map(|_| Rational::from_integer(rng.gen_range(-64i64..=64).into())).collect();
            (0..basis[0].len())
                .map(|i| basis.iter().zip(&coef).fold(<Rational as Field>::zero(), |acc, (v, c)| acc.add(&c.mul(&v[i]))))
                .collect()
        };
        let s = Stress::from_vector(&f, &combo)?.normalised();
        let (rank, _) = stress_matrix_rank(&f, &s, 0.0);
        if crate::numeric::is_maximum_rank(g.n(), rank) {
            let certificate = Certificate::Stress {
                seed,
                bits: sampling.bits,
                omega: s.omega.iter().map(ToString::to_string).collect(),
                lambda: s.lambda.iter().map(ToString::to_string).collect(),
                rank,
            };
            return certify(Verdict { answer: true, basis: b, certificate }, g);
        }
    }
    let certificate = Certificate::None { reason: format!("no maximum-rank stress in {tries} tries") };
    certify(Verdict { answer: false, basis: b, certificate }, g)
}

/// Numeric counterpart of [`vfree_rigid`] at one framework.
pub fn vfree_rank_holds<S: Field>(f: &Framework<S>, v: usize, tol: f64) -> Result<bool> {
    Ok(f.vfree_matrix(v)?.rank(tol) + 2 == 3 * f.n())
}

/// Rank of the vertically restricted matrix, and whether every edge row is needed.
pub fn vr_rank_profile<S: Field>(f: &Framework<S>, tol: f64) -> Result<(usize, bool)> {
    let m = f.vr_matrix()?;
    let rank = m.rank(tol);
    let every_edge_needed = (0..f.graph().m()).all(|k| m.remove_row(k).rank(tol) < rank);
    Ok((rank, every_edge_needed))
}

/// Combinatorial side of the coincidence test: `G - uv` and `G / uv` both rigid.
pub fn coincident_condition(g: &Graph, u: usize, v: usize) -> Result<bool> {
    let minus = if g.has_edge(u, v) { g.without_edge((u, v))? } else { g.clone() };
    let quotient = graph::identify_vertices(g, u, v, true)?.simple();
    Ok(rigid(&minus)?.answer && rigid(&quotient)?.answer)
}

/// Derives the `k`-th sample seed from a base seed.
pub fn sample_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One combinatorial-versus-numeric comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub basis: Basis,
    /// The vertex or vertex pair the check is about, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<Vec<usize>>,
    pub combinatorial: bool,
    /// `None` when the numeric test does not apply.
    pub numeric: Option<bool>,
    pub ranks: Vec<usize>,
    pub resampled: bool,
}

impl Check {
    pub fn agrees(&self) -> bool {
        self.numeric.is_none_or(|n| n == self.combinatorial)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossReport {
    pub graph: Graph,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl CrossReport {
    pub fn agrees(&self) -> bool {
        self.checks.iter().all(Check::agrees)
    }

    pub fn disagreements(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.agrees()).collect()
    }
}

/// Options for [`cross_validate_with`].
#[derive(Clone, Debug, Default)]
pub struct CrossOptions {
    /// Frameworks used before any random sample (for fault injection).
    pub injected: Vec<Framework<Rational>>,
    /// Include the coincident-pair checks (one per vertex pair).
    pub coincident: bool,
    /// Include the concentric-cylinder check.
    pub concentric: bool,
    pub bits: Option<u32>,
}

/// Extra samples drawn when the first two disagree.
pub const RESAMPLE_LIMIT: usize = 3;

struct Sampler<'a> {
    g: &'a Graph,
    seed: u64,
    bits: u32,
    injected: &'a [Framework<Rational>],
    cache: Vec<Framework<Rational>>,
}

impl Sampler<'_> {
    fn get(&mut self, k: usize) -> Result<&Framework<Rational>> {
        while self.cache.len() <= k {
            let i = self.cache.len();
            let f = match self.injected.get(i) {
                Some(f) => f.clone(),
                None => random_framework(self.g, &Sampling { seed: sample_seed(self.seed, i as u64), bits: self.bits, radii: None })?,
            };
            self.cache.push(f);
        }
        Ok(&self.cache[k])
    }

    /// Generic rank of a per-framework quantity: two samples, more on disagreement.
    fn rank(&mut self, mut eval: impl FnMut(&Framework<Rational>) -> Result<usize>) -> Result<(usize, Vec<usize>, bool)> {
        let mut ranks = vec![eval(self.get(0)?)?, eval(self.get(1)?)?];
        let mut resampled = false;
        if ranks[0] != ranks[1] {
            resampled = true;
            for k in 0..RESAMPLE_LIMIT {
                ranks.push(eval(self.get(2 + k)?)?);
            }
        }
        let best = *ranks.iter().max().expect("two samples");
        Ok((best, ranks, resampled))
    }
}

/// Cross-validates every decider against exact ranks at random frameworks.
pub fn cross_validate(g: &Graph, seed: u64) -> Result<CrossReport> {
    cross_validate_with(g, seed, &CrossOptions { coincident: true, concentric: true, ..Default::default() })
}

pub fn cross_validate_with(g: &Graph, seed: u64, opts: &CrossOptions) -> Result<CrossReport> {
    let n = g.n();
    let mut sampler = Sampler { g, seed, bits: opts.bits.unwrap_or(DEFAULT_BITS), injected: &opts.injected, cache: Vec::new() };
    let mut checks = Vec::new();

    let comb_rigid = rigid(g)?.answer;
    if n <= 3 && g.is_complete() {
        checks.push(Check { basis: Basis::Rigidity, subject: None, combinatorial: true, numeric: None, ranks: vec![], resampled: false });
    } else {
        let (r, ranks, resampled) = sampler.rank(|f| Ok(f.rigidity_matrix().rank(0.0)))?;
        checks.push(Check { basis: Basis::Rigidity, subject: None, combinatorial: comb_rigid, numeric: Some(r + 2 == 3 * n), ranks, resampled });
    }

    for v in 0..n {
        let comb = vfree_rigid(g, v)?.answer;
        let (r, ranks, resampled) = sampler.rank(|f| Ok(f.vfree_matrix(v)?.rank(0.0)))?;
        checks.push(Check { basis: Basis::VertexFree, subject: Some(vec![v]), combinatorial: comb, numeric: Some(r + 2 == 3 * n), ranks, resampled });
    }

    if n >= 1 {
        let vr = vr_deciders(g)?;
        // minimality needs the full rank and every edge row; encode as rank + flag
        let (r, ranks, resampled) = sampler.rank(|f| Ok(f.vr_matrix()?.rank(0.0)))?;
        let full = r + 1 == 3 * n;
        checks.push(Check { basis: Basis::VrRigid, subject: None, combinatorial: vr.rigid.answer, numeric: Some(full), ranks: ranks.clone(), resampled });
        let minimal = full && {
            let (_, needed) = vr_rank_profile(sampler.get(0)?, 0.0)?;
            let (_, needed2) = vr_rank_profile(sampler.get(1)?, 0.0)?;
            needed || needed2
        };
        checks.push(Check { basis: Basis::VrMinimal, subject: None, combinatorial: vr.minimally_rigid.answer, numeric: Some(minimal), ranks, resampled });
    }

    if opts.coincident {
        for u in 0..n {
            for v in u + 1..n {
                let comb = coincident_condition(g, u, v)?;
                let (r, ranks, resampled) = sampler.rank(|f| Ok(f.coincident(u, v)?.rigidity_matrix().rank(0.0)))?;
                checks.push(Check { basis: Basis::Coincident, subject: Some(vec![u, v]), combinatorial: comb, numeric: Some(r + 2 == 3 * n), ranks, resampled });
            }
        }
    }

    if opts.concentric && !(n <= 3 && g.is_complete()) {
        let radii: Vec<Rational> = (0..n).map(|i| Rational::new((i as i64 + 2).into(), 2.into())).collect();
        let mut ranks = Vec::new();
        for k in 0..2u64 {
            let s = Sampling { seed: sample_seed(seed, 100 + k), bits: sampler.bits, radii: Some(radii.clone()) };
            ranks.push(random_framework(g, &s)?.rigidity_matrix().rank(0.0));
        }
        let r = *ranks.iter().max().expect("two samples");
        checks.push(Check { basis: Basis::Concentric, subject: None, combinatorial: comb_rigid, numeric: Some(r + 2 == 3 * n), resampled: ranks[0] != ranks[1], ranks });
    }

    Ok(CrossReport { graph: g.clone(), seed, checks })
}

/// The seeded cross-validation corpus: every third entry is a random circuit
/// (when `n_max >= 5`), the rest are random graphs on `2..=n_max` vertices.
pub fn corpus(count: usize, n_max: usize, seed: u64) -> Result<Vec<Graph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        if n_max >= 5 && k % 3 == 2 {
            let n = rng.gen_range(5..=n_max);
            let (g, _) = crate::constructions::random_circuit(n, rng.gen())?;
            out.push(g);
        } else {
            out.push(random_graph(rng.gen_range(2..=n_max.max(2)), &mut rng));
        }
    }
    Ok(out)
}

/// A random simple graph on `n` vertices with a random edge density in `[0.3, 0.8)`.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> Graph {
    let p: f64 = rng.gen_range(0.3..0.8);
    let edges: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, edges).expect("pairs are distinct and in range")
}
