//! Frameworks on (possibly concentric) cylinders and their rigidity matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::Matrix;
use super::scalar::{Field, Rational};
use super::NumericError;
use crate::graph::{Edge, Graph};

/// Bit size of the random rationals used by [`random_framework`].
pub const DEFAULT_BITS: u32 = 32;

pub type Point<S> = [S; 3];

/// A graph placed on cylinders `x^2 + y^2 = r_i^2` about the z-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Framework<S> {
    graph: Graph,
    points: Vec<Point<S>>,
    radii: Vec<S>,
}

impl<S: Field> Framework<S> {
    /// Unit radii when `radii` is `None`. Exact scalars must satisfy the
    /// cylinder equation exactly; `f64` within `tol`.
    pub fn new(graph: Graph, points: Vec<Point<S>>, radii: Option<Vec<S>>, tol: f64) -> Result<Self, NumericError> {
        let n = graph.n();
        if points.len() != n {
            return Err(NumericError::Dimension(format!("{} points for {n} vertices", points.len())));
        }
        let radii = radii.unwrap_or_else(|| vec![S::one(); n]);
        if radii.len() != n {
            return Err(NumericError::Dimension(format!("{} radii for {n} vertices", radii.len())));
        }
        let mut field = 0;
        for v in points.iter().flatten().chain(&radii) {
            match (field, v.radicand()) {
                (_, 0) => {}
                (0, d) => field = d,
                (f, d) if f == d => {}
                _ => return Err(NumericError::MixedField),
            }
        }
        for (i, (p, r)) in points.iter().zip(&radii).enumerate() {
            if r.is_zero() || r.to_f64() < 0.0 {
                return Err(NumericError::BadRadius { vertex: i });
            }
            let lhs = p[0].mul(&p[0]).add(&p[1].mul(&p[1]));
            if !lhs.approx_eq(&r.mul(r), tol) {
                return Err(NumericError::OffCylinder { vertex: i });
            }
        }
        Ok(Framework { graph, points, radii })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn points(&self) -> &[Point<S>] {
        &self.points
    }

    pub fn radii(&self) -> &[S] {
        &self.radii
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Converts every coordinate; the cylinder check is repeated at `tol`.
    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T, tol: f64) -> Result<Framework<T>, NumericError> {
        let points = self.points.iter().map(|p| [f(&p[0]), f(&p[1]), f(&p[2])]).collect();
        let radii = self.radii.iter().map(&f).collect();
        Framework::new(self.graph.clone(), points, Some(radii), tol)
    }

    pub fn to_f64(&self, tol: f64) -> Result<Framework<f64>, NumericError> {
        self.map(S::to_f64, tol)
    }

    fn check_vertex(&self, v: usize) -> Result<(), NumericError> {
        self.graph.check_vertex(v).map_err(NumericError::from)
    }

    fn edge_rows(&self, m: &mut Matrix<S>) {
        for (k, &(i, j)) in self.graph.edges().iter().enumerate() {
            for c in 0..3 {
                let d = self.points[i][c].sub(&self.points[j][c]);
                m.set(k, 3 * j + c, d.neg());
                m.set(k, 3 * i + c, d);
            }
        }
    }

    fn surface_row(&self, m: &mut Matrix<S>, row: usize, v: usize) {
        m.set(row, 3 * v, self.points[v][0].clone());
        m.set(row, 3 * v + 1, self.points[v][1].clone());
    }

    /// `(|E| + n) x 3n`: edge rows in edge order, then one surface row per vertex.
    pub fn rigidity_matrix(&self) -> Matrix<S> {
        let (n, m) = (self.n(), self.graph.m());
        let mut r = Matrix::zeros(m + n, 3 * n);
        self.edge_rows(&mut r);
        for v in 0..n {
            self.surface_row(&mut r, m + v, v);
        }
        r
    }

    /// The rigidity matrix without the surface row of `v`.
    pub fn vfree_matrix(&self, v: usize) -> Result<Matrix<S>, NumericError> {
        self.check_vertex(v)?;
        Ok(self.rigidity_matrix().remove_row(self.graph.m() + v))
    }

    /// `(|E| + 2n - 1) x 3n`: edge rows, the `n - 1` rows tying every
    /// `z_i / z_1` ratio, then the surface rows.
    pub fn vr_matrix(&self) -> Result<Matrix<S>, NumericError> {
        let (n, m) = (self.n(), self.graph.m());
        if n == 0 || self.points[0][2].is_zero() {
            return Err(NumericError::ZeroZ1);
        }
        let mut r = Matrix::zeros(m + 2 * n - 1, 3 * n);
        self.edge_rows(&mut r);
        let z1 = self.points[0][2].clone();
        for i in 1..n {
            let row = m + i - 1;
            r.set(row, 2, self.points[i][2].neg());
            r.set(row, 3 * i + 2, z1.clone());
        }
        for v in 0..n {
            self.surface_row(&mut r, m + n - 1 + v, v);
        }
        Ok(r)
    }

    /// The trivial motions: rotation about the axis and translation along it.
    pub fn trivial_motions(&self) -> [Vec<S>; 2] {
        let mut rot = Vec::with_capacity(3 * self.n());
        let mut tr = Vec::with_capacity(3 * self.n());
        for p in &self.points {
            rot.extend([p[1].neg(), p[0].clone(), S::zero()]);
            tr.extend([S::zero(), S::zero(), S::one()]);
        }
        [rot, tr]
    }

    /// Squared edge lengths, z-ratios `z_i / z_1` and squared radii.
    pub fn measurement(&self) -> Result<Measurement<S>, NumericError> {
        let f = self
            .graph
            .edges()
            .iter()
            .map(|&(i, j)| {
                (0..3).fold(S::zero(), |acc, c| {
                    let d = self.points[i][c].sub(&self.points[j][c]);
                    acc.add(&d.mul(&d))
                })
            })
            .collect();
        if self.n() == 0 || self.points[0][2].is_zero() {
            return Err(NumericError::ZeroZ1);
        }
        let z1 = &self.points[0][2];
        let h = self.points[1..].iter().map(|p| p[2].div(z1)).collect();
        let theta = self.points.iter().map(|p| p[0].mul(&p[0]).add(&p[1].mul(&p[1]))).collect();
        Ok(Measurement { f, h, theta })
    }

    /// A copy with `p(v)` (and its radius) replaced by those of `u`.
    pub fn coincident(&self, u: usize, v: usize) -> Result<Framework<S>, NumericError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(NumericError::Precondition("coincident vertices must differ".into()));
        }
        let mut out = self.clone();
        out.points[v] = self.points[u].clone();
        out.radii[v] = self.radii[u].clone();
        Ok(out)
    }

    /// Same points, different graph on the same vertex count.
    pub fn with_graph(&self, graph: Graph) -> Result<Framework<S>, NumericError> {
        if graph.n() != self.n() {
            return Err(NumericError::Dimension("graph and framework sizes differ".into()));
        }
        Ok(Framework { graph, points: self.points.clone(), radii: self.radii.clone() })
    }

    pub fn edge(&self, k: usize) -> Edge {
        self.graph.edges()[k]
    }
}

/// The three measurement maps of a framework.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<S> {
    pub f: Vec<S>,
    pub h: Vec<S>,
    pub theta: Vec<S>,
}

impl<S: Field> Measurement<S> {
    /// Same squared edge lengths.
    pub fn equivalent(&self, o: &Self) -> bool {
        self.f == o.f
    }

    /// Same lengths, z-ratios and radii.
    pub fn vr_equivalent(&self, o: &Self) -> bool {
        self.f == o.f && self.h == o.h && self.theta == o.theta
    }
}

/// Sampling options for [`random_framework`].
#[derive(Clone, Debug, PartialEq)]
pub struct Sampling {
    pub seed: u64,
    pub bits: u32,
    pub radii: Option<Vec<Rational>>,
}

impl Sampling {
    pub fn seeded(seed: u64) -> Self {
        Sampling { seed, bits: DEFAULT_BITS, radii: None }
    }
}

fn random_rational(rng: &mut ChaCha8Rng, bits: u32) -> Rational {
    let span = 1i128 << bits.min(62);
    let p = rng.gen_range(-span..=span);
    let q = rng.gen_range(1..=span);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `(r (1 - t^2) / (1 + t^2), 2 r t / (1 + t^2))`, a rational point on the circle.
pub fn circle_point(t: &Rational, r: &Rational) -> (Rational, Rational) {
    let one = <Rational as One>::one();
    let t2 = t * t;
    let den = &one + &t2;
    (r * (&one - &t2) / &den, r * Rational::from_integer(2.into()) * t / den)
}

/// Random exact framework: each vertex at a random rational circle point
/// and a random rational height, with `z_1 != 0`.
pub fn random_framework(g: &Graph, sampling: &Sampling) -> Result<Framework<Rational>, NumericError> {
    let n = g.n();
    let radii = match &sampling.radii {
        Some(r) if r.len() != n => return Err(NumericError::Dimension(format!("{} radii for {n} vertices", r.len()))),
        Some(r) => r.clone(),
        None => vec![<Rational as One>::one(); n],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let bits = sampling.bits.clamp(2, 62);
    let points = (0..n)
        .map(|i| {
            let t = random_rational(&mut rng, bits);
            let (x, y) = circle_point(&t, &radii[i]);
            let mut z = random_rational(&mut rng, bits);
            while i == 0 && Zero::is_zero(&z) {
                z = random_rational(&mut rng, bits);
            }
            [x, y, z]
        })
        .collect();
    Framework::new(g.clone(), points, Some(radii), 0.0)
}

/// Rank of the rigidity matrix of a random framework with `p(u) = p(v)`;
/// the row of `uv`, if present, is identically zero.
pub fn coincident_rank(g: &Graph, u: usize, v: usize, sampling: &Sampling) -> Result<usize, NumericError> {
    let f = random_framework(g, sampling)?.coincident(u, v)?;
    Ok(f.rigidity_matrix().rank(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn circle_parametrisation() {
        assert_eq!(circle_point(&r(0, 1), &r(1, 1)), (r(1, 1), r(0, 1)));
        assert_eq!(circle_point(&r(1, 1), &r(1, 1)), (r(0, 1), r(1, 1)));
        assert_eq!(circle_point(&r(1, 2), &r(1, 1)), (r(3, 5), r(4, 5)));
        assert_eq!(circle_point(&r(1, 2), &r(5, 1)), (r(3, 1), r(4, 1)));
    }

    #[test]
    fn trivial_motions_in_kernel() {
        for seed in 0..5 {
            let g = Graph::complete(5);
            let f = random_framework(&g, &Sampling::seeded(seed)).unwrap();
            let m = f.rigidity_matrix();
            assert_eq!((m.rows(), m.cols()), (15, 15));
            for v in f.trivial_motions() {
                assert!(m.right_mul(&v).iter().all(Field::is_zero));
            }
            assert!(m.rank(0.0) <= 13);
            assert!(!Field::is_zero(&f.points()[0][2]));
        }
    }

    #[test]
    fn off_cylinder_rejected() {
        let g = Graph::complete(2);
        let pts = vec![[r(1, 1), r(0, 1), r(0, 1)], [r(1, 1), r(1, 1), r(0, 1)]];
        assert!(matches!(Framework::new(g, pts, None, 0.0), Err(NumericError::OffCylinder { vertex: 1 })));
    }

    #[test]
    fn vr_rows_for_triangle() {
        let g = Graph::complete(3);
        let f = random_framework(&g, &Sampling::seeded(1)).unwrap();
        let m = f.vr_matrix().unwrap();
        assert_eq!((m.rows(), m.cols()), (3 + 5, 9));
        assert_eq!(m.rank(0.0), 8);
        for k in 0..3 {
            assert_eq!(m.remove_row(k).rank(0.0), 7);
        }
        let tree = Graph::path(4);
        let f = random_framework(&tree, &Sampling::seeded(2)).unwrap();
        assert!(f.vr_matrix().unwrap().rank(0.0) < 11);
    }

    #[test]
    fn vr_needs_nonzero_height() {
        let g = Graph::complete(2);
        let pts = vec![[r(1, 1), r(0, 1), r(0, 1)], [r(0, 1), r(1, 1), r(1, 1)]];
        let f = Framework::new(g, pts, None, 0.0).unwrap();
        assert!(matches!(f.vr_matrix(), Err(NumericError::ZeroZ1)));
        assert!(matches!(f.measurement(), Err(NumericError::ZeroZ1)));
    }

    #[test]
    fn measurement_invariance() {
        let g = Graph::path(3);
        let f = random_framework(&g, &Sampling::seeded(4)).unwrap();
        // rotation by the rational angle with cos = 3/5, sin = 4/5
        let (c, s) = (r(3, 5), r(4, 5));
        let rot: Vec<Point<Rational>> =
            f.points().iter().map(|p| [&c * &p[0] - &s * &p[1], &s * &p[0] + &c * &p[1], p[2].clone()]).collect();
        let g2 = Framework::new(g.clone(), rot, None, 0.0).unwrap();
        assert!(f.measurement().unwrap().vr_equivalent(&g2.measurement().unwrap()));
        let refl: Vec<Point<Rational>> = f.points().iter().map(|p| [p[0].clone(), p[1].clone(), -&p[2]]).collect();
        let g3 = Framework::new(g.clone(), refl, None, 0.0).unwrap();
        assert!(f.measurement().unwrap().vr_equivalent(&g3.measurement().unwrap()));
        let other = random_framework(&g, &Sampling::seeded(5)).unwrap();
        assert!(!f.measurement().unwrap().equivalent(&other.measurement().unwrap()));
    }

    #[test]
    fn concentric_radii() {
        let g = Graph::complete(4);
        let radii = vec![r(1, 1), r(2, 1), r(3, 2), r(5, 3)];
        let s = Sampling { seed: 9, bits: 16, radii: Some(radii.clone()) };
        let f = random_framework(&g, &s).unwrap();
        for (p, rr) in f.points().iter().zip(&radii) {
            assert_eq!(&p[0] * &p[0] + &p[1] * &p[1], rr * rr);
        }
    }
}
