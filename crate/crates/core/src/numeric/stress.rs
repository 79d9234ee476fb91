//! Equilibrium stresses `(omega, lambda)` and their stress matrices.

use super::framework::Framework;
use super::matrix::Matrix;
use super::scalar::Field;
use super::NumericError;

/// Edge weights in edge order and vertex weights in vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Stress<S> {
    pub omega: Vec<S>,
    pub lambda: Vec<S>,
}

impl<S: Field> Stress<S> {
    pub fn zero(f: &Framework<S>) -> Self {
        Stress { omega: vec![S::zero(); f.graph().m()], lambda: vec![S::zero(); f.n()] }
    }

    /// Splits a cokernel vector of the rigidity matrix.
    pub fn from_vector(f: &Framework<S>, v: &[S]) -> Result<Self, NumericError> {
        let m = f.graph().m();
        if v.len() != m + f.n() {
            return Err(NumericError::Dimension(format!("stress vector of length {} for {} rows", v.len(), m + f.n())));
        }
        Ok(Stress { omega: v[..m].to_vec(), lambda: v[m..].to_vec() })
    }

    pub fn to_vector(&self) -> Vec<S> {
        self.omega.iter().chain(&self.lambda).cloned().collect()
    }

    /// Scales so the first nonzero (or, for `f64`, first non-negligible) edge weight is 1.
    pub fn normalised(&self) -> Self {
        let scale = self.omega.iter().map(|w| w.to_f64().abs()).fold(0.0, f64::max);
        let pivot = self
            .omega
            .iter()
            .find(|w| if S::EXACT { !w.is_zero() } else { w.to_f64().abs() > 1e-9 * scale });
        match pivot {
            None => self.clone(),
            Some(p) => {
                let p = p.clone();
                Stress {
                    omega: self.omega.iter().map(|w| w.div(&p)).collect(),
                    lambda: self.lambda.iter().map(|w| w.div(&p)).collect(),
                }
            }
        }
    }

    /// Projective equality: `self = c * other` for some nonzero `c`.
    pub fn proportional(&self, other: &Self, tol: f64) -> bool {
        let a = self.to_vector();
        let b = other.to_vector();
        if a.len() != b.len() {
            return false;
        }
        let Some(k) = (0..a.len()).max_by(|&i, &j| a[i].to_f64().abs().total_cmp(&a[j].to_f64().abs())) else {
            return true;
        };
        if a[k].is_zero() || b[k].is_zero() {
            return a.iter().all(Field::is_zero) && b.iter().all(Field::is_zero);
        }
        let c = a[k].div(&b[k]);
        a.iter().zip(&b).all(|(x, y)| x.approx_eq(&c.mul(y), tol))
    }
}

/// Per-vertex residual of the equilibrium equations.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual<S> {
    pub per_vertex: Vec<[S; 3]>,
}

impl<S: Field> Residual<S> {
    pub fn max_abs(&self) -> f64 {
        self.per_vertex.iter().flatten().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.per_vertex.iter().flatten().all(Field::is_zero)
    }

    /// Exact zero for exact scalars; max-norm at most `tol` otherwise.
    pub fn vanishes(&self, tol: f64) -> bool {
        if S::EXACT {
            self.is_exact_zero()
        } else {
            self.max_abs() <= tol
        }
    }
}

/// `sum_j w_ij (p_i - p_j) + lambda_i (x_i, y_i, 0)` for every vertex.
pub fn verify_stress<S: Field>(f: &Framework<S>, s: &Stress<S>) -> Result<Residual<S>, NumericError> {
    if s.omega.len() != f.graph().m() || s.lambda.len() != f.n() {
        return Err(NumericError::Dimension("stress does not match the framework".into()));
    }
    let p = f.points();
    let mut res: Vec<[S; 3]> = (0..f.n()).map(|_| [S::zero(), S::zero(), S::zero()]).collect();
    for (k, &(i, j)) in f.graph().edges().iter().enumerate() {
        for c in 0..3 {
            let d = s.omega[k].mul(&p[i][c].sub(&p[j][c]));
            res[i][c] = res[i][c].add(&d);
            res[j][c] = res[j][c].sub(&d);
        }
    }
    for (i, r) in res.iter_mut().enumerate() {
        for c in 0..2 {
            r[c] = r[c].add(&s.lambda[i].mul(&p[i][c]));
        }
    }
    Ok(Residual { per_vertex: res })
}

/// The unique (up to scale) equilibrium stress, normalised.
pub fn equilibrium_stress<S: Field>(f: &Framework<S>, tol: f64) -> Result<Stress<S>, NumericError> {
    let basis = f.rigidity_matrix().cokernel(tol);
    if basis.len() != 1 {
        return Err(NumericError::CokernelDimension(basis.len()));
    }
    Ok(Stress::from_vector(f, &basis[0])?.normalised())
}

/// The blocks `Omega + Lambda` and `Omega` of `diag(Omega + Lambda, Omega + Lambda, Omega)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StressMatrix<S> {
    pub omega_lambda: Matrix<S>,
    pub omega: Matrix<S>,
}

impl<S: Field> StressMatrix<S> {
    pub fn new(f: &Framework<S>, s: &Stress<S>) -> Self {
        let n = f.n();
        let mut omega: Matrix<S> = Matrix::zeros(n, n);
        for (k, &(i, j)) in f.graph().edges().iter().enumerate() {
            let w = &s.omega[k];
            omega.set(i, j, omega.get(i, j).sub(w));
            omega.set(j, i, omega.get(j, i).sub(w));
            omega.set(i, i, omega.get(i, i).add(w));
            omega.set(j, j, omega.get(j, j).add(w));
        }
        let mut ol = omega.clone();
        for i in 0..n {
            ol.set(i, i, ol.get(i, i).add(&s.lambda[i]));
        }
        StressMatrix { omega_lambda: ol, omega }
    }

    /// The full `3n x 3n` block-diagonal matrix.
    pub fn full(&self) -> Matrix<S> {
        let n = self.omega.rows();
        let mut m = Matrix::zeros(3 * n, 3 * n);
        for (b, block) in [&self.omega_lambda, &self.omega_lambda, &self.omega].into_iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    m.set(b * n + i, b * n + j, block.get(i, j).clone());
                }
            }
        }
        m
    }

    /// `2 rank(Omega + Lambda) + rank(Omega)`.
    pub fn rank(&self, tol: f64) -> usize {
        2 * self.omega_lambda.rank(tol) + self.omega.rank(tol)
    }

    /// Checks that `x`, `y` lie in the kernel of `Omega + Lambda` and `z`, `1`
    /// in the kernel of `Omega`.
    pub fn cokernel_facts(&self, f: &Framework<S>, tol: f64) -> bool {
        let col = |c: usize| f.points().iter().map(|p| p[c].clone()).collect::<Vec<S>>();
        let ones = vec![S::one(); f.n()];
        let zero = |v: Vec<S>| {
            if S::EXACT {
                v.iter().all(Field::is_zero)
            } else {
                v.iter().all(|x| x.to_f64().abs() <= tol)
            }
        };
        zero(self.omega_lambda.right_mul(&col(0)))
            && zero(self.omega_lambda.right_mul(&col(1)))
            && zero(self.omega.right_mul(&col(2)))
            && zero(self.omega.right_mul(&ones))
    }
}

/// Rank of the stress matrix of `s` on `f`, with the assembled matrix.
pub fn stress_matrix_rank<S: Field>(f: &Framework<S>, s: &Stress<S>, tol: f64) -> (usize, StressMatrix<S>) {
    let m = StressMatrix::new(f, s);
    (m.rank(tol), m)
}

/// Whether the rank equals `3n - 6`.
pub fn is_maximum_rank(n: usize, rank: usize) -> bool {
    n >= 2 && rank + 6 == 3 * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::BaseName;
    use crate::graph::Graph;
    use crate::numeric::framework::{random_framework, Sampling};

    #[test]
    fn random_circuit_has_maximum_rank_stress() {
        let g = BaseName::K5MinusE.graph();
        let f = random_framework(&g, &Sampling::seeded(3)).unwrap();
        assert_eq!(f.rigidity_matrix().rank(0.0), 13);
        let s = equilibrium_stress(&f, 0.0).unwrap();
        assert_eq!(s.omega[0], crate::numeric::Rational::from_integer(1.into()));
        assert!(verify_stress(&f, &s).unwrap().is_exact_zero());
        let (rank, sm) = stress_matrix_rank(&f, &s, 0.0);
        assert_eq!(rank, 9);
        assert!(is_maximum_rank(5, rank));
        assert!(sm.cokernel_facts(&f, 0.0));
        assert_eq!(sm.full().rank(0.0), rank);
    }

    #[test]
    fn independent_graph_has_no_stress() {
        let f = random_framework(&Graph::complete(4), &Sampling::seeded(1)).unwrap();
        assert!(matches!(equilibrium_stress(&f, 0.0), Err(NumericError::CokernelDimension(0))));
    }

    #[test]
    fn zero_and_perturbed_stress() {
        let g = BaseName::K5MinusE.graph();
        let f = random_framework(&g, &Sampling::seeded(8)).unwrap();
        assert!(verify_stress(&f, &Stress::zero(&f)).unwrap().is_exact_zero());
        let mut s = equilibrium_stress(&f, 0.0).unwrap();
        s.omega[3] = s.omega[3].add(&Field::one());
        assert!(!verify_stress(&f, &s).unwrap().is_exact_zero());
    }

    #[test]
    fn float_agrees_with_exact() {
        let g = BaseName::H1.graph();
        let f = random_framework(&g, &Sampling { seed: 5, bits: 8, radii: None }).unwrap();
        let ff = f.to_f64(1e-12).unwrap();
        assert_eq!(ff.rigidity_matrix().rank(1e-9), f.rigidity_matrix().rank(0.0));
        let s = equilibrium_stress(&f, 0.0).unwrap();
        let sf = equilibrium_stress(&ff, 1e-9).unwrap();
        let conv = Stress { omega: s.omega.iter().map(Field::to_f64).collect(), lambda: s.lambda.iter().map(Field::to_f64).collect() };
        assert!(conv.proportional(&sf, 1e-6));
        assert_eq!(stress_matrix_rank(&ff, &sf, 1e-9).0, 12);
    }
}
