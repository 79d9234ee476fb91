//! Three exact reference frameworks over `Q(sqrt 2)` with reference
//! equilibrium stresses and ranks, used as golden data.
//!
//! In the literals `s` stands for `sqrt 2`. Two of the source values carry
//! transcription slips (a dropped `s`, a dropped minus sign); the corrected
//! values are embedded, and [`GoldenCase::printed_stress`] reproduces the
//! values as printed so tests can show that they fail.

use serde::Serialize;

use crate::constructions::BaseName;
use crate::numeric::{
    equilibrium_stress, stress_matrix_rank, verify_stress, Field, Framework, NumericError, Quadratic, Stress,
};

/// One reference framework with its stress and expected ranks.
#[derive(Clone, Debug)]
pub struct GoldenCase {
    pub name: &'static str,
    pub base: BaseName,
    points: &'static [[&'static str; 3]],
    omega: &'static [&'static str],
    lambda: &'static [&'static str],
    /// `(index into omega ++ lambda, literal as printed)`.
    printed: &'static [(usize, &'static str)],
    pub rank_rigidity: usize,
    pub rank_stress: usize,
}

const H1_POINTS: [[&str; 3]; 6] = [
    ["0", "1", "0"],
    ["-1", "0", "-1/3"],
    ["1/2*s", "-1/2*s", "1/3"],
    ["1", "0", "-1"],
    ["0", "-1", "2/3"],
    ["1/2*s", "1/2*s", "1/2"],
];

const H2_POINTS: [[&str; 3]; 7] = [
    H1_POINTS[0],
    H1_POINTS[1],
    H1_POINTS[2],
    H1_POINTS[3],
    H1_POINTS[4],
    H1_POINTS[5],
    ["-1/2*s", "-1/2*s", "-1/4"],
];

static CASES: [GoldenCase; 3] = [
    GoldenCase {
        name: "K5-e",
        base: BaseName::K5MinusE,
        points: &[
            ["0", "1", "0"],
            ["1", "0", "-1"],
            ["1/2*s", "-1/2*s", "1/3"],
            ["-1", "0", "-1/3"],
            ["1/2*s", "1/2*s", "1/2"],
        ],
        omega: &[
            "239",
            "-216-654*s",
            "201+270*s",
            "756+616*s",
            "108+327*s",
            "-1635/2-852*s",
            "108+88*s",
            "-108-327*s",
            "-648-528*s",
        ],
        lambda: &["290+254*s", "1595+1397*s", "1524+870*s", "3045+2667*s", "1016+580*s"],
        printed: &[],
        rank_rigidity: 13,
        rank_stress: 9,
    },
    GoldenCase {
        name: "H1",
        base: BaseName::H1,
        points: &H1_POINTS,
        omega: &[
            "1",
            "2*s",
            "-361/441+10/49*s",
            "-62/147-82/147*s",
            "-20/49-80/441*s",
            "s",
            "1/2+s",
            "-s",
            "32/147+12/49*s",
            "4/49+16/441*s",
            "-24/49-32/147*s",
        ],
        lambda: &["-10/9-10/9*s", "-3-3*s", "-4-2*s", "-13/9-13/9*s", "4/3+4/3*s", "8/9+4/9*s"],
        printed: &[(4, "-20/49-80/441")],
        rank_rigidity: 16,
        rank_stress: 12,
    },
    GoldenCase {
        name: "H2",
        base: BaseName::H2,
        points: &H2_POINTS,
        omega: &[
            "1",
            "2*s",
            "4/7*s-13/21",
            "8/7+8/21*s",
            "s",
            "1/2+s",
            "-s",
            "-2652/25165-338/25165*s",
            "-2764/25165*s-4652/25165",
            "28424/75495*s+24784/25165",
            "2764/25165*s+4652/25165",
            "568/3595+16/3595*s",
            "18608/45297+11056/45297*s",
        ],
        lambda: &[
            "-74/21*s-82/21",
            "-3-3*s",
            "-2*s-4",
            "-269/105-253/105*s",
            "-4/35*s-12/35",
            "-212/315*s-328/315",
            "-704/315*s-1216/315",
        ],
        printed: &[(13 + 3, "269/105-253/105*s")],
        rank_rigidity: 19,
        rank_stress: 15,
    },
];

pub fn cases() -> &'static [GoldenCase] {
    &CASES
}

pub fn case(name: &str) -> Option<&'static GoldenCase> {
    CASES.iter().find(|c| c.name.eq_ignore_ascii_case(name))
}

fn lit(s: &str) -> Quadratic {
    Quadratic::parse(s, 2).expect("embedded literal")
}

impl GoldenCase {
    pub fn framework(&self) -> Framework<Quadratic> {
        let points = self.points.iter().map(|p| [lit(p[0]), lit(p[1]), lit(p[2])]).collect();
        Framework::new(self.base.graph(), points, None, 0.0).expect("embedded points lie on the unit cylinder")
    }

    /// The reference stress with the transcription slips corrected.
    pub fn stress(&self) -> Stress<Quadratic> {
        Stress { omega: self.omega.iter().map(|s| lit(s)).collect(), lambda: self.lambda.iter().map(|s| lit(s)).collect() }
    }

    /// The reference stress exactly as printed.
    pub fn printed_stress(&self) -> Stress<Quadratic> {
        let mut v = self.stress().to_vector();
        for &(i, s) in self.printed {
            v[i] = lit(s);
        }
        let m = self.omega.len();
        Stress { omega: v[..m].to_vec(), lambda: v[m..].to_vec() }
    }

    pub fn has_printed_slip(&self) -> bool {
        !self.printed.is_empty()
    }

    /// Runs every golden check in the scalar field `S`. With `corrupt`, the
    /// first edge weight of the reference stress is perturbed by one.
    pub fn check<S: Field>(&self, convert: impl Fn(&Quadratic) -> S, tol: f64, corrupt: bool) -> Result<GoldenReport, NumericError> {
        let f = self.framework().map(&convert, tol)?;
        let q = self.stress();
        let mut s = Stress { omega: q.omega.iter().map(&convert).collect(), lambda: q.lambda.iter().map(&convert).collect() };
        if corrupt {
            s.omega[0] = s.omega[0].add(&S::one());
        }
        let rank_rigidity = f.rigidity_matrix().rank(tol);
        // scale-aware residual threshold for floating point
        let scale = s.to_vector().iter().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
        let residual = verify_stress(&f, &s)?;
        let residual_zero = residual.vanishes(tol * 1e3 * scale);
        let (rank_stress, _) = stress_matrix_rank(&f, &s, tol);
        let (cokernel_dim, proportional) = match equilibrium_stress(&f, tol) {
            Ok(c) => (1, c.proportional(&s, if S::EXACT { 0.0 } else { 1e-6 })),
            Err(NumericError::CokernelDimension(d)) => (d, false),
            Err(e) => return Err(e),
        };
        Ok(GoldenReport {
            name: self.name,
            scalar: S::NAME,
            rank_rigidity,
            expected_rank_rigidity: self.rank_rigidity,
            residual_zero,
            residual_max: residual.max_abs(),
            rank_stress,
            expected_rank_stress: self.rank_stress,
            cokernel_dim,
            proportional,
        })
    }
}

/// Outcome of the golden checks for one case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenReport {
    pub name: &'static str,
    pub scalar: &'static str,
    pub rank_rigidity: usize,
    pub expected_rank_rigidity: usize,
    pub residual_zero: bool,
    pub residual_max: f64,
    pub rank_stress: usize,
    pub expected_rank_stress: usize,
    pub cokernel_dim: usize,
    pub proportional: bool,
}

impl GoldenReport {
    /// Names of the quantities that disagree with the reference.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.rank_rigidity != self.expected_rank_rigidity {
            out.push("rigidity-matrix rank");
        }
        if !self.residual_zero {
            out.push("equilibrium residual");
        }
        if self.rank_stress != self.expected_rank_stress {
            out.push("stress-matrix rank");
        }
        if self.cokernel_dim != 1 {
            out.push("cokernel dimension");
        }
        if !self.proportional {
            out.push("projective agreement");
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}
