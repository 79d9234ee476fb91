//! The scalar tower: exact rationals, `Q(sqrt d)`, and `f64`, behind one
//! field interface.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{self, Matrix};
use super::NumericError;

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Field operations shared by every scalar kind.
///
/// Rank and nullspace have exact defaults (fraction-free elimination); `f64`
/// overrides them with SVD-based versions.
pub trait Field: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    const EXACT: bool;
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Panics on division by zero.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Field tag: `d` for `Q(sqrt d)`, 0 when the value is rational.
    fn radicand(&self) -> u32 {
        0
    }

    /// Equality up to `tol` for inexact scalars.
    fn approx_eq(&self, o: &Self, _tol: f64) -> bool {
        self == o
    }

    /// Rescales a row by a nonzero constant to keep elimination entries small.
    fn normalise_row(_row: &mut [Self]) {}

    fn rank_of(m: &Matrix<Self>, _tol: f64) -> usize {
        matrix::bareiss_rank(m)
    }

    fn nullspace_of(m: &Matrix<Self>, _tol: f64) -> Vec<Vec<Self>> {
        matrix::exact_nullspace(m)
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }
}

impl Field for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn normalise_row(row: &mut [Self]) {
        let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let g = row.iter().fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()));
        if g.is_zero() {
            return;
        }
        let s = Rational::new(l, g);
        for q in row.iter_mut() {
            *q = &*q * &s;
        }
    }
    fn rank_of(m: &Matrix<Self>, _tol: f64) -> usize {
        matrix::integer_rank(m)
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "f64";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        assert!(*o != 0.0, "division by zero");
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        (self - o).abs() <= tol * (1.0 + self.abs().max(o.abs()))
    }
    fn rank_of(m: &Matrix<Self>, tol: f64) -> usize {
        matrix::svd_rank(m, tol)
    }
    fn nullspace_of(m: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>> {
        matrix::svd_nullspace(m, tol)
    }
}

/// An element `a + b sqrt(d)` of `Q(sqrt d)`.
///
/// `d = 0` marks a plain rational that combines with any radicand. Mixing two
/// different nonzero radicands is a logic error and panics; frameworks reject
/// such input before arithmetic starts.
#[derive(Clone, Debug)]
pub struct Quadratic {
    a: Rational,
    b: Rational,
    d: u32,
}

fn is_square_free(d: u32) -> bool {
    d >= 2 && (2..).take_while(|k: &u32| k * k <= d).all(|k| !d.is_multiple_of(k * k))
}

impl Quadratic {
    /// `a + b sqrt(d)`; `d` must be square-free and at least 2 unless `b = 0`.
    pub fn new(a: Rational, b: Rational, d: u32) -> Result<Self, NumericError> {
        if Zero::is_zero(&b) {
            return Ok(Quadratic { a, b, d: 0 });
        }
        if !is_square_free(d) {
            return Err(NumericError::Parse(format!("radicand {d} is not a square-free integer >= 2")));
        }
        Ok(Quadratic { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Quadratic { a, b: Zero::zero(), d: 0 }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// The rational value, when `b = 0`.
    pub fn as_rational(&self) -> Option<&Rational> {
        Zero::is_zero(&self.b).then_some(&self.a)
    }

    fn join_d(&self, o: &Self) -> u32 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixed quadratic fields sqrt({d}) and sqrt({e})"),
        }
    }

    fn make(a: Rational, b: Rational, d: u32) -> Self {
        let d = if Zero::is_zero(&b) { 0 } else { d };
        Quadratic { a, b, d }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for Quadratic {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (Zero::is_zero(&self.b) || self.d == o.d)
    }
}

impl Eq for Quadratic {}

impl Field for Quadratic {
    const EXACT: bool = true;
    const NAME: &'static str = "quadratic";

    fn zero() -> Self {
        Quadratic::rational(Zero::zero())
    }
    fn one() -> Self {
        Quadratic::rational(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, o: &Self) -> Self {
        let d = self.join_d(o);
        Self::make(&self.a + &o.a, &self.b + &o.b, d)
    }
    fn sub(&self, o: &Self) -> Self {
        let d = self.join_d(o);
        Self::make(&self.a - &o.a, &self.b - &o.b, d)
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.join_d(o);
        let dd = Rational::from_integer(d.into());
        let a = &self.a * &o.a + &self.b * &o.b * dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::make(a, b, d)
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero");
        // multiply by the conjugate of o over its norm
        let dd = Rational::from_integer(o.d.into());
        let norm = &o.a * &o.a - &o.b * &o.b * dd;
        let conj = Quadratic::make(&o.a / &norm, -&o.b / &norm, o.d);
        self.mul(&conj)
    }
    fn neg(&self) -> Self {
        Quadratic { a: -&self.a, b: -&self.b, d: self.d }
    }
    fn from_rational(q: &Rational) -> Self {
        Quadratic::rational(q.clone())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.a).unwrap_or(f64::NAN) + ToPrimitive::to_f64(&self.b).unwrap_or(f64::NAN) * f64::from(self.d).sqrt()
    }
    fn radicand(&self) -> u32 {
        self.d
    }
    fn normalise_row(row: &mut [Self]) {
        let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.a.denom()).lcm(q.b.denom()));
        let g = row.iter().fold(BigInt::zero(), |acc, q| acc.gcd(q.a.numer()).gcd(q.b.numer()));
        if g.is_zero() {
            return;
        }
        let s = Rational::new(l, g);
        for q in row.iter_mut() {
            q.a = &q.a * &s;
            q.b = &q.b * &s;
        }
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            return f.write_str(&fmt_rational(&self.a));
        }
        let b = fmt_rational(&self.b.abs());
        let neg = self.b.is_negative();
        if Zero::is_zero(&self.a) {
            write!(f, "{}{}*s", if neg { "-" } else { "" }, b)
        } else {
            write!(f, "{}{}{}*s", fmt_rational(&self.a), if neg { "-" } else { "+" }, b)
        }
    }
}

/// Parses `p`, `p/q` or a decimal literal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let t = s.trim();
    let bad = || NumericError::Parse(format!("malformed rational literal {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(NumericError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().map_err(|_| bad())? };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = Rational::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    Ok(Rational::from_integer(t.parse().map_err(|_| bad())?))
}

impl Quadratic {
    /// Parses `p/q`, `r/s*s`, `p/q+r/s*s` or `p/q-r/s*s`, where `s` stands
    /// for `sqrt(d)`.
    pub fn parse(s: &str, d: u32) -> Result<Self, NumericError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(NumericError::Parse("empty scalar literal".into()));
        }
        // split into signed terms at + or - not at the start and not after '/' or '*'
        let bytes = t.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'/' | b'*' | b'e' | b'E') {
                terms.push(&t[start..i]);
                start = i;
            }
        }
        terms.push(&t[start..]);
        let mut a = <Rational as Zero>::zero();
        let mut b = <Rational as Zero>::zero();
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            if let Some(coef) = term.strip_suffix("*s") {
                b += match coef {
                    "" => return Err(NumericError::Parse(format!("malformed term in {s:?}"))),
                    "-" => -<Rational as One>::one(),
                    c => parse_rational(c)?,
                };
            } else if term == "s" {
                b += <Rational as One>::one();
            } else if term == "-s" {
                b -= <Rational as One>::one();
            } else {
                a += parse_rational(term)?;
            }
        }
        Quadratic::new(a, b, d)
    }
}

impl FromStr for Quadratic {
    type Err = NumericError;
    /// Parses with `d = 2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quadratic::parse(s, 2)
    }
}

/// Literal form used in JSON files.
pub fn format_rational(q: &Rational) -> String {
    fmt_rational(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quadratic {
        Quadratic::parse(s, 2).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/6").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn quadratic_round_trip() {
        for s in ["1", "-2/3", "s", "-s", "1/2+s", "3-4/7*s", "-5/2*s", "-20/49-80/441*s"] {
            let v = q(s);
            assert_eq!(Quadratic::parse(&v.to_string(), 2).unwrap(), v, "{s}");
        }
        assert_eq!(q("-s").to_string(), "-1*s");
        assert!(Quadratic::parse("1+s", 4).is_err());
    }

    #[test]
    fn quadratic_field_ops() {
        let s = q("s");
        assert_eq!(s.mul(&s), q("2"));
        let x = q("1/2+3*s");
        let y = q("-2+1/3*s");
        assert_eq!(x.mul(&y).div(&y), x);
        assert_eq!(x.sub(&x), Quadratic::zero());
        assert!(x.add(&x.neg()).is_zero());
        let inv = Quadratic::one().div(&q("1+s"));
        assert_eq!(inv, q("-1+s"));
        assert!((x.to_f64() - (0.5 + 3.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn quadratic_sign() {
        assert_eq!(q("1-s").signum(), -1);
        assert_eq!(q("3/2-s").signum(), 1);
        assert_eq!(q("-3/2+s").signum(), -1);
        assert_eq!(q("0").signum(), 0);
        assert_eq!(q("-s").signum(), -1);
    }

    #[test]
    #[should_panic(expected = "mixed quadratic fields")]
    fn mixed_fields_panic() {
        let a = Quadratic::parse("s", 2).unwrap();
        let b = Quadratic::parse("s", 3).unwrap();
        let _ = a.add(&b);
    }

    #[test]
    fn rational_row_normalisation() {
        let mut row = vec![r(1, 2), r(-3, 4), r(0, 1)];
        Rational::normalise_row(&mut row);
        assert_eq!(row, vec![r(2, 1), r(-3, 1), r(0, 1)]);
    }
}
