//! Exact arithmetic in ℚ[ε] with ε a positive infinitesimal.
//!
//! Values are truncated polynomials `q0 + q1 ε + … + qD ε^D`. Anything
//! dropped beyond the degree budget sets the `truncated` flag, and any
//! comparison the stored coefficients cannot settle fails with
//! [`Error::IndeterminateComparison`] instead of guessing.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Default number of ε-orders kept.
pub const DEFAULT_DEGREE: usize = 2;

/// Environment variable read by front ends to override [`DEFAULT_DEGREE`].
pub const DEGREE_ENV: &str = "SHAPEKIT_EPS_DEGREE";

/// Build a rational from an integer numerator and denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of a rational as `i64`.
pub fn floor_rational(r: &Rational) -> Result<i64> {
    r.floor()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Overflow(fmt_rational(r)))
}

/// Ceiling of a rational as `i64`.
pub fn ceil_rational(r: &Rational) -> Result<i64> {
    r.ceil()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Overflow(fmt_rational(r)))
}

/// Element of ℚ[ε] truncated at a degree budget.
#[derive(Clone, Debug)]
pub struct PerturbedRational {
    coeffs: Vec<Rational>,
    degree: usize,
    truncated: bool,
}

impl PerturbedRational {
    /// Build from coefficients `[q0, q1, …]` with the default budget.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self::with_degree(coeffs, DEFAULT_DEGREE)
    }

    /// Build from coefficients with an explicit degree budget.
    pub fn with_degree(coeffs: Vec<Rational>, degree: usize) -> Self {
        let mut v = PerturbedRational {
            coeffs,
            degree,
            truncated: false,
        };
        if v.coeffs.len() > degree + 1 {
            if v.coeffs[degree + 1..].iter().any(|c| !c.is_zero()) {
                v.truncated = true;
            }
            v.coeffs.truncate(degree + 1);
        }
        v.trim();
        v
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(vec![r])
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(qi(n))
    }

    /// The infinitesimal ε itself.
    pub fn eps() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `c0 + c1 ε` with integer-fraction coefficients.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::new(vec![c0, c1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Coefficient of ε^i (zero beyond the stored range).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Stored coefficients with trailing zeros trimmed.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn set_degree(mut self, degree: usize) -> Self {
        if self.coeffs.len() > degree + 1 {
            self.truncated = true;
            self.coeffs.truncate(degree + 1);
            self.trim();
        }
        self.degree = degree;
        self
    }

    /// True when terms beyond the budget were dropped.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// The standard part `q0`.
    pub fn standard_part(&self) -> Rational {
        self.coeff(0)
    }

    /// True when every ε-coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1 && !self.truncated
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.standard_part())
    }

    pub fn is_zero_exact(&self) -> bool {
        self.coeffs.is_empty() && !self.truncated
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Ordering that fails when the stored data cannot decide it.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        let diff = self - other;
        match diff.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_positive() => Ok(Ordering::Greater),
            Some(_) => Ok(Ordering::Less),
            None if diff.truncated => Err(Error::IndeterminateComparison(format!(
                "{self} vs {other}"
            ))),
            None => Ok(Ordering::Equal),
        }
    }

    /// Sign as -1, 0, 1.
    pub fn signum(&self) -> Result<i32> {
        Ok(match self.try_cmp(&Self::zero())? {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        })
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.signum()? > 0)
    }

    pub fn lt(&self, other: &Self) -> Result<bool> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn le(&self, other: &Self) -> Result<bool> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    /// ⌊x⌋ for x = q0 + (infinitesimal).
    pub fn floor(&self) -> Result<i64> {
        let q0 = self.standard_part();
        if !q0.is_integer() {
            return floor_rational(&q0);
        }
        let n = floor_rational(&q0)?;
        match self.coeffs.iter().skip(1).find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => Ok(n - 1),
            Some(_) => Ok(n),
            None if self.truncated => Err(Error::IndeterminateComparison(format!(
                "floor of {self} at an integer with truncated tail"
            ))),
            None => Ok(n),
        }
    }

    /// ⌈x⌉, dual to [`floor`](Self::floor).
    pub fn ceil(&self) -> Result<i64> {
        Ok(-(-self).floor()?)
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, r: &Rational) -> Self {
        PerturbedRational {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
            degree: self.degree,
            truncated: self.truncated,
        }
        .trimmed()
    }

    /// Multiply by an integer.
    pub fn times(&self, n: i64) -> Self {
        self.scale(&qi(n))
    }

    fn trimmed(mut self) -> Self {
        self.trim();
        self
    }

    /// Power-series quotient; requires a nonzero standard part in `other`.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let y0 = other.standard_part();
        if y0.is_zero() {
            return Err(Error::DivisionByInfinitesimal(other.to_string()));
        }
        let degree = self.degree.max(other.degree);
        let mut out: Vec<Rational> = Vec::with_capacity(degree + 1);
        for n in 0..=degree {
            let mut c = self.coeff(n);
            for j in 1..=n {
                c -= other.coeff(j) * &out[n - j];
            }
            out.push(c / &y0);
        }
        // Exact iff other * out reproduces self with nothing past the budget.
        let q = PerturbedRational {
            coeffs: out.clone(),
            degree,
            truncated: false,
        };
        let back = poly_mul(&other.coeffs, &q.coeffs);
        let mut exact = true;
        for i in 0..back.len().max(self.coeffs.len()) {
            let lhs = back.get(i).cloned().unwrap_or_else(Rational::zero);
            if lhs != self.coeff(i) {
                exact = false;
                break;
            }
        }
        Ok(PerturbedRational {
            coeffs: out,
            degree,
            truncated: self.truncated || other.truncated || !exact,
        }
        .trimmed())
    }

    /// `self / other` after cancelling the common power of ε.
    ///
    /// Handles scaled-down domains such as `E(ε, εS)` whose parameters have
    /// zero standard part.
    pub fn ratio(&self, other: &Self) -> Result<Self> {
        let v = other
            .valuation()
            .ok_or_else(|| Error::DivisionByInfinitesimal(other.to_string()))?;
        if v == 0 {
            return self.checked_div(other);
        }
        if self.valuation().is_some_and(|u| u < v) {
            return Err(Error::DivisionByInfinitesimal(format!(
                "{self} / {other} is infinite"
            )));
        }
        self.shift_down(v).checked_div(&other.shift_down(v))
    }

    fn shift_down(&self, v: usize) -> Self {
        let coeffs: Vec<Rational> = self.coeffs.iter().skip(v).cloned().collect();
        let degree = if self.truncated {
            self.degree.saturating_sub(v)
        } else {
            self.degree
        };
        let mut out = PerturbedRational {
            coeffs,
            degree,
            truncated: self.truncated,
        };
        out.coeffs.truncate(degree + 1);
        out.trimmed()
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl PartialEq for PerturbedRational {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for PerturbedRational {}

impl std::hash::Hash for PerturbedRational {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Lexicographic order; `None` when truncation makes it undecidable.
impl PartialOrd for PerturbedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl<'a> Add<&'a PerturbedRational> for &'a PerturbedRational {
    type Output = PerturbedRational;
    fn add(self, rhs: &PerturbedRational) -> PerturbedRational {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        PerturbedRational {
            coeffs,
            degree: self.degree.max(rhs.degree),
            truncated: self.truncated || rhs.truncated,
        }
        .trimmed()
    }
}

impl<'a> Sub<&'a PerturbedRational> for &'a PerturbedRational {
    type Output = PerturbedRational;
    fn sub(self, rhs: &PerturbedRational) -> PerturbedRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a PerturbedRational> for &'a PerturbedRational {
    type Output = PerturbedRational;
    fn mul(self, rhs: &PerturbedRational) -> PerturbedRational {
        let degree = self.degree.max(rhs.degree);
        let full = poly_mul(&self.coeffs, &rhs.coeffs);
        PerturbedRational::with_degree(full, degree).flagged(self.truncated || rhs.truncated)
    }
}

impl PerturbedRational {
    fn flagged(mut self, t: bool) -> Self {
        self.truncated |= t;
        self
    }
}

impl Neg for &PerturbedRational {
    type Output = PerturbedRational;
    fn neg(self) -> PerturbedRational {
        PerturbedRational {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            degree: self.degree,
            truncated: self.truncated,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PerturbedRational> for PerturbedRational {
            type Output = PerturbedRational;
            fn $m(self, rhs: PerturbedRational) -> PerturbedRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a PerturbedRational> for PerturbedRational {
            type Output = PerturbedRational;
            fn $m(self, rhs: &PerturbedRational) -> PerturbedRational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<PerturbedRational> for &'a PerturbedRational {
            type Output = PerturbedRational;
            fn $m(self, rhs: PerturbedRational) -> PerturbedRational {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PerturbedRational {
    type Output = PerturbedRational;
    fn neg(self) -> PerturbedRational {
        -&self
    }
}

impl From<Rational> for PerturbedRational {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for PerturbedRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for PerturbedRational {
    /// Canonical form such as `3`, `2 + e`, `1 - 1/2 e^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let body = fmt_rational(&mag);
            match i {
                0 => write!(f, "{body}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{body} ")?;
                    }
                    if i == 1 {
                        write!(f, "e")?;
                    } else {
                        write!(f, "e^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Options used when parsing literals.
#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    pub degree: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            degree: DEFAULT_DEGREE,
        }
    }
}

impl ParseOptions {
    /// Default options with the degree budget taken from the environment.
    pub fn from_env() -> Result<Self> {
        match std::env::var(DEGREE_ENV) {
            Ok(v) => {
                let degree = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{DEGREE_ENV}={v:?} is not a degree")))?;
                Ok(ParseOptions { degree })
            }
            Err(_) => Ok(ParseOptions::default()),
        }
    }
}

impl PerturbedRational {
    /// Parse a sum of terms like `p/q`, `r/s e`, `2e^2`; `d` is accepted as
    /// an alias for `e`.
    pub fn parse_with(s: &str, opts: ParseOptions) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("{why} in {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty literal"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(idx > 0 && cur.ends_with('^')) {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if idx > 0 {
                    return Err(bad("dangling sign"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad("dangling sign"));
        }
        terms.push((neg, cur));

        let mut coeffs: Vec<Rational> = Vec::new();
        for (neg, t) in terms {
            let (num_part, power) = match t.find(['e', 'd']) {
                Some(pos) => {
                    let rest = &t[pos + 1..];
                    let power: usize = if rest.is_empty() {
                        1
                    } else if let Some(p) = rest.strip_prefix('^') {
                        p.parse().map_err(|_| bad("bad exponent"))?
                    } else {
                        return Err(bad("junk after infinitesimal"));
                    };
                    let mut n = t[..pos].to_string();
                    if n.ends_with('*') {
                        n.pop();
                    }
                    (n, power)
                }
                None => (t.clone(), 0),
            };
            let mut c = if num_part.is_empty() {
                Rational::one()
            } else {
                parse_rational(&num_part)?
            };
            if neg {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, Rational::zero());
            }
            coeffs[power] += c;
        }
        Ok(Self::with_degree(coeffs, opts.degree))
    }
}

impl FromStr for PerturbedRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s, ParseOptions::default())
    }
}

impl Serialize for PerturbedRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PerturbedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `(⌊a⌋ − λ⌊a/λ⌋, ⌈a⌉ − λ⌈a/λ⌉)` for `a ≥ 0` and an integer `λ ≥ 1`.
pub fn hermite_floor_gap(a: &PerturbedRational, lambda: i64) -> Result<(i64, i64)> {
    if a.signum()? < 0 || lambda < 1 {
        return Err(Error::Validation(format!(
            "hermite gap needs a >= 0 and lambda >= 1, got a={a}, lambda={lambda}"
        )));
    }
    let inv = Rational::new(1.into(), lambda.into());
    let scaled = a.scale(&inv);
    let lo = a.floor()? - lambda * scaled.floor()?;
    let hi = a.ceil()? - lambda * scaled.ceil()?;
    Ok((lo, hi))
}

/// Both gaps are within their bounds: the first `≥ 0`, the second `≥ 1 − λ`.
pub fn hermite_gap_holds(a: &PerturbedRational, lambda: i64) -> Result<bool> {
    let (lo, hi) = hermite_floor_gap(a, lambda)?;
    Ok(lo >= 0 && hi >= 1 - lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(s: &str) -> PerturbedRational {
        s.parse().unwrap()
    }

    #[test]
    fn floor_examples() {
        assert_eq!(pr("3 - e").floor().unwrap(), 2);
        assert_eq!(pr("3 + e").floor().unwrap(), 3);
        assert_eq!(pr("7/2 - 5e").floor().unwrap(), 3);
        assert_eq!(pr("-2 - e").floor().unwrap(), -3);
        assert_eq!(pr("3 - e").ceil().unwrap(), 3);
        assert_eq!(pr("3 + e").ceil().unwrap(), 4);
    }

    #[test]
    fn truncated_floor_is_indeterminate() {
        let e = PerturbedRational::eps().set_degree(1);
        let sq = &e * &e;
        assert!(sq.is_truncated());
        let x = &PerturbedRational::from_int(2) + &sq;
        assert!(matches!(x.floor(), Err(Error::IndeterminateComparison(_))));
    }

    #[test]
    fn k_over_k_plus_eps() {
        let k_plus = pr("5/2 + e");
        let r = PerturbedRational::from_int(5).checked_div(&k_plus).unwrap();
        assert_eq!(r.floor().unwrap(), 1);
        assert!(r.is_truncated());
        for k in 2..8 {
            let b = &PerturbedRational::from_int(k) + &PerturbedRational::eps();
            let r = PerturbedRational::from_int(k).checked_div(&b).unwrap();
            assert_eq!(r.floor().unwrap(), 0);
        }
    }

    #[test]
    fn division_by_infinitesimal() {
        let e = PerturbedRational::eps();
        assert!(matches!(
            PerturbedRational::from_int(1).checked_div(&e),
            Err(Error::DivisionByInfinitesimal(_))
        ));
        let r = e.times(3).ratio(&e).unwrap();
        assert_eq!(r, PerturbedRational::from_int(3));
    }

    #[test]
    fn exact_division_is_not_flagged() {
        let x = pr("2 + 2e");
        let y = pr("1 + e");
        let r = x.checked_div(&y).unwrap();
        assert_eq!(r, PerturbedRational::from_int(2));
        assert!(!r.is_truncated());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "3", "-1/2", "2 + e", "1 - 1/2 e", "-e", "e^2", "3/4 + 2/3 e - e^2"] {
            let v = pr(s);
            assert_eq!(v.to_string(), s);
            assert_eq!(pr(&v.to_string()), v);
        }
        assert_eq!(pr("6+d"), pr("6 + e"));
        assert_eq!(pr("2*e"), pr("2e"));
    }

    #[test]
    fn lexicographic_order() {
        assert!(pr("1 + e").lt(&pr("1 + 2e")).unwrap());
        assert!(pr("1 + 100e").lt(&pr("3/2")).unwrap());
        assert!(pr("-e^2").lt(&PerturbedRational::zero()).unwrap());
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_floor_gap(&pr("7"), 3).unwrap(), (1, -2));
        assert_eq!(hermite_floor_gap(&pr("6"), 3).unwrap(), (0, 0));
        assert_eq!(hermite_floor_gap(&pr("5 + e"), 2).unwrap(), (1, 0));
        assert!(hermite_gap_holds(&pr("0"), 1).unwrap());
        assert!(hermite_floor_gap(&pr("-e"), 2).is_err());
    }
}
