//! The maps Ψ¹, Φ¹ and Φ² on β and A generators, with all structure
//! constants normalized to 1.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigInt, One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, qi, PerturbedRational, Rational};

/// `β_{i,j}` with `(i, j) ≠ (0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BetaGen {
    pub i: u32,
    pub j: u32,
}

impl BetaGen {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == 0 && j == 0 {
            return Err(Error::Validation("beta_{0,0} is not a generator".into()));
        }
        Ok(BetaGen { i, j })
    }

    pub fn weight(&self) -> u32 {
        self.i + self.j
    }
}

impl fmt::Display for BetaGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "beta_{{{},{}}}", self.i, self.j)
    }
}

/// `A_q`, `q ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AGen {
    pub q: u32,
}

impl AGen {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Validation("A_q needs q >= 1".into()));
        }
        Ok(AGen { q })
    }
}

/// Finite rational combination; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<G: Ord> {
    terms: BTreeMap<G, Rational>,
}

impl<G: Ord> Default for LinComb<G> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<G: Ord + Copy> LinComb<G> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(g: G, c: Rational) -> Self {
        let mut l = Self::zero();
        l.add_term(g, c);
        l
    }

    pub fn add_term(&mut self, g: G, c: Rational) {
        let e = self.terms.entry(g).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        for (g, v) in &other.terms {
            self.add_term(*g, v * c);
        }
    }

    pub fn coeff(&self, g: &G) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&G, &Rational)> {
        self.terms.iter()
    }
}

impl Serialize for LinComb<AGen> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            q: u32,
            coeff: String,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (g, c) in &self.terms {
            seq.serialize_element(&Term {
                q: g.q,
                coeff: fmt_rational(c),
            })?;
        }
        seq.end()
    }
}

impl Serialize for LinComb<BetaGen> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            i: u32,
            j: u32,
            coeff: String,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (g, c) in &self.terms {
            seq.serialize_element(&Term {
                i: g.i,
                j: g.j,
                coeff: fmt_rational(c),
            })?;
        }
        seq.end()
    }
}

/// The pair `(i, j)`, `i + j = q`, minimizing `max{i·a, j·b}`: the counts
/// after merging `{i·a}` and `{j·b}` up to the `q`-th entry.
pub fn optimal_index(a: &PerturbedRational, b: &PerturbedRational, q: u32) -> Result<(u32, u32)> {
    if q == 0 {
        return Err(Error::Validation("q must be at least 1".into()));
    }
    if !a.is_positive()? || !b.is_positive()? {
        return Err(Error::Validation("a and b must be positive".into()));
    }
    let (mut i, mut j) = (0u32, 0u32);
    for _ in 0..q {
        let na = a.times(i as i64 + 1);
        let nb = b.times(j as i64 + 1);
        if na.lt(&nb)? {
            i += 1;
        } else {
            j += 1;
        }
    }
    let value = |i: u32| -> Result<PerturbedRational> {
        let x = a.times(i as i64);
        let y = b.times((q - i) as i64);
        Ok(if x.lt(&y)? { y } else { x })
    };
    let best = value(i)?;
    let mut attained = 0;
    for t in 0..=q {
        let v = value(t)?;
        if v.lt(&best)? {
            return Err(Error::TieDetected(q as usize));
        }
        if v == best {
            attained += 1;
        }
    }
    if attained != 1 {
        return Err(Error::TieDetected(q as usize));
    }
    Ok((i, j))
}

/// `Ψ¹(A_q) = β_{i(q), j(q)}` for the pair `(1, k + ε)`.
pub fn psi1(k: u32, q: u32) -> Result<LinComb<BetaGen>> {
    let a = PerturbedRational::from_int(1);
    let b = &PerturbedRational::from_int(k as i64) + &PerturbedRational::eps();
    let (i, j) = optimal_index(&a, &b, q)?;
    Ok(LinComb::single(BetaGen::new(i, j)?, Rational::one()))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product::<BigInt>().max(BigInt::one())
}

fn phi1_coeff(g: BetaGen, iq: u32, jq: u32) -> Rational {
    Rational::new(factorial(iq) * factorial(jq), factorial(g.i) * factorial(g.j))
}

/// `Φ¹(β_{i,j}) = q!/(i!·j!)·A_q`, `q = i + j`, when `S` exceeds `q`.
pub fn phi1(g: BetaGen, large_s: bool) -> Result<LinComb<AGen>> {
    if !large_s {
        return Err(Error::Unsupported("phi1 with a finite S needs phi1_at".into()));
    }
    let q = g.weight();
    Ok(LinComb::single(AGen::new(q)?, phi1_coeff(g, q, 0)))
}

/// `Φ¹(β_{i,j}) = i(q)!·j(q)!/(i!·j!)·A_q` for the target `E(ε, εS)`.
pub fn phi1_at(g: BetaGen, s: &PerturbedRational) -> Result<LinComb<AGen>> {
    let q = g.weight();
    let (iq, jq) = optimal_index(&PerturbedRational::from_int(1), s, q)?;
    Ok(LinComb::single(AGen::new(q)?, phi1_coeff(g, iq, jq)))
}

/// Which argument the recursion lowers first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteRule {
    First,
    Second,
}

/// Memoized evaluator for Φ² under large `S`.
pub struct Phi2 {
    rule: RewriteRule,
    memo: HashMap<(BetaGen, BetaGen), LinComb<AGen>>,
}

impl Phi2 {
    pub fn new(rule: RewriteRule) -> Self {
        Phi2 {
            rule,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, g1: BetaGen, g2: BetaGen) -> Result<LinComb<AGen>> {
        if let Some(v) = self.memo.get(&(g1, g2)) {
            return Ok(v.clone());
        }
        let v = match self.rule {
            RewriteRule::First if g1.j >= 1 => self.lower_first(g1, g2)?,
            RewriteRule::First if g2.j >= 1 => self.eval(g2, g1)?,
            RewriteRule::Second if g2.j >= 1 => self.lower_second(g1, g2)?,
            RewriteRule::Second if g1.j >= 1 => self.eval(g2, g1)?,
            _ => LinComb::zero(),
        };
        self.memo.insert((g1, g2), v.clone());
        Ok(v)
    }

    /// `[(i₁+1)·Φ²(β_{i₁+1,j₁−1}, g₂) − ((i₁+1)j₂ − j₁i₂)·Φ¹(β_{i₁+i₂+1, j₁+j₂})]/j₁`.
    fn lower_first(&mut self, g1: BetaGen, g2: BetaGen) -> Result<LinComb<AGen>> {
        let (i1, j1, i2, j2) = (g1.i as i64, g1.j as i64, g2.i as i64, g2.j as i64);
        let mut out = LinComb::zero();
        let next = BetaGen::new(g1.i + 1, g1.j - 1)?;
        out.add_scaled(&self.eval(next, g2)?, &qi(i1 + 1));
        let cross = (i1 + 1) * j2 - j1 * i2;
        let merged = BetaGen::new(g1.i + g2.i + 1, g1.j + g2.j)?;
        out.add_scaled(&phi1(merged, true)?, &qi(-cross));
        let mut scaled = LinComb::zero();
        scaled.add_scaled(&out, &Rational::new(BigInt::one(), BigInt::from(j1)));
        Ok(scaled)
    }

    fn lower_second(&mut self, g1: BetaGen, g2: BetaGen) -> Result<LinComb<AGen>> {
        let (i1, j1, i2, j2) = (g1.i as i64, g1.j as i64, g2.i as i64, g2.j as i64);
        let mut out = LinComb::zero();
        let next = BetaGen::new(g2.i + 1, g2.j - 1)?;
        out.add_scaled(&self.eval(g1, next)?, &qi(i2 + 1));
        let cross = (i2 + 1) * j1 - j2 * i1;
        let merged = BetaGen::new(g1.i + g2.i + 1, g1.j + g2.j)?;
        out.add_scaled(&phi1(merged, true)?, &qi(-cross));
        let mut scaled = LinComb::zero();
        scaled.add_scaled(&out, &Rational::new(BigInt::one(), BigInt::from(j2)));
        Ok(scaled)
    }
}

/// `Φ²(g₁, g₂)` for large `S`.
pub fn phi2(g1: BetaGen, g2: BetaGen, large_s: bool) -> Result<LinComb<AGen>> {
    if !large_s {
        return Err(Error::Unsupported("phi2 is only available for large S".into()));
    }
    Phi2::new(RewriteRule::First).eval(g1, g2)
}

/// Bilinear extension of Φ².
pub fn phi2_bilinear(x: &LinComb<BetaGen>, y: &LinComb<BetaGen>, ev: &mut Phi2) -> Result<LinComb<AGen>> {
    let mut out = LinComb::zero();
    for (g1, c1) in x.terms() {
        for (g2, c2) in y.terms() {
            out.add_scaled(&ev.eval(*g1, *g2)?, &(c1 * c2));
        }
    }
    Ok(out)
}

/// Coefficient of `A_{2k+3}` in `Φ²(Ψ¹(A_{k+1}), Ψ¹(A_{k+1}))`.
pub fn pairing_coefficient(k: u32) -> Result<Rational> {
    if k < 2 {
        return Err(Error::Validation(format!("k = {k} must be at least 2")));
    }
    let v = psi1(k, k + 1)?;
    let mut ev = Phi2::new(RewriteRule::First);
    let out = phi2_bilinear(&v, &v, &mut ev)?;
    let c = out.coeff(&AGen::new(2 * k + 3)?);
    let closed = qi((2 * k as i64 + 3) * (k as i64 * k as i64 + k as i64));
    debug_assert_eq!(c, closed);
    Ok(c)
}

/// Generators of total weight at most `w`, in order.
pub fn generators_up_to(w: u32) -> Vec<BetaGen> {
    let mut v = Vec::new();
    for t in 1..=w {
        for i in (0..=t).rev() {
            v.push(BetaGen { i, j: t - i });
        }
    }
    v
}

/// Pairs of total weight ≤ `w` where symmetry or confluence fails.
pub fn consistency_failures(w: u32) -> Result<Vec<(BetaGen, BetaGen)>> {
    let gens = generators_up_to(w);
    let mut first = Phi2::new(RewriteRule::First);
    let mut second = Phi2::new(RewriteRule::Second);
    let mut bad = Vec::new();
    for &g1 in &gens {
        for &g2 in &gens {
            if g1.weight() + g2.weight() > w {
                continue;
            }
            let a = first.eval(g1, g2)?;
            if a != first.eval(g2, g1)? || a != second.eval(g1, g2)? {
                bad.push((g1, g2));
            }
        }
    }
    Ok(bad)
}

/// Whether every stored coefficient of Φ¹ under large `S` is a positive integer.
pub fn phi1_integral(g: BetaGen) -> Result<bool> {
    Ok(phi1(g, true)?.terms().all(|(_, c)| c.is_integer() && c.is_positive()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(i: u32, j: u32) -> BetaGen {
        BetaGen::new(i, j).unwrap()
    }

    fn pr(s: &str) -> PerturbedRational {
        s.parse().unwrap()
    }

    #[test]
    fn optimal_index_examples() {
        for k in 2..8 {
            let s = format!("{k} + e");
            assert_eq!(optimal_index(&pr("1"), &pr(&s), k + 1).unwrap(), (k, 1));
            assert_eq!(optimal_index(&pr("1"), &pr("100"), 2 * k + 3).unwrap(), (2 * k + 3, 0));
        }
        assert_eq!(optimal_index(&pr("1"), &pr("1 + e"), 2).unwrap(), (1, 1));
        assert_eq!(optimal_index(&pr("1"), &pr("1"), 3), Err(Error::TieDetected(3)));
    }

    #[test]
    fn psi1_examples() {
        assert_eq!(psi1(2, 3).unwrap(), LinComb::single(b(2, 1), qi(1)));
        assert_eq!(psi1(2, 1).unwrap(), LinComb::single(b(1, 0), qi(1)));
        assert_eq!(psi1(3, 4).unwrap(), LinComb::single(b(3, 1), qi(1)));
    }

    #[test]
    fn phi1_examples() {
        assert_eq!(phi1(b(6, 1), true).unwrap(), LinComb::single(AGen { q: 7 }, qi(7)));
        assert_eq!(phi1(b(5, 2), true).unwrap(), LinComb::single(AGen { q: 7 }, qi(21)));
        assert_eq!(phi1(b(4, 0), true).unwrap(), LinComb::single(AGen { q: 4 }, qi(1)));
        assert!(phi1(b(4, 0), false).is_err());
        // S = 3/2: the optimal index for q = 3 is (2, 1).
        assert_eq!(phi1_at(b(1, 2), &pr("3/2")).unwrap(), LinComb::single(AGen { q: 3 }, qi(1)));
    }

    #[test]
    fn phi2_examples() {
        assert!(phi2(b(3, 0), b(4, 0), true).unwrap().is_zero());
        assert_eq!(phi2(b(0, 1), b(1, 0), true).unwrap(), LinComb::single(AGen { q: 3 }, qi(3)));
        let v = phi2(b(2, 1), b(2, 1), true).unwrap();
        assert_eq!(v, LinComb::single(AGen { q: 7 }, qi(42)));
    }

    #[test]
    fn pairing_values() {
        assert_eq!(pairing_coefficient(2).unwrap(), qi(42));
        assert_eq!(pairing_coefficient(3).unwrap(), qi(108));
        assert_eq!(pairing_coefficient(5).unwrap(), qi(390));
    }

    #[test]
    fn small_weight_consistency() {
        assert!(consistency_failures(6).unwrap().is_empty());
    }
}
