//! Exact inclusion test between shapes, with a lattice-sampling cross-check.
//!
//! Every core shape has the form `{(w1, w2) : w2 < g(w1)}` where `g` is `+∞`
//! on a strip, affine on a bounded interval and `−∞` afterwards. Inclusion is
//! decided on the open intervals between breakpoints and at the breakpoints
//! themselves, where each comparison is a linear inequality in `w1`.

use num::{One, Signed, ToPrimitive, Zero};

use super::region::{Constraint, Point, Relation};
use super::{FundamentalDomain, Region};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, qi, Rational};

/// Number of lattice points used by [`includes`]; a Fibonacci number.
pub const DEFAULT_SAMPLES: usize = 121_393;
const DEFAULT_GENERATOR: usize = 75_025;

/// `{σ ≤ w1 < until, w2 < h0 + slope·w1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DownSet {
    pub until: Rational,
    pub h0: Rational,
    pub slope: Rational,
}

/// `{w1 < strip} ∪ down`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Profile {
    pub strip: Rational,
    pub down: Option<DownSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Lin {
    PosInf,
    NegInf,
    /// `c0 + c1·w`.
    Aff(Rational, Rational),
}

impl Lin {
    fn line(c1: i64) -> Lin {
        Lin::Aff(Rational::zero(), qi(c1))
    }
}

impl Profile {
    fn at(&self, w: &Rational) -> Lin {
        if *w < self.strip {
            return Lin::PosInf;
        }
        match &self.down {
            Some(d) if *w < d.until => Lin::Aff(d.h0.clone(), d.slope.clone()),
            _ => Lin::NegInf,
        }
    }

    fn breakpoints(&self) -> Vec<Rational> {
        let mut v = vec![self.strip.clone()];
        if let Some(d) = &self.down {
            v.push(d.until.clone());
        }
        v
    }
}

/// Feasible set of `w` as an interval; `None` bounds are infinite.
#[derive(Clone, Debug)]
struct Interval {
    lo: Option<(Rational, bool)>,
    hi: Option<(Rational, bool)>,
    empty: bool,
}

impl Interval {
    fn open(lo: Option<Rational>, hi: Option<Rational>) -> Self {
        Interval {
            lo: lo.map(|v| (v, false)),
            hi: hi.map(|v| (v, false)),
            empty: false,
        }
    }

    fn point(v: Rational) -> Self {
        Interval {
            lo: Some((v.clone(), true)),
            hi: Some((v, true)),
            empty: false,
        }
    }

    fn raise(&mut self, v: Rational, closed: bool) {
        let replace = match &self.lo {
            None => true,
            Some((cur, c)) => v > *cur || (v == *cur && *c && !closed),
        };
        if replace {
            self.lo = Some((v, closed));
        }
    }

    fn lower(&mut self, v: Rational, closed: bool) {
        let replace = match &self.hi {
            None => true,
            Some((cur, c)) => v < *cur || (v == *cur && *c && !closed),
        };
        if replace {
            self.hi = Some((v, closed));
        }
    }

    /// Restrict to `u > v` (or `u ≥ v` when `weak`).
    fn require(&mut self, u: &Lin, v: &Lin, weak: bool) {
        use Lin::*;
        let ok = match (u, v) {
            (PosInf, PosInf) | (NegInf, NegInf) => weak,
            (PosInf, _) | (_, NegInf) => true,
            (NegInf, _) | (_, PosInf) => false,
            (Aff(a0, a1), Aff(b0, b1)) => {
                let (d0, d1) = (a0 - b0, a1 - b1);
                if d1.is_zero() {
                    d0.is_positive() || (weak && d0.is_zero())
                } else {
                    let root = -d0 / &d1;
                    if d1.is_positive() {
                        self.raise(root, weak);
                    } else {
                        self.lower(root, weak);
                    }
                    true
                }
            }
        };
        if !ok {
            self.empty = true;
        }
    }

    fn pick(&self) -> Option<Rational> {
        if self.empty {
            return None;
        }
        match (&self.lo, &self.hi) {
            (None, None) => Some(Rational::zero()),
            (Some((l, _)), None) => Some(l + Rational::one()),
            (None, Some((h, _))) => Some(h - Rational::one()),
            (Some((l, lc)), Some((h, hc))) => {
                if l < h {
                    Some((l + h) / qi(2))
                } else if l == h && *lc && *hc {
                    Some(l.clone())
                } else {
                    None
                }
            }
        }
    }
}

fn max_lin(a: &Lin, b: &Lin, w: &Rational) -> Rational {
    let eval = |l: &Lin| match l {
        Lin::Aff(c0, c1) => Some(c0 + c1 * w),
        _ => None,
    };
    match (eval(a), eval(b)) {
        (Some(x), Some(y)) => x.max(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("witness height needs a finite bound"),
    }
}

/// A point of `X ∖ Y` over the `w1` range `base`, if any.
fn violation(gx: &Lin, gy: &Lin, tag: FundamentalDomain, base: &Interval) -> Option<Point> {
    let (slope, diag_check) = match tag {
        FundamentalDomain::FullShape => (2, true),
        FundamentalDomain::HamiltonianShape => (1, false),
    };
    // gX > slope·w, gX > gY: witness height max(slope·w, gY).
    let mut iv = base.clone();
    iv.require(gx, &Lin::line(slope), false);
    iv.require(gx, gy, false);
    if let Some(w) = iv.pick() {
        let bound = match gy {
            Lin::NegInf => Lin::line(slope),
            _ => gy.clone(),
        };
        let h = max_lin(&Lin::line(slope), &bound, &w);
        return Some((w, h));
    }
    if diag_check {
        // Diagonal: gX > w ≥ gY.
        let mut iv = base.clone();
        iv.require(gx, &Lin::line(1), false);
        iv.require(&Lin::line(1), gy, true);
        if let Some(w) = iv.pick() {
            return Some((w.clone(), w));
        }
    }
    None
}

fn analytic(x: &Profile, y: &Profile, tag: FundamentalDomain) -> Option<Point> {
    let mut bps: Vec<Rational> = x
        .breakpoints()
        .into_iter()
        .chain(y.breakpoints())
        .filter(|b| b.is_positive())
        .collect();
    bps.sort();
    bps.dedup();
    for b in &bps {
        if let Some(p) = violation(&x.at(b), &y.at(b), tag, &Interval::point(b.clone())) {
            return Some(p);
        }
    }
    let mut edges = vec![Rational::zero()];
    edges.extend(bps);
    for (i, l) in edges.iter().enumerate() {
        let r = edges.get(i + 1).cloned();
        let mid = match &r {
            Some(r) => (l + r) / qi(2),
            None => l + Rational::one(),
        };
        let base = Interval::open(Some(l.clone()), r);
        if let Some(p) = violation(&x.at(&mid), &y.at(&mid), tag, &base) {
            return Some(p);
        }
    }
    None
}

/// Result of a shape inclusion test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Included,
    /// A point of `x ∖ y`.
    Witness(Point),
}

/// A constraint in lattice coordinates: `q·(α·u1 + β·u2) ⋈ p`.
struct IntConstraint {
    alpha: i128,
    beta: i128,
    q: i128,
    p: i128,
    rel: Relation,
}

impl IntConstraint {
    fn compile(c: &Constraint, scale: &Rational) -> Option<Self> {
        let g = &c.gamma * scale;
        Some(IntConstraint {
            alpha: c.alpha.to_integer().to_i128()?,
            beta: c.beta.to_integer().to_i128()?,
            q: g.denom().to_i128()?,
            p: g.numer().to_i128()?,
            rel: c.rel,
        })
    }

    fn holds(&self, u1: i128, u2: i128) -> bool {
        let lhs = self.q * (self.alpha * u1 + self.beta * u2);
        match self.rel {
            Relation::Lt => lhs < self.p,
            Relation::Le => lhs <= self.p,
            Relation::Eq => lhs == self.p,
        }
    }
}

enum Membership<'a> {
    Int(Vec<Vec<IntConstraint>>),
    Exact(&'a Region, Rational),
}

impl<'a> Membership<'a> {
    /// Points are `(u1, u2)·W/(2N)`.
    fn new(r: &'a Region, w: &Rational, n: usize) -> Self {
        let scale = Rational::from_integer((2 * n as i64).into()) / w;
        let compiled: Option<Vec<Vec<IntConstraint>>> = r
            .cells
            .iter()
            .map(|c| c.constraints.iter().map(|k| IntConstraint::compile(k, &scale)).collect())
            .collect();
        let fits = compiled.as_ref().is_some_and(|cells| {
            cells.iter().flatten().all(|k| {
                let bound = (4 * n as i128 + 4) * (k.alpha.abs() + k.beta.abs());
                k.q.checked_mul(bound).is_some()
            })
        });
        match compiled {
            Some(cells) if fits => Membership::Int(cells),
            _ => Membership::Exact(r, w / Rational::from_integer((2 * n as i64).into())),
        }
    }

    fn contains(&self, u1: i128, u2: i128) -> bool {
        match self {
            Membership::Int(cells) => cells.iter().any(|cs| cs.iter().all(|k| k.holds(u1, u2))),
            Membership::Exact(r, unit) => {
                let p = (unit * qi(u1 as i64), unit * qi(u2 as i64));
                r.contains(&p)
            }
        }
    }
}

fn generator(n: usize) -> usize {
    if n == DEFAULT_SAMPLES {
        return DEFAULT_GENERATOR;
    }
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let mut g = ((n as f64) * golden).round().max(1.0) as usize;
    while num::integer::gcd(g, n) != 1 {
        g += 1;
    }
    g
}

/// First lattice point in `x ∖ y` over `[0, W]²`, `W = 2·max size + 1`.
fn sample_difference(x: &Region, y: &Region, n: usize) -> Option<Point> {
    let w = x.domain.size().max(y.domain.size()) * qi(2) + qi(1);
    let (mx, my) = (Membership::new(x, &w, n), Membership::new(y, &w, n));
    let g = generator(n);
    let n128 = n as i128;
    for i in 0..n {
        let u1 = 2 * i as i128 + 1;
        let u2 = 2 * ((i as i128 * g as i128) % n128) + 1;
        if mx.contains(u1, u2) && !my.contains(u1, u2) {
            let unit = &w / Rational::from_integer((2 * n as i64).into());
            return Some((&unit * qi(u1 as i64), &unit * qi(u2 as i64)));
        }
    }
    None
}

/// Decide `x ⊆ y` exactly, cross-checked on [`DEFAULT_SAMPLES`] lattice points.
pub fn includes(x: &Region, y: &Region) -> Result<Inclusion> {
    includes_with_samples(x, y, DEFAULT_SAMPLES)
}

/// As [`includes`] with an explicit sample count (`0` skips the cross-check).
pub fn includes_with_samples(x: &Region, y: &Region, samples: usize) -> Result<Inclusion> {
    if x.tag != y.tag {
        return Err(Error::MixedFundamentalDomain);
    }
    match analytic(&x.domain.profile(), &y.domain.profile(), x.tag) {
        Some(p) => {
            if !(x.tag.contains(&p) && x.contains(&p) && !y.contains(&p)) {
                return Err(Error::InclusionCrossCheck(format!(
                    "witness ({}, {}) is not in {} minus {}",
                    fmt_rational(&p.0),
                    fmt_rational(&p.1),
                    x.domain,
                    y.domain
                )));
            }
            Ok(Inclusion::Witness(p))
        }
        None => {
            if samples > 0 {
                if let Some(p) = sample_difference(x, y, samples) {
                    return Err(Error::InclusionCrossCheck(format!(
                        "sample ({}, {}) lies in {} but not in {}",
                        fmt_rational(&p.0),
                        fmt_rational(&p.1),
                        x.domain,
                        y.domain
                    )));
                }
            }
            Ok(Inclusion::Included)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;
    use crate::shape::{hamiltonian_shape, reduced_shape, Domain4D};

    fn sh(s: &str) -> Region {
        reduced_shape(&Domain4D::parse(s).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(includes(&sh("P(1,10)"), &sh("E(5,10)")).unwrap(), Inclusion::Included);
        let r = includes(&sh("P(1,3)"), &sh("E(3/2,3)")).unwrap();
        assert!(matches!(r, Inclusion::Witness(_)));
        for s in ["E(2,4)", "B(1)", "P(1,2)", "Z(1)"] {
            assert_eq!(includes(&sh(s), &sh(s)).unwrap(), Inclusion::Included);
        }
    }

    #[test]
    fn diagonal_only_violation() {
        // B(1) has diagonal points up to 1/2, Z(2/5) only up to 2/5.
        let r = includes(&sh("B(1)"), &sh("Z(2/5)")).unwrap();
        let Inclusion::Witness(p) = r else { panic!() };
        assert!(p.0 >= q(2, 5));
    }

    #[test]
    fn mixed_domains() {
        let h = hamiltonian_shape(&Domain4D::parse("E(2,4)").unwrap()).unwrap();
        assert_eq!(includes(&sh("E(2,4)"), &h), Err(Error::MixedFundamentalDomain));
        assert_eq!(includes(&h, &h).unwrap(), Inclusion::Included);
    }

    #[test]
    fn sampling_finds_difference() {
        let p = sample_difference(&sh("E(2,4)"), &sh("B(1)"), 1000).unwrap();
        assert!(sh("E(2,4)").contains(&p) && !sh("B(1)").contains(&p));
        assert!(sample_difference(&sh("B(1)"), &sh("E(2,4)"), 1000).is_none());
    }
}
