//! Shape invariants of 4-dimensional toric domains, integral basis
//! reduction, shape inclusion and embedding obstructions.

mod inclusion;
pub mod plot;
pub mod region;

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{ceil_rational, fmt_rational, parse_rational, qi, rational_serde, Rational};

pub use inclusion::{includes, includes_with_samples, Inclusion, DEFAULT_SAMPLES};
pub use region::{Cell, Constraint, Point, Relation, Shape2};

/// Symplectic areas `(w1, w2)` of an integral basis, `0 < w1 ≤ w2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaClass {
    #[serde(with = "rational_serde")]
    pub w1: Rational,
    #[serde(with = "rational_serde")]
    pub w2: Rational,
}

impl AreaClass {
    pub fn new(w1: Rational, w2: Rational) -> Result<Self> {
        if !w1.is_positive() || !w2.is_positive() {
            return Err(Error::NonPositiveInput(format!(
                "w1 = {}, w2 = {}",
                fmt_rational(&w1),
                fmt_rational(&w2)
            )));
        }
        if w1 > w2 {
            return Err(Error::Validation(format!(
                "need w1 <= w2, got w1 = {}, w2 = {}",
                fmt_rational(&w1),
                fmt_rational(&w2)
            )));
        }
        Ok(AreaClass { w1, w2 })
    }

    pub fn point(&self) -> Point {
        (self.w1.clone(), self.w2.clone())
    }
}

/// The basis change with matrix `((a+1, a), (−a, 1−a))`, acting on row
/// vectors of areas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChange {
    pub a: i64,
}

impl BasisChange {
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        let a = self.a;
        [[a + 1, a], [-a, 1 - a]]
    }

    pub fn determinant(&self) -> i64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, w1: &Rational, w2: &Rational) -> (Rational, Rational) {
        let m = self.matrix();
        (
            w1 * qi(m[0][0]) + w2 * qi(m[1][0]),
            w1 * qi(m[0][1]) + w2 * qi(m[1][1]),
        )
    }
}

/// Move `(w1, w2)` into the fundamental domain `{w2 ≥ 2w1} ∪ {w1 = w2}`.
pub fn reduce_basis(w1: &Rational, w2: &Rational) -> Result<(BasisChange, AreaClass)> {
    let input = AreaClass::new(w1.clone(), w2.clone())?;
    if input.w1 == input.w2 {
        return Ok((BasisChange { a: 0 }, input));
    }
    let gap = w2 - w1;
    let a = ceil_rational(&(w1 / &gap))? - 1;
    let change = BasisChange { a };
    let (n1, n2) = change.apply(w1, w2);
    debug_assert_eq!(&n2 - &n1, gap);
    Ok((change, AreaClass { w1: n1, w2: n2 }))
}

/// The four parametric families of 4-dimensional domains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Domain4D {
    /// `E(a, b)` with `b/a ∈ ℤ≥2`.
    Ellipsoid {
        #[serde(with = "rational_serde")]
        a: Rational,
        #[serde(with = "rational_serde")]
        b: Rational,
    },
    /// `B(c) = E(c, c)`.
    Ball {
        #[serde(with = "rational_serde")]
        c: Rational,
    },
    /// `P(a, b)` with `a ≤ b`.
    Polydisk {
        #[serde(with = "rational_serde")]
        a: Rational,
        #[serde(with = "rational_serde")]
        b: Rational,
    },
    /// `Z(c)`.
    Cylinder {
        #[serde(with = "rational_serde")]
        c: Rational,
    },
}

fn positive(name: &str, r: &Rational) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("{name} = {} must be positive", fmt_rational(r))))
    }
}

impl Domain4D {
    pub fn ellipsoid(a: Rational, b: Rational) -> Result<Self> {
        positive("a", &a)?;
        positive("b", &b)?;
        let ratio = &b / &a;
        if !ratio.is_integer() || ratio < qi(2) {
            return Err(Error::NonIntegerRatio(fmt_rational(&ratio)));
        }
        Ok(Domain4D::Ellipsoid { a, b })
    }

    pub fn ball(c: Rational) -> Result<Self> {
        positive("c", &c)?;
        Ok(Domain4D::Ball { c })
    }

    pub fn polydisk(a: Rational, b: Rational) -> Result<Self> {
        positive("a", &a)?;
        positive("b", &b)?;
        if a > b {
            return Err(Error::InvalidDomain(format!(
                "polydisk needs a <= b, got P({}, {})",
                fmt_rational(&a),
                fmt_rational(&b)
            )));
        }
        Ok(Domain4D::Polydisk { a, b })
    }

    pub fn cylinder(c: Rational) -> Result<Self> {
        positive("c", &c)?;
        Ok(Domain4D::Cylinder { c })
    }

    /// Parse `E(a,b)`, `B(c)`, `P(a,b)` or `Z(c)` with rational parameters.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidDomain(format!("expected E(a,b), B(c), P(a,b) or Z(c), got {s:?}"));
        let (head, rest) = t.split_at(t.find('(').ok_or_else(bad)?);
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let args: Vec<Rational> = inner
            .split(',')
            .map(parse_rational)
            .collect::<Result<_>>()?;
        match (head, args.as_slice()) {
            ("E", [a, b]) => Self::ellipsoid(a.clone(), b.clone()),
            ("B", [c]) => Self::ball(c.clone()),
            ("P", [a, b]) => Self::polydisk(a.clone(), b.clone()),
            ("Z", [c]) => Self::cylinder(c.clone()),
            _ => Err(bad()),
        }
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        match self {
            Domain4D::Ellipsoid { a, b } => Domain4D::Ellipsoid {
                a: a * lambda,
                b: b * lambda,
            },
            Domain4D::Ball { c } => Domain4D::Ball { c: c * lambda },
            Domain4D::Polydisk { a, b } => Domain4D::Polydisk {
                a: a * lambda,
                b: b * lambda,
            },
            Domain4D::Cylinder { c } => Domain4D::Cylinder { c: c * lambda },
        }
    }

    /// Largest parameter.
    pub fn size(&self) -> Rational {
        match self {
            Domain4D::Ellipsoid { b, .. } | Domain4D::Polydisk { b, .. } => b.clone(),
            Domain4D::Ball { c } | Domain4D::Cylinder { c } => c.clone(),
        }
    }

    /// Whether the shape description comes from a proved theorem or was
    /// reconstructed from how it is used.
    pub fn provenance(&self) -> Provenance {
        match self {
            Domain4D::Ellipsoid { .. } | Domain4D::Ball { .. } => Provenance::Theorem,
            Domain4D::Polydisk { .. } | Domain4D::Cylinder { .. } => Provenance::Reconstructed,
        }
    }

    /// `(strip width σ, optional down-set (p, h0, slope))`: the region before
    /// intersecting with the fundamental domain is
    /// `{w1 < σ} ∪ {σ ≤ w1 < p, w2 < h0 + slope·w1}`.
    pub(crate) fn profile(&self) -> inclusion::Profile {
        use inclusion::{DownSet, Profile};
        match self {
            Domain4D::Ellipsoid { a, b } => Profile {
                strip: a / qi(2),
                down: Some(DownSet {
                    until: a.clone(),
                    h0: b.clone(),
                    slope: -(b / a),
                }),
            },
            Domain4D::Ball { c } => Profile {
                strip: c / qi(3),
                down: Some(DownSet {
                    until: c.clone(),
                    h0: c.clone(),
                    slope: -Rational::one(),
                }),
            },
            Domain4D::Polydisk { a, b } => Profile {
                strip: a / qi(2),
                down: Some(DownSet {
                    until: a.clone(),
                    h0: b.clone(),
                    slope: Rational::zero(),
                }),
            },
            Domain4D::Cylinder { c } => Profile {
                strip: c.clone(),
                down: None,
            },
        }
    }

    /// The convex pieces whose union is the shape before intersecting with
    /// the fundamental domain.
    fn core_cells(&self) -> Vec<Vec<Constraint>> {
        let z = Rational::zero;
        let o = Rational::one;
        match self {
            Domain4D::Ellipsoid { a, b } => vec![
                vec![Constraint::lt(o(), z(), a / qi(2))],
                vec![
                    Constraint::le(-o(), z(), -(a / qi(2))),
                    Constraint::lt(o() / a, o() / b, o()),
                ],
            ],
            Domain4D::Ball { c } => vec![
                vec![Constraint::lt(o(), z(), c / qi(3))],
                vec![
                    Constraint::le(-o(), z(), -(c / qi(3))),
                    Constraint::lt(o(), o(), c.clone()),
                ],
            ],
            Domain4D::Polydisk { a, b } => vec![
                vec![Constraint::lt(o(), z(), a / qi(2))],
                vec![Constraint::lt(o(), z(), a.clone()), Constraint::lt(z(), o(), b.clone())],
            ],
            Domain4D::Cylinder { c } => vec![vec![Constraint::lt(o(), z(), c.clone())]],
        }
    }
}

impl fmt::Display for Domain4D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = fmt_rational;
        match self {
            Domain4D::Ellipsoid { a, b } => write!(f, "E({},{})", r(a), r(b)),
            Domain4D::Ball { c } => write!(f, "B({})", r(c)),
            Domain4D::Polydisk { a, b } => write!(f, "P({},{})", r(a), r(b)),
            Domain4D::Cylinder { c } => write!(f, "Z({})", r(c)),
        }
    }
}

/// Which fundamental domain of the basis-change action a region lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FundamentalDomain {
    /// `{w2 ≥ 2w1} ∪ {w1 = w2}`.
    FullShape,
    /// `{w1 ≤ w2}`.
    HamiltonianShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Theorem,
    Reconstructed,
}

impl FundamentalDomain {
    fn pieces(self) -> Vec<Vec<Constraint>> {
        let z = Rational::zero;
        let o = Rational::one;
        let w1_pos = Constraint::lt(-o(), z(), z());
        match self {
            FundamentalDomain::FullShape => vec![
                vec![w1_pos.clone(), Constraint::le(qi(2), -o(), z())],
                vec![w1_pos, Constraint::eq(o(), -o(), z())],
            ],
            FundamentalDomain::HamiltonianShape => vec![vec![w1_pos, Constraint::le(o(), -o(), z())]],
        }
    }

    pub fn contains(self, p: &Point) -> bool {
        self.pieces().iter().any(|cs| cs.iter().all(|c| c.holds(p)))
    }
}

/// A shape as a finite union of nonempty convex cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub domain: Domain4D,
    pub tag: FundamentalDomain,
    pub provenance: Provenance,
    pub cells: Vec<Cell>,
}

impl Region {
    fn build(domain: &Domain4D, tag: FundamentalDomain) -> Region {
        let probe = domain.size() * qi(4) + qi(4);
        let mut cells = Vec::new();
        for core in domain.core_cells() {
            for piece in tag.pieces() {
                let mut cs = core.clone();
                cs.extend(piece);
                if let Some(cell) = Cell::try_new(cs, &probe) {
                    cells.push(cell);
                }
            }
        }
        Region {
            domain: domain.clone(),
            tag,
            provenance: domain.provenance(),
            cells,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    /// Image under `w ↦ λw`, computed cell by cell.
    pub fn scaled(&self, lambda: &Rational) -> Region {
        Region {
            domain: self.domain.scaled(lambda),
            tag: self.tag,
            provenance: self.provenance,
            cells: self.cells.iter().map(|c| c.scaled(lambda)).collect(),
        }
    }

    /// Closure of each cell clipped to `[0, w]²`.
    pub fn vertices(&self, w: &Rational) -> Vec<Shape2> {
        self.cells.iter().map(|c| c.closure_in_box(w)).collect()
    }
}

/// `Sh⁺(X)` in the fundamental domain `{w2 ≥ 2w1} ∪ {w1 = w2}`.
pub fn reduced_shape(domain: &Domain4D) -> Region {
    Region::build(domain, FundamentalDomain::FullShape)
}

/// Hamiltonian shape of an ellipsoid, in `{w1 ≤ w2}`.
pub fn hamiltonian_shape(domain: &Domain4D) -> Result<Region> {
    match domain {
        Domain4D::Ellipsoid { .. } => Ok(Region::build(domain, FundamentalDomain::HamiltonianShape)),
        _ => Err(Error::InvalidDomain(format!(
            "Hamiltonian shape is only available for ellipsoids, got {domain}"
        ))),
    }
}

/// `sup {w2 : (w2/λ, w2) ∈ Sh⁺(X)}`, allowed for `λ = 1` or `λ ≥ 2`.
pub fn capacity_lambda(domain: &Domain4D, lambda: &Rational) -> Result<Rational> {
    if !(lambda.is_one() || *lambda >= qi(2)) {
        return Err(Error::LambdaOutsideFundamentalDomain(fmt_rational(lambda)));
    }
    let l = lambda;
    let sup_w1 = match domain {
        Domain4D::Ellipsoid { a, b } => (a / qi(2)).max(a * b / (b + l * a)),
        Domain4D::Ball { c } => (c / qi(3)).max(c / (Rational::one() + l)),
        Domain4D::Polydisk { a, b } => (a / qi(2)).max(a.clone().min(b / l)),
        Domain4D::Cylinder { c } => c.clone(),
    };
    Ok(l * sup_w1)
}

/// Whether `L(1, x) ⊂ E(a, b)` in the given mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbedMode {
    Full,
    Hamiltonian,
}

/// Embedding criterion for `L(1, x)` into `E(a, b)` with `b/a ∈ ℤ≥2`.
pub fn embeds_l1x(a: &Rational, b: &Rational, x: &Rational, mode: EmbedMode) -> Result<bool> {
    Domain4D::ellipsoid(a.clone(), b.clone())?;
    let hyp = b * (Rational::one() - Rational::one() / a);
    if x.is_one() {
        return Ok(Rational::one() < hyp);
    }
    if *x >= qi(2) {
        return Ok(*a > qi(2) || *x < hyp);
    }
    if *x > Rational::one() && mode == EmbedMode::Hamiltonian {
        return Ok(*x < hyp);
    }
    Err(Error::XOutsideFundamentalDomain(fmt_rational(x)))
}

/// The two comparisons between product-type domains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum ProductCase {
    /// `P(a,b)` into `P(c,d)` with `a ≤ b`, `c ≤ d`, `b > d`.
    PolyPoly {
        #[serde(with = "rational_serde")]
        a: Rational,
        #[serde(with = "rational_serde")]
        b: Rational,
        #[serde(with = "rational_serde")]
        c: Rational,
        #[serde(with = "rational_serde")]
        d: Rational,
    },
    /// `P(1,a)` into `E(c, bc)` with `a ≥ 2`, `b ∈ ℤ≥2`, `1 ≤ c ≤ 2`.
    PolyEll {
        #[serde(with = "rational_serde")]
        a: Rational,
        b: i64,
        #[serde(with = "rational_serde")]
        c: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ProductVerdict {
    ObstructionFound {
        #[serde(serialize_with = "ser_point")]
        witness: Point,
    },
    NoObstruction,
}

fn ser_point<S: serde::Serializer>(p: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&fmt_rational(&p.0))?;
    seq.serialize_element(&fmt_rational(&p.1))?;
    seq.end()
}

/// Shape comparison for one case, alongside the closed-form criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub source: Domain4D,
    pub target: Domain4D,
    #[serde(flatten)]
    pub verdict: ProductVerdict,
    /// `c/a < 2` for `PolyPoly`; `a + b ≤ bc` for `PolyEll`.
    pub closed_form: bool,
    /// For `PolyPoly`: the point `((c/2 + a)/2, (b + d)/2)`.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_point")]
    pub canonical_witness: Option<Point>,
    /// Whether the canonical witness lies in the fundamental domain and in
    /// `Sh⁺(source) ∖ Sh⁺(target)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_witness_in_domain: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_witness_confirmed: Option<bool>,
}

fn ser_opt_point<S: serde::Serializer>(p: &Option<Point>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => ser_point(p, s),
        None => s.serialize_none(),
    }
}

/// Compare `Sh⁺` of the source and target domains of one case.
pub fn product_obstruction_check(case: &ProductCase) -> Result<ProductReport> {
    match case {
        ProductCase::PolyPoly { a, b, c, d } => {
            if !(a <= b && c <= d && b > d) {
                return Err(Error::HypothesisViolated("need a <= b, c <= d and b > d".into()));
            }
            let source = Domain4D::polydisk(a.clone(), b.clone())?;
            let target = Domain4D::polydisk(c.clone(), d.clone())?;
            let (x, y) = (reduced_shape(&source), reduced_shape(&target));
            let verdict = verdict_of(includes(&x, &y)?);
            let w: Point = ((c / qi(2) + a) / qi(2), (b + d) / qi(2));
            let in_domain = FundamentalDomain::FullShape.contains(&w);
            let confirmed = x.contains(&w) && !y.contains(&w);
            Ok(ProductReport {
                source,
                target,
                verdict,
                closed_form: c / a < qi(2),
                canonical_witness: Some(w),
                canonical_witness_in_domain: Some(in_domain),
                canonical_witness_confirmed: Some(confirmed),
            })
        }
        ProductCase::PolyEll { a, b, c } => {
            if !(*a >= qi(2) && *b >= 2 && *c >= Rational::one() && *c <= qi(2)) {
                return Err(Error::HypothesisViolated("need a >= 2, b >= 2 and 1 <= c <= 2".into()));
            }
            let bq = qi(*b);
            let source = Domain4D::polydisk(Rational::one(), a.clone())?;
            let target = Domain4D::ellipsoid(c.clone(), &bq * c)?;
            let (x, y) = (reduced_shape(&source), reduced_shape(&target));
            let verdict = verdict_of(includes(&x, &y)?);
            Ok(ProductReport {
                source,
                target,
                verdict,
                closed_form: a + &bq <= &bq * c,
                canonical_witness: None,
                canonical_witness_in_domain: None,
                canonical_witness_confirmed: None,
            })
        }
    }
}

fn verdict_of(inc: Inclusion) -> ProductVerdict {
    match inc {
        Inclusion::Included => ProductVerdict::NoObstruction,
        Inclusion::Witness(p) => ProductVerdict::ObstructionFound { witness: p },
    }
}
