//! Reeb orbits on ellipsoid boundaries and on the unit cosphere bundle of T².

use std::fmt;

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{q, ParseOptions, PerturbedRational, Rational};

/// `E(a, b)` with `0 < a ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EllipsoidParams", into = "EllipsoidParams")]
pub struct Ellipsoid {
    a: PerturbedRational,
    b: PerturbedRational,
    long_ratio: PerturbedRational,
    short_ratio: PerturbedRational,
}

#[derive(Serialize, Deserialize)]
struct EllipsoidParams {
    a: PerturbedRational,
    b: PerturbedRational,
}

impl TryFrom<EllipsoidParams> for Ellipsoid {
    type Error = Error;

    fn try_from(p: EllipsoidParams) -> Result<Self> {
        Ellipsoid::new(p.a, p.b)
    }
}

impl From<Ellipsoid> for EllipsoidParams {
    fn from(e: Ellipsoid) -> Self {
        EllipsoidParams { a: e.a, b: e.b }
    }
}

impl Ellipsoid {
    pub fn new(a: PerturbedRational, b: PerturbedRational) -> Result<Self> {
        if !a.is_positive()? {
            return Err(Error::InvalidEllipsoid(format!("a = {a} must be positive")));
        }
        if !a.le(&b)? {
            return Err(Error::InvalidEllipsoid(format!("need a <= b, got a = {a}, b = {b}")));
        }
        let long_ratio = b.ratio(&a)?;
        let short_ratio = a.ratio(&b)?;
        Ok(Ellipsoid {
            a,
            b,
            long_ratio,
            short_ratio,
        })
    }

    /// `E(a, k·a + c·ε)`.
    pub fn perturbed(a: Rational, k: i64, c: Rational) -> Result<Self> {
        let a = PerturbedRational::from_rational(a);
        let b = &a.times(k) + &PerturbedRational::eps().scale(&c);
        Self::new(a, b)
    }

    /// `E(1, k + ε)`.
    pub fn unit_k(k: i64) -> Self {
        Self::perturbed(Rational::one(), k, Rational::one()).expect("valid by construction")
    }

    pub fn a(&self) -> &PerturbedRational {
        &self.a
    }

    pub fn b(&self) -> &PerturbedRational {
        &self.b
    }

    /// b/a, cancelling common ε-powers.
    pub fn ratio(&self) -> Result<PerturbedRational> {
        Ok(self.long_ratio.clone())
    }

    /// True when b/a carries an ε-term, i.e. is marked irrational.
    pub fn has_irrational_ratio(&self) -> Result<bool> {
        Ok(!self.ratio()?.is_rational())
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.has_irrational_ratio()? {
            Ok(())
        } else {
            Err(Error::DegenerateOrbit(self.ratio()?.to_string()))
        }
    }

    /// ⌊n·(b/a)⌋.
    pub fn floor_long(&self, n: i64) -> Result<i64> {
        self.long_ratio.times(n).floor()
    }

    /// ⌊n·(a/b)⌋.
    pub fn floor_short(&self, n: i64) -> Result<i64> {
        self.short_ratio.times(n).floor()
    }

    /// Uniform rescaling.
    pub fn scale(&self, r: &Rational) -> Result<Self> {
        Self::new(self.a.scale(r), self.b.scale(r))
    }

    /// Parse `E(a,b)` where `a`, `b` are perturbed-rational literals.
    pub fn parse_with(s: &str, opts: ParseOptions) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix("E(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected E(a,b), got {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected E(a,b), got {s:?}")))?;
        Self::new(
            PerturbedRational::parse_with(a, opts)?,
            PerturbedRational::parse_with(b, opts)?,
        )
    }
}

impl fmt::Display for Ellipsoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({}, {})", self.a, self.b)
    }
}

/// Which of the two embedded orbits an orbit covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    /// Action `a`.
    Short,
    /// Action `b`.
    Long,
}

/// An iterate of one of the two embedded Reeb orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReebOrbit {
    pub kind: OrbitKind,
    pub multiplicity: u32,
}

impl ReebOrbit {
    pub fn short(multiplicity: u32) -> Self {
        ReebOrbit {
            kind: OrbitKind::Short,
            multiplicity,
        }
    }

    pub fn long(multiplicity: u32) -> Self {
        ReebOrbit {
            kind: OrbitKind::Long,
            multiplicity,
        }
    }

    pub fn action(&self, e: &Ellipsoid) -> PerturbedRational {
        let base = match self.kind {
            OrbitKind::Short => e.a(),
            OrbitKind::Long => e.b(),
        };
        base.times(self.multiplicity as i64)
    }
}

fn require_multiplicity(orbit: &ReebOrbit) -> Result<()> {
    if orbit.multiplicity == 0 {
        Err(Error::Validation("orbit multiplicity must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Conley–Zehnder index in the standard trivialization.
pub fn cz_ellipsoid(e: &Ellipsoid, orbit: &ReebOrbit) -> Result<i64> {
    require_multiplicity(orbit)?;
    e.require_nondegenerate()?;
    let k = orbit.multiplicity as i64;
    let fl = match orbit.kind {
        OrbitKind::Short => e.floor_short(k)?,
        OrbitKind::Long => e.floor_long(k)?,
    };
    Ok(2 * k + 2 * fl + 1)
}

/// Trivialization of the contact structure along cosphere orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trivialization {
    /// Induced from the neighbourhood T*T² of the torus.
    Interior,
    /// Induced from the ambient ℂ².
    Ambient,
}

/// Orbit class `(k, l) ∈ ℤ²` in the unit cosphere bundle of T².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosphereClass {
    pub k: i64,
    pub l: i64,
    pub trivialization: Trivialization,
}

/// Morse–Bott dimension of each cosphere orbit family.
pub const COSPHERE_FAMILY_DIM: u32 = 1;

impl CosphereClass {
    pub fn new(k: i64, l: i64, trivialization: Trivialization) -> Result<Self> {
        if k == 0 && l == 0 {
            return Err(Error::ZeroClass);
        }
        Ok(CosphereClass { k, l, trivialization })
    }

    /// Simple orbits have primitive classes.
    pub fn is_embedded(&self) -> bool {
        num::integer::gcd(self.k, self.l) == 1
    }
}

/// Morse–Bott Conley–Zehnder index of a cosphere orbit, with its family dimension.
pub fn cz_cosphere(c: &CosphereClass) -> Result<(Rational, u32)> {
    if c.k == 0 && c.l == 0 {
        return Err(Error::ZeroClass);
    }
    let half = q(1, 2);
    let cz = match c.trivialization {
        Trivialization::Interior => half,
        Trivialization::Ambient => Rational::from_integer((2 * (c.k + c.l)).into()) + half,
    };
    Ok((cz, COSPHERE_FAMILY_DIM))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell(s: &str) -> Ellipsoid {
        Ellipsoid::parse_with(s, ParseOptions::default()).unwrap()
    }

    #[test]
    fn cz_examples() {
        assert_eq!(cz_ellipsoid(&ell("E(1, 2+e)"), &ReebOrbit::short(1)).unwrap(), 3);
        assert_eq!(cz_ellipsoid(&ell("E(1, 2+e)"), &ReebOrbit::long(1)).unwrap(), 7);
        assert_eq!(cz_ellipsoid(&ell("E(1, 2+e)"), &ReebOrbit::short(5)).unwrap(), 15);
        for k in 2..9 {
            let e = Ellipsoid::unit_k(k);
            assert_eq!(cz_ellipsoid(&e, &ReebOrbit::short(k as u32)).unwrap(), 2 * k + 1);
            assert_eq!(cz_ellipsoid(&e, &ReebOrbit::short(k as u32 + 1)).unwrap(), 2 * k + 5);
        }
    }

    #[test]
    fn degenerate_and_invalid() {
        assert!(matches!(
            cz_ellipsoid(&ell("E(1,2)"), &ReebOrbit::short(1)),
            Err(Error::DegenerateOrbit(_))
        ));
        assert!(matches!(
            Ellipsoid::parse_with("E(3,2)", ParseOptions::default()),
            Err(Error::InvalidEllipsoid(_))
        ));
        assert!(matches!(
            Ellipsoid::parse_with("E(0,2)", ParseOptions::default()),
            Err(Error::InvalidEllipsoid(_))
        ));
    }

    #[test]
    fn scaled_down_domain() {
        // E(ε, ε(9+ε)): ratio survives the common ε factor.
        let e = Ellipsoid::new(
            PerturbedRational::eps(),
            "9e + e^2".parse().unwrap(),
        )
        .unwrap();
        assert!(e.has_irrational_ratio().unwrap());
        assert_eq!(ReebOrbit::short(3).action(&e), "3e".parse().unwrap());
        assert_eq!(cz_ellipsoid(&e, &ReebOrbit::short(9)).unwrap(), 19);
        assert_eq!(cz_ellipsoid(&e, &ReebOrbit::short(10)).unwrap(), 23);
    }

    #[test]
    fn cosphere_examples() {
        let c = CosphereClass::new(1, 0, Trivialization::Interior).unwrap();
        assert_eq!(cz_cosphere(&c).unwrap(), (q(1, 2), 1));
        let c = CosphereClass::new(1, 0, Trivialization::Ambient).unwrap();
        assert_eq!(cz_cosphere(&c).unwrap().0, q(5, 2));
        let c = CosphereClass::new(-3, 2, Trivialization::Ambient).unwrap();
        assert_eq!(cz_cosphere(&c).unwrap().0, q(-3, 2));
        assert!(CosphereClass::new(2, 4, Trivialization::Interior).map(|c| !c.is_embedded()).unwrap());
        assert_eq!(CosphereClass::new(0, 0, Trivialization::Ambient), Err(Error::ZeroClass));
    }
}
