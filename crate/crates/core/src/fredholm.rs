//! Fredholm indices of punctured curves in symplectizations and cobordisms
//! between ellipsoids and the cosphere bundle of T².

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{q, qi, PerturbedRational, Rational};
use crate::reeb::{cz_cosphere, cz_ellipsoid, CosphereClass, Ellipsoid, ReebOrbit, Trivialization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndSign {
    Positive,
    Negative,
}

/// One puncture: its sign, Conley–Zehnder index and Morse–Bott dimension (0 or 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredholmEnd {
    pub sign: EndSign,
    #[serde(with = "crate::exactnum::rational_serde")]
    pub cz: Rational,
    pub mb_dim: u32,
}

impl FredholmEnd {
    pub fn nondegenerate(sign: EndSign, cz: i64) -> Self {
        FredholmEnd {
            sign,
            cz: qi(cz),
            mb_dim: 0,
        }
    }
}

/// `(s⁺ + s⁻ − 2) + Σ⁺ (CZ + dim/2) − Σ⁻ (CZ − dim/2)` for a genus-zero curve
/// with `c₁ = 0` in the chosen trivialization.
pub fn fredholm_index(ends: &[FredholmEnd]) -> Result<i64> {
    let mut total = qi(ends.len() as i64 - 2);
    for end in ends {
        if end.mb_dim > 1 {
            return Err(Error::Validation(format!(
                "Morse-Bott dimension {} not in {{0,1}}",
                end.mb_dim
            )));
        }
        let half_dim = q(end.mb_dim as i64, 2);
        match end.sign {
            EndSign::Positive => total += &end.cz + half_dim,
            EndSign::Negative => total -= &end.cz - half_dim,
        }
    }
    if !total.is_integer() {
        return Err(Error::Validation(format!("non-integral index {total}")));
    }
    Ok(total.to_integer().try_into().map_err(|_| Error::Overflow(total.to_string()))?)
}

/// End multiplicities of a genus-zero curve in a cobordism between ellipsoids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveAsymptotics {
    #[serde(default)]
    pub pos_short: Vec<u32>,
    #[serde(default)]
    pub pos_long: Vec<u32>,
    #[serde(default)]
    pub neg_short: Vec<u32>,
    #[serde(default)]
    pub neg_long: Vec<u32>,
}

impl CurveAsymptotics {
    fn all(&self) -> impl Iterator<Item = &u32> {
        self.pos_short
            .iter()
            .chain(&self.pos_long)
            .chain(&self.neg_short)
            .chain(&self.neg_long)
    }

    fn validate(&self) -> Result<()> {
        if self.all().any(|&m| m == 0) {
            return Err(Error::Validation("end multiplicities must be at least 1".into()));
        }
        if self.pos_short.is_empty() && self.pos_long.is_empty() {
            return Err(Error::EmptyAsymptotics("no positive ends".into()));
        }
        Ok(())
    }

    /// Positive action minus negative action.
    pub fn action_gap(&self, top: &Ellipsoid, bottom: &Ellipsoid) -> PerturbedRational {
        let sum = |v: &[u32]| v.iter().map(|&m| m as i64).sum::<i64>();
        let pos = &top.a().times(sum(&self.pos_short)) + &top.b().times(sum(&self.pos_long));
        let neg = &bottom.a().times(sum(&self.neg_short)) + &bottom.b().times(sum(&self.neg_long));
        pos - neg
    }
}

/// Closed-form index of a genus-zero curve from `∂E(a,b)` down to `∂E(c,d)`.
pub fn ind_cobordism(top: &Ellipsoid, bottom: &Ellipsoid, ca: &CurveAsymptotics) -> Result<i64> {
    ca.validate()?;
    if !(ca.pos_short.is_empty() && ca.pos_long.is_empty()) {
        top.require_nondegenerate()?;
    }
    if !(ca.neg_short.is_empty() && ca.neg_long.is_empty()) {
        bottom.require_nondegenerate()?;
    }
    let n1 = ca.pos_short.len() as i64;
    let n2 = ca.pos_long.len() as i64;
    let mut ind = 2 * n1 + 2 * n2 - 2;
    for &r in &ca.pos_short {
        ind += 2 * (r as i64 + top.floor_short(r as i64)?);
    }
    for &s in &ca.pos_long {
        ind += 2 * (s as i64 + top.floor_long(s as i64)?);
    }
    for &t in &ca.neg_short {
        ind -= 2 * (t as i64 + bottom.floor_short(t as i64)?);
    }
    for &u in &ca.neg_long {
        ind -= 2 * (u as i64 + bottom.floor_long(u as i64)?);
    }
    Ok(ind)
}

/// Index in the symplectization of `∂E` with one negative end, assembled from
/// Conley–Zehnder indices.
pub fn ind_symplectization(e: &Ellipsoid, pos: &[ReebOrbit], neg: &ReebOrbit) -> Result<i64> {
    if pos.is_empty() {
        return Err(Error::EmptyAsymptotics("no positive ends".into()));
    }
    let mut ends = Vec::with_capacity(pos.len() + 1);
    for o in pos {
        ends.push(FredholmEnd::nondegenerate(EndSign::Positive, cz_ellipsoid(e, o)?));
    }
    ends.push(FredholmEnd::nondegenerate(EndSign::Negative, cz_ellipsoid(e, neg)?));
    fredholm_index(&ends)
}

/// Ends of a component in the cobordism from `∂E(a, ka+δ)` to the cosphere
/// bundle: simple α₁ and α₂ ends on top, one end on `γ_{(−k_i, −l_i)}` below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedComponentEnds {
    pub alpha1_ends: u32,
    pub alpha2_ends: u32,
    pub k_i: i64,
    pub l_i: i64,
}

/// Index of a component with [`MixedComponentEnds`], with CZ of the cosphere
/// end taken in the ambient trivialization.
pub fn ind_mixed_component(k: i64, ends: &MixedComponentEnds) -> Result<i64> {
    if k < 1 {
        return Err(Error::Validation(format!("k = {k} must be positive")));
    }
    let e = Ellipsoid::unit_k(k);
    let mut list = Vec::new();
    let cz1 = cz_ellipsoid(&e, &ReebOrbit::short(1))?;
    let cz2 = cz_ellipsoid(&e, &ReebOrbit::long(1))?;
    for _ in 0..ends.alpha1_ends {
        list.push(FredholmEnd::nondegenerate(EndSign::Positive, cz1));
    }
    for _ in 0..ends.alpha2_ends {
        list.push(FredholmEnd::nondegenerate(EndSign::Positive, cz2));
    }
    let class = CosphereClass::new(-ends.k_i, -ends.l_i, Trivialization::Ambient)?;
    let (cz, dim) = cz_cosphere(&class)?;
    list.push(FredholmEnd {
        sign: EndSign::Negative,
        cz,
        mb_dim: dim,
    });
    fredholm_index(&list)
}

/// Index of the plane-with-`T`-cosphere-ends component F₀ asymptotic to β₁^d
/// in `∂E(1, S)`, in the interior trivialization.
pub fn ind_f0(t: u32, d: u32, s: &PerturbedRational) -> Result<i64> {
    if !PerturbedRational::from_int(d as i64).lt(s)? {
        return Err(Error::SNotLargeEnough {
            s: s.to_string(),
            d: d as i64,
        });
    }
    if d == 0 {
        return Err(Error::Validation("d must be at least 1".into()));
    }
    let bottom = Ellipsoid::new(PerturbedRational::from_int(1), s.clone())?;
    let mut list = Vec::new();
    for _ in 0..t {
        let (cz, dim) = cz_cosphere(&CosphereClass::new(1, 0, Trivialization::Interior)?)?;
        list.push(FredholmEnd {
            sign: EndSign::Positive,
            cz,
            mb_dim: dim,
        });
    }
    list.push(FredholmEnd::nondegenerate(
        EndSign::Negative,
        cz_ellipsoid(&bottom, &ReebOrbit::short(d))?,
    ));
    fredholm_index(&list)
}

/// Index after gluing along Morse–Bott families.
pub fn glue_index(parts: &[i64], dims: &[i64]) -> i64 {
    parts.iter().sum::<i64>() - dims.iter().sum::<i64>()
}

/// Positive-end families for [`rigid_negative_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RigidFamily {
    /// `m` simple α₁ ends plus one simple α₂ end.
    Mixed,
    /// `m` simple α₂ ends.
    Pure,
}

/// Solve for the multiplicity `t` of the negative end β₁^t in `∂E(1,S)`,
/// `S > t`, making a curve from `∂E(1, k+ε)` with the given positive ends rigid.
pub fn rigid_negative_degree(k: i64, m: u32, family: RigidFamily) -> Result<u32> {
    if k < 2 {
        return Err(Error::Validation(format!("k = {k} must be at least 2")));
    }
    let top = Ellipsoid::unit_k(k);
    let (pos_short, pos_long) = match family {
        RigidFamily::Mixed => (vec![1; m as usize], vec![1]),
        RigidFamily::Pure => (Vec::new(), vec![1; m as usize]),
    };
    if pos_short.is_empty() && pos_long.is_empty() {
        return Err(Error::Validation("m must be at least 1".into()));
    }
    let index_at = |t: u32| -> Result<i64> {
        let s = PerturbedRational::linear(qi(t as i64) + q(1, 2), Rational::one());
        let bottom = Ellipsoid::new(PerturbedRational::from_int(1), s)?;
        let ca = CurveAsymptotics {
            pos_short: pos_short.clone(),
            pos_long: pos_long.clone(),
            neg_short: vec![t],
            neg_long: Vec::new(),
        };
        ind_cobordism(&top, &bottom, &ca)
    };
    // With S = t + 1/2 + ε the negative end contributes −2t, so the index
    // drops by 2 per step: jump to the root and confirm it.
    let mut t = 1u32;
    loop {
        let ind = index_at(t)?;
        if ind == 0 {
            return Ok(t);
        }
        if ind < 0 {
            return Err(Error::Validation(format!("no rigid degree for k={k}, m={m}")));
        }
        t += (ind as u32 / 2).max(1);
    }
}

/// The four end patterns in the symplectization of `∂E(1, k+ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndPattern {
    /// `m` α₁ ends on top, α₁^r below.
    ShortToShort = 1,
    /// `m` α₁ ends and one α₂ end on top, α₁^r below.
    MixedToShort = 2,
    /// `m` α₁ ends on top, α₂^r below.
    ShortToLong = 3,
    /// `m` α₁ ends and one α₂ end on top, α₂^r below.
    MixedToLong = 4,
}

impl EndPattern {
    pub const ALL: [EndPattern; 4] = [
        EndPattern::ShortToShort,
        EndPattern::MixedToShort,
        EndPattern::ShortToLong,
        EndPattern::MixedToLong,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    fn has_long_top(self) -> bool {
        matches!(self, EndPattern::MixedToShort | EndPattern::MixedToLong)
    }

    fn negative(self, r: u32) -> ReebOrbit {
        match self {
            EndPattern::ShortToShort | EndPattern::MixedToShort => ReebOrbit::short(r),
            _ => ReebOrbit::long(r),
        }
    }
}

/// A failed claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFailure {
    pub pattern: u8,
    pub k: i64,
    pub m: u32,
    pub r: u32,
    pub index: i64,
    pub claim: String,
}

/// Smallest index seen for fixed `(k, r)` in one pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMinimum {
    pub pattern: u8,
    pub k: i64,
    pub r: u32,
    pub min_index: i64,
    pub argmin_m: Vec<u32>,
    pub claimed_bound: i64,
}

/// A stated intermediate bound that does not dominate the final one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainGap {
    pub pattern: u8,
    pub k: i64,
    pub r: u32,
    pub intermediate: i64,
    pub final_bound: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSummary {
    pub pattern: u8,
    pub checked: usize,
    pub filtered: usize,
    pub failed: usize,
}

/// Result of [`index_suite`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSuiteReport {
    pub patterns: Vec<PatternSummary>,
    pub failures: Vec<PatternFailure>,
    pub minima: Vec<PatternMinimum>,
    pub chain_gaps: Vec<ChainGap>,
}

impl IndexSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Plain-text table.
    pub fn to_table(&self) -> String {
        let mut s = String::from("pattern  checked  filtered  failed\n");
        for p in &self.patterns {
            s.push_str(&format!("{:>7}  {:>7}  {:>8}  {:>6}\n", p.pattern, p.checked, p.filtered, p.failed));
        }
        for f in &self.failures {
            s.push_str(&format!(
                "FAIL pattern {} k={} m={} r={} ind={}: {}\n",
                f.pattern, f.k, f.m, f.r, f.index, f.claim
            ));
        }
        s
    }
}

/// Index and action filter for one case; `None` when the curve cannot exist
/// for action reasons.
pub fn pattern_index(pattern: EndPattern, k: i64, m: u32, r: u32) -> Result<Option<i64>> {
    let e = Ellipsoid::unit_k(k);
    let mut pos = vec![ReebOrbit::short(1); m as usize];
    if pattern.has_long_top() {
        pos.push(ReebOrbit::long(1));
    }
    if pos.is_empty() || r == 0 {
        return Ok(None);
    }
    let neg = pattern.negative(r);
    let top_action = pos
        .iter()
        .fold(PerturbedRational::zero(), |acc, o| &acc + &o.action(&e));
    let gap = &top_action - &neg.action(&e);
    if gap.signum()? < 0 {
        return Ok(None);
    }
    Ok(Some(ind_symplectization(&e, &pos, &neg)?))
}

/// Sweep every claim about the four patterns over the given ranges.
pub fn index_suite(
    k_range: std::ops::RangeInclusive<i64>,
    m_max: u32,
    r_max: u32,
) -> Result<IndexSuiteReport> {
    let mut report = IndexSuiteReport::default();
    for pattern in EndPattern::ALL {
        let mut summary = PatternSummary {
            pattern: pattern.number(),
            ..Default::default()
        };
        for k in k_range.clone() {
            let e = Ellipsoid::unit_k(k);
            for r in 1..=r_max {
                let ri = r as i64;
                let fl_short = e.floor_short(ri)?;
                let fl_long = e.floor_long(ri)?;
                let mut min: Option<(i64, Vec<u32>)> = None;
                let mut final_for_min = 0;
                for m in 0..=m_max {
                    let Some(ind) = pattern_index(pattern, k, m, r)? else {
                        summary.filtered += 1;
                        continue;
                    };
                    summary.checked += 1;
                    let mi = m as i64;
                    let mut claims: Vec<(bool, String)> = Vec::new();
                    let (intermediate, final_bound) = match pattern {
                        EndPattern::ShortToShort => {
                            let b = 2 * ri - 2 - 2 * fl_short;
                            claims.push((ind >= b, format!("ind >= {b}")));
                            claims.push((ind >= 0, "ind >= 0".into()));
                            claims.push((
                                (ind == 0) == (m == 1 && r == 1),
                                "ind = 0 iff trivial cylinder".into(),
                            ));
                            (Some(b), 0)
                        }
                        EndPattern::MixedToShort => {
                            let b = 2 * ri - 2 * k + 2 - 2 * fl_short;
                            claims.push((ind >= b, format!("ind >= {b}")));
                            claims.push((ind > mi, format!("ind >= m+1 = {}", mi + 1)));
                            claims.push((ind >= 2, "ind >= 2".into()));
                            (None, mi + 1)
                        }
                        EndPattern::ShortToLong => {
                            let b = 2 * ri * (2 * k - 1) + 2 - 2 * fl_long;
                            let fb = 2 * ri + 2;
                            claims.push((ind >= b, format!("ind >= {b}")));
                            claims.push((ind >= fb, format!("ind >= 2r+2 = {fb}")));
                            claims.push((
                                (ind == fb) == (k == 2 && m == 2 * r + 1),
                                "ind = 2r+2 iff k = 2 and m = 2r+1".into(),
                            ));
                            (Some(b), fb)
                        }
                        EndPattern::MixedToLong if m == 0 => {
                            claims.push(((ind == 0) == (r == 1), "m = 0: ind = 0 iff trivial cylinder".into()));
                            claims.push((ind >= 0, "ind >= 0".into()));
                            (None, 0)
                        }
                        EndPattern::MixedToLong => {
                            let b = (4 * k - 2) * ri - 2 * k + 2 - 2 * fl_long;
                            let fb = 2 * ri + 2;
                            claims.push((ind >= b, format!("ind >= {b}")));
                            claims.push((ind >= fb, format!("ind >= 2r+2 = {fb}")));
                            claims.push((
                                (ind == fb) == (k == 2 && m == 2 * r - 1),
                                "ind = 2r+2 iff k = 2 and m = 2r-1".into(),
                            ));
                            (Some(b), fb)
                        }
                    };
                    if let Some(b) = intermediate {
                        if b < final_bound
                            && !report.chain_gaps.iter().any(|g| {
                                g.pattern == pattern.number() && g.k == k && g.r == r
                            })
                        {
                            report.chain_gaps.push(ChainGap {
                                pattern: pattern.number(),
                                k,
                                r,
                                intermediate: b,
                                final_bound,
                            });
                        }
                    }
                    let mut failed = false;
                    for (ok, claim) in claims {
                        if !ok {
                            failed = true;
                            report.failures.push(PatternFailure {
                                pattern: pattern.number(),
                                k,
                                m,
                                r,
                                index: ind,
                                claim,
                            });
                        }
                    }
                    if failed {
                        summary.failed += 1;
                    }
                    if pattern != EndPattern::MixedToLong || m != 0 {
                        final_for_min = final_bound;
                        match &mut min {
                            Some((v, ms)) if ind == *v => ms.push(m),
                            Some((v, _)) if ind > *v => {}
                            _ => min = Some((ind, vec![m])),
                        }
                    }
                }
                if let Some((min_index, argmin_m)) = min {
                    if matches!(pattern, EndPattern::ShortToLong | EndPattern::MixedToLong) {
                        report.minima.push(PatternMinimum {
                            pattern: pattern.number(),
                            k,
                            r,
                            min_index,
                            argmin_m,
                            claimed_bound: final_for_min,
                        });
                    }
                }
            }
        }
        report.patterns.push(summary);
    }
    Ok(report)
}

/// Lower bound for the index of an `m`-fold cover `u` of `ũ` from `∂E(1, k+ε)`
/// to `∂E(1, S)`, valid whenever `ind(ũ) ≥ 0`.
pub fn cover_index_bound(
    top: &Ellipsoid,
    bottom: &Ellipsoid,
    cover: &CurveAsymptotics,
    underlying: &CurveAsymptotics,
    m: u32,
) -> Result<i64> {
    let mi = m as i64;
    let fsum = |f: &dyn Fn(i64) -> Result<i64>, v: &[u32]| -> Result<i64> {
        v.iter().map(|&x| f(x as i64)).sum()
    };
    let ts = |n| top.floor_short(n);
    let tl = |n| top.floor_long(n);
    let bs = |n| bottom.floor_short(n);
    let bl = |n| bottom.floor_long(n);
    let mut rhs = 2 * mi - 2;
    rhs += 2 * (cover.pos_short.len() as i64 - mi * underlying.pos_short.len() as i64);
    rhs += 2 * (cover.pos_long.len() as i64 - mi * underlying.pos_long.len() as i64);
    rhs += 2 * (fsum(&ts, &cover.pos_short)? - mi * fsum(&ts, &underlying.pos_short)?);
    rhs += 2 * (fsum(&tl, &cover.pos_long)? - mi * fsum(&tl, &underlying.pos_long)?);
    rhs -= 2 * (fsum(&bs, &cover.neg_short)? - mi * fsum(&bs, &underlying.neg_short)?);
    rhs -= 2 * (fsum(&bl, &cover.neg_long)? - mi * fsum(&bl, &underlying.neg_long)?);
    Ok(rhs)
}

/// Whether `cover` is an `m`-fold cover of `underlying` at the level of ends:
/// each end of `underlying` with multiplicity `x` lifts to ends `λⱼ x` with `Σλⱼ = m`.
pub fn is_end_cover(cover: &CurveAsymptotics, underlying: &CurveAsymptotics, m: u32) -> bool {
    fn side(c: &[u32], u: &[u32], m: u32) -> bool {
        let total_c: u64 = c.iter().map(|&x| x as u64).sum();
        let total_u: u64 = u.iter().map(|&x| x as u64).sum();
        total_c == m as u64 * total_u && (!u.is_empty() || c.is_empty())
    }
    side(&cover.pos_short, &underlying.pos_short, m)
        && side(&cover.pos_long, &underlying.pos_long, m)
        && side(&cover.neg_short, &underlying.neg_short, m)
        && side(&cover.neg_long, &underlying.neg_long, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ParseOptions;

    fn ell(s: &str) -> Ellipsoid {
        Ellipsoid::parse_with(s, ParseOptions::default()).unwrap()
    }

    fn orbits(kind: fn(u32) -> ReebOrbit, ms: &[u32]) -> Vec<ReebOrbit> {
        ms.iter().map(|&m| kind(m)).collect()
    }

    #[test]
    fn cobordism_examples() {
        for k in 2..9i64 {
            let top = Ellipsoid::unit_k(k);
            // k/(k+1)·E(1, k+1+ε') with ε' = (k+1)ε/(2k).
            let bottom = Ellipsoid::new(
                PerturbedRational::from_rational(q(k, k + 1)),
                PerturbedRational::linear(qi(k), q(1, 2)),
            )
            .unwrap();
            let ca = CurveAsymptotics {
                pos_long: vec![1],
                neg_short: vec![k as u32 + 1],
                ..Default::default()
            };
            assert_eq!(ind_cobordism(&top, &bottom, &ca).unwrap(), 0);
        }
    }

    #[test]
    fn symplectization_examples() {
        for k in 2..7 {
            let e = Ellipsoid::unit_k(k);
            assert_eq!(ind_symplectization(&e, &[ReebOrbit::short(1)], &ReebOrbit::short(1)).unwrap(), 0);
        }
        let e = ell("E(1,2+e)");
        let pos = orbits(ReebOrbit::short, &[1, 1, 1]);
        assert_eq!(ind_symplectization(&e, &pos, &ReebOrbit::long(1)).unwrap(), 4);
        let e = ell("E(1, 19/2+e)");
        assert_eq!(ind_symplectization(&e, &[ReebOrbit::short(7)], &ReebOrbit::short(7)).unwrap(), 0);
    }

    #[test]
    fn symplectization_matches_closed_form() {
        let e = ell("E(1, 3+e)");
        let ca = CurveAsymptotics {
            pos_short: vec![1, 2],
            pos_long: vec![1],
            neg_short: vec![3],
            ..Default::default()
        };
        let pos = [ReebOrbit::short(1), ReebOrbit::short(2), ReebOrbit::long(1)];
        assert_eq!(
            ind_symplectization(&e, &pos, &ReebOrbit::short(3)).unwrap(),
            ind_cobordism(&e, &e, &ca).unwrap()
        );
    }

    #[test]
    fn mixed_component_examples() {
        let me = |a1, a2, k_i| MixedComponentEnds {
            alpha1_ends: a1,
            alpha2_ends: a2,
            k_i,
            l_i: 0,
        };
        assert_eq!(ind_mixed_component(2, &me(0, 0, 1)).unwrap(), 1);
        assert_eq!(ind_mixed_component(2, &me(0, 1, -5)).unwrap(), -3);
        assert_eq!(ind_mixed_component(2, &me(0, 1, -4)).unwrap(), -1);
        for k in 2..6 {
            for a1 in 0..4u32 {
                for kappa in 0..2u32 {
                    for k_i in -8..3 {
                        for l_i in -3..3 {
                            if k_i == 0 && l_i == 0 {
                                continue;
                            }
                            let e = MixedComponentEnds {
                                alpha1_ends: a1,
                                alpha2_ends: kappa,
                                k_i,
                                l_i,
                            };
                            let closed = 4 * a1 as i64 + kappa as i64 * (2 * k + 4) + 2 * (k_i + l_i) - 1;
                            assert_eq!(ind_mixed_component(k, &e).unwrap(), closed);
                            let pure = MixedComponentEnds {
                                alpha1_ends: 0,
                                alpha2_ends: a1,
                                k_i,
                                l_i,
                            };
                            let closed = a1 as i64 * (4 + 2 * k) - 1 + 2 * k_i + 2 * l_i;
                            assert_eq!(ind_mixed_component(k, &pure).unwrap(), closed);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f0_examples() {
        let s = |x: i64| PerturbedRational::linear(qi(x), qi(1));
        assert_eq!(ind_f0(6, 5, &s(9)).unwrap(), 0);
        assert_eq!(ind_f0(6, 5, &s(100)).unwrap(), 0);
        assert!(matches!(ind_f0(6, 5, &PerturbedRational::from_int(5)), Err(Error::SNotLargeEnough { .. })));
    }

    #[test]
    fn glue_example() {
        assert_eq!(glue_index(&[0, 0], &[0]), 0);
        assert_eq!(glue_index(&[], &[]), 0);
        // F₀ with T = 6 ends glued to five planes and one mixed component (k = 2, m = 1).
        let f0 = ind_f0(6, 5, &PerturbedRational::linear(qi(9), qi(1))).unwrap();
        let plane = ind_mixed_component(2, &MixedComponentEnds { alpha1_ends: 0, alpha2_ends: 0, k_i: 1, l_i: 0 }).unwrap();
        let top = ind_mixed_component(2, &MixedComponentEnds { alpha1_ends: 1, alpha2_ends: 1, k_i: -5, l_i: 0 }).unwrap();
        let parts = [f0, plane, plane, plane, plane, plane, top];
        assert_eq!(parts, [0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(glue_index(&parts, &[1; 6]), 0);
    }

    #[test]
    fn rigid_degree_examples() {
        assert_eq!(rigid_negative_degree(2, 1, RigidFamily::Mixed).unwrap(), 5);
        assert_eq!(rigid_negative_degree(2, 1, RigidFamily::Pure).unwrap(), 3);
        assert_eq!(rigid_negative_degree(3, 4, RigidFamily::Pure).unwrap(), 19);
    }

    #[test]
    fn end_pattern_single_cases() {
        assert_eq!(pattern_index(EndPattern::ShortToLong, 2, 5, 2).unwrap(), Some(6));
        assert_eq!(pattern_index(EndPattern::MixedToLong, 2, 3, 2).unwrap(), Some(6));
        assert_eq!(pattern_index(EndPattern::MixedToLong, 3, 0, 1).unwrap(), Some(0));
        assert_eq!(pattern_index(EndPattern::ShortToLong, 2, 4, 2).unwrap(), None);
    }
}
