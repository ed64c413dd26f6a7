//! Top-level configurations of limit buildings for `L(1, x) ⊂ E(a, b)`.
//!
//! A component `F_i` has `m_i` bulk ends, `κ_i ∈ {0,1}` ends on α₂ (Full
//! scenario) and class `(k_i, l_i)` at the torus. The index relation fixes
//! `k_i` from the rest, so a configuration is a multiset of `(m_i, κ_i, l_i)`.
//! Its area is `base_i + l_i·(x − 1)` with
//!
//! * Full: `base_i = m_i(a − 2) + κ_i(b − k − 2) + 1`,
//! * Hamiltonian: `base_i = m_i(b − k − 2) + 1`,
//!
//! so each area rule is a lower bound `l_i ≥ L_i` and the only coupling is
//! `Σ l_i = 0`. Given `l_j ≥ L_j` for `j ≠ i` this forces
//! `l_i ≤ L_i − Σ_j L_j`, so the box `[L_i, L_i − Σ L]` contains every
//! solution and the enumeration over it prunes nothing.

use std::cmp::Reverse;

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, qi, rational_serde, PerturbedRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Full,
    Hamiltonian,
}

/// How component areas are bounded below.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AreaRule {
    /// Every component has positive area.
    StrictPositive,
    /// As `StrictPositive`, and components without top ends have area ≥ 1.
    #[default]
    PlaneAtLeastOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BuildingComponent {
    pub m_i: u32,
    pub kappa_i: u32,
    pub k_i: i64,
    pub l_i: i64,
}

impl BuildingComponent {
    /// The component of the given type whose `k_i` satisfies the index relation.
    pub fn from_index_relation(scenario: Scenario, k: i64, m_i: u32, kappa_i: u32, l_i: i64) -> Self {
        let k_i = match scenario {
            Scenario::Full => 1 - 2 * m_i as i64 - kappa_i as i64 * (k + 2) - l_i,
            Scenario::Hamiltonian => 1 - m_i as i64 * (k + 2) - l_i,
        };
        BuildingComponent { m_i, kappa_i, k_i, l_i }
    }

    pub fn is_plane(&self) -> bool {
        self.m_i == 0 && self.kappa_i == 0
    }

    /// `ind(F_i) − 1` in the rewritten form.
    pub fn index_defect(&self, scenario: Scenario, k: i64) -> i64 {
        let ends = match scenario {
            Scenario::Full => 2 * self.m_i as i64 + self.kappa_i as i64 * (k + 2),
            Scenario::Hamiltonian => self.m_i as i64 * (k + 2),
        };
        ends + self.k_i + self.l_i - 1
    }

    fn sort_key(&self) -> (Reverse<u32>, Reverse<u32>, Reverse<i64>) {
        (Reverse(self.m_i), Reverse(self.kappa_i), Reverse(self.l_i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingConfig {
    pub scenario: Scenario,
    pub m: u32,
    pub k: i64,
    pub d: i64,
    pub components: Vec<BuildingComponent>,
}

impl BuildingConfig {
    /// Sort components by decreasing `(m_i, κ_i, l_i)`.
    pub fn canonicalize(&mut self) {
        self.components.sort_by_key(|c| c.sort_key());
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }
}

/// `d` for the given scenario.
pub fn negative_degree(scenario: Scenario, m: u32, k: i64) -> i64 {
    match scenario {
        Scenario::Full => 2 * m as i64 + k + 1,
        Scenario::Hamiltonian => (k + 2) * m as i64 - 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityProblem {
    pub a: PerturbedRational,
    pub b: PerturbedRational,
    #[serde(with = "rational_serde")]
    pub x: Rational,
    pub m: u32,
    pub scenario: Scenario,
    pub k: i64,
}

impl FeasibilityProblem {
    pub fn new(
        a: PerturbedRational,
        b: PerturbedRational,
        x: Rational,
        m: u32,
        scenario: Scenario,
    ) -> Result<Self> {
        if !a.is_positive()? {
            return Err(Error::Validation(format!("a = {a} must be positive")));
        }
        if m == 0 {
            return Err(Error::Validation("m must be at least 1".into()));
        }
        let ratio = b.ratio(&a)?;
        if ratio.is_rational() {
            return Err(Error::DegenerateOrbit(ratio.to_string()));
        }
        let k = ratio.floor()?;
        if k < 2 {
            return Err(Error::Validation(format!("k = floor(b/a) = {k} must be at least 2")));
        }
        let ok = match scenario {
            Scenario::Full => x >= qi(2),
            Scenario::Hamiltonian => x > Rational::one() && x < qi(2),
        };
        if !ok {
            let hint = if x.is_one() { " (x = 1 is decided by the embedding predicate)" } else { "" };
            return Err(Error::XOutsideFundamentalDomain(format!("{}{hint}", fmt_rational(&x))));
        }
        Ok(FeasibilityProblem { a, b, x, m, scenario, k })
    }

    /// `E(a, k·a + δ)`.
    pub fn perturbed(a: Rational, k: i64, x: Rational, m: u32, scenario: Scenario) -> Result<Self> {
        let a = PerturbedRational::from_rational(a);
        let b = &a.times(k) + &PerturbedRational::eps();
        Self::new(a, b, x, m, scenario)
    }

    pub fn with_m(&self, m: u32) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), self.x.clone(), m, self.scenario)
    }

    pub fn d(&self) -> i64 {
        negative_degree(self.scenario, self.m, self.k)
    }

    /// Number of top-level components, `d + 1`.
    pub fn t(&self) -> usize {
        (self.d() + 1) as usize
    }

    fn base(&self, m_i: u32, kappa_i: u32) -> PerturbedRational {
        let k2 = PerturbedRational::from_int(self.k + 2);
        let one = PerturbedRational::from_int(1);
        match self.scenario {
            Scenario::Full => {
                let bulk = (&self.a - &PerturbedRational::from_int(2)).times(m_i as i64);
                let long = (&self.b - &k2).times(kappa_i as i64);
                &(&bulk + &long) + &one
            }
            Scenario::Hamiltonian => &(&self.b - &k2).times(m_i as i64) + &one,
        }
    }

    /// Least `l` allowed for a component with the given top ends.
    fn l_min(&self, m_i: u32, kappa_i: u32, rule: AreaRule) -> Result<i64> {
        let scale = -(Rational::one() / (&self.x - Rational::one()));
        let strict = self.base(m_i, kappa_i).scale(&scale).floor()? + 1;
        let l = if m_i == 0 && kappa_i == 0 && rule == AreaRule::PlaneAtLeastOne {
            strict.max(0)
        } else {
            strict
        };
        debug_assert!(self.area_ok(m_i, kappa_i, l, rule)? && !self.area_ok(m_i, kappa_i, l - 1, rule)?);
        Ok(l)
    }

    fn area_ok(&self, m_i: u32, kappa_i: u32, l_i: i64, rule: AreaRule) -> Result<bool> {
        let c = BuildingComponent::from_index_relation(self.scenario, self.k, m_i, kappa_i, l_i);
        component_ok(&c, self, rule)
    }
}

/// `m_i·a + κ_i·b + k_i + l_i·x` (Full) or `m_i·b + k_i + l_i·x` (Hamiltonian).
pub fn component_area(c: &BuildingComponent, p: &FeasibilityProblem) -> PerturbedRational {
    let top = match p.scenario {
        Scenario::Full => &p.a.times(c.m_i as i64) + &p.b.times(c.kappa_i as i64),
        Scenario::Hamiltonian => p.b.times(c.m_i as i64),
    };
    let torus = PerturbedRational::from_rational(qi(c.k_i) + &p.x * qi(c.l_i));
    &top + &torus
}

fn component_ok(c: &BuildingComponent, p: &FeasibilityProblem, rule: AreaRule) -> Result<bool> {
    let area = component_area(c, p);
    if c.is_plane() && rule == AreaRule::PlaneAtLeastOne {
        return Ok(!area.lt(&PerturbedRational::from_int(1))?);
    }
    area.is_positive()
}

/// Check every constraint on a configuration, in any component order.
pub fn config_is_feasible(cfg: &BuildingConfig, p: &FeasibilityProblem, rule: AreaRule) -> Result<bool> {
    let d = p.d();
    let comps = &cfg.components;
    if cfg.scenario != p.scenario || cfg.m != p.m || cfg.k != p.k || cfg.d != d || comps.len() != p.t() {
        return Ok(false);
    }
    if comps.iter().any(|c| c.index_defect(p.scenario, p.k) != 0 || c.kappa_i > 1) {
        return Ok(false);
    }
    let kappa: u32 = comps.iter().map(|c| c.kappa_i).sum();
    let want_kappa = if p.scenario == Scenario::Full { 1 } else { 0 };
    if comps.iter().map(|c| c.m_i).sum::<u32>() != p.m
        || kappa != want_kappa
        || comps.iter().map(|c| c.k_i).sum::<i64>() != 0
        || comps.iter().map(|c| c.l_i).sum::<i64>() != 0
    {
        return Ok(false);
    }
    for c in comps {
        if !component_ok(c, p, rule)? {
            return Ok(false);
        }
    }
    if comps.iter().all(|c| c.l_i == 0) && comps.iter().map(|c| c.k_i.abs()).sum::<i64>() < 2 * d {
        return Ok(false);
    }
    Ok(true)
}

/// Partitions of `n` into positive parts, each non-increasing.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every multiset of `(m_i, κ_i)` with `T` entries, in canonical order.
fn top_end_types(p: &FeasibilityProblem) -> Vec<Vec<(u32, u32)>> {
    let t = p.t();
    let mut out = Vec::new();
    for parts in partitions(p.m) {
        let mut placements: Vec<Vec<(u32, u32)>> = Vec::new();
        match p.scenario {
            Scenario::Hamiltonian => placements.push(parts.iter().map(|&m| (m, 0)).collect()),
            Scenario::Full => {
                placements.push(parts.iter().map(|&m| (m, 0)).chain([(0, 1)]).collect());
                let mut seen = Vec::new();
                for (j, &mj) in parts.iter().enumerate() {
                    if seen.contains(&mj) {
                        continue;
                    }
                    seen.push(mj);
                    let mut v: Vec<(u32, u32)> = parts.iter().map(|&m| (m, 0)).collect();
                    v[j].1 = 1;
                    placements.push(v);
                }
            }
        }
        for mut v in placements {
            if v.len() > t {
                continue;
            }
            v.resize(t, (0, 0));
            v.sort_by_key(|&(m, kp)| (Reverse(m), Reverse(kp)));
            out.push(v);
        }
    }
    out
}

fn assemble(p: &FeasibilityProblem, types: &[(u32, u32)], ls: &[i64]) -> BuildingConfig {
    BuildingConfig {
        scenario: p.scenario,
        m: p.m,
        k: p.k,
        d: p.d(),
        components: types
            .iter()
            .zip(ls)
            .map(|(&(m_i, kappa_i), &l)| BuildingComponent::from_index_relation(p.scenario, p.k, m_i, kappa_i, l))
            .collect(),
    }
    .canonical()
}

/// Outcome of deciding one problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub feasible: Option<BuildingConfig>,
    /// Number of `(m_i, κ_i)` multisets examined.
    pub top_end_types: usize,
    pub components: usize,
}

/// Decide whether any configuration satisfies all constraints.
///
/// For fixed top ends the `l_i` range over `l_i ≥ L_i` with `Σ l_i = 0`,
/// which is solvable iff `Σ L_i ≤ 0`. When the sum is negative a solution
/// with some `l_i ≠ 0` exists; when it is zero the solution is unique.
pub fn is_feasible(p: &FeasibilityProblem, rule: AreaRule) -> Result<Decision> {
    let types = top_end_types(p);
    let count = types.len();
    for ty in &types {
        let mins: Vec<i64> = ty.iter().map(|&(m, kp)| p.l_min(m, kp, rule)).collect::<Result<_>>()?;
        let total: i64 = mins.iter().sum();
        if total > 0 {
            continue;
        }
        let mut ls = mins.clone();
        ls[0] -= total;
        let cfg = assemble(p, ty, &ls);
        if config_is_feasible(&cfg, p, rule)? {
            return Ok(Decision {
                feasible: Some(cfg),
                top_end_types: count,
                components: p.t(),
            });
        }
    }
    Ok(Decision {
        feasible: None,
        top_end_types: count,
        components: p.t(),
    })
}

/// All feasible configurations, or as many as the budget allows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub configs: Vec<BuildingConfig>,
    pub truncated: bool,
}

pub const DEFAULT_BUDGET: usize = 100_000;

struct Search<'a> {
    p: &'a FeasibilityProblem,
    rule: AreaRule,
    types: &'a [(u32, u32)],
    mins: Vec<i64>,
    rest_min: Vec<i64>,
    ls: Vec<i64>,
    out: &'a mut Vec<BuildingConfig>,
    budget: usize,
}

impl Search<'_> {
    /// Returns false once the budget is exhausted.
    fn go(&mut self, i: usize, remaining: i64) -> Result<bool> {
        let n = self.types.len();
        if i == n {
            if remaining != 0 {
                return Ok(true);
            }
            let cfg = assemble(self.p, self.types, &self.ls);
            if config_is_feasible(&cfg, self.p, self.rule)? {
                if self.out.len() == self.budget {
                    return Ok(false);
                }
                self.out.push(cfg);
            }
            return Ok(true);
        }
        let same_as_prev = i > 0 && self.types[i] == self.types[i - 1];
        let lo = self.mins[i];
        let mut hi = remaining - self.rest_min[i + 1];
        if same_as_prev {
            hi = hi.min(self.ls[i - 1]);
        }
        if i == n - 1 {
            if remaining < lo || remaining > hi {
                return Ok(true);
            }
            self.ls[i] = remaining;
            return self.go(i + 1, 0);
        }
        for l in (lo..=hi).rev() {
            self.ls[i] = l;
            if !self.go(i + 1, remaining - l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Enumerate up to `budget` canonical configurations; `truncated` is set
/// when more exist.
pub fn enumerate_feasible_partial(p: &FeasibilityProblem, rule: AreaRule, budget: usize) -> Result<Enumeration> {
    let mut out = Vec::new();
    for ty in top_end_types(p) {
        let mins: Vec<i64> = ty.iter().map(|&(m, kp)| p.l_min(m, kp, rule)).collect::<Result<_>>()?;
        let mut rest_min = vec![0i64; ty.len() + 1];
        for i in (0..ty.len()).rev() {
            rest_min[i] = rest_min[i + 1] + mins[i];
        }
        if rest_min[0] > 0 {
            continue;
        }
        let mut s = Search {
            p,
            rule,
            types: &ty,
            mins,
            rest_min,
            ls: vec![0; ty.len()],
            out: &mut out,
            budget,
        };
        if !s.go(0, 0)? {
            return Ok(Enumeration {
                configs: out,
                truncated: true,
            });
        }
    }
    out.sort_by(|x, y| {
        let key = |c: &BuildingConfig| c.components.iter().map(|c| c.sort_key()).collect::<Vec<_>>();
        key(x).cmp(&key(y))
    });
    Ok(Enumeration {
        configs: out,
        truncated: false,
    })
}

/// Enumerate every canonical feasible configuration.
pub fn enumerate_feasible(p: &FeasibilityProblem, rule: AreaRule, budget: usize) -> Result<Vec<BuildingConfig>> {
    let e = enumerate_feasible_partial(p, rule, budget)?;
    if e.truncated {
        return Err(Error::SearchBudgetExceeded {
            budget,
            found: e.configs.len(),
        });
    }
    Ok(e.configs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub m: u32,
    pub d: i64,
    pub components: usize,
    pub top_end_types: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ScanVerdict {
    ObstructedAt(ObstructionCertificate),
    NoObstructionUpTo { m_max: u32 },
}

/// The least `m ≤ m_max` with no feasible configuration.
pub fn obstruction_scan(
    a: &PerturbedRational,
    b: &PerturbedRational,
    x: &Rational,
    scenario: Scenario,
    m_max: u32,
    rule: AreaRule,
) -> Result<ScanVerdict> {
    for m in 1..=m_max {
        let p = FeasibilityProblem::new(a.clone(), b.clone(), x.clone(), m, scenario)?;
        let dec = is_feasible(&p, rule)?;
        if dec.feasible.is_none() {
            return Ok(ScanVerdict::ObstructedAt(ObstructionCertificate {
                m,
                d: p.d(),
                components: dec.components,
                top_end_types: dec.top_end_types,
            }));
        }
    }
    Ok(ScanVerdict::NoObstructionUpTo { m_max })
}
