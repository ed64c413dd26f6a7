//! Acceptance sweeps shared by the test suite and the command line.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::buildings::{obstruction_scan, AreaRule, ScanVerdict, Scenario};
use crate::ech::{ech_index, grading, grading_match, j0_bound_check, j0_index, CurrentEnds, EmbeddedOrbit, Level, OrbitSet};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, hermite_floor_gap, q, qi, PerturbedRational, Rational};
use crate::fredholm::{index_suite, rigid_negative_degree, RigidFamily};
use crate::linf::{consistency_failures, generators_up_to, pairing_coefficient, phi1_integral};
use crate::reeb::{Ellipsoid, OrbitKind};
use crate::shape::{
    capacity_lambda, embeds_l1x, plot, product_obstruction_check, reduce_basis, reduced_shape,
    Domain4D, EmbedMode, FundamentalDomain, ProductCase, ProductVerdict,
};

/// Seed of every randomized sweep.
pub const SEED: u64 = 0x5eed_2024;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub summary: String,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl Outcome {
    /// One line: status, id, name, counts and timing.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<24} checked={} failures={} warnings={} time={}ms/{}ms  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures.len(),
            self.warnings.len(),
            self.elapsed_ms,
            self.budget_ms,
            self.summary
        )
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
    warnings: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// A named acceptance suite with its runtime budget.
pub struct Suite {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(&mut Tally) -> Result<()>,
}

pub const SUITES: &[Suite] = &[
    Suite { id: 1, name: "ech-example", budget: Duration::from_secs(1), run: ech_example },
    Suite { id: 2, name: "rigid-degrees", budget: Duration::from_secs(1), run: rigid_degrees },
    Suite { id: 3, name: "index-inequalities", budget: Duration::from_secs(10), run: index_inequalities },
    Suite { id: 4, name: "floor-gaps", budget: Duration::from_secs(1), run: floor_gaps },
    Suite { id: 5, name: "basis-reduction", budget: Duration::from_secs(5), run: basis_reduction },
    Suite { id: 6, name: "capacities", budget: Duration::from_secs(1), run: capacities },
    Suite { id: 7, name: "polydisk-ellipsoid", budget: Duration::from_secs(30), run: polydisk_ellipsoid },
    Suite { id: 8, name: "polydisk-polydisk", budget: Duration::from_secs(30), run: polydisk_polydisk },
    Suite { id: 9, name: "linf-pairing", budget: Duration::from_secs(5), run: linf_pairing },
    Suite { id: 10, name: "buildings-soundness", budget: Duration::from_secs(300), run: buildings_soundness },
    Suite { id: 11, name: "buildings-completeness", budget: Duration::from_secs(300), run: buildings_completeness },
    Suite { id: 12, name: "plot-golden", budget: Duration::from_secs(1), run: plot_golden },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// Run one suite by name or number.
pub fn run_suite(name: &str) -> Result<Outcome> {
    let suite = SUITES
        .iter()
        .find(|s| s.name == name || s.id.to_string() == name)
        .ok_or_else(|| Error::Validation(format!("unknown suite {name:?}; known: {}", suite_names().join(", "))))?;
    let start = Instant::now();
    let mut tally = Tally::default();
    let res = (suite.run)(&mut tally);
    let elapsed = start.elapsed();
    if let Err(e) = res {
        tally.failures.push(format!("aborted: {e}"));
    }
    let in_time = elapsed <= suite.budget;
    if !in_time {
        tally.failures.push(format!("runtime {} ms over budget", elapsed.as_millis()));
    }
    Ok(Outcome {
        id: suite.id,
        name: suite.name,
        passed: tally.failures.is_empty(),
        checked: tally.checked,
        summary: tally.notes.join("; "),
        failures: tally.failures,
        warnings: tally.warnings,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: suite.budget.as_millis(),
    })
}

pub fn run_all() -> Vec<Outcome> {
    SUITES.iter().map(|s| run_suite(s.name).expect("suite exists")).collect()
}

fn ech_example(t: &mut Tally) -> Result<()> {
    for k in 2..=6i64 {
        for a in [qi(1), q(3, 2), qi(3)] {
            let top = Ellipsoid::perturbed(a.clone(), k, Rational::one())?;
            let bottom = Ellipsoid::unit_k(k + 1).scale(&(&a / qi(2)))?;
            let alpha2 = OrbitSet::new(0, 1);
            let beta = OrbitSet::new(k as u32 + 1, 0);
            let g_top = grading(&top, &alpha2)?;
            let g_bot = grading(&bottom, &beta)?;
            t.check(g_top == 2 * (1 + k), || format!("k={k} a={a}: grading(alpha2) = {g_top}"));
            t.check(g_bot == 2 * (k + 1), || format!("k={k}: grading(beta1^(k+1)) = {g_bot}"));
            let ends: BTreeMap<EmbeddedOrbit, u32> = [
                (EmbeddedOrbit { level: Level::Top, kind: OrbitKind::Long }, 1),
                (EmbeddedOrbit { level: Level::Bottom, kind: OrbitKind::Short }, 1),
            ]
            .into_iter()
            .collect();
            let ce = CurrentEnds {
                top: top.clone(),
                top_set: alpha2,
                bottom: bottom.clone(),
                bottom_set: beta,
                genus: 0,
                delta: 0,
                ends_per_orbit: ends,
            };
            let i = ech_index(&ce)?;
            let j0 = j0_index(&ce)?;
            let slack = j0_bound_check(&ce)?;
            t.check(i == 0, || format!("k={k} a={a}: ECH index {i}"));
            t.check(j0 == 0, || format!("k={k} a={a}: J0 {j0}"));
            t.check(slack.slack == 0 && slack.satisfied, || format!("k={k} a={a}: slack {}", slack.slack));
            let cap = top.b().clone();
            let m = grading_match(&top, &alpha2, &bottom, &cap)?;
            t.check(m == beta, || format!("k={k} a={a}: grading match {m:?}"));
        }
    }
    t.notes.push("k=2..6, a in {1, 3/2, 3}".into());
    Ok(())
}

fn rigid_degrees(t: &mut Tally) -> Result<()> {
    for k in 2..=10i64 {
        for m in 1..=20u32 {
            let mixed = rigid_negative_degree(k, m, RigidFamily::Mixed)? as i64;
            let pure = rigid_negative_degree(k, m, RigidFamily::Pure)? as i64;
            let mi = m as i64;
            t.check(mixed == 2 * mi + k + 1, || format!("mixed k={k} m={m}: {mixed}"));
            t.check(pure == (k + 2) * mi - 1, || format!("pure k={k} m={m}: {pure}"));
        }
    }
    Ok(())
}

fn index_inequalities(t: &mut Tally) -> Result<()> {
    let report = index_suite(2..=6, 30, 10)?;
    for p in &report.patterns {
        t.checked += p.checked;
    }
    for f in &report.failures {
        t.failures.push(format!(
            "pattern {} k={} m={} r={} ind={}: {}",
            f.pattern, f.k, f.m, f.r, f.index, f.claim
        ));
    }
    let filtered: usize = report.patterns.iter().map(|p| p.filtered).sum();
    t.notes.push(format!(
        "{filtered} cases removed by the action filter; {} intermediate-bound gaps",
        report.chain_gaps.len()
    ));
    for g in &report.chain_gaps {
        t.warnings.push(format!(
            "pattern {} k={} r={}: intermediate bound {} below final bound {}",
            g.pattern, g.k, g.r, g.intermediate, g.final_bound
        ));
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den: i64 = rng.gen_range(1..=60);
    let num: i64 = rng.gen_range(lo * den..=hi * den);
    Rational::new(num.into(), den.into())
}

fn floor_gaps(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in 0..10_000 {
        let base = random_rational(&mut rng, 0, 100);
        let lambda: i64 = rng.gen_range(1..=20);
        let a = match n % 3 {
            1 => &PerturbedRational::from_rational(base.clone()) + &PerturbedRational::eps(),
            2 if !base.is_zero() => &PerturbedRational::from_rational(base.clone()) - &PerturbedRational::eps(),
            _ => PerturbedRational::from_rational(base.clone()),
        };
        let (lo, hi) = hermite_floor_gap(&a, lambda)?;
        t.check(lo >= 0 && hi >= 1 - lambda, || format!("a={a} lambda={lambda}: gaps ({lo}, {hi})"));
    }
    t.notes.push("10^4 draws, a in [0,100] with and without +-eps, integer lambda in [1,20]".into());
    Ok(())
}

fn basis_reduction(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut done = 0;
    while done < 10_000 {
        let w1 = random_rational(&mut rng, 0, 20);
        let gap = random_rational(&mut rng, 0, 20);
        if w1.is_zero() || gap.is_zero() || &w1 / &gap > qi(99) {
            continue;
        }
        done += 1;
        let w2 = &w1 + &gap;
        let (change, out) = reduce_basis(&w1, &w2)?;
        // Common denominator: w = n/den with integers, then every candidate is integral.
        let n1 = i128::try_from(w1.numer() * w2.denom()).expect("small");
        let n2 = i128::try_from(w2.numer() * w1.denom()).expect("small");
        let valid: Vec<i64> = (-100..=100i64)
            .filter(|&a| {
                let g = (a as i128) * (n1 - n2);
                let (m1, m2) = (n1 + g, n2 + g);
                m1 > 0 && 2 * m1 <= m2
            })
            .collect();
        t.check(valid == vec![change.a], || {
            format!("({}, {}): a = {}, brute force {valid:?}", fmt_rational(&w1), fmt_rational(&w2), change.a)
        });
        t.check(
            out.w1 > Rational::zero() && qi(2) * &out.w1 <= out.w2 && change.determinant() == 1,
            || format!("({}, {}): bad output", fmt_rational(&w1), fmt_rational(&w2)),
        );
    }
    Ok(())
}

/// Points on the ray `w2 = λ·w1` just inside and exactly at the capacity.
fn ray_membership_agrees(d: &Domain4D, lambda: &Rational, cap: &Rational) -> bool {
    let r = reduced_shape(d);
    let at = (cap / lambda, cap.clone());
    let shrink = Rational::one() - q(1, 1_000_000);
    let inside = (cap * &shrink / lambda, cap * &shrink);
    r.contains(&inside) && !r.contains(&at)
}

fn capacities(t: &mut Tally) -> Result<()> {
    for a in [qi(1), q(3, 2), qi(2), qi(3)] {
        for ratio in [2, 3, 4] {
            let b = &a * qi(ratio);
            let d = Domain4D::ellipsoid(a.clone(), b.clone())?;
            let c1 = capacity_lambda(&d, &qi(1))?;
            let c2 = capacity_lambda(&d, &qi(2))?;
            let e1 = &a * &b / (&a + &b);
            let e2 = qi(2) * &a * &b / (qi(2) * &a + &b);
            t.check(c1 == e1, || format!("c1({d}) = {}", fmt_rational(&c1)));
            t.check(c2 == e2, || format!("c2({d}) = {}", fmt_rational(&c2)));
            t.check(ray_membership_agrees(&d, &qi(1), &c1), || format!("ray membership c1({d})"));
            t.check(ray_membership_agrees(&d, &qi(2), &c2), || format!("ray membership c2({d})"));
        }
    }
    for r in [qi(1), qi(2), q(7, 3)] {
        let ball = Domain4D::ball(r.clone())?;
        let cyl = Domain4D::cylinder(r.clone())?;
        let cb = capacity_lambda(&ball, &qi(1))?;
        let cz = capacity_lambda(&cyl, &qi(1))?;
        t.check(cb == &r / qi(2), || format!("c1({ball}) = {}", fmt_rational(&cb)));
        t.check(cz == r, || format!("c1({cyl}) = {}", fmt_rational(&cz)));
        t.check(ray_membership_agrees(&ball, &qi(1), &cb), || format!("ray membership {ball}"));
        t.check(ray_membership_agrees(&cyl, &qi(1), &cz), || format!("ray membership {cyl}"));
    }
    Ok(())
}

fn polydisk_ellipsoid(t: &mut Tally) -> Result<()> {
    let cs = [qi(1), q(5, 4), q(3, 2), q(7, 4), qi(2)];
    let mut disagreements = 0;
    for c in &cs {
        for b in 2..=4i64 {
            for twice_a in 4..=16i64 {
                let a = q(twice_a, 2);
                let rep = product_obstruction_check(&ProductCase::PolyEll { a: a.clone(), b, c: c.clone() })?;
                let included = rep.verdict == ProductVerdict::NoObstruction;
                let tag = || format!("a={} b={b} c={}", fmt_rational(&a), fmt_rational(c));
                if included != rep.closed_form {
                    disagreements += 1;
                }
                t.check(included == rep.closed_form, || {
                    format!("{}: shapes say included={included}, a+b<=bc is {}", tag(), rep.closed_form)
                });
                if let ProductVerdict::ObstructionFound { witness } = &rep.verdict {
                    let x = reduced_shape(&rep.source);
                    let y = reduced_shape(&rep.target);
                    t.check(x.contains(witness) && !y.contains(witness), || format!("{}: witness not in X minus Y", tag()));
                }
            }
        }
    }
    t.notes.push(format!("{disagreements} grid points where inclusion and a+b<=bc disagree"));
    Ok(())
}

fn polydisk_polydisk(t: &mut Tally) -> Result<()> {
    let (mut obstructed, mut canonical_checked) = (0, 0);
    for a in [qi(1), q(3, 2), qi(2), qi(3)] {
        for b in [qi(3), qi(4), qi(6), qi(10)] {
            if a > b {
                continue;
            }
            for c in [qi(1), q(3, 2), qi(2), q(5, 2), qi(3), qi(4), qi(5), qi(6)] {
                for d in [qi(1), qi(2), qi(3), qi(5), qi(6), qi(8)] {
                    if !(c <= d && b > d) {
                        continue;
                    }
                    let case = ProductCase::PolyPoly { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone() };
                    let rep = product_obstruction_check(&case)?;
                    let tag = || {
                        format!(
                            "P({},{}) vs P({},{})",
                            fmt_rational(&a),
                            fmt_rational(&b),
                            fmt_rational(&c),
                            fmt_rational(&d)
                        )
                    };
                    if !rep.closed_form {
                        continue;
                    }
                    obstructed += 1;
                    t.check(matches!(rep.verdict, ProductVerdict::ObstructionFound { .. }), || {
                        format!("{}: c/a < 2 but inclusion holds", tag())
                    });
                    if let ProductVerdict::ObstructionFound { witness } = &rep.verdict {
                        let x = reduced_shape(&rep.source);
                        let y = reduced_shape(&rep.target);
                        t.check(x.contains(witness) && !y.contains(witness), || format!("{}: witness not in X minus Y", tag()));
                    }
                    if rep.canonical_witness_in_domain == Some(true) {
                        canonical_checked += 1;
                        t.check(rep.canonical_witness_confirmed == Some(true), || {
                            format!("{}: canonical witness not in X minus Y", tag())
                        });
                    }
                }
            }
        }
    }
    t.notes.push(format!(
        "{obstructed} cases with c/a < 2, {canonical_checked} canonical witnesses in the fundamental domain"
    ));
    Ok(())
}

fn linf_pairing(t: &mut Tally) -> Result<()> {
    for k in 2..=8u32 {
        let c = pairing_coefficient(k)?;
        let closed = qi((2 * k as i64 + 3) * (k as i64 * k as i64 + k as i64));
        t.check(c == closed && !c.is_zero(), || format!("k={k}: pairing {}", fmt_rational(&c)));
    }
    let bad = consistency_failures(12)?;
    t.checked += 1;
    for (g1, g2) in bad {
        t.failures.push(format!("symmetry or confluence fails at ({g1}, {g2})"));
    }
    for g in generators_up_to(12) {
        t.check(phi1_integral(g)?, || format!("phi1({g}) not a positive integer"));
    }
    Ok(())
}

fn building_grid() -> Vec<(Rational, i64, Rational, Scenario)> {
    let mut v = Vec::new();
    for a in [q(5, 4), q(3, 2), qi(2), q(5, 2), qi(3)] {
        for k in [2, 3] {
            for x in [qi(2), qi(3), qi(5)] {
                v.push((a.clone(), k, x, Scenario::Full));
            }
            for x in [q(5, 4), q(3, 2), q(7, 4)] {
                v.push((a.clone(), k, x, Scenario::Hamiltonian));
            }
        }
    }
    v
}

fn scan_point(a: &Rational, k: i64, x: &Rational, s: Scenario) -> Result<(ScanVerdict, bool)> {
    let ap = PerturbedRational::from_rational(a.clone());
    let bp = &ap.times(k) + &PerturbedRational::eps();
    let verdict = obstruction_scan(&ap, &bp, x, s, 15, AreaRule::default())?;
    let mode = match s {
        Scenario::Full => EmbedMode::Full,
        Scenario::Hamiltonian => EmbedMode::Hamiltonian,
    };
    let embeds = embeds_l1x(a, &(a * qi(k)), x, mode)?;
    Ok((verdict, embeds))
}

fn buildings_soundness(t: &mut Tally) -> Result<()> {
    let mut obstructed = 0;
    for (a, k, x, s) in building_grid() {
        let (verdict, embeds) = scan_point(&a, k, &x, s)?;
        if let ScanVerdict::ObstructedAt(c) = verdict {
            obstructed += 1;
            t.check(!embeds, || {
                format!("{s:?} a={} k={k} x={}: obstructed at m={} but embeds", fmt_rational(&a), fmt_rational(&x), c.m)
            });
        } else {
            t.checked += 1;
        }
    }
    for a in [q(5, 4), q(3, 2), qi(2), q(5, 2), qi(3)] {
        for k in [2, 3] {
            let e = embeds_l1x(&a, &(&a * qi(k)), &qi(1), EmbedMode::Full)?;
            t.notes.push(format!("x=1 a={} k={k}: embeds={e}", fmt_rational(&a)));
        }
    }
    t.notes.insert(0, format!("{obstructed} obstructed grid points"));
    Ok(())
}

fn buildings_completeness(t: &mut Tally) -> Result<()> {
    let mut misses = 0;
    for (a, k, x, s) in building_grid() {
        let (verdict, embeds) = scan_point(&a, k, &x, s)?;
        t.checked += 1;
        if !embeds && !matches!(verdict, ScanVerdict::ObstructedAt(_)) {
            misses += 1;
            t.warnings.push(format!(
                "{s:?} a={} k={k} x={}: no embedding, but feasible configurations exist for every m <= 15",
                fmt_rational(&a),
                fmt_rational(&x)
            ));
        }
    }
    t.notes.push(format!("{misses} non-embedding grid points without an obstruction up to m=15"));
    Ok(())
}

pub const GOLDEN: &[(&str, i64, &str, &str, &str)] = &[
    ("E(2,4)", 5, "sh_E_2_4", include_str!("../golden/sh_E_2_4.csv"), include_str!("../golden/sh_E_2_4.svg")),
    ("B(1)", 2, "sh_B_1", include_str!("../golden/sh_B_1.csv"), include_str!("../golden/sh_B_1.svg")),
    ("P(1,2)", 3, "sh_P_1_2", include_str!("../golden/sh_P_1_2.csv"), include_str!("../golden/sh_P_1_2.svg")),
    ("Z(1)", 3, "sh_Z_1", include_str!("../golden/sh_Z_1.csv"), include_str!("../golden/sh_Z_1.svg")),
];

/// Screen path of one cell computed from CSV vertex text.
fn expected_path(rows: &[(f64, f64)], w: f64, closed: bool) -> String {
    let span = (plot::SVG_SIZE - 2 * plot::SVG_MARGIN) as f64;
    let mut d = String::new();
    for (i, (x, y)) in rows.iter().enumerate() {
        let sx = plot::SVG_MARGIN as f64 + span * x / w;
        let sy = (plot::SVG_SIZE - plot::SVG_MARGIN) as f64 - span * y / w;
        d.push_str(&format!("{}{sx:.2} {sy:.2}", if i == 0 { "M" } else { " L" }));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

fn parse_frac(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

fn plot_golden(t: &mut Tally) -> Result<()> {
    for (dom, w, _, csv, svg) in GOLDEN {
        let region = reduced_shape(&Domain4D::parse(dom)?);
        let wq = qi(*w);
        t.check(plot::to_csv(&region, &wq) == *csv, || format!("{dom}: CSV differs from golden"));
        t.check(plot::to_svg(&region, &wq) == *svg, || format!("{dom}: SVG differs from golden"));
        let mut cells: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
        for line in csv.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            cells.entry(f[0].parse().unwrap()).or_default().push((parse_frac(f[2]), parse_frac(f[3])));
        }
        for (ci, rows) in cells {
            let path = expected_path(&rows, *w as f64, rows.len() > 2);
            t.check(svg.contains(&format!("d=\"{path}\"")), || format!("{dom}: cell {ci} path missing from SVG"));
        }
        t.check(region.tag == FundamentalDomain::FullShape, || format!("{dom}: wrong tag"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = suite_names();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), SUITES.len());
        assert!(run_suite("nope").is_err());
    }
}
