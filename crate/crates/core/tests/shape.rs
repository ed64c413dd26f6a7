use num::{One, Zero};
use proptest::prelude::*;
use shapekit::exactnum::{q, qi};
use shapekit::shape::{
    capacity_lambda, embeds_l1x, hamiltonian_shape, includes, reduce_basis, reduced_shape, BasisChange, Domain4D,
    EmbedMode, Inclusion, Point, Region,
};
use shapekit::Rational;

fn small_rat() -> impl Strategy<Value = Rational> {
    (1i64..=24, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn domain() -> impl Strategy<Value = Domain4D> {
    (0u8..4, small_rat(), 2i64..=5, small_rat()).prop_map(|(fam, a, k, extra)| match fam {
        0 => Domain4D::ellipsoid(a.clone(), &a * qi(k)).unwrap(),
        1 => Domain4D::ball(a).unwrap(),
        2 => Domain4D::polydisk(a.clone(), &a + extra).unwrap(),
        _ => Domain4D::cylinder(a).unwrap(),
    })
}

fn point(max: i64) -> impl Strategy<Value = Point> {
    (0i64..=max * 16, 0i64..=max * 16).prop_map(|(x, y)| (q(x, 16), q(y, 16)))
}

fn sorted_cells(r: &Region, w: &Rational) -> Vec<Vec<Point>> {
    r.vertices(w)
        .iter()
        .map(|s| {
            let mut v = s.vertices();
            v.sort();
            v
        })
        .collect()
}

#[test]
fn scaling_covariance_of_vertices() {
    let e = Domain4D::ellipsoid(qi(2), qi(4)).unwrap();
    let w = qi(5);
    let base = sorted_cells(&reduced_shape(&e), &w);
    for lambda in [q(1, 2), qi(3)] {
        let scaled = sorted_cells(&reduced_shape(&e.scaled(&lambda)), &(&w * &lambda));
        let expected: Vec<Vec<Point>> = base
            .iter()
            .map(|cell| {
                let mut v: Vec<Point> = cell.iter().map(|(x, y)| (x * &lambda, y * &lambda)).collect();
                v.sort();
                v
            })
            .collect();
        assert_eq!(scaled, expected);
    }
}

proptest! {
    #[test]
    fn scaling_covariance_of_membership(d in domain(), l in (1i64..=6, 1i64..=4), p in point(30)) {
        let lambda = q(l.0, l.1);
        let big = reduced_shape(&d.scaled(&lambda));
        let small = reduced_shape(&d);
        let back = (&p.0 / &lambda, &p.1 / &lambda);
        prop_assert_eq!(big.contains(&p), small.contains(&back));
        prop_assert_eq!(small.scaled(&lambda).contains(&p), small.contains(&back));
    }

    #[test]
    fn includes_agrees_with_membership(x in domain(), y in domain(), pts in prop::collection::vec(point(30), 64)) {
        let (rx, ry) = (reduced_shape(&x), reduced_shape(&y));
        match includes(&rx, &ry).unwrap() {
            Inclusion::Witness(p) => {
                prop_assert!(rx.contains(&p));
                prop_assert!(!ry.contains(&p));
            }
            Inclusion::Included => {
                for p in pts.iter().filter(|p| rx.contains(p)) {
                    prop_assert!(ry.contains(p), "{:?} in {} but not {}", p, x, y);
                }
            }
        }
    }

    #[test]
    fn hamiltonian_shape_contains_reduced(a in small_rat(), k in 2i64..=5, p in point(30)) {
        let d = Domain4D::ellipsoid(a.clone(), &a * qi(k)).unwrap();
        if reduced_shape(&d).contains(&p) {
            prop_assert!(hamiltonian_shape(&d).unwrap().contains(&p));
        }
    }
}

fn basis_case() -> impl Strategy<Value = (Rational, Rational)> {
    (1i64..=400, 1i64..=40, 1i64..=990, 1i64..=99).prop_map(|(n, d, tn, td)| {
        let w1 = q(n, d);
        let t = q(tn, td).max(q(1, 99));
        let w2 = &w1 + &w1 * t;
        (w1, w2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduce_basis_is_the_unique_solution((w1, w2) in basis_case()) {
        let (change, out) = reduce_basis(&w1, &w2).unwrap();
        prop_assert_eq!(change.determinant(), 1);
        let mut hits = Vec::new();
        for a in -100..=100 {
            let (n1, n2) = BasisChange { a }.apply(&w1, &w2);
            if n1 > Rational::zero() && n2 > Rational::zero() && qi(2) * &n1 <= n2 {
                hits.push((a, n1, n2));
            }
        }
        prop_assert_eq!(hits.len(), 1);
        prop_assert_eq!(hits[0].0, change.a);
        prop_assert_eq!((&hits[0].1, &hits[0].2), (&out.w1, &out.w2));
    }
}

#[test]
fn reduce_basis_examples() {
    let (c, out) = reduce_basis(&qi(2), &qi(3)).unwrap();
    assert_eq!((c.a, out.w1, out.w2), (1, qi(1), qi(2)));
    let (c, out) = reduce_basis(&qi(1), &qi(1)).unwrap();
    assert_eq!((c.a, out.w1, out.w2), (0, qi(1), qi(1)));
    assert!(reduce_basis(&qi(0), &qi(1)).is_err());
    assert!(reduce_basis(&qi(3), &qi(1)).is_err());
}

#[test]
fn membership_matches_embedding_predicate() {
    let xs = [qi(1), qi(2), q(5, 2), qi(3), qi(4), qi(7)];
    let mut checked = 0;
    for a in [qi(1), q(3, 2), qi(2), qi(3)] {
        for k in 2..=4 {
            let b = &a * qi(k);
            let region = reduced_shape(&Domain4D::ellipsoid(a.clone(), b.clone()).unwrap());
            for j in 1..=16 {
                let w1 = q(j, 4);
                for x in &xs {
                    let p = (w1.clone(), &w1 * x);
                    let e = embeds_l1x(&(&a / &w1), &(&b / &w1), x, EmbedMode::Full).unwrap();
                    assert_eq!(region.contains(&p), e, "E({a},{b}) at {p:?}");
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 4 * 3 * 16 * xs.len());
}

/// Largest `w2` with `(w2/λ, w2)` in the region, by bisection on dyadics.
fn bisect_capacity(r: &Region, lambda: &Rational, hi: Rational) -> (Rational, Rational) {
    let inside = |w2: &Rational| r.contains(&(w2 / lambda, w2.clone()));
    let mut lo = Rational::zero();
    let mut hi = hi;
    assert!(!inside(&hi));
    let tol = q(1, 1_000_000);
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / qi(2);
        if mid.is_zero() || inside(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

proptest! {
    #[test]
    fn capacity_matches_bisection(d in domain(), l in prop::sample::select(vec![(1, 1), (2, 1), (5, 2), (3, 1), (7, 2)])) {
        let lambda = q(l.0, l.1);
        let cap = capacity_lambda(&d, &lambda).unwrap();
        let r = reduced_shape(&d);
        let hi = (d.size() + Rational::one()) * &lambda * qi(4);
        let (lo, hi) = bisect_capacity(&r, &lambda, hi);
        prop_assert!(lo <= cap && cap <= hi, "{}: cap {} not in [{}, {}]", d, cap, lo, hi);
    }
}

#[test]
fn capacity_rejects_lambda_between_one_and_two() {
    let e = Domain4D::ellipsoid(qi(2), qi(4)).unwrap();
    assert_eq!(capacity_lambda(&e, &qi(1)).unwrap(), q(4, 3));
    assert!(capacity_lambda(&e, &q(3, 2)).is_err());
}
