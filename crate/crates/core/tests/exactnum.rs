use std::cmp::Ordering;

use num::{Integer, Signed, Zero};
use proptest::prelude::*;
use shapekit::exactnum::{hermite_floor_gap, hermite_gap_holds, q, qi, ParseOptions};
use shapekit::{Error, PerturbedRational, Rational};

fn rat(max: i64) -> impl Strategy<Value = Rational> {
    (-max * 12..=max * 12, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn perturbed() -> impl Strategy<Value = PerturbedRational> {
    prop::collection::vec(rat(20), 0..4).prop_map(PerturbedRational::new)
}

/// First nonzero coefficient of `x − y`, read off coefficient by coefficient.
fn lex_oracle(x: &PerturbedRational, y: &PerturbedRational) -> Ordering {
    let n = x.coeffs().len().max(y.coeffs().len());
    for i in 0..n {
        let d = x.coeff(i) - y.coeff(i);
        if !d.is_zero() {
            return if d.is_positive() { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

proptest! {
    #[test]
    fn trichotomy(x in perturbed(), y in perturbed()) {
        let lt = x.lt(&y).unwrap();
        let gt = y.lt(&x).unwrap();
        let eq = x == y;
        prop_assert_eq!([lt, eq, gt].iter().filter(|&&b| b).count(), 1);
        prop_assert_eq!(x.try_cmp(&y).unwrap(), lex_oracle(&x, &y));
    }

    #[test]
    fn floor_and_ceil_bracket(x in perturbed()) {
        let f = x.floor().unwrap();
        let c = x.ceil().unwrap();
        prop_assert!(PerturbedRational::from_int(f).le(&x).unwrap());
        prop_assert!(x.lt(&PerturbedRational::from_int(f + 1)).unwrap());
        prop_assert!(PerturbedRational::from_int(c - 1).lt(&x).unwrap());
        prop_assert!(x.le(&PerturbedRational::from_int(c)).unwrap());
    }

    #[test]
    fn irrational_ceil_is_floor_plus_one(c0 in rat(50), c1 in rat(5)) {
        prop_assume!(!c1.is_zero());
        let x = PerturbedRational::linear(c0, c1);
        prop_assert_eq!(x.ceil().unwrap(), x.floor().unwrap() + 1);
    }

    #[test]
    fn display_parses_back(x in perturbed()) {
        let back = PerturbedRational::parse_with(&x.to_string(), ParseOptions::default()).unwrap();
        prop_assert_eq!(back, x);
    }
}

fn hermite_case() -> impl Strategy<Value = (i64, i64, i64)> {
    (1i64..=60)
        .prop_flat_map(|d| (0..=100 * d, Just(d), 1i64..=20))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn hermite_gaps((n, d, lambda) in hermite_case()) {
        let a = PerturbedRational::from_rational(q(n, d));
        let (lo, hi) = hermite_floor_gap(&a, lambda).unwrap();
        let floor = Integer::div_floor(&n, &d);
        let ceil = -Integer::div_floor(&-n, &d);
        let floor_l = Integer::div_floor(&n, &(lambda * d));
        let ceil_l = -Integer::div_floor(&-n, &(lambda * d));
        prop_assert_eq!(lo, floor - lambda * floor_l);
        prop_assert_eq!(hi, ceil - lambda * ceil_l);
        prop_assert!(lo >= 0);
        prop_assert!(hi >= 1 - lambda);
        prop_assert!(hermite_gap_holds(&a, lambda).unwrap());
    }
}

#[test]
fn hermite_examples() {
    let gap = |a: PerturbedRational, l| hermite_floor_gap(&a, l).unwrap();
    assert_eq!(gap(PerturbedRational::from_int(7), 3), (1, -2));
    assert_eq!(gap(PerturbedRational::from_int(6), 3), (0, 0));
    assert_eq!(gap(PerturbedRational::linear(qi(5), qi(1)), 2), (1, 0));
    assert!(hermite_floor_gap(&PerturbedRational::from_int(3), 0).is_err());
}

#[test]
fn truncation_is_flagged() {
    let x = PerturbedRational::with_degree(vec![qi(2), qi(0), qi(1)], 1);
    assert!(x.is_truncated());
    assert!(matches!(x.floor(), Err(Error::IndeterminateComparison(_))));
    assert!(matches!(
        x.try_cmp(&PerturbedRational::from_int(2)),
        Err(Error::IndeterminateComparison(_))
    ));
    assert_eq!(x.try_cmp(&PerturbedRational::from_int(1)).unwrap(), Ordering::Greater);
}
