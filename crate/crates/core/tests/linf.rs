use num::{BigInt, One};
use proptest::prelude::*;
use shapekit::exactnum::{q, qi};
use shapekit::linf::{
    consistency_failures, generators_up_to, optimal_index, pairing_coefficient, phi1, phi1_integral, phi2, psi1,
    AGen, BetaGen, Phi2, RewriteRule,
};
use shapekit::{Error, PerturbedRational, Rational};

fn binom(n: u32, k: u32) -> BigInt {
    let mut c = BigInt::one();
    for t in 0..k {
        c = c * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    c
}

#[test]
fn phi2_is_symmetric_and_confluent_to_weight_12() {
    assert!(consistency_failures(12).unwrap().is_empty());
}

#[test]
fn pairing_coefficient_closed_form() {
    for k in 2..=8i64 {
        let c = pairing_coefficient(k as u32).unwrap();
        assert_eq!(c, qi((2 * k + 3) * (k * k + k)));
        assert_ne!(c, qi(0));
    }
}

#[test]
fn phi2_examples() {
    let b = |i, j| BetaGen::new(i, j).unwrap();
    let a = |q| AGen::new(q).unwrap();
    assert_eq!(phi2(b(0, 1), b(1, 0), true).unwrap().coeff(&a(3)), qi(3));
    assert_eq!(phi2(b(2, 1), b(2, 1), true).unwrap().coeff(&a(7)), qi(42));
    assert!(matches!(phi2(b(0, 1), b(1, 0), false), Err(Error::Unsupported(_))));
    let mut second = Phi2::new(RewriteRule::Second);
    assert_eq!(second.eval(b(1, 0), b(0, 1)).unwrap(), phi2(b(0, 1), b(1, 0), true).unwrap());
}

#[test]
fn phi1_is_a_binomial_multiple() {
    for g in generators_up_to(14) {
        assert!(phi1_integral(g).unwrap());
        let v = phi1(g, true).unwrap();
        let qn = g.weight();
        let expected = Rational::from_integer(binom(qn, g.i));
        assert_eq!(v.coeff(&AGen::new(qn).unwrap()), expected);
    }
}

/// `argmin_{i+j=q} max(i·a, j·b)` by scanning every split, with ties reported.
fn brute_optimal(a: &PerturbedRational, b: &PerturbedRational, qn: u32) -> Option<(u32, u32)> {
    let val = |i: u32| {
        let x = a.times(i as i64);
        let y = b.times((qn - i) as i64);
        if x.lt(&y).unwrap() {
            y
        } else {
            x
        }
    };
    let mut best: Option<(u32, PerturbedRational)> = None;
    let mut tie = false;
    for i in 0..=qn {
        let v = val(i);
        match &best {
            None => best = Some((i, v)),
            Some((_, bv)) if v.lt(bv).unwrap() => {
                best = Some((i, v));
                tie = false;
            }
            Some((_, bv)) if v == *bv => tie = true,
            _ => {}
        }
    }
    let (i, _) = best?;
    (!tie).then_some((i, qn - i))
}

proptest! {
    #[test]
    fn optimal_index_matches_brute_force(an in 1i64..=6, k in 1i64..=5, f in 0i64..=7, sgn in prop::bool::ANY, qn in 1u32..=40) {
        let a = PerturbedRational::from_rational(q(an, 2));
        let b = PerturbedRational::linear(q(an, 2) * (qi(k) + q(f, 8)), qi(if sgn { 1 } else { -1 }));
        prop_assume!(a.le(&b).unwrap());
        let got = optimal_index(&a, &b, qn);
        match brute_optimal(&a, &b, qn) {
            Some(pair) => prop_assert_eq!(got.unwrap(), pair),
            None => prop_assert!(matches!(got, Err(Error::TieDetected(_)))),
        }
    }

    #[test]
    fn psi1_has_weight_q(k in 2u32..=8, qn in 1u32..=30) {
        let v = psi1(k, qn).unwrap();
        let terms: Vec<_> = v.terms().collect();
        prop_assert_eq!(terms.len(), 1);
        prop_assert_eq!(terms[0].0.weight(), qn);
    }
}

#[test]
fn rational_ties_are_detected() {
    let a = PerturbedRational::from_int(1);
    assert!(matches!(optimal_index(&a, &a, 1), Err(Error::TieDetected(1))));
    let b = PerturbedRational::from_int(2);
    assert_eq!(optimal_index(&a, &b, 3).unwrap(), (2, 1));
}
