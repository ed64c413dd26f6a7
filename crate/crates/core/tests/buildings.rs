use proptest::prelude::*;
use shapekit::buildings::{
    config_is_feasible, enumerate_feasible, is_feasible, negative_degree, obstruction_scan, AreaRule,
    BuildingComponent, FeasibilityProblem, Scenario, ScanVerdict, DEFAULT_BUDGET,
};
use shapekit::exactnum::{q, qi};
use shapekit::shape::{embeds_l1x, EmbedMode};
use shapekit::{Error, PerturbedRational, Rational};

fn problem() -> impl Strategy<Value = FeasibilityProblem> {
    (
        prop::sample::select(vec![q(5, 4), q(3, 2), qi(2), q(5, 2), qi(3)]),
        2i64..=3,
        prop::sample::select(vec![(2, 1), (3, 1), (5, 2), (5, 4), (3, 2), (7, 4)]),
        1u32..=3,
    )
        .prop_map(|(a, k, x, m)| {
            let x = q(x.0, x.1);
            let scenario = if x >= qi(2) { Scenario::Full } else { Scenario::Hamiltonian };
            FeasibilityProblem::perturbed(a, k, x, m, scenario).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_is_invariant_under_reordering(p in problem(), seed in any::<u64>()) {
        let decided = is_feasible(&p, AreaRule::default()).unwrap().feasible.is_some();
        let configs = match enumerate_feasible(&p, AreaRule::default(), DEFAULT_BUDGET) {
            Err(Error::SearchBudgetExceeded { found, .. }) => {
                prop_assert!(decided && found > 0);
                return Ok(());
            }
            other => other.unwrap(),
        };
        prop_assert_eq!(decided, !configs.is_empty());
        for cfg in configs.iter().take(20) {
            let mut shuffled = cfg.clone();
            let n = shuffled.components.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.components.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert!(config_is_feasible(&shuffled, &p, AreaRule::default()).unwrap());
            prop_assert_eq!(&shuffled.canonical(), cfg);
        }
    }

    #[test]
    fn obstruction_certificates_are_sound(p in problem()) {
        let verdict = obstruction_scan(&p.a, &p.b, &p.x, p.scenario, 6, AreaRule::default()).unwrap();
        if let ScanVerdict::ObstructedAt(_) = verdict {
            let a = p.a.standard_part();
            let mode = match p.scenario {
                Scenario::Full => EmbedMode::Full,
                Scenario::Hamiltonian => EmbedMode::Hamiltonian,
            };
            prop_assert!(!embeds_l1x(&a, &(&a * qi(p.k)), &p.x, mode).unwrap());
        }
    }
}

#[test]
fn index_relation_forces_planes_when_l_vanishes() {
    for scenario in [Scenario::Full, Scenario::Hamiltonian] {
        for k in 2..=6 {
            for m_i in 0..=10 {
                for kappa_i in 0..=10 {
                    let c = BuildingComponent::from_index_relation(scenario, k, m_i, kappa_i, 0);
                    assert_eq!(c.index_defect(scenario, k), 0);
                    if scenario == Scenario::Hamiltonian && m_i == 0 {
                        assert_eq!(c.k_i, 1);
                    } else if c.k_i > 0 {
                        assert_eq!((m_i, kappa_i, c.k_i), (0, 0, 1));
                    }
                }
            }
        }
    }
}

#[test]
fn enumerator_reproduces_plane_shape() {
    let p = FeasibilityProblem::perturbed(qi(3), 2, qi(3), 1, Scenario::Full).unwrap();
    let configs = enumerate_feasible(&p, AreaRule::default(), DEFAULT_BUDGET).unwrap();
    assert!(!configs.is_empty());
    let mut saw_planes = false;
    for cfg in &configs {
        assert_eq!(cfg.components.len(), p.t());
        assert_eq!(cfg.d, negative_degree(Scenario::Full, 1, 2));
        let planes: Vec<_> = cfg.components.iter().filter(|c| c.l_i == 0 && c.k_i > 0).collect();
        for c in &planes {
            assert_eq!((c.m_i, c.kappa_i, c.k_i), (0, 0, 1));
        }
        saw_planes |= planes.len() as i64 == cfg.d;
    }
    assert!(saw_planes);
}

#[test]
fn rejects_out_of_domain_problems() {
    let x1 = FeasibilityProblem::perturbed(qi(2), 2, qi(1), 1, Scenario::Full);
    assert!(matches!(x1, Err(Error::XOutsideFundamentalDomain(_))));
    let rational = FeasibilityProblem::new(
        PerturbedRational::from_int(1),
        PerturbedRational::from_int(3),
        qi(2),
        1,
        Scenario::Full,
    );
    assert!(matches!(rational, Err(Error::DegenerateOrbit(_))));
    let ham = FeasibilityProblem::perturbed(qi(2), 2, Rational::from_integer(2.into()), 1, Scenario::Hamiltonian);
    assert!(ham.is_err());
}
