mod common;

use common::random_theory;
use dlforecast_core::reasoner::{defeasible_closure, definite_closure};
use dlforecast_core::{conclusions, oracle_conclusions, parse_theory, ConclusionSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coherence_and_superset_laws(seed in any::<u64>()) {
        let set = conclusions(&random_theory(seed, 10, 8));
        prop_assert_eq!(set.check_invariants(), Vec::<String>::new());
        prop_assert!(set.plus_definite.is_subset(&set.plus_defeasible));
        prop_assert!(set.minus_defeasible.is_subset(&set.minus_definite));
        prop_assert!(set.plus_defeasible.is_disjoint(&set.minus_defeasible));
    }

    #[test]
    fn engine_matches_oracle(seed in any::<u64>()) {
        let theory = random_theory(seed, 10, 8);
        prop_assert_eq!(oracle_conclusions(&theory).unwrap(), conclusions(&theory));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fixpoint_pass_bound(seed in any::<u64>()) {
        let theory = random_theory(seed, 10, 8);
        let (plus, _) = definite_closure(&theory);
        let closure = defeasible_closure(&theory, &plus);
        prop_assert!(closure.productive_passes <= 2 * theory.literals().len());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let set = conclusions(&random_theory(seed, 10, 8));
        prop_assert_eq!(ConclusionSet::from_json(&set.to_json()).unwrap(), set);
    }
}

#[test]
fn rebuttal_without_priority_blocks_both() {
    let set = conclusions(&parse_theory("r1: => A; r2: => -A").unwrap());
    assert!(set.minus_defeasible.contains(&"A".parse().unwrap()));
    assert!(set.minus_defeasible.contains(&"-A".parse().unwrap()));
}

#[test]
fn empty_theory_concludes_nothing() {
    assert!(conclusions(&parse_theory("").unwrap()).is_empty());
}
