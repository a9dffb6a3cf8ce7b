//! Shared helpers for the integration tests: fixture loading and a seeded
//! generator of small random theories.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use dlforecast_core::model::LocationRegistry;
use dlforecast_core::theory::{Literal, Rule, RuleKind};
use dlforecast_core::{load_kb, parse_source_map, parse_theory, DefeasibleTheory, KnowledgeBase, LabeledMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("reading fixture {rel}: {e}"))
}

pub fn fixture_theory(rel: &str) -> DefeasibleTheory {
    parse_theory(&read_fixture(rel)).unwrap_or_else(|e| panic!("parsing {rel}: {e}"))
}

pub fn veneto_maps() -> Vec<LabeledMap> {
    let registry = LocationRegistry::default();
    ["veneto/gfs.json", "veneto/ecmwf.json", "veneto/obs.json"]
        .iter()
        .flat_map(|rel| parse_source_map(read_fixture(rel).as_bytes(), &registry).unwrap())
        .collect()
}

pub fn veneto_kb() -> KnowledgeBase {
    load_kb(read_fixture("veneto/kb.json").as_bytes()).unwrap()
}

pub fn lits(items: &[&str]) -> BTreeSet<Literal> {
    items.iter().map(|s| s.parse().unwrap()).collect()
}

pub const VENETO_FORECAST: [&str; 14] = [
    "CNorth_h1_78",
    "CCenter_h1_78",
    "CSouth_h1_78",
    "WNorth_h1_NE6",
    "WCenter_h1_NE6",
    "WSouth_h1_N5",
    "Sea_h1_65",
    "CNorth_h2_38",
    "CCenter_h2_38",
    "CSouth_h2_38",
    "WNorth_h2_N6",
    "WCenter_h2_N6",
    "WSouth_h2_N5",
    "Sea_h2_20",
];

pub const VENETO_OBSERVED: [&str; 7] = [
    "CNorth_h0_90",
    "CCenter_h0_90",
    "CSouth_h0_90",
    "WNorth_h0_NE15",
    "WCenter_h0_NE15",
    "WSouth_h0_NE15",
    "Sea_h0_190",
];

pub const RAIN_FORECAST: [&str; 16] = [
    "RNorth_h1_21",
    "REast_h1_21",
    "RSouth_h1_21",
    "RWest_h1_21",
    "-RNorth_h1_7",
    "-REast_h1_7",
    "-RSouth_h1_7",
    "-RWest_h1_7",
    "RNorth_h2_14",
    "REast_h2_14",
    "RSouth_h2_14",
    "RWest_h2_14",
    "-RNorth_h2_8",
    "-REast_h2_8",
    "-RSouth_h2_8",
    "-RWest_h2_8",
];

/// Untagged literals about a forecast horizon (h1 or later), the part of a
/// conclusion set a bulletin is built from.
pub fn forecast_part(set: &BTreeSet<Literal>) -> BTreeSet<Literal> {
    set.iter()
        .filter(|l| {
            dlforecast_core::decode_atom(l.atom())
                .map(|p| p.source.is_none() && p.horizon >= 1)
                .unwrap_or(false)
        })
        .cloned()
        .collect()
}

/// Random theory with at most `max_rules` rules over at most `max_atoms` atoms.
/// Superiority only relates rules with complementary heads and follows a
/// random rank order, so it is acyclic.
pub fn random_theory(seed: u64, max_rules: usize, max_atoms: usize) -> DefeasibleTheory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_atoms = rng.gen_range(1..=max_atoms);
    let atoms: Vec<String> = (0..n_atoms).map(|i| format!("a{i}")).collect();
    let literal = |rng: &mut ChaCha8Rng| {
        let atom = atoms.choose(rng).unwrap().clone();
        Literal::new(atom, rng.gen_bool(0.6)).unwrap()
    };

    let mut theory = DefeasibleTheory::new();
    for _ in 0..rng.gen_range(0..=2) {
        theory.add_fact(literal(&mut rng));
    }
    let n_rules = rng.gen_range(0..=max_rules);
    let mut ranks = Vec::with_capacity(n_rules);
    for i in 0..n_rules {
        let kind = match rng.gen_range(0..10) {
            0 | 1 => RuleKind::Strict,
            2 => RuleKind::Defeater,
            _ => RuleKind::Defeasible,
        };
        let body = (0..rng.gen_range(0..=2)).map(|_| literal(&mut rng)).collect();
        let head = literal(&mut rng);
        let id = format!("r{i}");
        theory.add_rule(Rule::new(id.clone(), kind, body, head).unwrap()).unwrap();
        ranks.push((id, rng.gen_range(0..4u8)));
    }
    let rules: Vec<Rule> = theory.rules().cloned().collect();
    for a in &rules {
        for b in &rules {
            let rank = |r: &Rule| ranks.iter().find(|(id, _)| *id == r.id).unwrap().1;
            if a.head.complement() == b.head && rank(a) > rank(b) && rng.gen_bool(0.7) {
                theory.add_superiority(&a.id, &b.id).unwrap();
            }
        }
    }
    theory
}
