//! Defeasible-logic consequence computation.
//!
//! Ambiguity-blocking, team-defeat semantics. Definite conclusions are the
//! least fixpoint over facts and strict rules; every other mentioned literal
//! is definitely refuted. Defeasible tags are the least fixpoint of the
//! `+∂`/`−∂` inference conditions; literals caught in derivation loops get
//! neither tag and are reported as undetermined.

mod oracle;

pub use oracle::{oracle_conclusions, ORACLE_MAX_ATOMS};

use std::collections::{BTreeSet, HashMap, HashSet};

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::theory::{DefeasibleTheory, Literal, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strength {
    Definite,
    Defeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProofTag {
    pub polarity: Polarity,
    pub strength: Strength,
}

impl ProofTag {
    pub const PLUS_DEFINITE: ProofTag = ProofTag::new(Polarity::Plus, Strength::Definite);
    pub const MINUS_DEFINITE: ProofTag = ProofTag::new(Polarity::Minus, Strength::Definite);
    pub const PLUS_DEFEASIBLE: ProofTag = ProofTag::new(Polarity::Plus, Strength::Defeasible);
    pub const MINUS_DEFEASIBLE: ProofTag = ProofTag::new(Polarity::Minus, Strength::Defeasible);

    pub const fn new(polarity: Polarity, strength: Strength) -> Self {
        ProofTag { polarity, strength }
    }

    /// `+D`, `-D`, `+d` or `-d`.
    pub fn symbol(self) -> &'static str {
        match (self.polarity, self.strength) {
            (Polarity::Plus, Strength::Definite) => "+D",
            (Polarity::Minus, Strength::Definite) => "-D",
            (Polarity::Plus, Strength::Defeasible) => "+d",
            (Polarity::Minus, Strength::Defeasible) => "-d",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConclusionSet {
    pub plus_definite: BTreeSet<Literal>,
    pub minus_definite: BTreeSet<Literal>,
    pub plus_defeasible: BTreeSet<Literal>,
    pub minus_defeasible: BTreeSet<Literal>,
    pub undetermined: BTreeSet<Literal>,
}

impl ConclusionSet {
    pub fn set(&self, tag: ProofTag) -> &BTreeSet<Literal> {
        match (tag.polarity, tag.strength) {
            (Polarity::Plus, Strength::Definite) => &self.plus_definite,
            (Polarity::Minus, Strength::Definite) => &self.minus_definite,
            (Polarity::Plus, Strength::Defeasible) => &self.plus_defeasible,
            (Polarity::Minus, Strength::Defeasible) => &self.minus_defeasible,
        }
    }

    pub fn has(&self, tag: ProofTag, literal: &Literal) -> bool {
        self.set(tag).contains(literal)
    }

    pub fn is_empty(&self) -> bool {
        self.plus_definite.is_empty()
            && self.minus_definite.is_empty()
            && self.plus_defeasible.is_empty()
            && self.minus_defeasible.is_empty()
            && self.undetermined.is_empty()
    }

    /// Violations of coherence and the superset laws; empty when well formed.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for l in self.plus_definite.intersection(&self.minus_definite) {
            problems.push(format!("{l} is both +D and -D"));
        }
        for l in self.plus_defeasible.intersection(&self.minus_defeasible) {
            problems.push(format!("{l} is both +d and -d"));
        }
        for l in self.plus_definite.difference(&self.plus_defeasible) {
            problems.push(format!("{l} is +D but not +d"));
        }
        for l in self.minus_defeasible.difference(&self.minus_definite) {
            problems.push(format!("{l} is -d but not -D"));
        }
        for l in &self.plus_defeasible {
            let c = l.complement();
            if self.plus_defeasible.contains(&c)
                && !(self.plus_definite.contains(l) && self.plus_definite.contains(&c))
            {
                problems.push(format!("{l} and {c} are both +d"));
            }
        }
        problems
    }

    /// JSON document with literals in surface syntax, sorted lexicographically.
    pub fn to_json(&self) -> String {
        fn sorted(set: &BTreeSet<Literal>) -> Vec<String> {
            let mut v: Vec<String> = set.iter().map(ToString::to_string).collect();
            v.sort();
            v
        }
        let doc = json!({
            "+D": sorted(&self.plus_definite),
            "-D": sorted(&self.minus_definite),
            "+d": sorted(&self.plus_defeasible),
            "-d": sorted(&self.minus_defeasible),
            "undetermined": sorted(&self.undetermined),
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("json values always serialize");
        out.push('\n');
        out
    }

    pub fn from_json(document: &str) -> Result<Self> {
        let root: Json = serde_json::from_str(document)?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::Theory("conclusion document must be an object".into()))?;
        let read = |key: &str| -> Result<BTreeSet<Literal>> {
            match obj.get(key) {
                None => Ok(BTreeSet::new()),
                Some(Json::Array(items)) => items
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or_else(|| Error::Theory(format!("`{key}` entries must be strings")))
                            .and_then(str::parse)
                    })
                    .collect(),
                Some(_) => Err(Error::Theory(format!("`{key}` must be an array"))),
            }
        };
        Ok(ConclusionSet {
            plus_definite: read("+D")?,
            minus_definite: read("-D")?,
            plus_defeasible: read("+d")?,
            minus_defeasible: read("-d")?,
            undetermined: read("undetermined")?,
        })
    }
}

/// Theory with literals and rules interned to indices.
struct Indexed<'a> {
    literals: Vec<&'a Literal>,
    complement: Vec<Option<usize>>,
    rules: Vec<IndexedRule>,
    /// rules (any kind) by head literal
    rules_for: Vec<Vec<usize>>,
    superior: HashSet<(usize, usize)>,
    facts: Vec<usize>,
}

struct IndexedRule {
    kind: RuleKind,
    body: Vec<usize>,
    head: usize,
}

impl<'a> Indexed<'a> {
    fn new(theory: &'a DefeasibleTheory, universe: &'a BTreeSet<Literal>) -> Self {
        let literals: Vec<&Literal> = universe.iter().collect();
        let index: HashMap<&Literal, usize> = literals.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let complement = literals
            .iter()
            .map(|l| index.get(&l.complement()).copied())
            .collect();
        let mut rule_index = HashMap::new();
        let mut rules = Vec::new();
        let mut rules_for = vec![Vec::new(); literals.len()];
        for (i, r) in theory.rules().enumerate() {
            rule_index.insert(r.id.as_str(), i);
            let head = index[&r.head];
            rules_for[head].push(i);
            rules.push(IndexedRule {
                kind: r.kind,
                body: r.body.iter().map(|b| index[b]).collect(),
                head,
            });
        }
        let superior = theory
            .superiority()
            .iter()
            .map(|(w, l)| (rule_index[w.as_str()], rule_index[l.as_str()]))
            .collect();
        let facts = theory.facts().iter().map(|f| index[f]).collect();
        Indexed {
            literals,
            complement,
            rules,
            rules_for,
            superior,
            facts,
        }
    }

    fn supporting(&self, lit: usize) -> impl Iterator<Item = &IndexedRule> + '_ {
        self.rules_for[lit]
            .iter()
            .map(|&r| &self.rules[r])
            .filter(|r| r.kind.supports())
    }

    fn attackers(&self, lit: usize) -> &[usize] {
        match self.complement[lit] {
            Some(c) => &self.rules_for[c],
            None => &[],
        }
    }
}

/// `(+Δ, −Δ)` over the literals mentioned in `theory`.
pub fn definite_closure(theory: &DefeasibleTheory) -> (BTreeSet<Literal>, BTreeSet<Literal>) {
    let universe = theory.literals();
    let ix = Indexed::new(theory, &universe);
    let plus = plus_definite_flags(&ix);
    split(&ix, &plus)
}

fn split(ix: &Indexed<'_>, flags: &[bool]) -> (BTreeSet<Literal>, BTreeSet<Literal>) {
    let mut yes = BTreeSet::new();
    let mut no = BTreeSet::new();
    for (i, l) in ix.literals.iter().enumerate() {
        if flags[i] {
            yes.insert((*l).clone());
        } else {
            no.insert((*l).clone());
        }
    }
    (yes, no)
}

fn plus_definite_flags(ix: &Indexed<'_>) -> Vec<bool> {
    let mut plus = vec![false; ix.literals.len()];
    let mut agenda: Vec<usize> = Vec::new();
    for &f in &ix.facts {
        if !plus[f] {
            plus[f] = true;
            agenda.push(f);
        }
    }
    // Unit propagation over strict rules: count unproven body literals.
    let mut missing: Vec<usize> = ix.rules.iter().map(|r| r.body.len()).collect();
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); ix.literals.len()];
    for (ri, r) in ix.rules.iter().enumerate() {
        if r.kind != RuleKind::Strict {
            continue;
        }
        for &b in &r.body {
            uses[b].push(ri);
        }
        if r.body.is_empty() && !plus[r.head] {
            plus[r.head] = true;
            agenda.push(r.head);
        }
    }
    while let Some(l) = agenda.pop() {
        for &ri in &uses[l] {
            missing[ri] -= 1;
            let head = ix.rules[ri].head;
            if missing[ri] == 0 && !plus[head] {
                plus[head] = true;
                agenda.push(head);
            }
        }
    }
    plus
}

/// Outcome of the defeasible fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefeasibleClosure {
    pub plus: BTreeSet<Literal>,
    pub minus: BTreeSet<Literal>,
    pub undetermined: BTreeSet<Literal>,
    /// Passes that added at least one tag.
    pub productive_passes: usize,
}

/// `(+∂, −∂)` given the definite conclusions of the same theory.
pub fn defeasible_closure(theory: &DefeasibleTheory, plus_definite: &BTreeSet<Literal>) -> DefeasibleClosure {
    let universe = theory.literals();
    let ix = Indexed::new(theory, &universe);
    let definite: Vec<bool> = ix.literals.iter().map(|l| plus_definite.contains(*l)).collect();
    let n = ix.literals.len();
    let mut plus = vec![false; n];
    let mut minus = vec![false; n];
    let mut productive_passes = 0;

    loop {
        let mut changed = false;
        for q in 0..n {
            if !plus[q] && can_prove(&ix, q, &definite, &plus, &minus) {
                plus[q] = true;
                changed = true;
            }
            if !minus[q] && can_refute(&ix, q, &definite, &plus, &minus) {
                minus[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        productive_passes += 1;
    }

    let (plus_set, _) = split(&ix, &plus);
    let (minus_set, _) = split(&ix, &minus);
    let undetermined = (0..n)
        .filter(|&i| !plus[i] && !minus[i])
        .map(|i| ix.literals[i].clone())
        .collect();
    DefeasibleClosure {
        plus: plus_set,
        minus: minus_set,
        undetermined,
        productive_passes,
    }
}

fn definite_at(definite: &[bool], lit: Option<usize>) -> bool {
    lit.is_some_and(|l| definite[l])
}

fn can_prove(ix: &Indexed<'_>, q: usize, definite: &[bool], plus: &[bool], minus: &[bool]) -> bool {
    if definite[q] {
        return true;
    }
    if definite_at(definite, ix.complement[q]) {
        return false;
    }
    let applicable = |r: &IndexedRule| r.body.iter().all(|&a| plus[a]);
    if !ix.supporting(q).any(applicable) {
        return false;
    }
    ix.attackers(q).iter().all(|&s| {
        ix.rules[s].body.iter().any(|&a| minus[a])
            || ix.rules_for[q].iter().any(|&t| {
                let rule = &ix.rules[t];
                rule.kind.supports() && applicable(rule) && ix.superior.contains(&(t, s))
            })
    })
}

fn can_refute(ix: &Indexed<'_>, q: usize, definite: &[bool], plus: &[bool], minus: &[bool]) -> bool {
    if definite[q] {
        return false;
    }
    if definite_at(definite, ix.complement[q]) {
        return true;
    }
    let discarded = |r: &IndexedRule| r.body.iter().any(|&a| minus[a]);
    if ix.supporting(q).all(discarded) {
        return true;
    }
    ix.attackers(q).iter().any(|&s| {
        ix.rules[s].body.iter().all(|&a| plus[a])
            && ix.rules_for[q].iter().all(|&t| {
                let rule = &ix.rules[t];
                !rule.kind.supports() || discarded(rule) || !ix.superior.contains(&(t, s))
            })
    })
}

pub fn conclusions(theory: &DefeasibleTheory) -> ConclusionSet {
    let (plus_definite, minus_definite) = definite_closure(theory);
    let closure = defeasible_closure(theory, &plus_definite);
    ConclusionSet {
        plus_definite,
        minus_definite,
        plus_defeasible: closure.plus,
        minus_defeasible: closure.minus,
        undetermined: closure.undetermined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::parse_theory;

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    fn run(text: &str) -> ConclusionSet {
        let c = conclusions(&parse_theory(text).unwrap());
        assert!(c.check_invariants().is_empty(), "{:?}", c.check_invariants());
        c
    }

    #[test]
    fn empty_theory() {
        assert!(run("").is_empty());
    }

    #[test]
    fn unopposed_rule() {
        let c = run("r1: => A");
        assert!(c.plus_defeasible.contains(&lit("A")));
        assert!(c.minus_definite.contains(&lit("A")));
        assert!(c.plus_definite.is_empty());
    }

    #[test]
    fn no_facts_no_strict_rules() {
        let c = run("r1: => A\nr2: B => -C");
        assert!(c.plus_definite.is_empty());
        let all: BTreeSet<Literal> = ["A", "B", "-C"].into_iter().map(lit).collect();
        assert_eq!(c.minus_definite, all);
    }

    #[test]
    fn strict_chain() {
        let c = run(">> A; s1: A -> B");
        assert!(c.plus_definite.contains(&lit("B")));
        assert!(c.plus_defeasible.contains(&lit("B")));
    }

    #[test]
    fn unresolved_conflict_blocks_both() {
        let c = run("r1: => A\nr2: => -A");
        assert!(c.minus_defeasible.contains(&lit("A")));
        assert!(c.minus_defeasible.contains(&lit("-A")));
    }

    #[test]
    fn superiority_resolves_conflict() {
        let c = run("r1: => A\nr2: => -A\nr1 > r2");
        assert!(c.plus_defeasible.contains(&lit("A")));
        assert!(c.minus_defeasible.contains(&lit("-A")));
    }

    #[test]
    fn team_defeat() {
        // Each attacker is beaten by some supporter, though no single supporter beats both.
        let c = run("r1: => A\nr2: => A\ns1: => -A\ns2: => -A\nr1 > s1\nr2 > s2");
        assert!(c.plus_defeasible.contains(&lit("A")));
        assert!(c.minus_defeasible.contains(&lit("-A")));
    }

    #[test]
    fn defeater_blocks_but_never_supports() {
        let c = run("r1: => A\nd1: ~> -A");
        assert!(c.minus_defeasible.contains(&lit("A")));
        assert!(c.minus_defeasible.contains(&lit("-A")));
        let c = run("r1: => A\nd1: ~> -A\nr1 > d1");
        assert!(c.plus_defeasible.contains(&lit("A")));
    }

    #[test]
    fn definite_complement_wins() {
        let c = run(">> -A\nr1: => A");
        assert!(c.minus_defeasible.contains(&lit("A")));
        assert!(c.plus_defeasible.contains(&lit("-A")));
    }

    #[test]
    fn ambiguity_blocking() {
        // B is blocked, so the attack on C from B is discarded and C goes through.
        let c = run("r1: => B\nr2: => -B\nr3: B => -C\nr4: => C");
        assert!(c.minus_defeasible.contains(&lit("B")));
        assert!(c.plus_defeasible.contains(&lit("C")));
    }

    #[test]
    fn loops_are_undetermined() {
        let c = run("r1: A => A");
        assert!(c.undetermined.contains(&lit("A")));
        let c = run("r1: B => A\nr2: A => B");
        assert!(c.undetermined.contains(&lit("A")));
        assert!(c.undetermined.contains(&lit("B")));
        // An unopposed attack settles the loop.
        let c = run("r1: B => A\nr2: A => B\nr3: => -A");
        assert!(c.minus_defeasible.contains(&lit("A")));
        assert!(c.plus_defeasible.contains(&lit("-A")));
    }

    #[test]
    fn json_round_trip() {
        let c = run(">> A; s1: A -> B\nr1: => C\nr2: => -C");
        let text = c.to_json();
        assert_eq!(ConclusionSet::from_json(&text).unwrap(), c);
        let doc: Json = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["-d"], json!(["-C", "C"]));
    }

    #[test]
    fn termination_bound() {
        let t = parse_theory("r1: => A\nr2: A => B\nr3: B => C\nr4: C => -A\nr1 > r4").unwrap();
        let (plus_d, _) = definite_closure(&t);
        let closure = defeasible_closure(&t, &plus_d);
        assert!(closure.productive_passes <= 2 * t.literals().len());
    }
}
