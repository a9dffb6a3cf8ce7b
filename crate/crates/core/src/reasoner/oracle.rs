//! Reference reasoner for small theories.
//!
//! Top-down search that follows the inductive proof conditions literally.
//! Every tag is a positive query, so a goal that reappears on its own search
//! path has no finite proof and fails. Successes are memoized; failures only
//! when the search never hit such a cycle.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::ConclusionSet;
use crate::error::{Error, Result};
use crate::theory::{DefeasibleTheory, Literal, Rule};

pub const ORACLE_MAX_ATOMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Goal {
    PlusDefinite,
    PlusDefeasible,
    MinusDefeasible,
}

struct Search<'a> {
    theory: &'a DefeasibleTheory,
    memo: HashMap<(Goal, Literal), bool>,
    path: HashSet<(Goal, Literal)>,
}

impl<'a> Search<'a> {
    fn rules_with_head(&self, head: &Literal) -> Vec<&'a Rule> {
        self.theory.rules().filter(|r| &r.head == head).collect()
    }

    /// Returns (provable, cycle encountered).
    fn prove(&mut self, goal: Goal, lit: &Literal) -> (bool, bool) {
        let key = (goal, lit.clone());
        if let Some(&v) = self.memo.get(&key) {
            return (v, false);
        }
        if self.path.contains(&key) {
            return (false, true);
        }
        self.path.insert(key.clone());
        let (ok, looped) = match goal {
            Goal::PlusDefinite => self.plus_definite(lit),
            Goal::PlusDefeasible => self.plus_defeasible(lit),
            Goal::MinusDefeasible => self.minus_defeasible(lit),
        };
        self.path.remove(&key);
        if ok || !looped {
            self.memo.insert(key, ok);
        }
        (ok, looped)
    }

    fn plus_definite(&mut self, q: &Literal) -> (bool, bool) {
        if self.theory.facts().contains(q) {
            return (true, false);
        }
        let mut looped = false;
        for r in self.rules_with_head(q) {
            if r.kind != crate::theory::RuleKind::Strict {
                continue;
            }
            let (ok, l) = self.all(Goal::PlusDefinite, &r.body);
            looped |= l;
            if ok {
                return (true, looped);
            }
        }
        (false, looped)
    }

    fn all(&mut self, goal: Goal, lits: &[Literal]) -> (bool, bool) {
        let mut looped = false;
        for b in lits {
            let (ok, l) = self.prove(goal, b);
            looped |= l;
            if !ok {
                return (false, looped);
            }
        }
        (true, looped)
    }

    fn any(&mut self, goal: Goal, lits: &[Literal]) -> (bool, bool) {
        let mut looped = false;
        for b in lits {
            let (ok, l) = self.prove(goal, b);
            looped |= l;
            if ok {
                return (true, looped);
            }
        }
        (false, looped)
    }

    fn plus_defeasible(&mut self, q: &Literal) -> (bool, bool) {
        let (definite, mut looped) = self.prove(Goal::PlusDefinite, q);
        if definite {
            return (true, looped);
        }
        let (blocked, l) = self.prove(Goal::PlusDefinite, &q.complement());
        looped |= l;
        if blocked {
            return (false, looped);
        }
        let supporters: Vec<&Rule> = self.rules_with_head(q).into_iter().filter(|r| r.kind.supports()).collect();
        let mut applicable = false;
        for r in &supporters {
            let (ok, l) = self.all(Goal::PlusDefeasible, &r.body);
            looped |= l;
            if ok {
                applicable = true;
                break;
            }
        }
        if !applicable {
            return (false, looped);
        }
        for s in self.rules_with_head(&q.complement()) {
            let (discarded, l) = self.any(Goal::MinusDefeasible, &s.body);
            looped |= l;
            if discarded {
                continue;
            }
            let mut defeated = false;
            for t in &supporters {
                if !self.theory.is_superior(&t.id, &s.id) {
                    continue;
                }
                let (ok, l) = self.all(Goal::PlusDefeasible, &t.body);
                looped |= l;
                if ok {
                    defeated = true;
                    break;
                }
            }
            if !defeated {
                return (false, looped);
            }
        }
        (true, looped)
    }

    fn minus_defeasible(&mut self, q: &Literal) -> (bool, bool) {
        // −Δq is the complement of +Δq, which the definite search decides exactly.
        let (definite, mut looped) = self.prove(Goal::PlusDefinite, q);
        if definite {
            return (false, looped);
        }
        let (opposed, l) = self.prove(Goal::PlusDefinite, &q.complement());
        looped |= l;
        if opposed {
            return (true, looped);
        }
        let supporters: Vec<&Rule> = self.rules_with_head(q).into_iter().filter(|r| r.kind.supports()).collect();
        let mut all_discarded = true;
        for r in &supporters {
            let (d, l) = self.any(Goal::MinusDefeasible, &r.body);
            looped |= l;
            if !d {
                all_discarded = false;
                break;
            }
        }
        if all_discarded {
            return (true, looped);
        }
        for s in self.rules_with_head(&q.complement()) {
            let (applicable, l) = self.all(Goal::PlusDefeasible, &s.body);
            looped |= l;
            if !applicable {
                continue;
            }
            let mut unanswered = true;
            for t in &supporters {
                if !self.theory.is_superior(&t.id, &s.id) {
                    continue;
                }
                let (d, l) = self.any(Goal::MinusDefeasible, &t.body);
                looped |= l;
                if !d {
                    unanswered = false;
                    break;
                }
            }
            if unanswered {
                return (true, looped);
            }
        }
        (false, looped)
    }
}

/// Conclusions of a theory with at most [`ORACLE_MAX_ATOMS`] atoms.
pub fn oracle_conclusions(theory: &DefeasibleTheory) -> Result<ConclusionSet> {
    let atoms = theory.atoms().len();
    if atoms > ORACLE_MAX_ATOMS {
        return Err(Error::OracleBound(atoms, ORACLE_MAX_ATOMS));
    }
    let mut search = Search {
        theory,
        memo: HashMap::new(),
        path: HashSet::new(),
    };
    let mut out = ConclusionSet::default();
    let universe: BTreeSet<Literal> = theory.literals();
    for lit in universe {
        if search.prove(Goal::PlusDefinite, &lit).0 {
            out.plus_definite.insert(lit.clone());
        } else {
            out.minus_definite.insert(lit.clone());
        }
        let plus = search.prove(Goal::PlusDefeasible, &lit).0;
        let minus = search.prove(Goal::MinusDefeasible, &lit).0;
        if plus {
            out.plus_defeasible.insert(lit.clone());
        }
        if minus {
            out.minus_defeasible.insert(lit.clone());
        }
        if !plus && !minus {
            out.undetermined.insert(lit);
        }
    }
    Ok(out)
}
