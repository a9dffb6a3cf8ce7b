//! Ground defeasible theories: facts, strict/defeasible/defeater rules and a
//! superiority relation over rules with complementary heads.

mod atom;
mod text;

pub use atom::{decode_atom, encode_atom, slot_key, AtomParts};
pub use text::{parse_theory, serialize_theory};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    atom: String,
    positive: bool,
}

impl Literal {
    pub fn new(atom: impl Into<String>, positive: bool) -> Result<Self> {
        let atom = atom.into();
        if !is_identifier(&atom) {
            return Err(Error::Theory(format!("`{atom}` is not a valid atom")));
        }
        Ok(Literal { atom, positive })
    }

    pub fn pos(atom: impl Into<String>) -> Result<Self> {
        Literal::new(atom, true)
    }

    pub fn neg(atom: impl Into<String>) -> Result<Self> {
        Literal::new(atom, false)
    }

    pub fn atom(&self) -> &str {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        f.write_str(&self.atom)
    }
}

impl FromStr for Literal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix('-').or_else(|| s.strip_prefix('¬')) {
            Some(atom) => Literal::neg(atom.trim_start()),
            None => Literal::pos(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Strict,
    Defeasible,
    Defeater,
}

impl RuleKind {
    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }

    /// Strict and defeasible rules can support a conclusion; defeaters only block.
    pub fn supports(self) -> bool {
        self != RuleKind::Defeater
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub kind: RuleKind,
    pub body: Vec<Literal>,
    pub head: Literal,
}

impl Rule {
    pub fn new(id: impl Into<String>, kind: RuleKind, body: Vec<Literal>, head: Literal) -> Result<Self> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(Error::Theory(format!("`{id}` is not a valid rule id")));
        }
        Ok(Rule { id, kind, body, head })
    }

    pub fn defeasible(id: impl Into<String>, body: Vec<Literal>, head: Literal) -> Result<Self> {
        Rule::new(id, RuleKind::Defeasible, body, head)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.id)?;
        for (i, b) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{b}")?;
        }
        write!(f, " {} {}", self.kind.arrow(), self.head)
    }
}

/// A theory whose invariants (unique ids, superiority between existing rules
/// with complementary heads, acyclic superiority) hold by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefeasibleTheory {
    facts: BTreeSet<Literal>,
    rules: BTreeMap<String, Rule>,
    superiority: BTreeSet<(String, String)>,
}

impl DefeasibleTheory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn facts(&self) -> &BTreeSet<Literal> {
        &self.facts
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.get(id)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn superiority(&self) -> &BTreeSet<(String, String)> {
        &self.superiority
    }

    pub fn is_superior(&self, winner: &str, loser: &str) -> bool {
        self.superiority
            .contains(&(winner.to_owned(), loser.to_owned()))
    }

    pub fn add_fact(&mut self, fact: Literal) {
        self.facts.insert(fact);
    }

    pub fn add_rule(&mut self, rule: Rule) -> Result<()> {
        if self.rules.contains_key(&rule.id) {
            return Err(Error::Theory(format!("duplicate rule id `{}`", rule.id)));
        }
        self.rules.insert(rule.id.clone(), rule);
        Ok(())
    }

    /// Adds `winner > loser`.
    pub fn add_superiority(&mut self, winner: &str, loser: &str) -> Result<()> {
        let w = self
            .rules
            .get(winner)
            .ok_or_else(|| Error::Theory(format!("superiority references unknown rule `{winner}`")))?;
        let l = self
            .rules
            .get(loser)
            .ok_or_else(|| Error::Theory(format!("superiority references unknown rule `{loser}`")))?;
        if w.head.complement() != l.head {
            return Err(Error::Theory(format!(
                "superiority {winner} > {loser} relates non-complementary heads {} and {}",
                w.head, l.head
            )));
        }
        if winner == loser || self.reaches(loser, winner) {
            return Err(Error::Theory(format!(
                "superiority {winner} > {loser} closes a cycle"
            )));
        }
        self.superiority.insert((winner.to_owned(), loser.to_owned()));
        Ok(())
    }

    fn reaches(&self, from: &str, to: &str) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(node) = stack.pop() {
            if node == to {
                return true;
            }
            if !seen.insert(node) {
                continue;
            }
            stack.extend(
                self.superiority
                    .iter()
                    .filter(|(w, _)| w == node)
                    .map(|(_, l)| l.as_str()),
            );
        }
        false
    }

    /// Every literal mentioned by a fact, rule head or rule body.
    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = self.facts.clone();
        for r in self.rules.values() {
            out.insert(r.head.clone());
            out.extend(r.body.iter().cloned());
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        self.facts
            .iter()
            .map(Literal::atom)
            .chain(self.rules.values().flat_map(|r| {
                std::iter::once(r.head.atom()).chain(r.body.iter().map(Literal::atom))
            }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        s.parse().unwrap()
    }

    #[test]
    fn complement_is_involutive() {
        let l = lit("CNorth_h1_78");
        assert_eq!(l.complement().complement(), l);
        assert_eq!(l.complement().to_string(), "-CNorth_h1_78");
        assert_eq!(lit("¬A"), lit("-A"));
        assert!(Literal::pos("9lives").is_err());
        assert!(Literal::pos("").is_err());
    }

    #[test]
    fn superiority_requires_complementary_heads() {
        let mut t = DefeasibleTheory::new();
        t.add_rule(Rule::defeasible("r1", vec![], lit("A")).unwrap()).unwrap();
        t.add_rule(Rule::defeasible("r2", vec![], lit("-A")).unwrap()).unwrap();
        t.add_rule(Rule::defeasible("r3", vec![], lit("B")).unwrap()).unwrap();
        assert!(t.add_superiority("r1", "r3").is_err());
        assert!(t.add_superiority("r1", "rX").is_err());
        t.add_superiority("r1", "r2").unwrap();
        assert!(t.add_superiority("r2", "r1").is_err());
        assert!(t.add_rule(Rule::defeasible("r1", vec![], lit("C")).unwrap()).is_err());
    }

    #[test]
    fn longer_cycles_rejected() {
        let mut t = DefeasibleTheory::new();
        for (id, head) in [("a1", "A"), ("b1", "-A"), ("a2", "A"), ("b2", "-A")] {
            t.add_rule(Rule::defeasible(id, vec![], lit(head)).unwrap()).unwrap();
        }
        t.add_superiority("a1", "b1").unwrap();
        t.add_superiority("b1", "a2").unwrap();
        t.add_superiority("a2", "b2").unwrap();
        assert!(t.add_superiority("b2", "a1").is_err());
    }
}
