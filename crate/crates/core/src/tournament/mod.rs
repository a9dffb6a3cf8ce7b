//! Translation of labeled forecast maps into a defeasible theory.
//!
//! Observations become facts. Every model assertion becomes a body-less rule
//! for a source-tagged literal. Slots where sources disagree get a pair of
//! supremacy rules (one biased toward each side), a pair of conflict rules
//! between the two supremacy heads, and two priorities that let the
//! prevailing side through.

mod supremacy;

pub use supremacy::{
    strategy_by_name, supremacy, Bias, BiasedBlend, BiasedPick, SupremacyStrategy, STRATEGY_NAMES,
};

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::model::{horizon_index, Condition, LabeledMap, Location, MethodId, TimeRef, Value};
use crate::theory::{encode_atom, slot_key, DefeasibleTheory, Literal, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    First,
    Second,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Specific,
    Accuracy,
    Recency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prevalence {
    pub winner: Winner,
    pub basis: Basis,
}

/// Condition, location and day horizon shared by competing assertions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotId {
    pub condition: Condition,
    pub location: String,
    pub horizon: i64,
}

impl SlotId {
    /// Untagged atom prefix, e.g. `CNorth_h1`.
    pub fn key(&self) -> Result<String> {
        slot_key(self.condition, None, &self.location, self.horizon)
    }
}

fn location_name(location: &Location) -> Result<String> {
    location.name().map(str::to_owned).ok_or_else(|| {
        Error::InvalidLocation(format!("{location} must be resolved to a named point first"))
    })
}

/// A labeled map with the quantities that order it against its rivals.
struct Ranked<'a> {
    lam: &'a LabeledMap,
    slot: SlotId,
    accuracy: Decimal,
    /// Generation time in seconds relative to `now`.
    generated: i64,
}

impl<'a> Ranked<'a> {
    fn new(lam: &'a LabeledMap, kb: &KnowledgeBase, now: &TimeRef) -> Result<Self> {
        let horizon = horizon_index(&lam.map.valid_at, now)?.days();
        let slot = SlotId {
            condition: lam.map.condition,
            location: location_name(&lam.map.location)?,
            horizon,
        };
        Ok(Ranked {
            lam,
            slot,
            accuracy: kb.accuracy_of(&lam.label.method, horizon)?,
            generated: lam.label.generated_at.offset_from(now)?,
        })
    }

    fn method(&self) -> &MethodId {
        &self.lam.label.method
    }

    fn sort_key(&self) -> impl Ord + '_ {
        (
            &self.slot,
            Reverse(self.accuracy),
            Reverse(self.generated),
            self.method(),
            self.lam.map.value,
            self.lam.label.generated_at.to_string(),
        )
    }
}

fn rank_all<'a>(lams: &'a [LabeledMap], kb: &KnowledgeBase, now: &TimeRef) -> Result<Vec<Ranked<'a>>> {
    let mut ranked = Vec::with_capacity(lams.len());
    for lam in lams {
        let r = Ranked::new(lam, kb, now)?;
        if r.generated > 0 {
            continue;
        }
        if !lam.label.is_observation() && r.accuracy < kb.min_accuracy() {
            continue;
        }
        ranked.push(r);
    }
    ranked.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    ranked.dedup_by(|a, b| a.lam == b.lam);
    Ok(ranked)
}

/// Drops future-labeled maps and maps below the reliability threshold, then
/// orders each slot by accuracy, recency and method id.
pub fn sift(lams: &[LabeledMap], kb: &KnowledgeBase, now: &TimeRef) -> Result<Vec<LabeledMap>> {
    Ok(rank_all(lams, kb, now)?.into_iter().map(|r| r.lam.clone()).collect())
}

fn decide(a: &Ranked<'_>, b: &Ranked<'_>, kb: &KnowledgeBase) -> Prevalence {
    let pick = |first_wins: bool, basis| Prevalence {
        winner: if first_wins { Winner::First } else { Winner::Second },
        basis,
    };
    if let Some(w) = kb.override_winner(a.method(), b.method(), a.slot.condition, &a.slot.location) {
        return pick(&w == a.method(), Basis::Specific);
    }
    if a.accuracy != b.accuracy {
        return pick(a.accuracy > b.accuracy, Basis::Accuracy);
    }
    if a.generated != b.generated {
        return pick(a.generated > b.generated, Basis::Recency);
    }
    Prevalence {
        winner: Winner::Tie,
        basis: Basis::Recency,
    }
}

/// Which of two conflicting maps prevails: expert override, then accuracy at
/// the shared horizon, then the more recent generation time.
pub fn prevails(a: &LabeledMap, b: &LabeledMap, kb: &KnowledgeBase, now: &TimeRef) -> Result<Prevalence> {
    if !a.map.conflicts_with(&b.map) {
        return Err(Error::Precondition(
            "prevails needs two maps that conflict on one slot".into(),
        ));
    }
    Ok(decide(&Ranked::new(a, kb, now)?, &Ranked::new(b, kb, now)?, kb))
}

/// One pairwise encounter on a contested slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub first: MethodId,
    pub second: MethodId,
    pub first_rule: String,
    pub second_rule: String,
    pub first_head: Literal,
    pub second_head: Literal,
    /// Ties are already broken toward `First`.
    pub winner: Bias,
    pub basis: Basis,
    /// Absolute accuracy difference between the two sides.
    pub margin: Decimal,
}

impl Stage {
    pub fn winner_rule(&self) -> &str {
        match self.winner {
            Bias::First => &self.first_rule,
            Bias::Second => &self.second_rule,
        }
    }

    pub fn winner_head(&self) -> &Literal {
        match self.winner {
            Bias::First => &self.first_head,
            Bias::Second => &self.second_head,
        }
    }

    pub fn loser_head(&self) -> &Literal {
        match self.winner {
            Bias::First => &self.second_head,
            Bias::Second => &self.first_head,
        }
    }

    pub fn winner_method(&self) -> &MethodId {
        match self.winner {
            Bias::First => &self.first,
            Bias::Second => &self.second,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotOutcome {
    /// An observation covers the slot; models only contribute tagged literals.
    Observed { value: Value },
    /// All surviving sources agree.
    PassThrough { method: MethodId, value: Value },
    /// Stages in fold order; the last one writes the untagged literals.
    Contested { stages: Vec<Stage> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotReport {
    pub slot: SlotId,
    pub outcome: SlotOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tournament {
    pub theory: DefeasibleTheory,
    pub slots: Vec<SlotReport>,
}

impl Tournament {
    pub fn contested(&self) -> impl Iterator<Item = (&SlotReport, &Stage)> {
        self.slots.iter().filter_map(|s| match &s.outcome {
            SlotOutcome::Contested { stages } => stages.last().map(|st| (s, st)),
            _ => None,
        })
    }
}

fn is_reserved_tag(tag: &str) -> bool {
    tag.strip_prefix("fold")
        .is_some_and(|rest| rest.bytes().all(|b| b.is_ascii_digit()))
}

struct Champion<'a> {
    ranked: &'a Ranked<'a>,
    value: Value,
    literal: Literal,
}

struct SlotBuilder<'t, 'k> {
    theory: &'t mut DefeasibleTheory,
    kb: &'k KnowledgeBase,
    strategy: &'k dyn SupremacyStrategy,
}

impl SlotBuilder<'_, '_> {
    fn atom(slot: &SlotId, tag: Option<&str>, value: &Value) -> Result<Literal> {
        Literal::pos(encode_atom(slot.condition, tag, &slot.location, slot.horizon, value)?)
    }

    fn build(&mut self, slot: &SlotId, members: &[&Ranked<'_>]) -> Result<SlotOutcome> {
        let key = slot.key()?;
        let observed: BTreeSet<Value> = members
            .iter()
            .filter(|r| r.lam.label.is_observation())
            .map(|r| r.lam.map.value)
            .collect();
        if observed.len() > 1 {
            return Err(Error::Precondition(format!("observations disagree on slot {key}")));
        }

        // One assertion per method: the best ranked, i.e. the most recent.
        let mut seen = BTreeSet::new();
        let models: Vec<&Ranked<'_>> = members
            .iter()
            .copied()
            .filter(|r| !r.lam.label.is_observation() && seen.insert(r.method().clone()))
            .collect();
        let mut tagged = Vec::with_capacity(models.len());
        for r in &models {
            let tag = r.method().tag();
            if is_reserved_tag(&tag) {
                return Err(Error::InvalidMethod(format!(
                    "{} (tags of the form fold<k> are reserved)",
                    r.method()
                )));
            }
            let lit = Self::atom(slot, Some(&tag), &r.lam.map.value)?;
            self.theory
                .add_rule(Rule::defeasible(format!("src_{}", lit.atom()), vec![], lit.clone())?)?;
            tagged.push(lit);
        }

        if let Some(value) = observed.into_iter().next() {
            self.theory.add_fact(Self::atom(slot, None, &value)?);
            return Ok(SlotOutcome::Observed { value });
        }

        // First source per distinct value, in sift order.
        let mut values = BTreeSet::new();
        let contenders: Vec<(&Ranked<'_>, &Literal)> = models
            .iter()
            .copied()
            .zip(&tagged)
            .filter(|(r, _)| values.insert(r.lam.map.value))
            .collect();
        let Some(&(lead, lead_lit)) = contenders.first() else {
            return Err(Error::Precondition(format!("slot {key} has no sources")));
        };
        if contenders.len() == 1 {
            let value = lead.lam.map.value;
            let head = Self::atom(slot, None, &value)?;
            self.theory
                .add_rule(Rule::defeasible(format!("pt_{key}"), vec![lead_lit.clone()], head)?)?;
            return Ok(SlotOutcome::PassThrough {
                method: lead.method().clone(),
                value,
            });
        }

        let mut champion = Champion {
            ranked: lead,
            value: lead.lam.map.value,
            literal: lead_lit.clone(),
        };
        let last = contenders.len() - 1;
        let mut stages = Vec::with_capacity(last);
        for (k, &(next, next_lit)) in contenders.iter().enumerate().skip(1) {
            let stage_tag = (k < last).then(|| format!("fold{k}"));
            let (stage, won) = self.stage(slot, &key, k, stage_tag.as_deref(), &champion, next, next_lit)?;
            champion = Champion {
                ranked: match stage.winner {
                    Bias::First => champion.ranked,
                    Bias::Second => next,
                },
                value: won,
                literal: stage.winner_head().clone(),
            };
            stages.push(stage);
        }
        Ok(SlotOutcome::Contested { stages })
    }

    #[allow(clippy::too_many_arguments)]
    fn stage(
        &mut self,
        slot: &SlotId,
        key: &str,
        k: usize,
        stage_tag: Option<&str>,
        champion: &Champion<'_>,
        next: &Ranked<'_>,
        next_lit: &Literal,
    ) -> Result<(Stage, Value)> {
        let (a1, a2) = (champion.ranked.accuracy, next.accuracy);
        let (v1, v2) = (&champion.value, &next.lam.map.value);
        let combine = |bias| supremacy(self.strategy, slot.condition, v1, v2, a1, a2, bias);
        let outputs = [combine(Bias::First)?, combine(Bias::Second)?];
        let first_head = Self::atom(slot, stage_tag, &outputs[0])?;
        let second_head = Self::atom(slot, stage_tag, &outputs[1])?;

        let (t1, t2) = (champion.ranked.method().tag(), next.method().tag());
        let body = vec![champion.literal.clone(), next_lit.clone()];
        let first_rule = format!("sr{k}_{key}_{t1}");
        let second_rule = format!("sr{k}_{key}_{t2}");
        self.theory
            .add_rule(Rule::defeasible(&first_rule, body.clone(), first_head.clone())?)?;
        self.theory
            .add_rule(Rule::defeasible(&second_rule, body, second_head.clone())?)?;

        let prevalence = decide(champion.ranked, next, self.kb);
        let winner = match prevalence.winner {
            Winner::First | Winner::Tie => Bias::First,
            Winner::Second => Bias::Second,
        };

        if first_head != second_head {
            let vc1 = format!("vc{k}_{key}_{t1}");
            let vc2 = format!("vc{k}_{key}_{t2}");
            self.theory.add_rule(Rule::defeasible(
                &vc1,
                vec![first_head.clone()],
                second_head.complement(),
            )?)?;
            self.theory.add_rule(Rule::defeasible(
                &vc2,
                vec![second_head.clone()],
                first_head.complement(),
            )?)?;
            let (sr_w, vc_w, sr_l, vc_l) = match winner {
                Bias::First => (&first_rule, &vc1, &second_rule, &vc2),
                Bias::Second => (&second_rule, &vc2, &first_rule, &vc1),
            };
            self.theory.add_superiority(sr_w, vc_l)?;
            self.theory.add_superiority(vc_w, sr_l)?;
        }

        let won = match winner {
            Bias::First => outputs[0],
            Bias::Second => outputs[1],
        };
        let stage = Stage {
            first: champion.ranked.method().clone(),
            second: next.method().clone(),
            first_rule,
            second_rule,
            first_head,
            second_head,
            winner,
            basis: prevalence.basis,
            margin: (a1 - a2).abs(),
        };
        Ok((stage, won))
    }
}

/// Builds the theory for a set of labeled maps. Sifting is applied first.
pub fn build_theory(
    lams: &[LabeledMap],
    kb: &KnowledgeBase,
    now: &TimeRef,
    strategy: &dyn SupremacyStrategy,
) -> Result<Tournament> {
    let ranked = rank_all(lams, kb, now)?;
    let mut groups: BTreeMap<&SlotId, Vec<&Ranked<'_>>> = BTreeMap::new();
    for r in &ranked {
        groups.entry(&r.slot).or_default().push(r);
    }
    let mut theory = DefeasibleTheory::new();
    let mut slots = Vec::with_capacity(groups.len());
    let mut builder = SlotBuilder {
        theory: &mut theory,
        kb,
        strategy,
    };
    for (slot, members) in groups {
        let outcome = builder.build(slot, &members)?;
        slots.push(SlotReport {
            slot: slot.clone(),
            outcome,
        });
    }
    Ok(Tournament { theory, slots })
}
