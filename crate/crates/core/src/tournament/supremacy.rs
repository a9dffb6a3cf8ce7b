//! Supremacy strategies: combine two conflicting forecasts into a value
//! biased toward one of them.

use rust_decimal::{Decimal, RoundingStrategy};

use crate::error::{Error, Result};
use crate::model::{Condition, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bias {
    First,
    Second,
}

/// A pure function of the two values, their accuracies and the bias.
pub trait SupremacyStrategy: Send + Sync {
    fn name(&self) -> &str;

    fn combine(
        &self,
        condition: Condition,
        first: &Value,
        second: &Value,
        a_first: Decimal,
        a_second: Decimal,
        bias: Bias,
    ) -> Result<Value>;
}

/// Weighted blend with weight `max(a_bias, 1 - a_other)` clamped to `[0.5, 1]`,
/// rounded to a whole number and kept inside the input interval. Wind takes
/// its direction from the biased value.
#[derive(Debug, Clone, Copy, Default)]
pub struct BiasedBlend;

impl BiasedBlend {
    pub fn weight(a_bias: Decimal, a_other: Decimal) -> Decimal {
        let half = Decimal::new(5, 1);
        a_bias.max(Decimal::ONE - a_other).clamp(half, Decimal::ONE)
    }

    pub fn blend(v_bias: Decimal, v_other: Decimal, a_bias: Decimal, a_other: Decimal) -> Decimal {
        let w = Self::weight(a_bias, a_other);
        let raw = w * v_bias + (Decimal::ONE - w) * v_other;
        let rounded = raw.round_dp_with_strategy(0, RoundingStrategy::MidpointAwayFromZero);
        rounded.clamp(v_bias.min(v_other), v_bias.max(v_other))
    }
}

impl SupremacyStrategy for BiasedBlend {
    fn name(&self) -> &str {
        "biased-blend"
    }

    fn combine(
        &self,
        condition: Condition,
        first: &Value,
        second: &Value,
        a_first: Decimal,
        a_second: Decimal,
        bias: Bias,
    ) -> Result<Value> {
        let (vb, vo, ab, ao) = match bias {
            Bias::First => (first, second, a_first, a_second),
            Bias::Second => (second, first, a_second, a_first),
        };
        let magnitude = Self::blend(vb.magnitude(), vo.magnitude(), ab, ao);
        Value::new(condition, magnitude, vb.direction())
    }
}

/// Returns the biased value unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct BiasedPick;

impl SupremacyStrategy for BiasedPick {
    fn name(&self) -> &str {
        "biased-pick"
    }

    fn combine(
        &self,
        _condition: Condition,
        first: &Value,
        second: &Value,
        _a_first: Decimal,
        _a_second: Decimal,
        bias: Bias,
    ) -> Result<Value> {
        Ok(match bias {
            Bias::First => *first,
            Bias::Second => *second,
        })
    }
}

pub const STRATEGY_NAMES: [&str; 2] = ["biased-blend", "biased-pick"];

pub fn strategy_by_name(name: &str) -> Result<Box<dyn SupremacyStrategy>> {
    match name {
        "biased-blend" => Ok(Box::new(BiasedBlend)),
        "biased-pick" => Ok(Box::new(BiasedPick)),
        other => Err(Error::Strategy {
            strategy: other.to_owned(),
            message: format!("unknown strategy; expected one of {}", STRATEGY_NAMES.join(", ")),
        }),
    }
}

/// Runs `strategy` and enforces its contract: same value kind as the inputs,
/// magnitude between the two inputs, and idempotence on equal inputs.
pub fn supremacy(
    strategy: &dyn SupremacyStrategy,
    condition: Condition,
    first: &Value,
    second: &Value,
    a_first: Decimal,
    a_second: Decimal,
    bias: Bias,
) -> Result<Value> {
    let broken = |message: String| Error::Strategy {
        strategy: strategy.name().to_owned(),
        message,
    };
    if !first.same_kind(second) {
        return Err(Error::InvalidValue(format!(
            "cannot combine {first} with {second}: mixed value kinds"
        )));
    }
    let out = strategy.combine(condition, first, second, a_first, a_second, bias)?;
    if !out.same_kind(first) {
        return Err(broken(format!("returned {out} for inputs of kind {first}")));
    }
    let (lo, hi) = (
        first.magnitude().min(second.magnitude()),
        first.magnitude().max(second.magnitude()),
    );
    if out.magnitude() < lo || out.magnitude() > hi {
        return Err(broken(format!("{out} is not between {first} and {second}")));
    }
    if first == second && out != *first {
        return Err(broken(format!("combining {first} with itself gave {out}")));
    }
    Ok(out)
}
