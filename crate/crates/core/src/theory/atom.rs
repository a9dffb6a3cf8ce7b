//! Canonical atom names for weather literals:
//! `<C><LOC>[_<src>]_h<k>_<DIR?><MAG>`, with Sea written as `Sea_…`.

use std::str::FromStr;

use rust_decimal::Decimal;

use crate::error::{Error, Result};
use crate::model::{is_valid_point_name, Compass, Condition, Value};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomParts {
    pub condition: Condition,
    pub source: Option<String>,
    pub location: String,
    pub horizon: i64,
    pub value: Value,
}

fn is_valid_tag(tag: &str) -> bool {
    !tag.is_empty() && tag.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
}

fn horizon_segment(horizon: i64) -> String {
    if horizon < 0 {
        format!("hn{}", -horizon)
    } else {
        format!("h{horizon}")
    }
}

/// The atom prefix that identifies a slot, e.g. `CNorth_h1` or `Sea_e_h2`.
pub fn slot_key(condition: Condition, source: Option<&str>, location: &str, horizon: i64) -> Result<String> {
    let mut out = String::new();
    if condition == Condition::Sea {
        if location != "Sea" {
            return Err(Error::InvalidLocation(format!(
                "sea atoms are implicitly located at `Sea`, got `{location}`"
            )));
        }
        out.push_str("Sea");
    } else {
        if !is_valid_point_name(location) {
            return Err(Error::InvalidLocation(format!("`{location}` cannot appear in an atom")));
        }
        out.push_str(condition.code());
        out.push_str(location);
    }
    if let Some(src) = source {
        if !is_valid_tag(src) {
            return Err(Error::InvalidMethod(src.to_owned()));
        }
        out.push('_');
        out.push_str(src);
    }
    out.push('_');
    out.push_str(&horizon_segment(horizon));
    Ok(out)
}

fn magnitude_segment(m: Decimal) -> String {
    m.normalize().to_string().replace('.', "p")
}

pub fn encode_atom(
    condition: Condition,
    source: Option<&str>,
    location: &str,
    horizon: i64,
    value: &Value,
) -> Result<String> {
    // Re-validate so the value is guaranteed to decode under `condition`.
    let value = Value::new(condition, value.magnitude(), value.direction())?;
    let mut out = slot_key(condition, source, location, horizon)?;
    out.push('_');
    if let Some(d) = value.direction() {
        out.push_str(d.as_str());
    }
    out.push_str(&magnitude_segment(value.magnitude()));
    Ok(out)
}

fn opaque(atom: &str) -> Error {
    Error::OpaqueAtom(atom.to_owned())
}

fn split_prefix(prefix: &str) -> Option<(Condition, String)> {
    if prefix == "Sea" {
        return Some((Condition::Sea, "Sea".to_owned()));
    }
    let (condition, rest) = if let Some(rest) = prefix.strip_prefix("Sn") {
        (Condition::Snow, rest)
    } else {
        let mut chars = prefix.chars();
        let code = chars.next()?;
        let condition = Condition::ALL
            .into_iter()
            .find(|c| c.code().len() == 1 && c.code().starts_with(code) && *c != Condition::Sea)?;
        (condition, chars.as_str())
    };
    is_valid_point_name(rest).then(|| (condition, rest.to_owned()))
}

fn parse_horizon(seg: &str) -> Option<i64> {
    let digits_ok = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some(n) = seg.strip_prefix("hn") {
        return digits_ok(n).then(|| n.parse::<i64>().ok().map(|v| -v)).flatten();
    }
    let n = seg.strip_prefix('h')?;
    digits_ok(n).then(|| n.parse().ok()).flatten()
}

fn parse_value(condition: Condition, seg: &str) -> Option<Value> {
    let split = seg.find(|c: char| c.is_ascii_digit()).unwrap_or(seg.len());
    let (dir, mag) = seg.split_at(split);
    if mag.is_empty() || mag.starts_with('p') {
        return None;
    }
    let magnitude = Decimal::from_str(&mag.replace('p', ".")).ok()?;
    let direction = if dir.is_empty() {
        None
    } else {
        Some(Compass::from_str(dir).ok()?)
    };
    Value::new(condition, magnitude, direction).ok()
}

/// Inverse of [`encode_atom`]. Anything not produced by the encoder is opaque.
pub fn decode_atom(atom: &str) -> Result<AtomParts> {
    let segments: Vec<&str> = atom.split('_').collect();
    let (prefix, source, horizon, value) = match segments.as_slice() {
        [p, h, v] => (*p, None, *h, *v),
        [p, s, h, v] => (*p, Some(*s), *h, *v),
        _ => return Err(opaque(atom)),
    };
    let (condition, location) = split_prefix(prefix).ok_or_else(|| opaque(atom))?;
    if source.is_some_and(|s| !is_valid_tag(s)) {
        return Err(opaque(atom));
    }
    let horizon = parse_horizon(horizon).ok_or_else(|| opaque(atom))?;
    let value = parse_value(condition, value).ok_or_else(|| opaque(atom))?;
    let parts = AtomParts {
        condition,
        source: source.map(str::to_owned),
        location,
        horizon,
        value,
    };
    // Reject non-canonical spellings (leading zeros, trailing "p0", …).
    let canonical = encode_atom(
        parts.condition,
        parts.source.as_deref(),
        &parts.location,
        parts.horizon,
        &parts.value,
    )?;
    if canonical != atom {
        return Err(opaque(atom));
    }
    Ok(parts)
}
