//! Method accuracies, expert priority overrides and the reliability threshold.

use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;
use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::model::{decimal_from_json, Condition, MethodId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PriorityOverride {
    pub winner: MethodId,
    pub loser: MethodId,
    pub condition: Option<Condition>,
    pub location: Option<String>,
}

impl PriorityOverride {
    pub fn global(winner: MethodId, loser: MethodId) -> Self {
        PriorityOverride {
            winner,
            loser,
            condition: None,
            location: None,
        }
    }

    fn matches_scope(&self, condition: Condition, location: &str) -> bool {
        self.condition.is_none_or(|c| c == condition)
            && self.location.as_deref().is_none_or(|l| l == location)
    }

    // (condition+location) > condition > location > global
    fn specificity(&self) -> u8 {
        (u8::from(self.condition.is_some()) << 1) | u8::from(self.location.is_some())
    }

    fn scope(&self) -> (Option<Condition>, Option<&str>) {
        (self.condition, self.location.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBase {
    accuracies: BTreeMap<MethodId, BTreeMap<u32, Decimal>>,
    overrides: Vec<PriorityOverride>,
    min_accuracy: Decimal,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn min_accuracy(&self) -> Decimal {
        self.min_accuracy
    }

    pub fn set_min_accuracy(&mut self, threshold: Decimal) -> Result<()> {
        check_unit_interval(threshold, "min_accuracy")?;
        self.min_accuracy = threshold.normalize();
        Ok(())
    }

    pub fn set_accuracy(&mut self, method: MethodId, horizon: u32, accuracy: Decimal) -> Result<()> {
        let path = format!("accuracies.{method}.{horizon}");
        if method.is_observation() {
            return Err(Error::KnowledgeBase {
                path,
                message: "observation accuracy is fixed at 1".into(),
            });
        }
        check_unit_interval(accuracy, &path)?;
        self.accuracies
            .entry(method)
            .or_default()
            .insert(horizon, accuracy.normalize());
        Ok(())
    }

    pub fn add_override(&mut self, rule: PriorityOverride) -> Result<()> {
        let path = format!("overrides[{}]", self.overrides.len());
        if rule.winner == rule.loser {
            return Err(Error::KnowledgeBase {
                path,
                message: format!("override has identical winner and loser `{}`", rule.winner),
            });
        }
        self.overrides.push(rule);
        if let Some(cycle) = self.override_cycle() {
            self.overrides.pop();
            return Err(Error::KnowledgeBase {
                path,
                message: format!("overrides form a cycle: {cycle}"),
            });
        }
        Ok(())
    }

    pub fn overrides(&self) -> &[PriorityOverride] {
        &self.overrides
    }

    pub fn methods(&self) -> impl Iterator<Item = &MethodId> {
        self.accuracies.keys()
    }

    pub fn knows(&self, method: &MethodId) -> bool {
        method.is_observation() || self.accuracies.contains_key(method)
    }

    /// Accuracy of `method` at day `horizon`. Missing horizons fall back to the
    /// nearest smaller recorded horizon, then to the smallest recorded one.
    pub fn accuracy_of(&self, method: &MethodId, horizon: i64) -> Result<Decimal> {
        if method.is_observation() {
            return Ok(Decimal::ONE);
        }
        let table = self
            .accuracies
            .get(method)
            .ok_or_else(|| Error::UnknownMethod(method.to_string()))?;
        let h = u32::try_from(horizon.max(0)).unwrap_or(u32::MAX);
        table
            .range(..=h)
            .next_back()
            .or_else(|| table.iter().next())
            .map(|(_, a)| *a)
            .ok_or_else(|| Error::UnknownMethod(method.to_string()))
    }

    /// Expert override between `a` and `b` in the given scope, if any. The most
    /// specific matching override decides.
    pub fn override_winner(
        &self,
        a: &MethodId,
        b: &MethodId,
        condition: Condition,
        location: &str,
    ) -> Option<MethodId> {
        self.overrides
            .iter()
            .filter(|o| (o.winner == *a && o.loser == *b) || (o.winner == *b && o.loser == *a))
            .filter(|o| o.matches_scope(condition, location))
            .max_by_key(|o| o.specificity())
            .map(|o| o.winner.clone())
    }

    fn override_cycle(&self) -> Option<String> {
        let scopes: BTreeSet<_> = self.overrides.iter().map(PriorityOverride::scope).collect();
        for scope in scopes {
            let mut edges: BTreeMap<&MethodId, Vec<&MethodId>> = BTreeMap::new();
            for o in self.overrides.iter().filter(|o| o.scope() == scope) {
                edges.entry(&o.winner).or_default().push(&o.loser);
            }
            if let Some(node) = find_cycle(&edges) {
                let (c, l) = scope;
                return Some(format!(
                    "through `{node}` in scope ({}, {})",
                    c.map_or("*".to_owned(), |c| c.to_string()),
                    l.unwrap_or("*")
                ));
            }
        }
        None
    }
}

fn find_cycle<'a>(edges: &BTreeMap<&'a MethodId, Vec<&'a MethodId>>) -> Option<&'a MethodId> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit<'a>(
        node: &'a MethodId,
        edges: &BTreeMap<&'a MethodId, Vec<&'a MethodId>>,
        marks: &mut BTreeMap<&'a MethodId, Mark>,
    ) -> Option<&'a MethodId> {
        match marks.get(node) {
            Some(Mark::Active) => return Some(node),
            Some(Mark::Done) => return None,
            None => {}
        }
        marks.insert(node, Mark::Active);
        for next in edges.get(node).into_iter().flatten() {
            if let Some(n) = visit(next, edges, marks) {
                return Some(n);
            }
        }
        marks.insert(node, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    edges.keys().find_map(|n| visit(n, edges, &mut marks))
}

fn check_unit_interval(value: Decimal, path: &str) -> Result<()> {
    if value < Decimal::ZERO || value > Decimal::ONE {
        return Err(Error::KnowledgeBase {
            path: path.to_owned(),
            message: format!("{value} is outside [0, 1]"),
        });
    }
    Ok(())
}

fn schema_error(path: &str, message: impl Into<String>) -> Error {
    Error::KnowledgeBase {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn json_decimal(value: &Json, path: &str) -> Result<Decimal> {
    value
        .as_number()
        .and_then(decimal_from_json)
        .ok_or_else(|| schema_error(path, "expected a number"))
}

fn json_str<'a>(value: &'a Json, path: &str) -> Result<&'a str> {
    value.as_str().ok_or_else(|| schema_error(path, "expected a string"))
}

/// Parses a knowledge-base JSON document.
pub fn load_kb(document: &[u8]) -> Result<KnowledgeBase> {
    let root: Json = serde_json::from_slice(document)?;
    let root = root
        .as_object()
        .ok_or_else(|| schema_error("$", "expected an object"))?;
    for key in root.keys() {
        if !matches!(key.as_str(), "accuracies" | "overrides" | "min_accuracy") {
            return Err(schema_error(&format!("$.{key}"), "unknown field"));
        }
    }

    let mut kb = KnowledgeBase::new();
    if let Some(acc) = root.get("accuracies") {
        let acc = acc
            .as_object()
            .ok_or_else(|| schema_error("$.accuracies", "expected an object"))?;
        for (method, table) in acc {
            let path = format!("$.accuracies.{method}");
            let id = MethodId::new(method.as_str()).map_err(|_| schema_error(&path, "invalid method id"))?;
            let table = table
                .as_object()
                .ok_or_else(|| schema_error(&path, "expected an object of horizon -> accuracy"))?;
            for (horizon, value) in table {
                let hpath = format!("{path}.{horizon}");
                let h: u32 = horizon
                    .trim_start_matches(['h', 't'])
                    .parse()
                    .map_err(|_| schema_error(&hpath, "horizon key must be a non-negative integer"))?;
                let a = json_decimal(value, &hpath)?;
                kb.set_accuracy(id.clone(), h, a)
                    .map_err(|e| relabel(e, &hpath))?;
            }
        }
    }

    if let Some(ovr) = root.get("overrides") {
        let ovr = ovr
            .as_array()
            .ok_or_else(|| schema_error("$.overrides", "expected an array"))?;
        for (i, item) in ovr.iter().enumerate() {
            let path = format!("$.overrides[{i}]");
            let obj = item
                .as_object()
                .ok_or_else(|| schema_error(&path, "expected an object"))?;
            let field = |name: &str| -> Result<Option<&str>> {
                obj.get(name)
                    .filter(|v| !v.is_null())
                    .map(|v| json_str(v, &format!("{path}.{name}")))
                    .transpose()
            };
            let method = |name: &str| -> Result<MethodId> {
                let p = format!("{path}.{name}");
                let s = field(name)?.ok_or_else(|| schema_error(&p, "missing field"))?;
                MethodId::new(s).map_err(|_| schema_error(&p, "invalid method id"))
            };
            let rule = PriorityOverride {
                winner: method("winner")?,
                loser: method("loser")?,
                condition: field("condition")?
                    .map(|c| c.parse())
                    .transpose()
                    .map_err(|e: Error| schema_error(&format!("{path}.condition"), e.to_string()))?,
                location: field("location")?.map(str::to_owned),
            };
            kb.add_override(rule).map_err(|e| relabel(e, &path))?;
        }
    }

    if let Some(threshold) = root.get("min_accuracy") {
        let t = json_decimal(threshold, "$.min_accuracy")?;
        kb.set_min_accuracy(t).map_err(|e| relabel(e, "$.min_accuracy"))?;
    }
    Ok(kb)
}

fn relabel(err: Error, path: &str) -> Error {
    match err {
        Error::KnowledgeBase { message, .. } => schema_error(path, message),
        other => other,
    }
}

/// Serializes with deterministic key ordering.
pub fn save_kb(kb: &KnowledgeBase) -> Vec<u8> {
    let mut accuracies = Map::new();
    for (method, table) in &kb.accuracies {
        let mut row = Map::new();
        for (h, a) in table {
            row.insert(h.to_string(), decimal_json(*a));
        }
        accuracies.insert(method.to_string(), Json::Object(row));
    }
    let overrides: Vec<Json> = kb
        .overrides
        .iter()
        .map(|o| {
            let mut obj = Map::new();
            obj.insert("winner".into(), json!(o.winner.as_str()));
            obj.insert("loser".into(), json!(o.loser.as_str()));
            if let Some(c) = o.condition {
                obj.insert("condition".into(), json!(c.name()));
            }
            if let Some(l) = &o.location {
                obj.insert("location".into(), json!(l));
            }
            Json::Object(obj)
        })
        .collect();
    let doc = json!({
        "accuracies": accuracies,
        "overrides": overrides,
        "min_accuracy": decimal_json(kb.min_accuracy),
    });
    let mut out = serde_json::to_vec_pretty(&doc).expect("json values always serialize");
    out.push(b'\n');
    out
}

pub(crate) fn decimal_json(d: Decimal) -> Json {
    let n: serde_json::Number = d
        .normalize()
        .to_string()
        .parse()
        .expect("decimal renders as a json number");
    Json::Number(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> MethodId {
        MethodId::new(s).unwrap()
    }

    const VENETO: &str = r#"{"accuracies": {"ECMWF": {"1": 0.85, "2": 0.80}, "GFS": {"1": 0.45, "2": 0.40}}}"#;

    #[test]
    fn veneto_accuracies() {
        let kb = load_kb(VENETO.as_bytes()).unwrap();
        assert_eq!(kb.accuracy_of(&m("ECMWF"), 1).unwrap(), Decimal::new(85, 2));
        assert_eq!(kb.accuracy_of(&m("GFS"), 2).unwrap(), Decimal::new(40, 2));
        assert_eq!(kb.accuracy_of(&m("O"), 7).unwrap(), Decimal::ONE);
        assert_eq!(kb.min_accuracy(), Decimal::ZERO);
    }

    #[test]
    fn accuracy_fallbacks() {
        let kb = load_kb(VENETO.as_bytes()).unwrap();
        // nearest smaller horizon
        assert_eq!(kb.accuracy_of(&m("GFS"), 5).unwrap(), Decimal::new(40, 2));
        // nothing at or below: smallest recorded
        assert_eq!(kb.accuracy_of(&m("ECMWF"), 0).unwrap(), Decimal::new(85, 2));
        assert_eq!(kb.accuracy_of(&m("ECMWF"), -3).unwrap(), Decimal::new(85, 2));
        assert!(matches!(kb.accuracy_of(&m("ICON"), 1), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn round_trip_is_identity() {
        let kb = load_kb(VENETO.as_bytes()).unwrap();
        let saved = save_kb(&kb);
        assert_eq!(load_kb(&saved).unwrap(), kb);
        assert_eq!(save_kb(&load_kb(&saved).unwrap()), saved);
    }

    #[test]
    fn minimal_document() {
        let kb = load_kb(br#"{"accuracies": {"GFS": {"1": 0.5}}}"#).unwrap();
        assert_eq!(kb.methods().count(), 1);
    }

    #[test]
    fn rejects_out_of_range_accuracy() {
        let err = load_kb(br#"{"accuracies": {"GFS": {"1": 1.3}}}"#).unwrap_err();
        match err {
            Error::KnowledgeBase { path, .. } => assert_eq!(path, "$.accuracies.GFS.1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_errors_name_the_path() {
        let err = load_kb(br#"{"accuracies": {"GFS": {"x": 0.3}}}"#).unwrap_err();
        assert!(err.to_string().contains("$.accuracies.GFS.x"), "{err}");
        let err = load_kb(br#"{"overrides": [{"winner": "A"}]}"#).unwrap_err();
        assert!(err.to_string().contains("$.overrides[0].loser"), "{err}");
        let err = load_kb(br#"{"accuracy": {}}"#).unwrap_err();
        assert!(err.to_string().contains("$.accuracy"), "{err}");
        assert!(load_kb(br#"{"accuracies": {"O": {"1": 0.3}}}"#).is_err());
    }

    #[test]
    fn rejects_override_cycles() {
        let doc = br#"{"overrides": [
            {"winner": "A", "loser": "B"},
            {"winner": "B", "loser": "C"},
            {"winner": "C", "loser": "A"}]}"#;
        let err = load_kb(doc).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
        // opposite orientation in a different scope is fine
        let ok = br#"{"overrides": [
            {"winner": "ECMWF", "loser": "GFS"},
            {"winner": "GFS", "loser": "ECMWF", "condition": "wind", "location": "Sea"}]}"#;
        assert!(load_kb(ok).is_ok());
        assert!(load_kb(br#"{"overrides": [{"winner": "A", "loser": "A"}]}"#).is_err());
    }

    #[test]
    fn override_lookup() {
        let empty = KnowledgeBase::new();
        assert_eq!(empty.override_winner(&m("GFS"), &m("ECMWF"), Condition::Wind, "Sea"), None);

        let mut kb = KnowledgeBase::new();
        kb.add_override(PriorityOverride::global(m("ECMWF"), m("GFS"))).unwrap();
        assert_eq!(
            kb.override_winner(&m("GFS"), &m("ECMWF"), Condition::Cloudiness, "North"),
            Some(m("ECMWF"))
        );
        kb.add_override(PriorityOverride {
            winner: m("GFS"),
            loser: m("ECMWF"),
            condition: Some(Condition::Wind),
            location: Some("Sea".into()),
        })
        .unwrap();
        assert_eq!(kb.override_winner(&m("GFS"), &m("ECMWF"), Condition::Wind, "Sea"), Some(m("GFS")));
        assert_eq!(kb.override_winner(&m("ECMWF"), &m("GFS"), Condition::Wind, "Sea"), Some(m("GFS")));
        assert_eq!(kb.override_winner(&m("GFS"), &m("ECMWF"), Condition::Wind, "North"), Some(m("ECMWF")));
    }
}
