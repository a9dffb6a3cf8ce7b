//! Source forecast maps and observation maps: JSON documents lowered to
//! labeled assertional maps.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::model::{
    decimal_from_json, AssertionalMap, Compass, Condition, Coordinates, Label, LabeledMap, Location,
    LocationRegistry, MethodId, TimeRef, Value,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn error(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }
    }

    fn warning(path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev} at {}: {}", self.path, self.message)
    }
}

/// One document is one method at one generation time.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceMapDocument {
    pub method: MethodId,
    pub generated_at: TimeRef,
    pub entries: Vec<AssertionalMap>,
}

impl SourceMapDocument {
    pub fn into_labeled(self) -> Vec<LabeledMap> {
        let label = Label::new(self.method, self.generated_at);
        self.entries
            .into_iter()
            .map(|map| LabeledMap::new(label.clone(), map))
            .collect()
    }
}

/// Parses a source map into labeled maps, in entry order. Warnings are
/// tolerated; any error-level diagnostic rejects the document.
pub fn parse_source_map(document: &[u8], registry: &LocationRegistry) -> Result<Vec<LabeledMap>> {
    let (doc, diagnostics) = analyze(document, registry);
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Error::SourceMap(diagnostics));
    }
    Ok(doc.map(SourceMapDocument::into_labeled).unwrap_or_default())
}

pub fn validate_source_map(document: &[u8], registry: &LocationRegistry) -> Vec<Diagnostic> {
    analyze(document, registry).1
}

fn analyze(document: &[u8], registry: &LocationRegistry) -> (Option<SourceMapDocument>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let root: Json = match serde_json::from_slice(document) {
        Ok(v) => v,
        Err(e) => {
            diags.push(Diagnostic::error("$", format!("malformed json: {e}")));
            return (None, diags);
        }
    };
    let Some(root) = root.as_object() else {
        diags.push(Diagnostic::error("$", "expected an object"));
        return (None, diags);
    };

    let method = match root.get("method").and_then(Json::as_str) {
        Some(m) => match MethodId::new(m) {
            Ok(id) => Some(id),
            Err(_) => {
                diags.push(Diagnostic::error("$.method", format!("invalid method id `{m}`")));
                None
            }
        },
        None => {
            diags.push(Diagnostic::error("$.method", "missing string field"));
            None
        }
    };
    let generated_at = time_field(root.get("generated_at"), "$.generated_at", &mut diags);

    let entries = match root.get("entries").map(|e| e.as_array()) {
        Some(Some(arr)) => arr.as_slice(),
        Some(None) => {
            diags.push(Diagnostic::error("$.entries", "expected an array"));
            &[]
        }
        None => {
            diags.push(Diagnostic::error("$.entries", "missing array field"));
            &[]
        }
    };

    let mut maps = Vec::with_capacity(entries.len());
    let mut seen = HashSet::new();
    for (i, entry) in entries.iter().enumerate() {
        let path = format!("$.entries[{i}]");
        let Some(map) = parse_entry(entry, &path, registry, &mut diags) else {
            continue;
        };
        let key = (map.condition, map.location.clone(), map.valid_at);
        if !seen.insert(key) {
            diags.push(Diagnostic::error(
                &path,
                format!(
                    "duplicate entry for {} at {} valid {}",
                    map.condition, map.location, map.valid_at
                ),
            ));
            continue;
        }
        if let (Some(m), Some(g)) = (&method, generated_at) {
            let lam = LabeledMap::new(Label::new(m.clone(), g), map.clone());
            if lam.is_hindcast() {
                diags.push(Diagnostic::warning(
                    format!("{path}.valid_at"),
                    format!("hindcast entry: valid {} is more than a day before generation {g}", map.valid_at),
                ));
            }
        }
        maps.push(map);
    }

    let doc = match (method, generated_at) {
        (Some(method), Some(generated_at)) => Some(SourceMapDocument {
            method,
            generated_at,
            entries: maps,
        }),
        _ => None,
    };
    (doc, diags)
}

fn time_field(value: Option<&Json>, path: &str, diags: &mut Vec<Diagnostic>) -> Option<TimeRef> {
    match value.and_then(Json::as_str) {
        Some(s) => match s.parse() {
            Ok(t) => Some(t),
            Err(_) => {
                diags.push(Diagnostic::error(path, format!("invalid time `{s}` (ISO-8601 or h<k>)")));
                None
            }
        },
        None => {
            diags.push(Diagnostic::error(path, "missing string field"));
            None
        }
    }
}

fn parse_entry(
    entry: &Json,
    path: &str,
    registry: &LocationRegistry,
    diags: &mut Vec<Diagnostic>,
) -> Option<AssertionalMap> {
    let Some(obj) = entry.as_object() else {
        diags.push(Diagnostic::error(path, "expected an object"));
        return None;
    };
    let before = diags.len();

    let condition = match obj.get("condition").and_then(Json::as_str) {
        Some(c) => match c.parse::<Condition>() {
            Ok(c) => Some(c),
            Err(e) => {
                diags.push(Diagnostic::error(format!("{path}.condition"), e.to_string()));
                None
            }
        },
        None => {
            diags.push(Diagnostic::error(format!("{path}.condition"), "missing string field"));
            None
        }
    };

    let location = parse_location(obj.get("location"), &format!("{path}.location"), registry, diags);
    let valid_at = time_field(obj.get("valid_at"), &format!("{path}.valid_at"), diags);

    let magnitude = match obj.get("magnitude").and_then(Json::as_number) {
        Some(n) => match decimal_from_json(n) {
            Some(d) => Some(d),
            None => {
                diags.push(Diagnostic::error(format!("{path}.magnitude"), "number not representable"));
                None
            }
        },
        None => {
            diags.push(Diagnostic::error(format!("{path}.magnitude"), "missing number field"));
            None
        }
    };

    let direction = match obj.get("direction") {
        None | Some(Json::Null) => None,
        Some(Json::String(s)) => match s.parse::<Compass>() {
            Ok(d) => Some(d),
            Err(e) => {
                diags.push(Diagnostic::error(format!("{path}.direction"), e.to_string()));
                return None;
            }
        },
        Some(_) => {
            diags.push(Diagnostic::error(format!("{path}.direction"), "expected a compass point string"));
            return None;
        }
    };

    if diags.len() > before {
        return None;
    }
    let (condition, location, valid_at, magnitude) = (condition?, location?, valid_at?, magnitude?);
    let value = match Value::new(condition, magnitude, direction) {
        Ok(v) => v,
        Err(e) => {
            let field = if direction.is_some() != condition.has_direction() {
                "direction"
            } else {
                "magnitude"
            };
            diags.push(Diagnostic::error(format!("{path}.{field}"), e.to_string()));
            return None;
        }
    };
    match AssertionalMap::new(condition, Location::Named(location), valid_at, value) {
        Ok(m) => Some(m),
        Err(e) => {
            diags.push(Diagnostic::error(format!("{path}.location"), e.to_string()));
            None
        }
    }
}

fn parse_location(
    value: Option<&Json>,
    path: &str,
    registry: &LocationRegistry,
    diags: &mut Vec<Diagnostic>,
) -> Option<String> {
    let location = match value {
        Some(Json::String(name)) => Location::Named(name.clone()),
        Some(Json::Object(obj)) => {
            let coord = |key: &str| obj.get(key).and_then(Json::as_number).and_then(decimal_from_json);
            match (coord("lat"), coord("lon")) {
                (Some(lat), Some(lon)) => {
                    match Coordinates::new(lat, lon, coord("alt").unwrap_or_default()) {
                        Ok(c) => Location::Point(c),
                        Err(e) => {
                            diags.push(Diagnostic::error(path, e.to_string()));
                            return None;
                        }
                    }
                }
                _ => {
                    diags.push(Diagnostic::error(path, "coordinates need numeric lat and lon"));
                    return None;
                }
            }
        }
        _ => {
            diags.push(Diagnostic::error(path, "expected a point name or {lat, lon, alt}"));
            return None;
        }
    };
    match registry.resolve(&location) {
        Ok(name) => Some(name),
        Err(e) => {
            diags.push(Diagnostic::error(path, e.to_string()));
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> LocationRegistry {
        LocationRegistry::default()
    }

    #[test]
    fn empty_entries() {
        let lams = parse_source_map(br#"{"method": "GFS", "generated_at": "h0", "entries": []}"#, &reg()).unwrap();
        assert!(lams.is_empty());
    }

    #[test]
    fn labels_and_order() {
        let doc = br#"{"method": "O", "generated_at": "h0", "entries": [
            {"condition": "cloudiness", "location": "North", "valid_at": "h0", "magnitude": 90},
            {"condition": "wind", "location": "North", "valid_at": "h0", "magnitude": 15, "direction": "NE"},
            {"condition": "sea", "location": "Sea", "valid_at": "h0", "magnitude": 190}
        ]}"#;
        let lams = parse_source_map(doc, &reg()).unwrap();
        assert_eq!(lams.len(), 3);
        assert!(lams.iter().all(|l| l.label.is_observation() && l.label.generated_at == TimeRef::Horizon(0)));
        assert_eq!(lams[1].map.value.direction(), Some(Compass::NE));
        assert_eq!(lams[2].map.condition, Condition::Sea);
    }

    #[test]
    fn percent_bound_diagnostic() {
        let doc = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "cloudiness", "location": "North", "valid_at": "h1", "magnitude": 50},
            {"condition": "cloudiness", "location": "South", "valid_at": "h1", "magnitude": 120}
        ]}"#;
        let diags = validate_source_map(doc, &reg());
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Error);
        assert_eq!(diags[0].path, "$.entries[1].magnitude");
        assert!(parse_source_map(doc, &reg()).is_err());
    }

    #[test]
    fn hindcast_warning_does_not_reject() {
        let doc = br#"{"method": "GFS", "generated_at": "2018-04-09T00:00:00Z", "entries": [
            {"condition": "rain", "location": "North", "valid_at": "2018-04-06T00:00:00Z", "magnitude": 5}
        ]}"#;
        let diags = validate_source_map(doc, &reg());
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert!(diags[0].message.contains("hindcast"));
        assert_eq!(parse_source_map(doc, &reg()).unwrap().len(), 1);
    }

    #[test]
    fn error_paths() {
        let dup = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "rain", "location": "North", "valid_at": "h1", "magnitude": 5},
            {"condition": "rain", "location": "North", "valid_at": "h1", "magnitude": 6}
        ]}"#;
        assert!(matches!(parse_source_map(dup, &reg()), Err(Error::SourceMap(_))));

        let unknown = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "fog", "location": "North", "valid_at": "h1", "magnitude": 5}]}"#;
        let d = validate_source_map(unknown, &reg());
        assert_eq!(d[0].path, "$.entries[0].condition");

        let dir = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "rain", "location": "North", "valid_at": "h1", "magnitude": 5, "direction": "N"}]}"#;
        let d = validate_source_map(dir, &reg());
        assert_eq!(d[0].path, "$.entries[0].direction");

        let place = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "rain", "location": "Atlantis", "valid_at": "h1", "magnitude": 5}]}"#;
        let d = validate_source_map(place, &reg());
        assert_eq!(d[0].path, "$.entries[0].location");

        assert!(!validate_source_map(b"not json", &reg()).is_empty());
        assert!(!validate_source_map(br#"{"generated_at": "h0", "entries": []}"#, &reg()).is_empty());
    }

    #[test]
    fn coordinates_resolve_through_registry() {
        let mut r = reg();
        r.register("Padua", Some(Coordinates::new("45.43".parse().unwrap(), "11.80".parse().unwrap(), Default::default()).unwrap()))
            .unwrap();
        let doc = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "rain", "location": {"lat": 45.43, "lon": 11.8}, "valid_at": "h1", "magnitude": 5}]}"#;
        let lams = parse_source_map(doc, &r).unwrap();
        assert_eq!(lams[0].map.location, Location::named("Padua"));
        assert!(parse_source_map(doc, &reg()).is_err());
    }

    #[test]
    fn parsing_is_deterministic() {
        let doc = br#"{"method": "GFS", "generated_at": "h0", "entries": [
            {"condition": "rain", "location": "North", "valid_at": "h1", "magnitude": 5.25},
            {"condition": "rain", "location": "South", "valid_at": "h2", "magnitude": 1e1}]}"#;
        let a = parse_source_map(doc, &reg()).unwrap();
        let b = parse_source_map(doc, &reg()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[1].map.value.magnitude(), rust_decimal::Decimal::from(10));
    }
}
