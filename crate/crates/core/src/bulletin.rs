//! From reasoner conclusions to a public bulletin: scenario extraction,
//! sharp classification and sentence rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::lexicon::{direction_name, LexiconTable};
use crate::model::{decimal_from_json, Condition, Value};
use crate::reasoner::{ConclusionSet, ProofTag};
use crate::theory::{decode_atom, Literal};
use crate::tournament::SlotId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioEntry {
    pub value: Value,
    /// The conclusion this entry was read from.
    pub witness: Literal,
    pub tag: ProofTag,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeatherScenario {
    pub entries: BTreeMap<SlotId, ScenarioEntry>,
    /// Source tags with a proven tagged literal.
    pub sources: BTreeSet<String>,
}

impl WeatherScenario {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn is_fold_tag(tag: &str) -> bool {
    tag.strip_prefix("fold")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Reads the winning value of every slot from positive, untagged conclusions.
pub fn extract_scenario(conclusions: &ConclusionSet) -> Result<WeatherScenario> {
    let mut scenario = WeatherScenario::default();
    let proven = conclusions
        .plus_definite
        .iter()
        .map(|l| (l, ProofTag::PLUS_DEFINITE))
        .chain(
            conclusions
                .plus_defeasible
                .iter()
                .filter(|l| !conclusions.plus_definite.contains(*l))
                .map(|l| (l, ProofTag::PLUS_DEFEASIBLE)),
        );
    for (lit, tag) in proven {
        if !lit.is_positive() {
            continue;
        }
        let Ok(parts) = decode_atom(lit.atom()) else {
            continue;
        };
        if let Some(src) = parts.source {
            if !is_fold_tag(&src) {
                scenario.sources.insert(src);
            }
            continue;
        }
        let slot = SlotId {
            condition: parts.condition,
            location: parts.location,
            horizon: parts.horizon,
        };
        if let Some(prev) = scenario.entries.get(&slot) {
            return Err(Error::IncoherentScenario(format!(
                "both {} and {} are proven",
                prev.witness, lit
            )));
        }
        scenario.entries.insert(
            slot,
            ScenarioEntry {
                value: parts.value,
                witness: lit.clone(),
                tag,
            },
        );
    }
    Ok(scenario)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletinItem {
    pub condition: Condition,
    pub value: Value,
    pub term: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    /// Accuracy margin of the deciding encounter, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<Decimal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationBlock {
    pub location: String,
    pub items: Vec<BulletinItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonBlock {
    pub horizon: i64,
    pub locations: Vec<LocationBlock>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletinDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub horizons: Vec<HorizonBlock>,
}

impl BulletinDocument {
    pub fn is_empty(&self) -> bool {
        self.horizons.is_empty()
    }

    pub fn item_mut(&mut self, slot: &SlotId) -> Option<&mut BulletinItem> {
        self.horizons
            .iter_mut()
            .find(|h| h.horizon == slot.horizon)?
            .locations
            .iter_mut()
            .find(|l| l.location == slot.location)?
            .items
            .iter_mut()
            .find(|i| i.condition == slot.condition)
    }
}

const LOCATION_ORDER: [&str; 5] = ["North", "Center", "South", "East", "West"];

/// North, Center, South, East, West, then other points alphabetically, Sea last.
fn location_rank(name: &str) -> (usize, &str) {
    match LOCATION_ORDER.iter().position(|n| *n == name) {
        Some(i) => (i, ""),
        None if name == "Sea" => (LOCATION_ORDER.len() + 1, ""),
        None => (LOCATION_ORDER.len(), name),
    }
}

/// Classifies every scenario entry. Items within a location follow the
/// condition order sky, wind, sea, rain, then the rest.
pub fn render_sharp(scenario: &WeatherScenario, lexicon: &LexiconTable) -> Result<BulletinDocument> {
    let mut grouped: BTreeMap<i64, BTreeMap<&str, Vec<BulletinItem>>> = BTreeMap::new();
    for (slot, entry) in &scenario.entries {
        let term = lexicon.classify(slot.condition, &entry.value)?.to_owned();
        grouped
            .entry(slot.horizon)
            .or_default()
            .entry(slot.location.as_str())
            .or_default()
            .push(BulletinItem {
                condition: slot.condition,
                value: entry.value,
                term,
                direction: entry.value.direction().map(|d| direction_name(d).to_owned()),
                margin: None,
            });
    }
    let horizons = grouped
        .into_iter()
        .map(|(horizon, locs)| {
            let mut locations: Vec<LocationBlock> = locs
                .into_iter()
                .map(|(location, mut items)| {
                    items.sort_by_key(|i| i.condition);
                    LocationBlock {
                        location: location.to_owned(),
                        items,
                    }
                })
                .collect();
            locations.sort_by(|a, b| location_rank(&a.location).cmp(&location_rank(&b.location)));
            HorizonBlock { horizon, locations }
        })
        .collect();
    Ok(BulletinDocument {
        generated_at: None,
        sources: scenario.sources.iter().cloned().collect(),
        horizons,
    })
}

/// Adjective prefixed to terms whose deciding margin is below `threshold`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncertaintyHook {
    pub threshold: Decimal,
    pub adjective: String,
}

/// Sentence fragments per condition, with `{term}` and `{direction}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Templates {
    pub fragments: BTreeMap<Condition, String>,
    pub lowercase: bool,
    pub uncertainty: Option<UncertaintyHook>,
}

impl Default for Templates {
    fn default() -> Self {
        let fragments = Condition::ALL
            .into_iter()
            .map(|c| {
                let f = if c.has_direction() { "{term} {direction}" } else { "{term}" };
                (c, f.to_owned())
            })
            .collect();
        Templates {
            fragments,
            lowercase: false,
            uncertainty: None,
        }
    }
}

impl Templates {
    /// Parses a template document. Conditions not listed keep their default
    /// fragment unless `"replace": true` is given.
    pub fn from_json(document: &[u8]) -> Result<Self> {
        let root: Json = serde_json::from_slice(document)?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::Template("template document must be an object".into()))?;
        let mut t = Templates::default();
        if obj.get("replace").and_then(Json::as_bool) == Some(true) {
            t.fragments.clear();
        }
        for (key, v) in obj {
            match key.as_str() {
                "replace" => {}
                "lowercase" => {
                    t.lowercase = v
                        .as_bool()
                        .ok_or_else(|| Error::Template("`lowercase` must be a boolean".into()))?;
                }
                "uncertainty" => {
                    let bad = || Error::Template("`uncertainty` needs a numeric `threshold` and a string `adjective`".into());
                    let threshold = v
                        .get("threshold")
                        .and_then(Json::as_number)
                        .and_then(decimal_from_json)
                        .ok_or_else(bad)?;
                    let adjective = v.get("adjective").and_then(Json::as_str).ok_or_else(bad)?;
                    t.uncertainty = Some(UncertaintyHook {
                        threshold,
                        adjective: adjective.to_owned(),
                    });
                }
                _ => {
                    let condition: Condition = key
                        .parse()
                        .map_err(|_| Error::Template(format!("unknown template key `{key}`")))?;
                    let fragment = v
                        .as_str()
                        .ok_or_else(|| Error::Template(format!("fragment for `{key}` must be a string")))?;
                    t.fragments.insert(condition, fragment.to_owned());
                }
            }
        }
        Ok(t)
    }

    fn fill(&self, item: &BulletinItem) -> Result<String> {
        let fragment = self
            .fragments
            .get(&item.condition)
            .ok_or_else(|| Error::Template(format!("no template for {}", item.condition)))?;
        let mut term = item.term.clone();
        let mut direction = item.direction.clone().unwrap_or_default();
        if let (Some(hook), Some(margin)) = (&self.uncertainty, item.margin) {
            if margin < hook.threshold {
                term = format!("{} {term}", hook.adjective);
            }
        }
        if self.lowercase {
            term = term.to_lowercase();
            direction = direction.to_lowercase();
        }
        Ok(fragment
            .replace("{term}", &term)
            .replace("{direction}", &direction)
            .trim()
            .to_owned())
    }

    /// `<Location>: <fragment>, <fragment>.`
    pub fn sentence(&self, block: &LocationBlock) -> Result<String> {
        let parts = block
            .items
            .iter()
            .map(|i| self.fill(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(format!("{}: {}.", block.location, parts.join(", ")))
    }
}

pub fn horizon_heading(horizon: i64) -> String {
    match horizon {
        0 => "Current conditions".to_owned(),
        1 => "Tomorrow".to_owned(),
        2 => "Day after tomorrow".to_owned(),
        -1 => "Yesterday".to_owned(),
        k if k < 0 => format!("{} days ago", -k),
        k => format!("In {k} days"),
    }
}

/// Sentences grouped by horizon, in document order.
pub fn render_smooth(doc: &BulletinDocument, templates: &Templates) -> Result<Vec<(i64, Vec<String>)>> {
    doc.horizons
        .iter()
        .map(|h| {
            let sentences = h
                .locations
                .iter()
                .map(|l| templates.sentence(l))
                .collect::<Result<Vec<_>>>()?;
            Ok((h.horizon, sentences))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Text,
    Html,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "html" => Ok(Format::Html),
            "json" => Ok(Format::Json),
            other => Err(Error::Template(format!("unknown format `{other}`"))),
        }
    }
}

fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn render_text(doc: &BulletinDocument, templates: &Templates) -> Result<String> {
    let mut out = String::from("Weather bulletin\n");
    if let Some(at) = &doc.generated_at {
        let _ = writeln!(out, "Issued: {at}");
    }
    if !doc.sources.is_empty() {
        let _ = writeln!(out, "Sources: {}", doc.sources.join(", "));
    }
    if doc.is_empty() {
        out.push_str("\nNo forecast available.\n");
    }
    for (horizon, sentences) in render_smooth(doc, templates)? {
        let _ = writeln!(out, "\n{}", horizon_heading(horizon));
        for s in sentences {
            let _ = writeln!(out, "{s}");
        }
    }
    Ok(out)
}

fn render_html(doc: &BulletinDocument, templates: &Templates) -> Result<String> {
    let mut out = String::from(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Weather bulletin</title>\n</head>\n<body>\n<h1>Weather bulletin</h1>\n",
    );
    if let Some(at) = &doc.generated_at {
        let _ = writeln!(out, "<p>Issued: {}</p>", escape_html(at));
    }
    if !doc.sources.is_empty() {
        let _ = writeln!(out, "<p>Sources: {}</p>", escape_html(&doc.sources.join(", ")));
    }
    if doc.is_empty() {
        out.push_str("<p>No forecast available.</p>\n");
    }
    for (horizon, sentences) in render_smooth(doc, templates)? {
        let _ = writeln!(out, "<h2>{}</h2>\n<ul>", escape_html(&horizon_heading(horizon)));
        for s in sentences {
            let _ = writeln!(out, "<li>{}</li>", escape_html(&s));
        }
        out.push_str("</ul>\n");
    }
    out.push_str("</body>\n</html>\n");
    Ok(out)
}

pub fn render_document(doc: &BulletinDocument, format: Format, templates: &Templates) -> Result<String> {
    match format {
        Format::Text => render_text(doc, templates),
        Format::Html => render_html(doc, templates),
        Format::Json => {
            let mut out = serde_json::to_string_pretty(doc)?;
            out.push('\n');
            Ok(out)
        }
    }
}
