//! Sharp forecasting: numeric magnitudes to the controlled weather vocabulary.

use std::collections::BTreeMap;

use rust_decimal::Decimal;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::kb::decimal_json;
use crate::model::{decimal_from_json, Compass, Condition, Value};

pub const SKY_TERMS: [&str; 5] = ["Clear or Sunny Skies", "Partly Cloudy", "Mostly Cloudy", "Cloudy", "Overcast"];
pub const WIND_TERMS: [&str; 8] = [
    "Light Winds",
    "Moderate Winds",
    "Fresh Winds",
    "Near Gale",
    "Gale",
    "Strong Gale",
    "Storm",
    "Violent Storm",
];
pub const SEA_TERMS: [&str; 8] = [
    "Calm",
    "Slight",
    "Moderate",
    "Rough",
    "Very Rough",
    "High",
    "Very High",
    "Phenomenal",
];
pub const RAIN_TERMS: [&str; 5] = [
    "No precipitation",
    "Very Light Rains",
    "Light Rains",
    "Moderate Rains",
    "Heavy Rains",
];
pub const RAINSHOWER_TERMS: [&str; 4] = ["Scattered", "Isolated", "Occasional", "Squally"];
pub const SNOW_TERMS: [&str; 7] = [
    "Blizzard",
    "Snowstorm",
    "Snow flurry",
    "Snow squall",
    "Snowburst",
    "Blowing snow",
    "Drifting snow",
];
pub const VISIBILITY_TERMS: [&str; 4] = ["Clean", "Misty", "Foggy", "Hazy"];

/// Controlled vocabulary for a condition, if one exists.
pub fn vocabulary(condition: Condition) -> Option<Vec<&'static str>> {
    match condition {
        Condition::Cloudiness => Some(SKY_TERMS.to_vec()),
        Condition::Wind => Some(WIND_TERMS.to_vec()),
        Condition::Sea => Some(SEA_TERMS.to_vec()),
        Condition::Rain => Some(RAIN_TERMS.iter().chain(&RAINSHOWER_TERMS).copied().collect()),
        Condition::Snow => Some(SNOW_TERMS.to_vec()),
        Condition::Visibility => Some(VISIBILITY_TERMS.to_vec()),
        Condition::Temperature | Condition::Pressure | Condition::Humidity => None,
    }
}

pub fn direction_name(point: Compass) -> &'static str {
    match point {
        Compass::N => "from North",
        Compass::NE => "from North East",
        Compass::E => "from East",
        Compass::SE => "from South East",
        Compass::S => "from South",
        Compass::SW => "from South West",
        Compass::W => "from West",
        Compass::NW => "from North West",
    }
}

/// Upper end of a band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Below(Decimal),
    AtMost(Decimal),
    Unbounded,
}

impl Bound {
    fn admits(self, x: Decimal) -> bool {
        match self {
            Bound::Below(b) => x < b,
            Bound::AtMost(b) => x <= b,
            Bound::Unbounded => true,
        }
    }

    /// Position on the real line, with `AtMost(b)` just above `Below(b)`.
    fn key(self) -> (Option<Decimal>, bool) {
        match self {
            Bound::Below(b) => (Some(b), false),
            Bound::AtMost(b) => (Some(b), true),
            Bound::Unbounded => (None, true),
        }
    }

    fn precedes(self, other: Bound) -> bool {
        match (self.key(), other.key()) {
            ((None, _), _) => false,
            ((Some(_), _), (None, _)) => true,
            ((Some(a), ai), (Some(b), bi)) => a < b || (a == b && !ai && bi),
        }
    }

    fn to_json(self) -> Json {
        match self {
            Bound::Below(b) => decimal_json(b),
            Bound::AtMost(b) => Json::String(format!("<={b}")),
            Bound::Unbounded => Json::Null,
        }
    }

    fn from_json(v: &Json) -> Option<Bound> {
        match v {
            Json::Null => Some(Bound::Unbounded),
            Json::Number(n) => decimal_from_json(n).map(Bound::Below),
            Json::String(s) => s.strip_prefix("<=")?.trim().parse().ok().map(Bound::AtMost),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub upper: Bound,
    pub term: String,
}

fn bands(spec: &[(Bound, &str)]) -> Vec<Band> {
    spec.iter()
        .map(|(upper, term)| Band {
            upper: *upper,
            term: (*term).to_owned(),
        })
        .collect()
}

/// Ordered threshold bands per condition; bands are half-open `[lo, hi)`
/// unless an inclusive bound is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconTable {
    bands: BTreeMap<Condition, Vec<Band>>,
}

impl Default for LexiconTable {
    fn default() -> Self {
        use Bound::{AtMost, Below, Unbounded};
        let n = Decimal::from;
        let mut t = BTreeMap::new();
        t.insert(
            Condition::Cloudiness,
            bands(&[
                (Below(n(10)), SKY_TERMS[0]),
                (Below(n(40)), SKY_TERMS[1]),
                (Below(n(80)), SKY_TERMS[2]),
                (Below(n(100)), SKY_TERMS[3]),
                (Unbounded, SKY_TERMS[4]),
            ]),
        );
        let wind_bounds = [11, 17, 22, 28, 34, 41, 48];
        t.insert(Condition::Wind, threshold_bands(&wind_bounds, &WIND_TERMS));
        let sea_bounds = [50, 125, 250, 400, 600, 900, 1400];
        t.insert(Condition::Sea, threshold_bands(&sea_bounds, &SEA_TERMS));
        t.insert(
            Condition::Rain,
            bands(&[
                (AtMost(n(0)), RAIN_TERMS[0]),
                (Below(n(2)), RAIN_TERMS[1]),
                (Below(n(10)), RAIN_TERMS[2]),
                (Below(n(20)), RAIN_TERMS[3]),
                (Unbounded, RAIN_TERMS[4]),
            ]),
        );
        LexiconTable { bands: t }
    }
}

fn threshold_bands(bounds: &[i64], terms: &[&str]) -> Vec<Band> {
    bounds
        .iter()
        .map(|b| Bound::Below(Decimal::from(*b)))
        .chain(std::iter::once(Bound::Unbounded))
        .zip(terms)
        .map(|(upper, term)| Band {
            upper,
            term: (*term).to_owned(),
        })
        .collect()
}

impl LexiconTable {
    pub fn bands(&self, condition: Condition) -> Option<&[Band]> {
        self.bands.get(&condition).map(Vec::as_slice)
    }

    /// Replaces the bands of one condition after checking order, coverage and vocabulary.
    pub fn set_bands(&mut self, condition: Condition, bands: Vec<Band>) -> Result<()> {
        let err = |m: String| Error::Lexicon(format!("{condition}: {m}"));
        let last = bands.last().ok_or_else(|| err("no bands".into()))?;
        for pair in bands.windows(2) {
            if !pair[0].upper.precedes(pair[1].upper) {
                return Err(err(format!(
                    "band `{}` does not end before band `{}`",
                    pair[0].term, pair[1].term
                )));
            }
        }
        let covers = match last.upper {
            Bound::Unbounded => true,
            _ if condition.is_percent() => last.upper.admits(Decimal::ONE_HUNDRED),
            _ => false,
        };
        if !covers {
            return Err(err("the last band must be unbounded".into()));
        }
        if let Some(vocab) = vocabulary(condition) {
            if let Some(b) = bands.iter().find(|b| !vocab.contains(&b.term.as_str())) {
                return Err(err(format!("`{}` is not in the vocabulary", b.term)));
            }
        }
        self.bands.insert(condition, bands);
        Ok(())
    }

    /// Defaults with the conditions present in `document` replaced.
    /// The document maps condition names to `[bound, term]` pairs, where a
    /// bound is a number (exclusive), `"<=x"` (inclusive) or `null` (open).
    pub fn from_json(document: &[u8]) -> Result<Self> {
        let root: Json = serde_json::from_slice(document)?;
        let obj = root
            .as_object()
            .ok_or_else(|| Error::Lexicon("lexicon document must be an object".into()))?;
        let mut table = LexiconTable::default();
        for (key, spec) in obj {
            let condition: Condition = key.parse()?;
            let pairs = spec
                .as_array()
                .ok_or_else(|| Error::Lexicon(format!("`{key}` must be an array of [bound, term] pairs")))?;
            let mut out = Vec::with_capacity(pairs.len());
            for (i, pair) in pairs.iter().enumerate() {
                let bad = || Error::Lexicon(format!("`{key}`[{i}] must be [bound, term]"));
                let [bound, term] = pair.as_array().map(Vec::as_slice).ok_or_else(bad)? else {
                    return Err(bad());
                };
                out.push(Band {
                    upper: Bound::from_json(bound).ok_or_else(bad)?,
                    term: term.as_str().ok_or_else(bad)?.to_owned(),
                });
            }
            table.set_bands(condition, out)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let doc: serde_json::Map<String, Json> = self
            .bands
            .iter()
            .map(|(c, bands)| {
                let pairs = bands.iter().map(|b| json!([b.upper.to_json(), b.term])).collect();
                (c.to_string(), Json::Array(pairs))
            })
            .collect();
        serde_json::to_string_pretty(&Json::Object(doc)).expect("json values always serialize")
    }

    /// Term of the band containing the magnitude.
    pub fn classify(&self, condition: Condition, value: &Value) -> Result<&str> {
        let bands = self
            .bands
            .get(&condition)
            .ok_or_else(|| Error::Lexicon(format!("no bands configured for {condition}")))?;
        let m = value.magnitude();
        bands
            .iter()
            .find(|b| b.upper.admits(m))
            .map(|b| b.term.as_str())
            .ok_or_else(|| Error::Lexicon(format!("{m} is beyond the last {condition} band")))
    }
}

pub fn classify<'t>(condition: Condition, value: &Value, table: &'t LexiconTable) -> Result<&'t str> {
    table.classify(condition, value)
}
