//! Weather assertion vocabulary: conditions, values, time references,
//! locations, and labeled assertional maps.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: i64 = 86_400;

/// Method id reserved for ground-truth observations.
pub const OBSERVATION: &str = "O";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Cloudiness,
    Wind,
    Sea,
    Rain,
    Snow,
    Temperature,
    Pressure,
    Humidity,
    Visibility,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::Cloudiness,
        Condition::Wind,
        Condition::Sea,
        Condition::Rain,
        Condition::Snow,
        Condition::Temperature,
        Condition::Pressure,
        Condition::Humidity,
        Condition::Visibility,
    ];

    pub fn unit(self) -> &'static str {
        match self {
            Condition::Temperature => "°C",
            Condition::Pressure => "hPa",
            Condition::Humidity | Condition::Cloudiness => "%",
            Condition::Rain => "mm",
            Condition::Snow | Condition::Sea => "cm",
            Condition::Wind => "knots",
            Condition::Visibility => "m",
        }
    }

    /// Prefix used for this condition in theory atoms.
    pub fn code(self) -> &'static str {
        match self {
            Condition::Cloudiness => "C",
            Condition::Wind => "W",
            Condition::Sea => "S",
            Condition::Rain => "R",
            Condition::Temperature => "T",
            Condition::Pressure => "P",
            Condition::Humidity => "H",
            Condition::Visibility => "V",
            Condition::Snow => "Sn",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Condition::Cloudiness => "cloudiness",
            Condition::Wind => "wind",
            Condition::Sea => "sea",
            Condition::Rain => "rain",
            Condition::Snow => "snow",
            Condition::Temperature => "temperature",
            Condition::Pressure => "pressure",
            Condition::Humidity => "humidity",
            Condition::Visibility => "visibility",
        }
    }

    pub fn is_percent(self) -> bool {
        matches!(self, Condition::Humidity | Condition::Cloudiness)
    }

    pub fn has_direction(self) -> bool {
        self == Condition::Wind
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lowered = s.to_ascii_lowercase();
        let found = match lowered.as_str() {
            "sky" | "cloud" => Some(Condition::Cloudiness),
            "snowfall" | "snowfalls" => Some(Condition::Snow),
            "precipitation" | "precipitations" => Some(Condition::Rain),
            other => Condition::ALL.into_iter().find(|c| c.name() == other),
        };
        found.ok_or_else(|| Error::InvalidValue(format!("unknown condition kind `{s}`")))
    }
}

/// 8-point compass rose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Compass {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Compass {
    pub const ALL: [Compass; 8] = [
        Compass::N,
        Compass::NE,
        Compass::E,
        Compass::SE,
        Compass::S,
        Compass::SW,
        Compass::W,
        Compass::NW,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Compass::N => "N",
            Compass::NE => "NE",
            Compass::E => "E",
            Compass::SE => "SE",
            Compass::S => "S",
            Compass::SW => "SW",
            Compass::W => "W",
            Compass::NW => "NW",
        }
    }
}

impl fmt::Display for Compass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Compass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Compass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidValue(format!("unknown compass point `{s}`")))
    }
}

/// A measured or forecast quantity. Magnitudes are kept normalized so that
/// `90` and `90.0` compare, hash and render identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Value {
    magnitude: Decimal,
    direction: Option<Compass>,
}

impl Value {
    pub fn new(condition: Condition, magnitude: Decimal, direction: Option<Compass>) -> Result<Self> {
        if magnitude.is_sign_negative() && !magnitude.is_zero() {
            return Err(Error::InvalidValue(format!(
                "{condition} magnitude {magnitude} is negative"
            )));
        }
        if condition.is_percent() && magnitude > Decimal::ONE_HUNDRED {
            return Err(Error::InvalidValue(format!(
                "{condition} magnitude {magnitude} exceeds 100%"
            )));
        }
        match (condition.has_direction(), direction) {
            (true, None) => {
                return Err(Error::InvalidValue(format!("{condition} requires a direction")))
            }
            (false, Some(d)) => {
                return Err(Error::InvalidValue(format!(
                    "{condition} cannot carry a direction ({d})"
                )))
            }
            _ => {}
        }
        Ok(Value {
            magnitude: magnitude.abs().normalize(),
            direction,
        })
    }

    pub fn scalar(condition: Condition, magnitude: impl Into<Decimal>) -> Result<Self> {
        Value::new(condition, magnitude.into(), None)
    }

    pub fn wind(direction: Compass, speed: impl Into<Decimal>) -> Result<Self> {
        Value::new(Condition::Wind, speed.into(), Some(direction))
    }

    pub fn magnitude(&self) -> Decimal {
        self.magnitude
    }

    pub fn direction(&self) -> Option<Compass> {
        self.direction
    }

    /// Same shape (direction presence) as `other`, i.e. plausibly the same condition kind.
    pub fn same_kind(&self, other: &Value) -> bool {
        self.direction.is_some() == other.direction.is_some()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Some(d) => write!(f, "{d} {}", self.magnitude),
            None => write!(f, "{}", self.magnitude),
        }
    }
}

/// Either an absolute UTC instant or a symbolic day horizon `h<k>` relative
/// to the run's "now".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeRef {
    Absolute(DateTime<Utc>),
    Horizon(u32),
}

impl TimeRef {
    pub fn now_symbolic() -> Self {
        TimeRef::Horizon(0)
    }

    /// Seconds from `now` to this instant.
    pub fn offset_from(&self, now: &TimeRef) -> Result<i64> {
        match (self, now) {
            (TimeRef::Horizon(k), _) => Ok(i64::from(*k) * SECONDS_PER_DAY),
            (TimeRef::Absolute(t), TimeRef::Absolute(n)) => Ok((*t - *n).num_seconds()),
            (TimeRef::Absolute(_), TimeRef::Horizon(_)) => Err(Error::UnresolvableTime {
                valid_at: self.to_string(),
                now: now.to_string(),
            }),
        }
    }

    /// Absolute form of this reference, given an absolute `now`.
    pub fn to_absolute(&self, now: DateTime<Utc>) -> DateTime<Utc> {
        match self {
            TimeRef::Absolute(t) => *t,
            TimeRef::Horizon(k) => now + chrono::Duration::days(i64::from(*k)),
        }
    }

    /// Symbolic form, given an absolute `now`. Past instants have no symbolic form.
    pub fn to_symbolic(&self, now: DateTime<Utc>) -> Option<TimeRef> {
        let k = horizon_index(self, &TimeRef::Absolute(now)).ok()?;
        u32::try_from(k.days()).ok().map(TimeRef::Horizon)
    }
}

impl fmt::Display for TimeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeRef::Absolute(t) => f.write_str(&t.to_rfc3339_opts(SecondsFormat::Secs, true)),
            TimeRef::Horizon(k) => write!(f, "h{k}"),
        }
    }
}

impl FromStr for TimeRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix('h').or_else(|| s.strip_prefix('t')) {
            if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) {
                return k
                    .parse()
                    .map(TimeRef::Horizon)
                    .map_err(|_| Error::InvalidTime(s.to_owned()));
            }
        }
        DateTime::parse_from_rfc3339(s)
            .map(|t| TimeRef::Absolute(t.with_timezone(&Utc)))
            .map_err(|_| Error::InvalidTime(s.to_owned()))
    }
}

impl Serialize for TimeRef {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimeRef {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Forecast lead time in whole days relative to "now". Negative values are
/// past horizons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Horizon(pub i64);

impl Horizon {
    pub fn days(self) -> i64 {
        self.0
    }

    pub fn is_past(self) -> bool {
        self.0 < 0
    }
}

/// Day horizon of `valid_at` with respect to `now`: symbolic `h<k>` passes
/// through, absolute instants use the floor of the elapsed day count.
pub fn horizon_index(valid_at: &TimeRef, now: &TimeRef) -> Result<Horizon> {
    match valid_at {
        TimeRef::Horizon(k) => Ok(Horizon(i64::from(*k))),
        TimeRef::Absolute(_) => {
            let offset = valid_at.offset_from(now)?;
            Ok(Horizon(offset.div_euclid(SECONDS_PER_DAY)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coordinates {
    pub lat: Decimal,
    pub lon: Decimal,
    #[serde(default)]
    pub alt: Decimal,
}

impl Coordinates {
    pub fn new(lat: Decimal, lon: Decimal, alt: Decimal) -> Result<Self> {
        if lat.abs() > Decimal::from(90) || lon.abs() > Decimal::from(180) {
            return Err(Error::InvalidLocation(format!(
                "coordinates ({lat}, {lon}) out of range"
            )));
        }
        Ok(Coordinates {
            lat: lat.normalize(),
            lon: lon.normalize(),
            alt: alt.normalize(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Location {
    Named(String),
    Point(Coordinates),
}

impl Location {
    pub fn named(name: impl Into<String>) -> Self {
        Location::Named(name.into())
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Location::Named(n) => Some(n),
            Location::Point(_) => None,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Named(n) => f.write_str(n),
            Location::Point(c) => write!(f, "({}, {}, {})", c.lat, c.lon, c.alt),
        }
    }
}

/// Named points must start with an uppercase ASCII letter and stay alphanumeric,
/// so they embed unambiguously into theory atoms.
pub fn is_valid_point_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Named points known to a run, in display order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocationRegistry {
    points: Vec<(String, Option<Coordinates>)>,
}

impl Default for LocationRegistry {
    fn default() -> Self {
        let points = ["North", "Center", "South", "East", "West", "Sea"]
            .into_iter()
            .map(|n| (n.to_owned(), None))
            .collect();
        LocationRegistry { points }
    }
}

impl LocationRegistry {
    pub fn empty() -> Self {
        LocationRegistry { points: Vec::new() }
    }

    pub fn register(&mut self, name: &str, coordinates: Option<Coordinates>) -> Result<()> {
        if !is_valid_point_name(name) {
            return Err(Error::InvalidLocation(format!("`{name}` is not a valid point name")));
        }
        match self.points.iter_mut().find(|(n, _)| n == name) {
            Some(entry) => entry.1 = coordinates.or(entry.1),
            None => self.points.push((name.to_owned(), coordinates)),
        }
        Ok(())
    }

    /// Parses `{"Name": {"lat":…,"lon":…,"alt":…} | null, …}` on top of the defaults.
    pub fn from_json(document: &[u8]) -> Result<Self> {
        let raw: serde_json::Map<String, serde_json::Value> = serde_json::from_slice(document)?;
        let mut registry = LocationRegistry::default();
        for (name, coords) in raw {
            let coords = if coords.is_null() {
                None
            } else {
                let c: Coordinates = serde_json::from_value(coords)?;
                Some(Coordinates::new(c.lat, c.lon, c.alt)?)
            };
            registry.register(&name, coords)?;
        }
        Ok(registry)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.points.iter().any(|(n, _)| n == name)
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|(n, _)| n == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|(n, _)| n.as_str())
    }

    /// Resolves a location to a registered point name. Coordinates match only
    /// when exactly equal to a registered point's coordinates.
    pub fn resolve(&self, location: &Location) -> Result<String> {
        match location {
            Location::Named(n) if self.contains(n) => Ok(n.clone()),
            Location::Named(n) => Err(Error::InvalidLocation(format!("unregistered point `{n}`"))),
            Location::Point(c) => self
                .points
                .iter()
                .find(|(_, pc)| pc.as_ref() == Some(c))
                .map(|(n, _)| n.clone())
                .ok_or_else(|| {
                    Error::InvalidLocation(format!("no registered point at {location}"))
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AssertionalMap {
    pub condition: Condition,
    pub location: Location,
    pub valid_at: TimeRef,
    pub value: Value,
}

impl AssertionalMap {
    pub fn new(condition: Condition, location: Location, valid_at: TimeRef, value: Value) -> Result<Self> {
        // Re-run the value checks against this condition.
        let value = Value::new(condition, value.magnitude, value.direction)?;
        if condition == Condition::Sea && location.name().is_some_and(|n| n != "Sea") {
            return Err(Error::InvalidLocation(format!(
                "sea state is reported at the point `Sea`, not `{location}`"
            )));
        }
        Ok(AssertionalMap {
            condition,
            location,
            valid_at,
            value,
        })
    }

    /// Same condition, location and validity time but a different value.
    pub fn conflicts_with(&self, other: &AssertionalMap) -> bool {
        self.condition == other.condition
            && self.location == other.location
            && self.valid_at == other.valid_at
            && self.value != other.value
    }
}

/// Identifier of a forecasting method; alphanumeric so it can tag atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MethodId(String);

impl MethodId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(Error::InvalidMethod(id));
        }
        Ok(MethodId(id))
    }

    pub fn observation() -> Self {
        MethodId(OBSERVATION.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_observation(&self) -> bool {
        self.0 == OBSERVATION
    }

    /// Lowercase tag used on source-tagged theory literals.
    pub fn tag(&self) -> String {
        self.0.to_ascii_lowercase()
    }
}

impl TryFrom<String> for MethodId {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        MethodId::new(value)
    }
}

impl From<MethodId> for String {
    fn from(m: MethodId) -> String {
        m.0
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MethodId::new(s)
    }
}

/// Contextualised method: which model produced a map, and when.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub method: MethodId,
    pub generated_at: TimeRef,
}

impl Label {
    pub fn new(method: MethodId, generated_at: TimeRef) -> Self {
        Label {
            method,
            generated_at,
        }
    }

    pub fn is_observation(&self) -> bool {
        self.method.is_observation()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledMap {
    pub label: Label,
    pub map: AssertionalMap,
}

impl LabeledMap {
    pub fn new(label: Label, map: AssertionalMap) -> Self {
        LabeledMap { label, map }
    }

    /// True when the map is valid more than one day before it was generated.
    /// Only comparable when both times use the same form.
    pub fn is_hindcast(&self) -> bool {
        let (valid, generated) = match (&self.map.valid_at, &self.label.generated_at) {
            (TimeRef::Horizon(v), TimeRef::Horizon(g)) => {
                (i64::from(*v) * SECONDS_PER_DAY, i64::from(*g) * SECONDS_PER_DAY)
            }
            (TimeRef::Absolute(v), TimeRef::Absolute(g)) => (v.timestamp(), g.timestamp()),
            _ => return false,
        };
        generated - valid > SECONDS_PER_DAY
    }
}

/// Exact decimal from a JSON number (requires serde_json's arbitrary precision).
pub(crate) fn decimal_from_json(number: &serde_json::Number) -> Option<Decimal> {
    let text = number.to_string();
    Decimal::from_str(&text)
        .or_else(|_| Decimal::from_scientific(&text))
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn cloud(loc: &str, h: u32, v: i64) -> AssertionalMap {
        AssertionalMap::new(
            Condition::Cloudiness,
            Location::named(loc),
            TimeRef::Horizon(h),
            Value::scalar(Condition::Cloudiness, v).unwrap(),
        )
        .unwrap()
    }

    fn wind(loc: &str, h: u32, d: Compass, v: i64) -> AssertionalMap {
        AssertionalMap::new(
            Condition::Wind,
            Location::named(loc),
            TimeRef::Horizon(h),
            Value::wind(d, v).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn cloud_values_conflict() {
        assert!(cloud("North", 1, 90).conflicts_with(&cloud("North", 1, 75)));
        assert!(!cloud("North", 1, 90).conflicts_with(&cloud("North", 1, 90)));
        assert!(!cloud("North", 1, 90).conflicts_with(&cloud("South", 1, 75)));
        assert!(!cloud("North", 1, 90).conflicts_with(&cloud("North", 2, 75)));
    }

    #[test]
    fn wind_direction_conflicts() {
        let a = wind("North", 1, Compass::N, 8);
        let b = wind("North", 1, Compass::NE, 5);
        assert!(a.conflicts_with(&b));
        assert!(b.conflicts_with(&a));
        assert!(wind("North", 1, Compass::N, 5).conflicts_with(&wind("North", 1, Compass::NE, 5)));
    }

    #[test]
    fn value_invariants() {
        assert!(Value::scalar(Condition::Cloudiness, 100).is_ok());
        assert!(Value::scalar(Condition::Cloudiness, 101).is_err());
        assert!(Value::scalar(Condition::Humidity, 120).is_err());
        assert!(Value::scalar(Condition::Sea, 190).is_ok());
        assert!(Value::scalar(Condition::Wind, 5).is_err());
        assert!(Value::new(Condition::Rain, Decimal::from(3), Some(Compass::N)).is_err());
        assert!(Value::scalar(Condition::Rain, -1).is_err());
        assert_eq!(
            Value::scalar(Condition::Rain, Decimal::new(900, 1)).unwrap(),
            Value::scalar(Condition::Rain, 90).unwrap()
        );
    }

    #[test]
    fn sea_must_sit_at_sea_point() {
        let v = Value::scalar(Condition::Sea, 50).unwrap();
        assert!(AssertionalMap::new(Condition::Sea, Location::named("North"), TimeRef::Horizon(1), v).is_err());
        assert!(AssertionalMap::new(Condition::Sea, Location::named("Sea"), TimeRef::Horizon(1), v).is_ok());
    }

    #[test]
    fn horizon_symbolic_passthrough() {
        let now = TimeRef::Absolute(Utc.with_ymd_and_hms(2018, 4, 6, 14, 5, 0).unwrap());
        assert_eq!(horizon_index(&TimeRef::Horizon(2), &now).unwrap(), Horizon(2));
        assert_eq!(horizon_index(&TimeRef::Horizon(2), &TimeRef::Horizon(0)).unwrap(), Horizon(2));
    }

    #[test]
    fn horizon_absolute() {
        let n = Utc.with_ymd_and_hms(2018, 4, 6, 14, 5, 0).unwrap();
        let now = TimeRef::Absolute(n);
        assert_eq!(horizon_index(&now, &now).unwrap(), Horizon(0));
        let later = TimeRef::Absolute(n + chrono::Duration::hours(36));
        assert_eq!(horizon_index(&later, &now).unwrap(), Horizon(1));
        let earlier = TimeRef::Absolute(n - chrono::Duration::hours(1));
        let h = horizon_index(&earlier, &now).unwrap();
        assert_eq!(h, Horizon(-1));
        assert!(h.is_past());
    }

    #[test]
    fn absolute_against_symbolic_now_is_unresolvable() {
        let t = TimeRef::Absolute(Utc.with_ymd_and_hms(2018, 4, 6, 0, 0, 0).unwrap());
        assert!(horizon_index(&t, &TimeRef::Horizon(0)).is_err());
    }

    #[test]
    fn time_ref_round_trips_through_text() {
        for s in ["h0", "h12", "2018-04-06T14:05:00Z"] {
            let t: TimeRef = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert_eq!("t1".parse::<TimeRef>().unwrap(), TimeRef::Horizon(1));
        assert!("tomorrow".parse::<TimeRef>().is_err());
    }

    #[test]
    fn symbolic_and_absolute_interconvert() {
        let n = Utc.with_ymd_and_hms(2018, 4, 6, 14, 5, 0).unwrap();
        let h2 = TimeRef::Horizon(2);
        let abs = h2.to_absolute(n);
        assert_eq!(TimeRef::Absolute(abs).to_symbolic(n), Some(h2));
    }

    #[test]
    fn registry_resolves_exact_coordinates_only() {
        let mut reg = LocationRegistry::default();
        let c = Coordinates::new(Decimal::new(4543, 2), Decimal::new(1180, 2), Decimal::ZERO).unwrap();
        reg.register("Padua", Some(c)).unwrap();
        assert_eq!(reg.resolve(&Location::Point(c)).unwrap(), "Padua");
        let off = Coordinates::new(Decimal::new(4544, 2), Decimal::new(1180, 2), Decimal::ZERO).unwrap();
        assert!(reg.resolve(&Location::Point(off)).is_err());
        assert!(reg.resolve(&Location::named("Atlantis")).is_err());
        assert!(reg.register("lowercase", None).is_err());
        assert!(Coordinates::new(Decimal::from(91), Decimal::ZERO, Decimal::ZERO).is_err());
    }

    #[test]
    fn hindcast_detection() {
        let map = cloud("North", 0, 50);
        let lam = LabeledMap::new(Label::new(MethodId::new("GFS").unwrap(), TimeRef::Horizon(3)), map);
        assert!(lam.is_hindcast());
        let fresh = LabeledMap::new(Label::new(MethodId::new("GFS").unwrap(), TimeRef::Horizon(0)), cloud("North", 1, 50));
        assert!(!fresh.is_hindcast());
    }

    #[test]
    fn method_ids() {
        assert!(MethodId::new("").is_err());
        assert!(MethodId::new("GFS-2").is_err());
        assert!(MethodId::observation().is_observation());
        assert_eq!(MethodId::new("ECMWF").unwrap().tag(), "ecmwf");
    }
}
