//! Traditional (case-centric) event logs.

mod flat;
mod profile;
mod xes;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pyfmt;
use crate::time::Timestamp;

pub use flat::{ingest_flat, Column, ColumnKind, ColumnMapping, FlatTable};
pub use profile::{attribute_profile, attribute_profile_with, AttributeSummary, SummaryBody};
pub use xes::parse_xes;

pub const CASE_ID_KEY: &str = "case:concept:name";
pub const ACTIVITY_KEY: &str = "concept:name";
pub const TIMESTAMP_KEY: &str = "time:timestamp";
pub const RESOURCE_KEY: &str = "org:resource";
pub const INDEX_KEY: &str = "@@index";
pub const CASE_INDEX_KEY: &str = "@@case_index";
pub const CASE_PREFIX: &str = "case:";

/// A scalar attribute value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AttrValue {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    #[serde(serialize_with = "serialize_ts")]
    Date(Timestamp),
}

fn serialize_ts<S: serde::Serializer>(ts: &Timestamp, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&pyfmt::iso8601(ts))
}

impl AttrValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            AttrValue::Int(i) => Some(*i as f64),
            AttrValue::Float(f) => Some(*f),
            _ => None,
        }
    }

    pub fn kind(&self) -> AttrKind {
        match self {
            AttrValue::Int(_) | AttrValue::Float(_) => AttrKind::Numeric,
            AttrValue::Date(_) => AttrKind::Timestamp,
            AttrValue::Str(_) | AttrValue::Bool(_) => AttrKind::Categorical,
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Str(s) => f.write_str(s),
            AttrValue::Int(i) => write!(f, "{i}"),
            AttrValue::Float(x) => f.write_str(&pyfmt::float(*x)),
            AttrValue::Bool(b) => f.write_str(pyfmt::bool(*b)),
            AttrValue::Date(ts) => f.write_str(&pyfmt::datetime_utc(ts)),
        }
    }
}

pub type Attributes = BTreeMap<String, AttrValue>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub activity: String,
    pub timestamp: Timestamp,
    pub resource: Option<String>,
    pub attributes: Attributes,
}

impl Event {
    pub fn new(activity: impl Into<String>, timestamp: Timestamp) -> Self {
        Self {
            activity: activity.into(),
            timestamp,
            resource: None,
            attributes: Attributes::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub attributes: Attributes,
    pub events: Vec<Event>,
}

impl Case {
    pub fn new(id: impl Into<String>, events: Vec<Event>) -> Self {
        Self {
            id: id.into(),
            attributes: Attributes::new(),
            events,
        }
    }

    pub fn activities(&self) -> impl Iterator<Item = &str> {
        self.events.iter().map(|e| e.activity.as_str())
    }

    /// Last minus first timestamp, in seconds.
    pub fn throughput_seconds(&self) -> f64 {
        match (self.events.first(), self.events.last()) {
            (Some(first), Some(last)) => crate::time::seconds_between(&first.timestamp, &last.timestamp),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrKind {
    Timestamp,
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeInfo {
    pub kind: AttrKind,
    /// Number of events lacking the attribute.
    pub empty: usize,
}

/// Per-attribute kind and empty count, keyed by flat-table column name.
pub type AttributeCatalog = BTreeMap<String, AttributeInfo>;

/// An immutable, normalized traditional event log.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    cases: Vec<Case>,
    catalog: AttributeCatalog,
}

impl EventLog {
    /// Normalizes the cases: events are stably sorted by timestamp and the
    /// attribute catalog is rebuilt.
    pub fn new(mut cases: Vec<Case>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(cases.len());
        for case in &mut cases {
            if !seen.insert(case.id.clone()) {
                return Err(Error::structural(format!("duplicate case id `{}`", case.id)));
            }
            if let Some(pos) = case.events.iter().position(|e| e.activity.is_empty()) {
                return Err(Error::structural(format!(
                    "case `{}`: event {pos} has an empty activity",
                    case.id
                )));
            }
            case.events.sort_by_key(|e| e.timestamp);
        }
        let catalog = build_catalog(&cases);
        Ok(Self { cases, catalog })
    }

    pub fn empty() -> Self {
        Self {
            cases: Vec::new(),
            catalog: AttributeCatalog::new(),
        }
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn catalog(&self) -> &AttributeCatalog {
        &self.catalog
    }

    pub fn case(&self, id: &str) -> Option<(usize, &Case)> {
        self.cases.iter().enumerate().find(|(_, c)| c.id == id)
    }

    pub fn event_count(&self) -> usize {
        self.cases.iter().map(|c| c.events.len()).sum()
    }

    /// Global 0-based index of the first event of each case.
    pub fn case_offsets(&self) -> Vec<usize> {
        let mut offset = 0;
        self.cases
            .iter()
            .map(|c| {
                let start = offset;
                offset += c.events.len();
                start
            })
            .collect()
    }

    /// Keeps the cases selected by `keep`, preserving order.
    pub fn filter_cases(&self, mut keep: impl FnMut(&Case) -> bool) -> EventLog {
        let cases: Vec<Case> = self.cases.iter().filter(|c| keep(c)).cloned().collect();
        let catalog = build_catalog(&cases);
        EventLog { cases, catalog }
    }

    pub fn into_cases(self) -> Vec<Case> {
        self.cases
    }
}

fn merge_kind(slot: &mut Option<AttrKind>, kind: AttrKind) {
    *slot = match *slot {
        None => Some(kind),
        Some(k) if k == kind => Some(k),
        Some(_) => Some(AttrKind::Categorical),
    };
}

fn build_catalog(cases: &[Case]) -> AttributeCatalog {
    let total: usize = cases.iter().map(|c| c.events.len()).sum();
    // name -> (kind, present count)
    let mut seen: BTreeMap<String, (Option<AttrKind>, usize)> = BTreeMap::new();
    if total > 0 {
        seen.insert(ACTIVITY_KEY.into(), (Some(AttrKind::Categorical), total));
        seen.insert(TIMESTAMP_KEY.into(), (Some(AttrKind::Timestamp), total));
    }
    for case in cases {
        for (key, value) in &case.attributes {
            let entry = seen.entry(format!("{CASE_PREFIX}{key}")).or_default();
            merge_kind(&mut entry.0, value.kind());
            entry.1 += case.events.len();
        }
        for event in &case.events {
            if event.resource.is_some() {
                let entry = seen.entry(RESOURCE_KEY.into()).or_default();
                merge_kind(&mut entry.0, AttrKind::Categorical);
                entry.1 += 1;
            }
            for (key, value) in &event.attributes {
                let entry = seen.entry(key.clone()).or_default();
                merge_kind(&mut entry.0, value.kind());
                entry.1 += 1;
            }
        }
    }
    seen.into_iter()
        .map(|(name, (kind, present))| {
            let info = AttributeInfo {
                kind: kind.unwrap_or(AttrKind::Categorical),
                empty: total - present,
            };
            (name, info)
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::time::parse_timestamp;

    pub fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).expect("fixture timestamp")
    }

    /// The three-case running example.
    pub fn running_log() -> EventLog {
        let rows = [
            ("Case1", "Activity A", "2023-07-13 09:00:00"),
            ("Case1", "Activity B", "2023-07-13 09:15:00"),
            ("Case1", "Activity C", "2023-07-13 09:30:00"),
            ("Case2", "Activity A", "2023-07-13 10:00:00"),
            ("Case2", "Activity B", "2023-07-13 10:30:00"),
            ("Case3", "Activity A", "2023-07-13 11:00:00"),
            ("Case3", "Activity C", "2023-07-13 11:30:00"),
            ("Case3", "Activity D", "2023-07-13 11:45:00"),
        ];
        from_rows(&rows)
    }

    pub fn from_rows(rows: &[(&str, &str, &str)]) -> EventLog {
        let mut cases: Vec<Case> = Vec::new();
        for (case, act, t) in rows {
            if cases.last().map(|c| c.id.as_str()) != Some(*case) {
                cases.push(Case::new(*case, Vec::new()));
            }
            cases.last_mut().unwrap().events.push(Event::new(*act, ts(t)));
        }
        EventLog::new(cases).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn catalog_covers_every_attribute() {
        let mut cases = running_log().into_cases();
        cases[0].attributes.insert("channel".into(), AttrValue::Str("web".into()));
        cases[0].events[0].resource = Some("Mike".into());
        cases[0].events[1].attributes.insert("cost".into(), AttrValue::Float(2.5));
        let log = EventLog::new(cases).unwrap();
        let cat = log.catalog();
        assert_eq!(cat["concept:name"].empty, 0);
        assert_eq!(cat["case:channel"].empty, 5);
        assert_eq!(cat["org:resource"].empty, 7);
        assert_eq!(cat["cost"], AttributeInfo { kind: AttrKind::Numeric, empty: 7 });
        assert!(cat.values().all(|i| i.empty <= log.event_count()));
    }

    #[test]
    fn rejects_duplicate_case_ids() {
        let case = Case::new("x", vec![Event::new("A", ts("2023-01-01 00:00:00"))]);
        assert!(matches!(
            EventLog::new(vec![case.clone(), case]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn sorts_events_stably() {
        let t = ts("2023-01-01 00:00:00");
        let later = ts("2023-01-01 00:01:00");
        let case = Case::new(
            "c",
            vec![Event::new("Z", later), Event::new("B", t), Event::new("A", t)],
        );
        let log = EventLog::new(vec![case]).unwrap();
        let acts: Vec<_> = log.cases()[0].activities().collect();
        assert_eq!(acts, ["B", "A", "Z"]);
    }
}
