//! Per-attribute summaries: empty counts, quantiles, top categorical values.

use std::collections::HashMap;

use serde::Serialize;

use super::{AttrKind, AttrValue, EventLog, ACTIVITY_KEY, CASE_PREFIX, RESOURCE_KEY, TIMESTAMP_KEY};
use crate::features::{quantiles, QUANTILE_POINTS};
use crate::time::{epoch_seconds, from_epoch_seconds, Timestamp};

pub const DEFAULT_TOP_VALUES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SummaryBody {
    Numeric(Vec<(f64, f64)>),
    Timestamp(Vec<(f64, Timestamp)>),
    /// `(value, frequency)`, frequency descending.
    Categorical(Vec<(String, usize)>),
    /// The attribute has no value on any event.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttributeSummary {
    pub name: String,
    pub kind: AttrKind,
    pub empty: usize,
    pub body: SummaryBody,
}

/// Summaries for every catalogued attribute, keeping the ten most frequent
/// categorical values.
pub fn attribute_profile(log: &EventLog) -> Vec<AttributeSummary> {
    attribute_profile_with(log, DEFAULT_TOP_VALUES)
}

/// Summaries ordered by kind (timestamp, numeric, categorical) then name.
pub fn attribute_profile_with(log: &EventLog, top_values: usize) -> Vec<AttributeSummary> {
    let mut values: HashMap<&str, Vec<&AttrValue>> = HashMap::new();
    let mut activities: Vec<&str> = Vec::new();
    let mut resources: Vec<&str> = Vec::new();
    let mut stamps: Vec<f64> = Vec::new();
    for case in log.cases() {
        for ev in &case.events {
            activities.push(&ev.activity);
            stamps.push(epoch_seconds(&ev.timestamp));
            if let Some(r) = &ev.resource {
                resources.push(r);
            }
            for (k, v) in &ev.attributes {
                values.entry(k.as_str()).or_default().push(v);
            }
        }
    }
    let case_values: HashMap<String, Vec<&AttrValue>> = {
        let mut map: HashMap<String, Vec<&AttrValue>> = HashMap::new();
        for case in log.cases() {
            for (k, v) in &case.attributes {
                let slot = map.entry(format!("{CASE_PREFIX}{k}")).or_default();
                slot.extend(std::iter::repeat_n(v, case.events.len()));
            }
        }
        map
    };

    let mut out: Vec<AttributeSummary> = log
        .catalog()
        .iter()
        .map(|(name, info)| {
            let body = match name.as_str() {
                ACTIVITY_KEY => categorical(activities.iter().copied(), top_values),
                TIMESTAMP_KEY => timestamp_body(&stamps),
                RESOURCE_KEY if !resources.is_empty() => categorical(resources.iter().copied(), top_values),
                other => {
                    let vals = values
                        .get(other)
                        .or_else(|| case_values.get(other))
                        .map(Vec::as_slice)
                        .unwrap_or_default();
                    body_for(info.kind, vals, top_values)
                }
            };
            AttributeSummary { name: name.clone(), kind: info.kind, empty: info.empty, body }
        })
        .collect();
    out.sort_by(|a, b| a.kind.cmp(&b.kind).then_with(|| a.name.cmp(&b.name)));
    out
}

fn body_for(kind: AttrKind, vals: &[&AttrValue], top_values: usize) -> SummaryBody {
    if vals.is_empty() {
        return SummaryBody::Empty;
    }
    match kind {
        AttrKind::Numeric => {
            let nums: Vec<f64> = vals.iter().filter_map(|v| v.as_f64()).collect();
            match quantiles(&nums, &QUANTILE_POINTS) {
                Ok(q) => SummaryBody::Numeric(q),
                Err(_) => SummaryBody::Empty,
            }
        }
        AttrKind::Timestamp => {
            let secs: Vec<f64> = vals
                .iter()
                .filter_map(|v| match v {
                    AttrValue::Date(t) => Some(epoch_seconds(t)),
                    _ => None,
                })
                .collect();
            timestamp_body(&secs)
        }
        AttrKind::Categorical => {
            let rendered: Vec<String> = vals.iter().map(ToString::to_string).collect();
            categorical(rendered.iter().map(String::as_str), top_values)
        }
    }
}

fn timestamp_body(secs: &[f64]) -> SummaryBody {
    match quantiles(secs, &QUANTILE_POINTS) {
        Ok(q) => SummaryBody::Timestamp(
            q.into_iter()
                .filter_map(|(p, s)| from_epoch_seconds(s).map(|t| (p, t)))
                .collect(),
        ),
        Err(_) => SummaryBody::Empty,
    }
}

/// Frequency descending, ties by value descending.
fn categorical<'a>(vals: impl Iterator<Item = &'a str>, top_values: usize) -> SummaryBody {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for v in vals {
        *counts.entry(v).or_default() += 1;
    }
    if counts.is_empty() {
        return SummaryBody::Empty;
    }
    let mut pairs: Vec<(String, usize)> = counts.into_iter().map(|(k, n)| (k.to_string(), n)).collect();
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| b.0.cmp(&a.0)));
    pairs.truncate(top_values);
    SummaryBody::Categorical(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::fixtures::running_log;
    use crate::log::{Case, Event};

    #[test]
    fn activity_counts_over_running_example() {
        let profile = attribute_profile(&running_log());
        let act = profile.iter().find(|s| s.name == ACTIVITY_KEY).unwrap();
        // count oracle
        let log = running_log();
        let mut expected: Vec<(String, usize)> = Vec::new();
        for a in log.cases().iter().flat_map(|c| c.activities()) {
            match expected.iter_mut().find(|(k, _)| k == a) {
                Some(slot) => slot.1 += 1,
                None => expected.push((a.to_string(), 1)),
            }
        }
        expected.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| b.0.cmp(&a.0)));
        assert_eq!(act.body, SummaryBody::Categorical(expected));
        assert_eq!(act.empty, 0);
        assert_eq!(profile[0].name, TIMESTAMP_KEY);
    }

    #[test]
    fn single_value_numeric() {
        let mut cases = running_log().into_cases();
        for c in &mut cases {
            c.events[0].attributes.insert("amount".into(), AttrValue::Int(35));
        }
        let log = EventLog::new(cases).unwrap();
        let amount = attribute_profile(&log).into_iter().find(|s| s.name == "amount").unwrap();
        assert_eq!(amount.empty, 5);
        let SummaryBody::Numeric(q) = amount.body else { panic!("numeric expected") };
        assert!(q.iter().all(|(_, v)| *v == 35.0));
        assert_eq!(q.len(), 5);
    }

    #[test]
    fn case_attributes_counted_per_event() {
        let mut cases = running_log().into_cases();
        cases[0].attributes.insert("gender".into(), AttrValue::Bool(false));
        let log = EventLog::new(cases).unwrap();
        let g = attribute_profile(&log).into_iter().find(|s| s.name == "case:gender").unwrap();
        assert_eq!(g.body, SummaryBody::Categorical(vec![("False".into(), 3)]));
        assert_eq!(g.empty, 5);
    }

    #[test]
    fn top_values_limit() {
        let t = crate::log::fixtures::ts("2023-01-01 00:00:00");
        let events = (0..15).map(|i| Event::new(format!("act{i:02}"), t)).collect();
        let log = EventLog::new(vec![Case::new("c", events)]).unwrap();
        let act = attribute_profile_with(&log, 3).into_iter().find(|s| s.name == ACTIVITY_KEY).unwrap();
        let SummaryBody::Categorical(v) = act.body else { panic!() };
        let names: Vec<_> = v.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(names, ["act14", "act13", "act12"]);
    }

    #[test]
    fn empty_log_has_no_attributes() {
        assert!(attribute_profile(&EventLog::empty()).is_empty());
    }
}
