use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::Moments;
use crate::log::EventLog;
use crate::time::seconds_between;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalEntry {
    pub avg: f64,
    /// Sample standard deviation (n - 1 denominator), 0 when `n == 1`.
    pub std: f64,
    pub n: usize,
}

/// Eventually-follows time statistics per activity pair, in order of first
/// observation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TemporalProfile {
    pub entries: IndexMap<(String, String), TemporalEntry>,
}

impl TemporalProfile {
    pub fn get(&self, a: &str, b: &str) -> Option<&TemporalEntry> {
        self.entries.get(&(a.to_string(), b.to_string()))
    }
}

impl Serialize for TemporalProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        #[derive(Serialize)]
        struct Entry<'a> {
            source: &'a str,
            target: &'a str,
            #[serde(flatten)]
            entry: &'a TemporalEntry,
        }
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for ((source, target), entry) in &self.entries {
            seq.serialize_element(&Entry { source, target, entry })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TemporalProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry {
            source: String,
            target: String,
            #[serde(flatten)]
            entry: TemporalEntry,
        }
        let entries = Vec::<Entry>::deserialize(d)?;
        Ok(TemporalProfile {
            entries: entries.into_iter().map(|e| ((e.source, e.target), e.entry)).collect(),
        })
    }
}

pub fn discover_temporal_profile(log: &EventLog) -> TemporalProfile {
    let mut acc: IndexMap<(String, String), Moments> = IndexMap::new();
    for case in log.cases() {
        for (i, first) in case.events.iter().enumerate() {
            for second in &case.events[i + 1..] {
                let key = (first.activity.clone(), second.activity.clone());
                acc.entry(key)
                    .or_default()
                    .push(seconds_between(&first.timestamp, &second.timestamp));
            }
        }
    }
    TemporalProfile {
        entries: acc
            .into_iter()
            .map(|(k, m)| (k, TemporalEntry { avg: m.average(), std: m.sample_std(), n: m.n }))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discovery::discover_dfg;
    use crate::log::fixtures::{from_rows, running_log};

    #[test]
    fn json_round_trip() {
        let p = discover_temporal_profile(&running_log());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<TemporalProfile>(&json).unwrap(), p);
    }

    #[test]
    fn running_example() {
        let p = discover_temporal_profile(&running_log());
        let ab = p.get("Activity A", "Activity B").unwrap();
        assert_eq!(ab.avg, 1350.0);
        assert!((ab.std - 900.0 / 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(ab.n, 2);
        let ad = p.get("Activity A", "Activity D").unwrap();
        assert_eq!((ad.avg, ad.std, ad.n), (2700.0, 0.0, 1));
        let order: Vec<_> = p.entries.keys().map(|(a, b)| format!("{}{}", &a[9..], &b[9..])).collect();
        assert_eq!(order, ["AB", "AC", "BC", "AD", "CD"]);
    }

    #[test]
    fn unit_gaps() {
        let log = from_rows(&[
            ("t", "A", "2023-01-01 00:00:00"),
            ("t", "B", "2023-01-01 00:00:01"),
            ("t", "C", "2023-01-01 00:00:02"),
        ]);
        let p = discover_temporal_profile(&log);
        assert_eq!(p.get("A", "B").unwrap().avg, 1.0);
        assert_eq!(p.get("A", "C").unwrap().avg, 2.0);
        assert_eq!(p.get("B", "C").unwrap().avg, 1.0);
        assert!(p.entries.values().all(|e| e.std == 0.0));
    }

    #[test]
    fn directly_follows_implies_eventually_follows() {
        let log = running_log();
        let p = discover_temporal_profile(&log);
        for (a, b) in discover_dfg(&log).arcs.keys() {
            assert!(p.get(a, b).is_some());
        }
    }

    #[test]
    fn two_point_std() {
        let log = from_rows(&[
            ("x", "A", "2023-01-01 00:00:00"),
            ("x", "B", "2023-01-01 00:00:10"),
            ("y", "A", "2023-01-01 00:00:00"),
            ("y", "B", "2023-01-01 00:00:50"),
        ]);
        let e = *discover_temporal_profile(&log).get("A", "B").unwrap();
        assert!((e.std - 40.0 / 2f64.sqrt()).abs() < 1e-9);
    }
}
