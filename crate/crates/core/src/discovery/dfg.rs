use std::collections::BTreeMap;

use serde::Serialize;

use super::Moments;
use crate::log::EventLog;
use crate::time::seconds_between;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DfgArc {
    pub frequency: usize,
    /// Mean elapsed seconds between the two events.
    pub performance: f64,
}

/// Directly-follows graph keyed by `(source, target)` activity.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Dfg {
    #[serde(serialize_with = "crate::discovery::dfg::serialize_pairs")]
    pub arcs: BTreeMap<(String, String), DfgArc>,
}

pub(crate) fn serialize_pairs<S, V>(map: &BTreeMap<(String, String), V>, s: S) -> Result<S::Ok, S::Error>
where
    S: serde::Serializer,
    V: Serialize,
{
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Entry<'a, V> {
        source: &'a str,
        target: &'a str,
        #[serde(flatten)]
        value: &'a V,
    }
    let mut seq = s.serialize_seq(Some(map.len()))?;
    for ((source, target), value) in map {
        seq.serialize_element(&Entry { source, target, value })?;
    }
    seq.end()
}

impl Dfg {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn total_frequency(&self) -> usize {
        self.arcs.values().map(|a| a.frequency).sum()
    }
}

pub fn discover_dfg(log: &EventLog) -> Dfg {
    let mut acc: BTreeMap<(String, String), Moments> = BTreeMap::new();
    for case in log.cases() {
        for pair in case.events.windows(2) {
            let key = (pair[0].activity.clone(), pair[1].activity.clone());
            acc.entry(key)
                .or_default()
                .push(seconds_between(&pair[0].timestamp, &pair[1].timestamp));
        }
    }
    Dfg {
        arcs: acc
            .into_iter()
            .map(|(k, m)| (k, DfgArc { frequency: m.n, performance: m.average() }))
            .collect(),
    }
}
