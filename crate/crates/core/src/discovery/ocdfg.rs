use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::Moments;
use crate::ocel::Ocel;
use crate::time::seconds_between;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OcdfgArc {
    /// Distinct (source event, target event) pairs.
    pub event_frequency: usize,
    /// Object traversals of the arc.
    pub object_frequency: usize,
    /// Mean seconds over the object traversals.
    pub duration: f64,
}

/// Per object type directly-follows graph. Every object type of the log has
/// an entry, possibly without arcs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Ocdfg {
    pub types: BTreeMap<String, OcdfgTypeArcs>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OcdfgTypeArcs {
    #[serde(serialize_with = "crate::discovery::dfg::serialize_pairs")]
    pub arcs: BTreeMap<(String, String), OcdfgArc>,
}

impl Ocdfg {
    pub fn arc(&self, object_type: &str, a: &str, b: &str) -> Option<&OcdfgArc> {
        self.types.get(object_type)?.arcs.get(&(a.to_string(), b.to_string()))
    }
}

pub fn discover_ocdfg(ocel: &Ocel) -> Ocdfg {
    struct Acc {
        pairs: BTreeSet<(usize, usize)>,
        times: Moments,
    }
    let mut per_type: BTreeMap<String, BTreeMap<(String, String), Acc>> =
        ocel.object_types().iter().map(|t| (t.clone(), BTreeMap::new())).collect();
    let events = ocel.events();
    for obj in ocel.objects().values() {
        let arcs = per_type.get_mut(&obj.object_type).expect("type registered");
        for w in obj.event_indices().windows(2) {
            let (src, tgt) = (&events[w[0]], &events[w[1]]);
            let acc = arcs
                .entry((src.activity.clone(), tgt.activity.clone()))
                .or_insert_with(|| Acc { pairs: BTreeSet::new(), times: Moments::default() });
            acc.pairs.insert((w[0], w[1]));
            acc.times.push(seconds_between(&src.timestamp, &tgt.timestamp));
        }
    }
    Ocdfg {
        types: per_type
            .into_iter()
            .map(|(t, arcs)| {
                let arcs = arcs
                    .into_iter()
                    .map(|(k, acc)| {
                        let arc = OcdfgArc {
                            event_frequency: acc.pairs.len(),
                            object_frequency: acc.times.n,
                            duration: acc.times.average(),
                        };
                        (k, arc)
                    })
                    .collect();
                (t, OcdfgTypeArcs { arcs })
            })
            .collect(),
    }
}
