use std::collections::{BTreeMap, BTreeSet};

use super::FeatureTable;
use crate::error::{Error, Result};
use crate::ocel::{descendants_graph, inheritance_graph, interaction_graph, Ocel};
use crate::time::epoch_seconds;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OcelFeatureOptions {
    /// Directly-follows paths become features only when at least this many
    /// objects of the type traverse them.
    pub min_path_support: usize,
}

impl Default for OcelFeatureOptions {
    fn default() -> Self {
        Self { min_path_support: 2 }
    }
}

pub fn ocel_feature_table(ocel: &Ocel, object_type: &str) -> Result<FeatureTable> {
    ocel_feature_table_with(ocel, object_type, OcelFeatureOptions::default())
}

/// One row per object of `object_type` (id order) with lifecycle, activity,
/// graph and path features.
pub fn ocel_feature_table_with(
    ocel: &Ocel,
    object_type: &str,
    options: OcelFeatureOptions,
) -> Result<FeatureTable> {
    if !ocel.object_types().contains(object_type) {
        return Err(Error::InvalidArgument(format!("unknown object type `{object_type}`")));
    }
    let objects: Vec<_> = ocel.objects_of_type(object_type).filter(|o| o.bounds().is_some()).collect();
    let mut table = FeatureTable::new(objects.iter().map(|o| o.id.clone()).collect());
    let events = ocel.events();
    let per_object = |f: &dyn Fn(&crate::ocel::OcelObject) -> f64| -> Vec<f64> { objects.iter().map(|o| f(o)).collect() };

    let mut ending: BTreeMap<usize, usize> = BTreeMap::new();
    let mut starting: BTreeMap<usize, usize> = BTreeMap::new();
    for o in ocel.objects().values() {
        if let Some(b) = o.bounds() {
            *ending.entry(b.last).or_default() += 1;
            *starting.entry(b.first).or_default() += 1;
        }
    }

    table.push(
        "lifecycle_duration",
        "Duration of the lifecycle of the object",
        per_object(&|o| ocel.lifecycle(&o.id).map_or(0.0, |l| l.duration)),
    );
    table.push(
        "unique_activities",
        "Number of unique activities in the lifecycle of the object",
        per_object(&|o| {
            o.event_indices().iter().map(|&i| events[i].activity.as_str()).collect::<BTreeSet<_>>().len() as f64
        }),
    );
    table.push(
        "event_count",
        "Number of events in the lifecycle of the object",
        per_object(&|o| o.event_indices().len() as f64),
    );
    table.push(
        "co_ending",
        "Number of objects ending their lifecycle together with the current object",
        per_object(&|o| (ending[&o.bounds().unwrap().last] - 1) as f64),
    );
    table.push(
        "co_starting",
        "Number of objects starting their lifecycle together with the current object",
        per_object(&|o| (starting[&o.bounds().unwrap().first] - 1) as f64),
    );
    table.push(
        "start_timestamp",
        "Start timestamp of the lifecycle of the object",
        per_object(&|o| epoch_seconds(&events[o.bounds().unwrap().first].timestamp)),
    );
    table.push(
        "end_timestamp",
        "Completion timestamp of the lifecycle of the object",
        per_object(&|o| epoch_seconds(&events[o.bounds().unwrap().last].timestamp)),
    );

    let activities: BTreeSet<&str> = objects
        .iter()
        .flat_map(|o| o.event_indices().iter().map(|&i| events[i].activity.as_str()))
        .collect();
    for act in activities {
        table.push(
            format!("occurrences@{act}"),
            format!("Number of occurrences of the activity {act}"),
            per_object(&|o| o.event_indices().iter().filter(|&&i| events[i].activity == act).count() as f64),
        );
    }

    let interaction = interaction_graph(ocel).successors().into_iter().map(|(k, v)| (k.to_string(), v.into_iter().map(str::to_string).collect::<Vec<_>>())).collect::<BTreeMap<_, _>>();
    let neighbors = |o: &crate::ocel::OcelObject| interaction.get(&o.id).map(Vec::as_slice).unwrap_or_default();
    table.push(
        "interaction_degree",
        "Number of objects related in the object interaction graph",
        per_object(&|o| neighbors(o).len() as f64),
    );
    for t in ocel.object_types().iter().rev() {
        table.push(
            format!("interaction_degree@{t}"),
            format!("Number of object of type {t} related to the current object in the object interaction graph"),
            per_object(&|o| {
                neighbors(o).iter().filter(|n| ocel.object(n).is_some_and(|x| &x.object_type == t)).count() as f64
            }),
        );
    }

    let mut paths: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    for (row, o) in objects.iter().enumerate() {
        for w in o.event_indices().windows(2) {
            let key = (events[w[0]].activity.as_str(), events[w[1]].activity.as_str());
            paths.entry(key).or_insert_with(|| vec![0.0; objects.len()])[row] += 1.0;
        }
    }
    for ((a, b), values) in paths {
        if values.iter().filter(|v| **v != 0.0).count() >= options.min_path_support {
            table.push(
                format!("path@{a}->{b}"),
                format!("Frequency of the path \"{a}\" -> \"{b}\" in the lifecycle of the object"),
                values,
            );
        }
    }

    let descendants = descendants_graph(ocel);
    let inheritance = inheritance_graph(ocel);
    let count = |m: &BTreeMap<&str, BTreeSet<&str>>, id: &str| m.get(id).map_or(0, BTreeSet::len) as f64;
    let (d_pred, d_succ, i_succ) = (descendants.predecessors(), descendants.successors(), inheritance.successors());
    table.push(
        "descendants_predecessors",
        "Number of objects which precede the current object in the object descendants graph",
        per_object(&|o| count(&d_pred, &o.id)),
    );
    table.push(
        "inheritance_successors",
        "Number of objects which follow the current object in the object inheritance graph",
        per_object(&|o| count(&i_succ, &o.id)),
    );
    table.push(
        "descendants_successors",
        "Number of objects which follow the current object in the object descendants graph",
        per_object(&|o| count(&d_succ, &o.id)),
    );
    Ok(table)
}
