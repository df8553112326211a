//! Object-centric event logs, object graphs and process executions.

mod graph;
mod jsonocel;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::log::Attributes;
use crate::time::{seconds_between, Timestamp};

pub use graph::{
    descendants_graph, inheritance_graph, interaction_graph, process_executions, GraphKind, ObjectGraph,
    ProcessExecution,
};
pub use jsonocel::parse_jsonocel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OcelEvent {
    pub id: String,
    pub activity: String,
    pub timestamp: Timestamp,
    /// Related object ids, lexically ordered.
    pub objects: BTreeSet<String>,
    pub attributes: Attributes,
}

/// First and last event of an object, as indices into [`Ocel::events`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LifecycleBounds {
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OcelObject {
    pub id: String,
    pub object_type: String,
    pub attributes: Attributes,
    /// Indices of the events relating to this object, in time order.
    events: Vec<usize>,
}

impl OcelObject {
    pub fn new(id: impl Into<String>, object_type: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            object_type: object_type.into(),
            attributes: Attributes::new(),
            events: Vec::new(),
        }
    }

    pub fn event_indices(&self) -> &[usize] {
        &self.events
    }

    /// `None` for objects that no event refers to.
    pub fn bounds(&self) -> Option<LifecycleBounds> {
        Some(LifecycleBounds { first: *self.events.first()?, last: *self.events.last()? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lifecycle<'a> {
    pub start: Timestamp,
    pub end: Timestamp,
    pub duration: f64,
    pub events: Vec<&'a OcelEvent>,
}

/// An immutable object-centric event log. Events are time ordered (stable on
/// input order) and object lifecycles are derived at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ocel {
    events: Vec<OcelEvent>,
    objects: BTreeMap<String, OcelObject>,
    object_types: BTreeSet<String>,
    warnings: Vec<String>,
}

impl Ocel {
    pub fn new(mut events: Vec<OcelEvent>, objects: Vec<OcelObject>) -> Result<Self> {
        let mut registry: BTreeMap<String, OcelObject> = BTreeMap::new();
        for mut obj in objects {
            if registry.contains_key(&obj.id) {
                return Err(Error::structural(format!("duplicate object id `{}`", obj.id)));
            }
            obj.events.clear();
            registry.insert(obj.id.clone(), obj);
        }
        let mut seen = BTreeSet::new();
        for ev in &events {
            if !seen.insert(ev.id.as_str()) {
                return Err(Error::structural(format!("duplicate event id `{}`", ev.id)));
            }
            if ev.activity.is_empty() {
                return Err(Error::structural(format!("event `{}` has an empty activity", ev.id)));
            }
            if ev.objects.is_empty() {
                return Err(Error::structural(format!("event `{}` relates to no object", ev.id)));
            }
            if let Some(missing) = ev.objects.iter().find(|o| !registry.contains_key(*o)) {
                return Err(Error::structural(format!(
                    "event `{}` refers to unknown object `{missing}`",
                    ev.id
                )));
            }
        }
        events.sort_by_key(|e| e.timestamp);
        for (i, ev) in events.iter().enumerate() {
            for o in &ev.objects {
                registry.get_mut(o).expect("validated above").events.push(i);
            }
        }
        let warnings = registry
            .values()
            .filter(|o| o.events.is_empty())
            .map(|o| format!("object `{}` is not related to any event", o.id))
            .collect();
        let object_types = registry.values().map(|o| o.object_type.clone()).collect();
        Ok(Self { events, objects: registry, object_types, warnings })
    }

    pub fn empty() -> Self {
        Self {
            events: Vec::new(),
            objects: BTreeMap::new(),
            object_types: BTreeSet::new(),
            warnings: Vec::new(),
        }
    }

    pub fn events(&self) -> &[OcelEvent] {
        &self.events
    }

    pub fn objects(&self) -> &BTreeMap<String, OcelObject> {
        &self.objects
    }

    pub fn object(&self, id: &str) -> Option<&OcelObject> {
        self.objects.get(id)
    }

    pub fn object_types(&self) -> &BTreeSet<String> {
        &self.object_types
    }

    pub fn objects_of_type<'a>(&'a self, object_type: &'a str) -> impl Iterator<Item = &'a OcelObject> + 'a {
        self.objects.values().filter(move |o| o.object_type == object_type)
    }

    /// Diagnostics gathered at construction (currently: unreferenced objects).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Start, end, duration in seconds and time-ordered events of an object;
    /// `None` when the object is unknown or has no events.
    pub fn lifecycle(&self, object_id: &str) -> Option<Lifecycle<'_>> {
        let obj = self.objects.get(object_id)?;
        let bounds = obj.bounds()?;
        let start = self.events[bounds.first].timestamp;
        let end = self.events[bounds.last].timestamp;
        Some(Lifecycle {
            start,
            end,
            duration: seconds_between(&start, &end),
            events: obj.events.iter().map(|&i| &self.events[i]).collect(),
        })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::log::fixtures::ts;

    pub const ORDER_ROWS: [(&str, &str, &str, &[&str]); 10] = [
        ("Event1", "Activity A", "2023-07-13 09:00:00", &["Order1", "Item1", "Item2", "Invoice1"]),
        ("Event2", "Activity B", "2023-07-13 09:15:00", &["Order1", "Item1", "Item2", "Invoice1"]),
        ("Event3", "Activity C", "2023-07-13 09:30:00", &["Order2", "Item3", "Invoice2"]),
        ("Event4", "Activity A", "2023-07-13 10:00:00", &["Order2", "Item3", "Invoice2"]),
        ("Event5", "Activity B", "2023-07-13 10:30:00", &["Order2", "Item4", "Invoice2"]),
        ("Event6", "Activity A", "2023-07-13 11:00:00", &["Order3", "Item5", "Item6", "Invoice3"]),
        ("Event7", "Activity C", "2023-07-13 11:30:00", &["Order3", "Item5", "Invoice3"]),
        ("Event8", "Activity D", "2023-07-13 11:45:00", &["Order3", "Item6", "Invoice3"]),
        ("Event9", "Activity A", "2023-07-13 12:00:00", &["Order4", "Item7", "Item8", "Invoice4"]),
        ("Event10", "Activity B", "2023-07-13 12:15:00", &["Order4", "Item8", "Invoice4"]),
    ];

    pub fn type_of(id: &str) -> &'static str {
        if id.starts_with("Order") {
            "Order"
        } else if id.starts_with("Item") {
            "OrderItems"
        } else {
            "Invoices"
        }
    }

    pub fn build(rows: &[(&str, &str, &str, &[&str])]) -> Ocel {
        let mut objects: BTreeMap<String, OcelObject> = BTreeMap::new();
        let events = rows
            .iter()
            .map(|(id, act, t, objs)| {
                for o in *objs {
                    objects.entry(o.to_string()).or_insert_with(|| OcelObject::new(*o, type_of(o)));
                }
                OcelEvent {
                    id: id.to_string(),
                    activity: act.to_string(),
                    timestamp: ts(t),
                    objects: objs.iter().map(|o| o.to_string()).collect(),
                    attributes: Attributes::new(),
                }
            })
            .collect();
        Ocel::new(events, objects.into_values().collect()).unwrap()
    }

    /// The order-management example.
    pub fn order_ocel() -> Ocel {
        build(&ORDER_ROWS)
    }
}
