//! Object interaction, descendants and inheritance graphs; process executions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::Ocel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Interaction,
    Descendants,
    Inheritance,
}

/// Edges between object ids. Interaction edges are undirected and stored once
/// with the lexically smaller id first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectGraph {
    pub kind: GraphKind,
    pub edges: BTreeSet<(String, String)>,
}

impl ObjectGraph {
    pub fn contains(&self, a: &str, b: &str) -> bool {
        let key = |x: &str, y: &str| (x.to_string(), y.to_string());
        match self.kind {
            GraphKind::Interaction => self.edges.contains(&key(a.min(b), a.max(b))),
            _ => self.edges.contains(&key(a, b)),
        }
    }

    /// Neighbors for undirected graphs, targets of outgoing edges otherwise.
    pub fn successors(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut out: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (a, b) in &self.edges {
            out.entry(a).or_default().insert(b);
            if self.kind == GraphKind::Interaction {
                out.entry(b).or_default().insert(a);
            }
        }
        out
    }

    /// Neighbors for undirected graphs, sources of incoming edges otherwise.
    pub fn predecessors(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut out: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (a, b) in &self.edges {
            out.entry(b).or_default().insert(a);
            if self.kind == GraphKind::Interaction {
                out.entry(a).or_default().insert(b);
            }
        }
        out
    }
}

/// Undirected edge for every pair of objects sharing at least one event.
pub fn interaction_graph(ocel: &Ocel) -> ObjectGraph {
    let mut edges = BTreeSet::new();
    for ev in ocel.events() {
        let objs: Vec<&String> = ev.objects.iter().collect();
        for (i, a) in objs.iter().enumerate() {
            for b in &objs[i + 1..] {
                edges.insert(((*a).clone(), (*b).clone()));
            }
        }
    }
    ObjectGraph { kind: GraphKind::Interaction, edges }
}

/// `a -> b` when the objects share an event and `b` starts strictly after `a`.
pub fn descendants_graph(ocel: &Ocel) -> ObjectGraph {
    let start = |id: &str| ocel.object(id).and_then(|o| o.bounds()).map(|b| ocel.events()[b.first].timestamp);
    let mut edges = BTreeSet::new();
    for (a, b) in &interaction_graph(ocel).edges {
        let (sa, sb) = (start(a), start(b));
        if sb > sa {
            edges.insert((a.clone(), b.clone()));
        } else if sa > sb {
            edges.insert((b.clone(), a.clone()));
        }
    }
    ObjectGraph { kind: GraphKind::Descendants, edges }
}

/// `a -> b` when one event is both the last of `a` and the first of `b`.
pub fn inheritance_graph(ocel: &Ocel) -> ObjectGraph {
    let mut ending: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    let mut starting: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for obj in ocel.objects().values() {
        if let Some(b) = obj.bounds() {
            ending.entry(b.last).or_default().push(&obj.id);
            starting.entry(b.first).or_default().push(&obj.id);
        }
    }
    let mut edges = BTreeSet::new();
    for (event, enders) in &ending {
        let Some(starters) = starting.get(event) else { continue };
        for a in enders {
            for b in starters {
                if a != b {
                    edges.insert((a.to_string(), b.to_string()));
                }
            }
        }
    }
    ObjectGraph { kind: GraphKind::Inheritance, edges }
}

/// A connected component of the interaction graph with its events.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcessExecution {
    pub objects: BTreeSet<String>,
    /// Indices into [`Ocel::events`], time ordered.
    pub events: Vec<usize>,
}

impl ProcessExecution {
    /// The whole log viewed as a single execution.
    pub fn whole(ocel: &Ocel) -> Self {
        Self {
            objects: ocel.objects().keys().cloned().collect(),
            events: (0..ocel.events().len()).collect(),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components ordered by earliest event, then smallest object id.
/// Objects without events form trailing singleton executions.
pub fn process_executions(ocel: &Ocel) -> Vec<ProcessExecution> {
    let ids: Vec<&String> = ocel.objects().keys().collect();
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    for ev in ocel.events() {
        let mut members = ev.objects.iter().map(|o| index[o.as_str()]);
        if let Some(first) = members.next() {
            let root = find(&mut parent, first);
            for m in members {
                let r = find(&mut parent, m);
                if r != root {
                    parent[r] = root;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().insert((*id).clone());
    }
    let mut execs: Vec<ProcessExecution> = groups
        .into_values()
        .map(|objects| {
            let events: BTreeSet<usize> = objects
                .iter()
                .flat_map(|o| ocel.objects()[o].event_indices().iter().copied())
                .collect();
            ProcessExecution { objects, events: events.into_iter().collect() }
        })
        .collect();
    execs.sort_by(|a, b| {
        let key = |e: &ProcessExecution| (e.events.first().copied().unwrap_or(usize::MAX), e.objects.first().cloned());
        key(a).cmp(&key(b))
    });
    execs
}
