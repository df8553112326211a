use std::collections::{BTreeMap, BTreeSet};

use super::FeatureTable;
use crate::log::{EventLog, ACTIVITY_KEY};

/// Which feature groups a traditional log produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogFeatureOptions {
    /// Adds the event count and throughput duration per case.
    pub case_stats: bool,
}

impl Default for LogFeatureOptions {
    fn default() -> Self {
        Self { case_stats: true }
    }
}

impl LogFeatureOptions {
    /// Activity and succession indicators only.
    pub fn indicators_only() -> Self {
        Self { case_stats: false }
    }
}

pub fn log_feature_table(log: &EventLog) -> FeatureTable {
    log_feature_table_with(log, LogFeatureOptions::default())
}

/// One row per case: activity presence indicators, directly-follows
/// succession indicators and, optionally, event count and throughput seconds.
/// Each indicator group is ordered by support, then name, both descending.
pub fn log_feature_table_with(log: &EventLog, options: LogFeatureOptions) -> FeatureTable {
    let cases = log.cases();
    let mut table = FeatureTable::new(cases.iter().map(|c| c.id.clone()).collect());
    if cases.is_empty() {
        return table;
    }

    let mut activities: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
    let mut successions: BTreeMap<(&str, &str), BTreeSet<usize>> = BTreeMap::new();
    for (i, case) in cases.iter().enumerate() {
        for ev in &case.events {
            activities.entry(&ev.activity).or_default().insert(i);
        }
        for w in case.events.windows(2) {
            successions.entry((&w[0].activity, &w[1].activity)).or_default().insert(i);
        }
    }
    let indicator = |rows: &BTreeSet<usize>| -> Vec<f64> {
        (0..cases.len()).map(|i| if rows.contains(&i) { 1.0 } else { 0.0 }).collect()
    };

    let mut acts: Vec<_> = activities.into_iter().collect();
    acts.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| b.0.cmp(a.0)));
    for (act, rows) in acts {
        table.push(
            format!("{ACTIVITY_KEY}@{act}"),
            format!("Value '{act}' for Event Attribute '{ACTIVITY_KEY}'"),
            indicator(&rows),
        );
    }

    let mut succ: Vec<_> = successions.into_iter().collect();
    succ.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| b.0.cmp(&a.0)));
    for ((a, b), rows) in succ {
        table.push(
            format!("{ACTIVITY_KEY}@{a}->{b}"),
            format!("Succession '{a}' -> '{b}' for the Values of the Attribute '{ACTIVITY_KEY}'"),
            indicator(&rows),
        );
    }

    if options.case_stats {
        table.push(
            "event_count",
            "Number of events in the case",
            cases.iter().map(|c| c.events.len() as f64).collect(),
        );
        table.push(
            "duration",
            "Throughput time of the case (seconds)",
            cases.iter().map(|c| c.throughput_seconds()).collect(),
        );
    }
    table
}
