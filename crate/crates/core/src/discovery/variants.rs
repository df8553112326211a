use indexmap::IndexMap;
use serde::Serialize;

use super::Moments;
use crate::log::EventLog;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantStats {
    pub frequency: usize,
    /// Mean case throughput time in seconds.
    pub performance: f64,
}

/// Variants keyed by activity sequence, in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VariantSet {
    pub variants: IndexMap<Vec<String>, VariantStats>,
}

impl VariantSet {
    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn case_count(&self) -> usize {
        self.variants.values().map(|v| v.frequency).sum()
    }
}

impl Serialize for VariantSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        #[derive(Serialize)]
        struct Entry<'a> {
            activities: &'a [String],
            #[serde(flatten)]
            stats: &'a VariantStats,
        }
        let mut seq = s.serialize_seq(Some(self.variants.len()))?;
        for (activities, stats) in &self.variants {
            seq.serialize_element(&Entry { activities, stats })?;
        }
        seq.end()
    }
}

pub fn discover_variants(log: &EventLog) -> VariantSet {
    let mut acc: IndexMap<Vec<String>, Moments> = IndexMap::new();
    for case in log.cases() {
        let key: Vec<String> = case.activities().map(str::to_string).collect();
        acc.entry(key).or_default().push(case.throughput_seconds());
    }
    VariantSet {
        variants: acc
            .into_iter()
            .map(|(k, m)| (k, VariantStats { frequency: m.n, performance: m.average() }))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::fixtures::{from_rows, running_log};

    fn key(acts: &[&str]) -> Vec<String> {
        acts.iter().map(|a| format!("Activity {a}")).collect()
    }

    #[test]
    fn running_example() {
        let v = discover_variants(&running_log());
        assert_eq!(v.variants.len(), 3);
        assert_eq!(v.variants[&key(&["A", "C", "D"])], VariantStats { frequency: 1, performance: 2700.0 });
        assert_eq!(v.variants[&key(&["A", "B", "C"])], VariantStats { frequency: 1, performance: 1800.0 });
        assert_eq!(v.variants[&key(&["A", "B"])], VariantStats { frequency: 1, performance: 1800.0 });
    }

    #[test]
    fn duplicates_and_counts() {
        let log = from_rows(&[
            ("a", "X", "2023-01-01 00:00:00"),
            ("a", "Y", "2023-01-01 00:00:10"),
            ("b", "X", "2023-01-01 00:00:00"),
            ("b", "Y", "2023-01-01 00:00:30"),
            ("c", "Y", "2023-01-01 00:00:00"),
        ]);
        let v = discover_variants(&log);
        assert_eq!(v.variants.len(), 2);
        assert_eq!(v.variants[0], VariantStats { frequency: 2, performance: 20.0 });
        assert_eq!(v.case_count(), log.cases().len());
    }
}
