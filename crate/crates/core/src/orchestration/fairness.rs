use std::collections::BTreeMap;

use serde::Serialize;

use super::execute::{execute_sql, Executor};
use super::Prompt;
use crate::abstraction::{abstract_variants, Budget};
use crate::discovery::VariantSet;
use crate::error::{Error, Result};
use crate::log::{AttrValue, EventLog, FlatTable, CASE_PREFIX};

/// Labels every case of `table` protected when its id appears in the
/// `case_column` of the query result.
pub fn classify_protected(
    table: &FlatTable,
    sql: &str,
    executor: &dyn Executor,
    case_column: &str,
) -> Result<BTreeMap<String, bool>> {
    let idx = table.column_index(case_column).ok_or_else(|| Error::UnknownColumn(case_column.to_string()))?;
    let (result, _) = execute_sql(sql, table, executor)?;
    let selected: std::collections::BTreeSet<&str> = if result.rows.is_empty() {
        Default::default()
    } else {
        let col = result.column(case_column).ok_or_else(|| Error::Executor {
            sql: sql.to_string(),
            message: format!("result has no `{case_column}` column"),
        })?;
        result.rows.iter().filter_map(|r| r.get(col).map(String::as_str)).collect()
    };
    Ok(table
        .rows()
        .iter()
        .filter_map(|row| row[idx].as_ref().map(ToString::to_string))
        .map(|id| {
            let protected = selected.contains(id.as_str());
            (id, protected)
        })
        .collect())
}

fn truthy(v: &AttrValue) -> bool {
    match v {
        AttrValue::Bool(b) => *b,
        AttrValue::Int(i) => *i != 0,
        AttrValue::Float(x) => *x != 0.0,
        AttrValue::Str(s) => matches!(s.to_ascii_lowercase().as_str(), "true" | "1" | "yes"),
        AttrValue::Date(_) => false,
    }
}

/// Ground-truth labels from a boolean case attribute (with or without the
/// `case:` prefix). Cases lacking the attribute are non-protected.
pub fn ground_truth_from_attribute(log: &EventLog, attribute: &str) -> BTreeMap<String, bool> {
    let key = attribute.strip_prefix(CASE_PREFIX).unwrap_or(attribute);
    log.cases()
        .iter()
        .map(|c| (c.id.clone(), c.attributes.get(key).is_some_and(truthy)))
        .collect()
}

/// Confusion counts with protected as the positive class. Ratios with a zero
/// denominator are absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    /// tn / (tn + fn), the quantity reported as true negative rate.
    pub reported_true_negative_rate: Option<f64>,
    /// tn / (tn + fp).
    pub specificity: Option<f64>,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl ClassificationReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        Self {
            tp,
            fp,
            fn_,
            tn,
            precision: ratio(tp, tp + fp),
            recall: ratio(tp, tp + fn_),
            reported_true_negative_rate: ratio(tn, tn + fn_),
            specificity: ratio(tn, tn + fp),
        }
    }

    pub fn case_count(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Counts and ratios, ratios rounded to two decimals.
    pub fn render(&self) -> String {
        let r = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.2}"));
        format!(
            "tp: {}\nfp: {}\nfn: {}\ntn: {}\nprecision: {}\nrecall: {}\ntrue negative rate (tn/(tn+fn)): {}\nspecificity (tn/(tn+fp)): {}\n",
            self.tp,
            self.fp,
            self.fn_,
            self.tn,
            r(self.precision),
            r(self.recall),
            r(self.reported_true_negative_rate),
            r(self.specificity)
        )
    }
}

pub fn classification_report(
    predicted: &BTreeMap<String, bool>,
    truth: &BTreeMap<String, bool>,
) -> Result<ClassificationReport> {
    if predicted.len() != truth.len() || predicted.keys().zip(truth.keys()).any(|(a, b)| a != b) {
        let missing = predicted.keys().find(|k| !truth.contains_key(*k)).or_else(|| truth.keys().find(|k| !predicted.contains_key(*k)));
        return Err(Error::InvalidArgument(format!(
            "predicted and ground-truth case ids differ (e.g. `{}`)",
            missing.map_or("", String::as_str)
        )));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (id, &p) in predicted {
        match (p, truth[id]) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    Ok(ClassificationReport::from_counts(tp, fp, fn_, tn))
}

/// Labeled variant abstractions of both groups followed by the question.
pub fn compose_group_comparison(
    protected: &VariantSet,
    non_protected: &VariantSet,
    question: &str,
    budget: Budget,
) -> Result<Prompt> {
    let mut warnings = Vec::new();
    for (label, set) in [("protected", protected), ("non-protected", non_protected)] {
        if set.variants.is_empty() {
            warnings.push(format!("the {label} group has no cases"));
        }
    }
    let a = abstract_variants(protected, budget)?;
    let b = abstract_variants(non_protected, budget)?;
    let text = format!("Protected group:\n{}\nNon-protected group:\n{}\n{question}", a.text, b.text);
    Ok(Prompt { text, warnings })
}
