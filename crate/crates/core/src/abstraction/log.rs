use super::{fit, lines_text, AbstractionKind, AbstractionText, Budget};
use crate::error::{Error, Result};
use crate::features::FeatureSummary;
use crate::log::{AttributeSummary, Case, EventLog, SummaryBody, ACTIVITY_KEY, CASE_INDEX_KEY, INDEX_KEY, RESOURCE_KEY};
use crate::pyfmt;

/// Case attributes, then one line per event. `case_index` and
/// `first_event_index` fill the `@@case_index` / `@@index` fields.
pub fn abstract_case(case: &Case, case_index: usize, first_event_index: usize) -> AbstractionText {
    let mut out = String::from("If I have a case with the following (case) attributes:\n\n");
    out.push_str(&format!("{ACTIVITY_KEY} = {}\n", case.id));
    for (k, v) in &case.attributes {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out.push_str("\nthe case contains the following events (the activity of the event is reported first):\n\n");
    for (i, ev) in case.events.iter().enumerate() {
        let mut items = vec![format!("timestamp = {} ; ", pyfmt::datetime_utc(&ev.timestamp))];
        if let Some(r) = &ev.resource {
            items.push(format!("{RESOURCE_KEY} = {r} ; "));
        }
        items.extend(ev.attributes.iter().map(|(k, v)| format!("{k} = {v} ; ")));
        items.push(format!("{CASE_INDEX_KEY} = {case_index} ; "));
        items.push(format!("{INDEX_KEY} = {} ; ", first_event_index + i));
        out.push_str(&format!("{} ( {})\n", ev.activity, items.join(" ")));
    }
    AbstractionText::whole(AbstractionKind::Case, out)
}

/// [`abstract_case`] for the case with the given id.
pub fn abstract_log_case(log: &EventLog, case_id: &str) -> Result<AbstractionText> {
    let (index, case) = log
        .case(case_id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown case id `{case_id}`")))?;
    Ok(abstract_case(case, index, log.case_offsets()[index]))
}

/// One line per attribute: quantiles for numeric and timestamp attributes,
/// top values with frequencies for categorical ones.
pub fn abstract_log_attributes(profile: &[AttributeSummary]) -> AbstractionText {
    let lines = profile.iter().map(|s| {
        let head = format!("{}  empty: {}", s.name, s.empty);
        match &s.body {
            SummaryBody::Numeric(q) => {
                let vals: Vec<(f64, String)> = q.iter().map(|(p, v)| (*p, pyfmt::float(*v))).collect();
                format!("{head}  quantiles: {}", pyfmt::quantile_dict(vals.iter().map(|(p, v)| (*p, v.as_str()))))
            }
            SummaryBody::Timestamp(q) => {
                let vals: Vec<(f64, String)> = q.iter().map(|(p, t)| (*p, pyfmt::pandas_timestamp(t))).collect();
                format!("{head}  quantiles: {}", pyfmt::quantile_dict(vals.iter().map(|(p, v)| (*p, v.as_str()))))
            }
            SummaryBody::Categorical(values) => {
                let items: Vec<String> = values.iter().map(|(v, n)| format!("({v}; freq. {n})")).collect();
                format!("{head} values: {}", items.join(" "))
            }
            SummaryBody::Empty => match s.kind {
                crate::log::AttrKind::Categorical => format!("{head} values:"),
                _ => format!("{head}  quantiles: {{}}"),
            },
        }
    });
    AbstractionText::whole(AbstractionKind::LogAttributes, lines_text(lines))
}

pub(crate) fn feature_line(description: &str, support: usize, quantiles: &[(f64, f64)]) -> String {
    let vals: Vec<(f64, String)> = quantiles.iter().map(|(p, v)| (*p, pyfmt::float(*v))).collect();
    format!(
        "{description}:    number of non-zero values: {support} ; quantiles of the non-zero: {}",
        pyfmt::quantile_dict(vals.iter().map(|(p, v)| (*p, v.as_str())))
    )
}

/// Features in summary order; under a budget the lowest-support features
/// are dropped first. Features without support are not listed.
pub fn abstract_log_features(summary: &FeatureSummary, budget: Budget) -> Result<AbstractionText> {
    let listed: Vec<_> = summary.features.iter().filter(|f| f.support > 0).collect();
    let lines: Vec<String> = listed.iter().map(|f| feature_line(&f.description, f.support, &f.quantiles)).collect();
    let mut priority: Vec<usize> = (0..listed.len()).collect();
    priority.sort_by(|&a, &b| listed[b].support.cmp(&listed[a].support));
    fit(AbstractionKind::LogFeatures, budget, lines.len(), |k| {
        let mut keep = vec![false; lines.len()];
        for &i in &priority[..k] {
            keep[i] = true;
        }
        let kept = lines.iter().zip(&keep).filter(|(_, k)| **k).map(|(l, _)| l.as_str());
        lines_text([" Given the following features:", ""].into_iter().chain(kept))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{log_feature_table_with, summarize, LogFeatureOptions};
    use crate::log::fixtures::{running_log, ts};
    use crate::log::{attribute_profile, AttrValue, Event};

    #[test]
    fn case_with_extra_attribute() {
        let mut ev = Event::new("Pay", ts("2023-01-01 10:00:00"));
        ev.attributes.insert("amount".into(), AttrValue::Float(12.5));
        ev.resource = Some("Ann".into());
        let case = Case::new("c9", vec![ev]);
        let text = abstract_case(&case, 4, 17).text;
        assert!(text.ends_with(
            "Pay ( timestamp = 2023-01-01 10:00:00+00:00 ;  org:resource = Ann ;  amount = 12.5 ;  @@case_index = 4 ;  @@index = 17 ; )\n"
        ));
    }

    #[test]
    fn minimal_case() {
        let case = Case::new("x", vec![Event::new("A", ts("2023-01-01 00:00:00"))]);
        let text = abstract_case(&case, 0, 0).text;
        assert_eq!(text.matches("\n\n").count(), 3);
    }

    #[test]
    fn case_by_id_uses_offsets() {
        let text = abstract_log_case(&running_log(), "Case2").unwrap().text;
        assert!(text.contains("@@case_index = 1 ;  @@index = 3 ; )"));
        assert!(abstract_log_case(&running_log(), "nope").is_err());
    }

    #[test]
    fn attribute_lines() {
        let text = abstract_log_attributes(&attribute_profile(&running_log())).text;
        assert!(text.contains(
            "concept:name  empty: 0 values: (Activity A; freq. 3) (Activity C; freq. 2) (Activity B; freq. 2) (Activity D; freq. 1)\n"
        ));
        assert!(text.starts_with("time:timestamp  empty: 0  quantiles: {0.0: Timestamp('2023-07-13 09:00:00+0000', tz='UTC')"));
    }

    #[test]
    fn empty_attribute_body() {
        let summary = AttributeSummary {
            name: "x".into(),
            kind: crate::log::AttrKind::Numeric,
            empty: 3,
            body: SummaryBody::Empty,
        };
        assert_eq!(abstract_log_attributes(&[summary]).text, "x  empty: 3  quantiles: {}\n");
    }

    #[test]
    fn features_tight_budget_keeps_highest_support() {
        let s = summarize(&log_feature_table_with(&running_log(), LogFeatureOptions::indicators_only()));
        let full = abstract_log_features(&s, Budget::unlimited()).unwrap();
        let budget = " Given the following features:\n\n".len() + full.text.lines().nth(2).unwrap().len() + 1;
        let t = abstract_log_features(&s, Budget::chars(budget)).unwrap();
        assert_eq!(t.text.lines().count(), 3);
        assert!(t.text.contains("Value 'Activity A'"));
        assert_eq!(t.omitted_items, 7);
        let empty = abstract_log_features(&FeatureSummary::default(), Budget::default()).unwrap();
        assert_eq!(empty.text, " Given the following features:\n\n");
    }
}
