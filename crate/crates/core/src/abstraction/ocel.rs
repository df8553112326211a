use super::log::feature_line;
use super::{fit, lines_text, AbstractionKind, AbstractionText, Budget};
use crate::discovery::{Ocdfg, OcdfgArc};
use crate::error::Result;
use crate::features::FeatureSummary;
use crate::ocel::{Ocel, ProcessExecution};
use crate::pyfmt;

pub const OCEL_FEATURES_PREAMBLE: &str = "Beforehand, a bit of notions. Given an object-centric event log, the object interaction graph connects objects that are related in at least an event. The object descendants graph connects objects related in at least an event, when the lifecycle of the second object starts after the lifecycle of the first. The object inheritance graph connects objects when there an event that ends the lifecycle of the first object and starts the lifecycle of the second one.";

const OCDFG_HEADER: &str =
    "If I have an object-centric event log with the following directly follows graph (split between the different object types):";

/// Events of the execution in timestamp order, then its objects with their lifecycles.
pub fn abstract_ocel(ocel: &Ocel, execution: &ProcessExecution) -> AbstractionText {
    let mut out = String::from("events:\n\n");
    for &i in &execution.events {
        let ev = &ocel.events()[i];
        let related: Vec<&str> = ev
            .objects
            .iter()
            .filter(|o| execution.objects.contains(*o))
            .map(String::as_str)
            .collect();
        out.push_str(&format!(
            "{} ( related objects: {} )  timestamp: {}\n",
            ev.activity,
            related.join(", "),
            pyfmt::datetime_naive(&ev.timestamp)
        ));
    }
    out.push_str("\nobjects:\n\n");
    for id in &execution.objects {
        let Some(obj) = ocel.object(id) else { continue };
        match ocel.lifecycle(id) {
            Some(lc) => out.push_str(&format!(
                "{id} object type: {} ( lifecycle start: {} ; lifecycle end: {} ; lifecycle duration: {} )\n",
                obj.object_type,
                pyfmt::datetime_naive(&lc.start),
                pyfmt::datetime_naive(&lc.end),
                pyfmt::float(lc.duration)
            )),
            None => out.push_str(&format!("{id} object type: {}\n", obj.object_type)),
        }
    }
    AbstractionText::whole(AbstractionKind::Ocel, out)
}

type Ranked<'a> = Vec<(&'a str, Vec<(&'a (String, String), &'a OcdfgArc)>)>;

fn ocdfg_order(ocdfg: &Ocdfg) -> Ranked<'_> {
    let mut types: Ranked<'_> = ocdfg
        .types
        .iter()
        .filter(|(_, t)| !t.arcs.is_empty())
        .map(|(name, t)| {
            let mut arcs: Vec<_> = t.arcs.iter().collect();
            arcs.sort_by(|a, b| {
                b.1.event_frequency
                    .cmp(&a.1.event_frequency)
                    .then_with(|| b.1.object_frequency.cmp(&a.1.object_frequency))
                    .then_with(|| b.1.duration.total_cmp(&a.1.duration))
                    .then_with(|| b.0.cmp(a.0))
            });
            (name.as_str(), arcs)
        })
        .collect();
    let total = |arcs: &Vec<(&(String, String), &OcdfgArc)>| arcs.iter().map(|a| a.1.event_frequency).sum::<usize>();
    types.sort_by(|a, b| total(&b.1).cmp(&total(&a.1)).then_with(|| b.0.cmp(a.0)));
    types
}

/// Arcs grouped by object type. Under a budget, arcs are retained round by
/// round: the first arc of every type, then the second, and so on.
pub fn abstract_ocel_ocdfg(ocdfg: &Ocdfg, budget: Budget) -> Result<AbstractionText> {
    let types = ocdfg_order(ocdfg);
    let rendered: Vec<Vec<String>> = types
        .iter()
        .map(|(_, arcs)| {
            arcs.iter()
                .map(|((a, b), arc)| {
                    format!(
                        "  \"{a}\" -> \"{b}\" (frequency (number of events) = {}, frequency (number of objects) = {}, duration = {})",
                        arc.event_frequency,
                        arc.object_frequency,
                        pyfmt::fixed2(arc.duration)
                    )
                })
                .collect()
        })
        .collect();
    let longest = rendered.iter().map(Vec::len).max().unwrap_or(0);
    let lens: Vec<usize> = rendered.iter().map(Vec::len).collect();
    let priority: Vec<usize> = (0..longest)
        .flat_map(|rank| (0..lens.len()).filter(|&t| rank < lens[t]).collect::<Vec<_>>())
        .collect();
    fit(AbstractionKind::OcelOcdfg, budget, priority.len(), |k| {
        let mut kept = vec![0usize; rendered.len()];
        for &t in &priority[..k] {
            kept[t] += 1;
        }
        let mut lines = vec![OCDFG_HEADER.to_string()];
        for (t, (name, _)) in types.iter().enumerate().filter(|(t, _)| kept[*t] > 0) {
            lines.push(String::new());
            lines.push(format!("Object type: {name}"));
            lines.extend(rendered[t][..kept[t]].iter().cloned());
        }
        lines_text(lines)
    })
}

/// Features sorted by support, highest first. Features without support are not listed.
pub fn abstract_ocel_features(summary: &FeatureSummary) -> AbstractionText {
    let mut listed: Vec<_> = summary.features.iter().filter(|f| f.support > 0).collect();
    listed.sort_by_key(|f| std::cmp::Reverse(f.support));
    let lines = [OCEL_FEATURES_PREAMBLE.to_string(), "Given the following features:".into(), String::new()]
        .into_iter()
        .chain(listed.iter().map(|f| feature_line(&f.description, f.support, &f.quantiles)));
    AbstractionText::whole(AbstractionKind::OcelFeatures, lines_text(lines))
}
