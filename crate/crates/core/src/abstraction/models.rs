use super::{fit, lines_text, AbstractionKind, AbstractionText, Budget};
use crate::discovery::{DeclareModel, Dfg, PetriArc, PetriNet, TemporalProfile, VariantSet};
use crate::error::Result;
use crate::pyfmt;

/// Arcs by frequency descending, then `(source, target)` descending.
pub(crate) fn dfg_order(dfg: &Dfg) -> Vec<(&(String, String), &crate::discovery::DfgArc)> {
    let mut arcs: Vec<_> = dfg.arcs.iter().collect();
    arcs.sort_by(|a, b| b.1.frequency.cmp(&a.1.frequency).then_with(|| b.0.cmp(a.0)));
    arcs
}

pub fn abstract_dfg(dfg: &Dfg, budget: Budget) -> Result<AbstractionText> {
    let lines: Vec<String> = dfg_order(dfg)
        .into_iter()
        .map(|((a, b), arc)| {
            format!(
                "{a} -> {b} ( frequency = {}  performance = {} )",
                arc.frequency,
                pyfmt::float(arc.performance)
            )
        })
        .collect();
    fit(AbstractionKind::Dfg, budget, lines.len(), |k| {
        lines_text(["If I have a process with flow:", ""].into_iter().chain(lines[..k].iter().map(String::as_str)))
    })
}

pub fn abstract_variants(variants: &VariantSet, budget: Budget) -> Result<AbstractionText> {
    let mut sorted: Vec<_> = variants.variants.iter().collect();
    sorted.sort_by(|a, b| b.1.frequency.cmp(&a.1.frequency).then_with(|| b.0.cmp(a.0)));
    let lines: Vec<String> = sorted
        .into_iter()
        .map(|(seq, stats)| {
            format!(
                " {} ( frequency = {}  performance = {} )",
                seq.join(" -> "),
                stats.frequency,
                pyfmt::float(stats.performance)
            )
        })
        .collect();
    fit(AbstractionKind::Variants, budget, lines.len(), |k| {
        lines_text(
            ["If I have a process with the following process variants:", ""]
                .into_iter()
                .chain(lines[..k].iter().map(String::as_str)),
        )
    })
}

fn transition_repr(id: &str, label: Option<&str>) -> String {
    match label {
        Some(l) => format!("({id}, '{l}')"),
        None => format!("({id}, None)"),
    }
}

fn marking_repr(marking: &std::collections::BTreeMap<String, u32>) -> String {
    let mut items: Vec<String> = marking.iter().map(|(p, n)| format!("'{p}:{n}'")).collect();
    items.sort();
    format!("[{}]", items.join(", "))
}

fn bracket(mut items: Vec<String>) -> String {
    items.sort();
    format!("[ {} ]", items.join(", "))
}

/// The whole net; Petri nets are never truncated.
pub fn abstract_petri_net(net: &PetriNet) -> AbstractionText {
    let t = |id: &String| transition_repr(id, net.transitions.get(id).and_then(|l| l.as_deref()));
    let places = bracket(net.places.iter().cloned().collect());
    let transitions = bracket(net.transitions.iter().map(|(id, l)| transition_repr(id, l.as_deref())).collect());
    let arcs = bracket(
        net.arcs
            .iter()
            .map(|arc| match arc {
                PetriArc::PlaceToTransition { place, transition } => format!("{place}->{}", t(transition)),
                PetriArc::TransitionToPlace { transition, place } => format!("{}->{place}", t(transition)),
            })
            .collect(),
    );
    let text = lines_text([
        "If I have a Petri net:".to_string(),
        String::new(),
        format!("places: {places}"),
        format!("transitions: {transitions}"),
        format!("arcs: {arcs}"),
        String::new(),
        format!("initial marking: {}", marking_repr(&net.initial_marking)),
        format!("final marking: {}", marking_repr(&net.final_marking)),
    ]);
    AbstractionText::whole(AbstractionKind::PetriNet, text)
}

pub const DECLARE_PREAMBLE: &str = "\
I have a DECLARE declarative process model containing the following constraints (here we provide a short explanation):
Existence: the activity is executed at least once.
Absence: the activity is not executed.
Exactly 1: the activity is executed exactly one time.
Initialization: the trace starts with one of the given activities.
Responded existence: given a couple of activities (A, B), if A occurs then B also occurs.
Co-Existence: given a couple of activities (A, B), if A occurs then B also occurs.
Response: given a couple of activities (A, B), if A occurs then B also occurs in the future of the trace.
Precedence: given a couple of activities (A, B), if B occurs then also A occurs in the past of the trace.
Succession: given a couple of activities (A, B), both the response and precedence constraints are satisfied.
Alternate response, alternate precedence, alternate succession: as the constraints mentioned above, but strenghtened by specifying that the events must alternate without repetitions.
Chain response, chain precedence, chain succession: as the constraints mentioned above, strenghtened by imposing the directly-follows relation.
Non Co-Existence: given a couple of activities (A, B), if A occurs then B should not occur.
Non Succession and non Chain succession: given a couple of activities (A, B), B should not follow A.
";

pub fn abstract_declare(model: &DeclareModel) -> AbstractionText {
    let mut text = String::from(DECLARE_PREAMBLE);
    text.push_str("\nThese are the constraints of the model:\n");
    for c in &model.constraints {
        text.push_str(&c.to_string());
        text.push('\n');
    }
    AbstractionText::whole(AbstractionKind::Declare, text)
}

pub const TEMPORAL_PROFILE_PREAMBLE: &str = "The temporal profile is a model describing the average and the standard deviation of the times between couples of activities eventually (not only directly) following each other in at least a process execution (so in a trace <A,B,C,D> the couples (A,B) (A,C) (A,D) (B,C) (B,D) (C,D) shall be considered). Given a positive value ZETA, a deviation occurs in a process execution when the time between two activities is lower than AVG - ZETA * STDEV or greater than AVG + ZETA * STDEV. For this process, the model is:";

pub fn abstract_temporal_profile(profile: &TemporalProfile) -> AbstractionText {
    let body = profile.entries.iter().map(|((a, b), e)| {
        format!("{a} -> {b} :  AVG: {} s  STD: {} s", pyfmt::fixed2(e.avg), pyfmt::fixed2(e.std))
    });
    let text = lines_text([TEMPORAL_PROFILE_PREAMBLE.to_string(), String::new()].into_iter().chain(body));
    AbstractionText::whole(AbstractionKind::TemporalProfile, text)
}
