use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use quick_xml::events::Event as XmlEvent;
use quick_xml::escape::escape;
use quick_xml::Reader;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "direction", rename_all = "snake_case")]
pub enum PetriArc {
    PlaceToTransition { place: String, transition: String },
    TransitionToPlace { transition: String, place: String },
}

/// A place/transition net with markings. Transitions map to their label;
/// `None` marks a silent transition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PetriNet {
    pub places: BTreeSet<String>,
    pub transitions: BTreeMap<String, Option<String>>,
    pub arcs: BTreeSet<PetriArc>,
    pub initial_marking: BTreeMap<String, u32>,
    pub final_marking: BTreeMap<String, u32>,
}

impl PetriNet {
    /// Checks that arcs connect a place with a transition and that markings
    /// reference existing places.
    pub fn validate(&self) -> Result<()> {
        for arc in &self.arcs {
            let (p, t) = match arc {
                PetriArc::PlaceToTransition { place, transition } => (place, transition),
                PetriArc::TransitionToPlace { transition, place } => (place, transition),
            };
            if !self.places.contains(p) {
                return Err(Error::structural(format!("arc refers to unknown place `{p}`")));
            }
            if !self.transitions.contains_key(t) {
                return Err(Error::structural(format!("arc refers to unknown transition `{t}`")));
            }
        }
        for p in self.initial_marking.keys().chain(self.final_marking.keys()) {
            if !self.places.contains(p) {
                return Err(Error::structural(format!("marking refers to unknown place `{p}`")));
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct Draft {
    net: PetriNet,
    raw_arcs: Vec<(String, String)>,
    final_marking: Option<BTreeMap<String, u32>>,
}

fn attr(e: &quick_xml::events::BytesStart<'_>, key: &[u8]) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(|err| Error::Xml { line: 0, message: err.to_string() })?;
        if a.key.as_ref() == key {
            let v = a
                .unescape_value()
                .map_err(|err| Error::Xml { line: 0, message: err.to_string() })?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

/// Reads the place/transition/arc subset of PNML. Transitions without a
/// `<name>` or flagged `$invisible$` are silent. The final marking comes from
/// a `<finalmarkings>` section, else every place without outgoing arcs gets
/// one token.
pub fn import_pnml(mut input: impl Read) -> Result<PetriNet> {
    let mut raw = Vec::new();
    input.read_to_end(&mut raw)?;
    let line_at = |pos: u64| raw[..(pos as usize).min(raw.len())].iter().filter(|&&b| b == b'\n').count() + 1;
    let mut reader = Reader::from_reader(raw.as_slice());
    reader.config_mut().trim_text(true);

    let mut draft = Draft::default();
    let mut stack: Vec<Vec<u8>> = Vec::new();
    // Element currently collecting text, with the id it belongs to.
    let mut current_place: Option<String> = None;
    let mut current_transition: Option<(String, bool)> = None;
    let mut marking_place: Option<String> = None;

    loop {
        let ev = reader.read_event().map_err(|e| Error::Xml {
            line: line_at(reader.error_position()),
            message: e.to_string(),
        })?;
        let wrap = |e: Error| match e {
            Error::Xml { message, .. } => Error::Xml { line: line_at(reader.buffer_position()), message },
            other => other,
        };
        match ev {
            XmlEvent::Start(ref e) | XmlEvent::Empty(ref e) => {
                let tag = e.local_name().as_ref().to_vec();
                let in_final = stack.iter().any(|t| t == b"finalmarkings");
                match tag.as_slice() {
                    b"place" if in_final => marking_place = attr(e, b"idref").map_err(wrap)?,
                    b"place" => {
                        let id = attr(e, b"id").map_err(wrap)?.ok_or_else(|| Error::structural("place without id"))?;
                        draft.net.places.insert(id.clone());
                        current_place = Some(id);
                    }
                    b"transition" => {
                        let id = attr(e, b"id")
                            .map_err(wrap)?
                            .ok_or_else(|| Error::structural("transition without id"))?;
                        draft.net.transitions.insert(id.clone(), None);
                        current_transition = Some((id, false));
                    }
                    b"toolspecific" => {
                        if attr(e, b"activity").map_err(wrap)?.as_deref() == Some("$invisible$") {
                            if let Some((_, invisible)) = current_transition.as_mut() {
                                *invisible = true;
                            }
                        }
                    }
                    b"arc" => {
                        let source = attr(e, b"source").map_err(wrap)?;
                        let target = attr(e, b"target").map_err(wrap)?;
                        match (source, target) {
                            (Some(s), Some(t)) => draft.raw_arcs.push((s, t)),
                            _ => return Err(Error::structural("arc without source or target")),
                        }
                    }
                    b"finalmarkings" => {
                        draft.final_marking.get_or_insert_with(BTreeMap::new);
                    }
                    _ => {}
                }
                if matches!(ev, XmlEvent::Start(_)) {
                    stack.push(tag);
                } else {
                    close(&tag, &mut draft, &mut current_place, &mut current_transition, &mut marking_place);
                }
            }
            XmlEvent::Text(t) => {
                let text = t.unescape().map_err(|e| Error::Xml {
                    line: line_at(reader.buffer_position()),
                    message: e.to_string(),
                })?;
                let text = text.trim();
                let parent = stack.iter().rev().nth(1).map(Vec::as_slice);
                let in_final = stack.iter().any(|t| t == b"finalmarkings");
                if stack.last().map(Vec::as_slice) != Some(b"text") {
                    continue;
                }
                match parent {
                    Some(b"initialMarking") => {
                        if let Some(p) = &current_place {
                            let n = parse_tokens(text)?;
                            if n > 0 {
                                draft.net.initial_marking.insert(p.clone(), n);
                            }
                        }
                    }
                    Some(b"name") if stack.len() >= 3 && stack[stack.len() - 3] == b"transition" => {
                        if let Some((id, _)) = &current_transition {
                            draft.net.transitions.insert(id.clone(), Some(text.to_string()));
                        }
                    }
                    Some(b"place") if in_final => {
                        if let (Some(p), Some(fm)) = (&marking_place, draft.final_marking.as_mut()) {
                            let n = parse_tokens(text)?;
                            if n > 0 {
                                fm.insert(p.clone(), n);
                            }
                        }
                    }
                    _ => {}
                }
            }
            XmlEvent::End(_) => {
                let tag = stack.pop().ok_or_else(|| Error::Xml {
                    line: line_at(reader.buffer_position()),
                    message: "unbalanced closing tag".into(),
                })?;
                close(&tag, &mut draft, &mut current_place, &mut current_transition, &mut marking_place);
            }
            XmlEvent::Eof => break,
            _ => {}
        }
    }

    let Draft { mut net, raw_arcs, final_marking } = draft;
    for (s, t) in raw_arcs {
        let arc = if net.places.contains(&s) && net.transitions.contains_key(&t) {
            PetriArc::PlaceToTransition { place: s, transition: t }
        } else if net.transitions.contains_key(&s) && net.places.contains(&t) {
            PetriArc::TransitionToPlace { transition: s, place: t }
        } else {
            let unknown = if net.places.contains(&s) || net.transitions.contains_key(&s) { t } else { s };
            return Err(Error::structural(format!("arc refers to unknown or same-kind node `{unknown}`")));
        };
        net.arcs.insert(arc);
    }
    net.final_marking = match final_marking {
        Some(fm) => fm,
        None => {
            let with_outgoing: BTreeSet<&String> = net
                .arcs
                .iter()
                .filter_map(|a| match a {
                    PetriArc::PlaceToTransition { place, .. } => Some(place),
                    _ => None,
                })
                .collect();
            net.places
                .iter()
                .filter(|p| !with_outgoing.contains(p))
                .map(|p| (p.clone(), 1))
                .collect()
        }
    };
    net.validate()?;
    Ok(net)
}

fn close(
    tag: &[u8],
    draft: &mut Draft,
    current_place: &mut Option<String>,
    current_transition: &mut Option<(String, bool)>,
    marking_place: &mut Option<String>,
) {
    match tag {
        b"transition" => {
            if let Some((id, true)) = current_transition.take() {
                draft.net.transitions.insert(id, None);
            }
        }
        b"place" if marking_place.take().is_none() => *current_place = None,
        _ => {}
    }
}

fn parse_tokens(text: &str) -> Result<u32> {
    text.parse()
        .map_err(|_| Error::structural(format!("invalid token count `{text}`")))
}

/// Writes the net as PNML, with silent transitions flagged `$invisible$` and
/// the final marking in a `<finalmarkings>` section.
pub fn write_pnml(net: &PetriNet) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pnml>\n  <net id=\"net1\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n    <page id=\"n0\">\n");
    for p in &net.places {
        let p = escape(p.as_str());
        out.push_str(&format!("      <place id=\"{p}\">\n        <name>\n          <text>{p}</text>\n        </name>\n"));
        if let Some(n) = net.initial_marking.get(p.as_ref()) {
            out.push_str(&format!("        <initialMarking>\n          <text>{n}</text>\n        </initialMarking>\n"));
        }
        out.push_str("      </place>\n");
    }
    for (id, label) in &net.transitions {
        let id = escape(id.as_str());
        out.push_str(&format!("      <transition id=\"{id}\">\n"));
        match label {
            Some(l) => out.push_str(&format!("        <name>\n          <text>{}</text>\n        </name>\n", escape(l.as_str()))),
            None => out.push_str(&format!(
                "        <name>\n          <text>{id}</text>\n        </name>\n        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"$invisible$\" localNodeID=\"{id}\"/>\n"
            )),
        }
        out.push_str("      </transition>\n");
    }
    for (i, arc) in net.arcs.iter().enumerate() {
        let (s, t) = match arc {
            PetriArc::PlaceToTransition { place, transition } => (place, transition),
            PetriArc::TransitionToPlace { transition, place } => (transition, place),
        };
        out.push_str(&format!(
            "      <arc id=\"a{i}\" source=\"{}\" target=\"{}\"/>\n",
            escape(s.as_str()),
            escape(t.as_str())
        ));
    }
    out.push_str("    </page>\n    <finalmarkings>\n      <marking>\n");
    for (p, n) in &net.final_marking {
        out.push_str(&format!(
            "        <place idref=\"{}\">\n          <text>{n}</text>\n        </place>\n",
            escape(p.as_str())
        ));
    }
    out.push_str("      </marking>\n    </finalmarkings>\n  </net>\n</pnml>\n");
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const B: &str = "0309dbf9-52f9-42a5-a73a-79da3a2ea20a";
    pub const C: &str = "37ede306-4d81-499a-8dbe-b23b5a31372a";
    pub const A: &str = "5f5a9dd2-b140-4e88-ac73-b05c3ab17b63";
    pub const D: &str = "eba11fc0-143b-4765-adb0-2b736b348f88";

    /// The sequential net with skips of the running example.
    pub fn running_net() -> PetriNet {
        let mut net = PetriNet::default();
        for p in ["source", "p_3", "p_4", "p_5", "sink"] {
            net.places.insert(p.into());
        }
        for (id, label) in [(A, "Activity A"), (B, "Activity B"), (C, "Activity C"), (D, "Activity D")] {
            net.transitions.insert(id.into(), Some(label.into()));
        }
        for s in ["skip_1", "skip_2", "skip_3"] {
            net.transitions.insert(s.into(), None);
        }
        let tp = |t: &str, p: &str| PetriArc::TransitionToPlace { transition: t.into(), place: p.into() };
        let pt = |p: &str, t: &str| PetriArc::PlaceToTransition { place: p.into(), transition: t.into() };
        net.arcs = [
            tp(A, "p_3"),
            tp(B, "p_4"),
            tp(C, "p_5"),
            tp(D, "sink"),
            tp("skip_1", "p_4"),
            tp("skip_2", "sink"),
            tp("skip_3", "sink"),
            pt("p_3", B),
            pt("p_3", "skip_1"),
            pt("p_4", C),
            pt("p_4", "skip_2"),
            pt("p_5", D),
            pt("p_5", "skip_3"),
            pt("source", A),
        ]
        .into_iter()
        .collect();
        net.initial_marking.insert("source".into(), 1);
        net.final_marking.insert("sink".into(), 1);
        net
    }
}
