//! DECLARE constraint checking and temporal-profile deviations.

use serde::Serialize;

use crate::discovery::{Constraint, DeclareKind, DeclareModel, TemporalProfile};
use crate::error::{Error, Result};
use crate::log::Event;
use crate::time::seconds_between;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub constraint: Constraint,
    pub satisfied: bool,
}

/// Evaluates every constraint of the model on one trace, in model order.
pub fn check_declare<S: AsRef<str>>(trace: &[S], model: &DeclareModel) -> Vec<Verdict> {
    let trace: Vec<&str> = trace.iter().map(AsRef::as_ref).collect();
    model
        .constraints
        .iter()
        .map(|c| Verdict { constraint: c.clone(), satisfied: holds(&trace, c) })
        .collect()
}

/// Whether a single constraint holds on the trace.
pub fn holds(trace: &[&str], c: &Constraint) -> bool {
    let a = c.activation.as_str();
    let b = c.target.as_deref().unwrap_or_default();
    let count = |x: &str| trace.iter().filter(|t| **t == x).count();
    let has = |x: &str| trace.contains(&x);
    match c.kind {
        DeclareKind::Existence => has(a),
        DeclareKind::Absence => !has(a),
        DeclareKind::Exactly1 => count(a) == 1,
        DeclareKind::Initialization => trace.first() == Some(&a),
        DeclareKind::RespondedExistence => !has(a) || has(b),
        DeclareKind::CoExistence => has(a) == has(b),
        DeclareKind::Response => response(trace, a, b),
        DeclareKind::Precedence => precedence(trace, a, b),
        DeclareKind::Succession => response(trace, a, b) && precedence(trace, a, b),
        DeclareKind::AlternateResponse => alternate_response(trace, a, b),
        DeclareKind::AlternatePrecedence => alternate_precedence(trace, a, b),
        DeclareKind::AlternateSuccession => alternate_response(trace, a, b) && alternate_precedence(trace, a, b),
        DeclareKind::ChainResponse => chain_response(trace, a, b),
        DeclareKind::ChainPrecedence => chain_precedence(trace, a, b),
        DeclareKind::ChainSuccession => chain_response(trace, a, b) && chain_precedence(trace, a, b),
        DeclareKind::NonCoExistence => !(has(a) && has(b)),
        DeclareKind::NonSuccession => match trace.iter().position(|t| *t == a) {
            Some(i) => !trace[i + 1..].contains(&b),
            None => true,
        },
        DeclareKind::NonChainSuccession => !trace.windows(2).any(|w| w[0] == a && w[1] == b),
    }
}

/// Every `a` is eventually followed by a `b`.
fn response(trace: &[&str], a: &str, b: &str) -> bool {
    (0..trace.len()).filter(|&i| trace[i] == a).all(|i| trace[i + 1..].contains(&b))
}

/// Every `b` is preceded by an `a`.
fn precedence(trace: &[&str], a: &str, b: &str) -> bool {
    (0..trace.len()).filter(|&j| trace[j] == b).all(|j| trace[..j].contains(&a))
}

/// Every `a` is followed by a `b` before the next `a`.
fn alternate_response(trace: &[&str], a: &str, b: &str) -> bool {
    (0..trace.len()).filter(|&i| trace[i] == a).all(|i| {
        let rest = &trace[i + 1..];
        let window = match rest.iter().position(|t| *t == a) {
            Some(next) => &rest[..next],
            None => rest,
        };
        window.contains(&b)
    })
}

/// Every `b` is preceded by an `a` after the previous `b`.
fn alternate_precedence(trace: &[&str], a: &str, b: &str) -> bool {
    let mut since_last_b = 0;
    for (j, t) in trace.iter().enumerate() {
        if *t == b {
            if !trace[since_last_b..j].contains(&a) {
                return false;
            }
            since_last_b = j + 1;
        }
    }
    true
}

fn chain_response(trace: &[&str], a: &str, b: &str) -> bool {
    (0..trace.len()).filter(|&i| trace[i] == a).all(|i| trace.get(i + 1) == Some(&b))
}

fn chain_precedence(trace: &[&str], a: &str, b: &str) -> bool {
    (0..trace.len()).filter(|&j| trace[j] == b).all(|j| j > 0 && trace[j - 1] == a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub source: String,
    pub target: String,
    pub observed: f64,
    pub avg: f64,
    pub std: f64,
    pub bound: Bound,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TemporalCheck {
    pub deviations: Vec<Deviation>,
    /// Eventually-follows pairs of the trace without a profile entry, in
    /// order of first occurrence.
    pub unmodeled: Vec<(String, String)>,
}

/// Flags every eventually-follows pair whose elapsed time lies strictly
/// outside `avg ± zeta * std`.
pub fn check_temporal(events: &[Event], profile: &TemporalProfile, zeta: f64) -> Result<TemporalCheck> {
    if zeta.is_nan() || zeta < 0.0 {
        return Err(Error::InvalidArgument(format!("zeta must be non-negative, got {zeta}")));
    }
    let mut out = TemporalCheck::default();
    for (i, first) in events.iter().enumerate() {
        for second in &events[i + 1..] {
            let observed = seconds_between(&first.timestamp, &second.timestamp);
            let Some(entry) = profile.get(&first.activity, &second.activity) else {
                let key = (first.activity.clone(), second.activity.clone());
                if !out.unmodeled.contains(&key) {
                    out.unmodeled.push(key);
                }
                continue;
            };
            let bound = if observed < entry.avg - zeta * entry.std {
                Bound::Lower
            } else if observed > entry.avg + zeta * entry.std {
                Bound::Upper
            } else {
                continue;
            };
            out.deviations.push(Deviation {
                source: first.activity.clone(),
                target: second.activity.clone(),
                observed,
                avg: entry.avg,
                std: entry.std,
                bound,
            });
        }
    }
    Ok(out)
}
