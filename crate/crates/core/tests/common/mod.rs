#![allow(dead_code)]

use std::fs::File;
use std::path::PathBuf;

use chrono::{Duration, TimeZone, Utc};
use pmtext_core::discovery::{Constraint, DeclareKind};
use pmtext_core::log::{parse_xes, AttrValue, Case, Event, EventLog};
use pmtext_core::ocel::parse_jsonocel;
use pmtext_core::Ocel;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture("golden").join(format!("{name}.txt"))).unwrap()
}

pub fn running_log() -> EventLog {
    parse_xes(File::open(fixture("running.xes")).unwrap()).unwrap()
}

pub fn orders() -> Ocel {
    parse_jsonocel(File::open(fixture("orders.jsonocel")).unwrap()).unwrap()
}

pub fn python_executor_template() -> String {
    format!("python3 {} {{table}} {{sql}}", fixture("sqlite_exec.py").display())
}

pub const ROAD_ACTIVITIES: [&str; 11] = [
    "Create Fine",
    "Send Fine",
    "Insert Fine Notification",
    "Add penalty",
    "Send for Credit Collection",
    "Payment",
    "Insert Date Appeal to Prefecture",
    "Send Appeal to Prefecture",
    "Receive Result Appeal from Prefecture",
    "Notify Result Appeal to Offender",
    "Appeal to Judge",
];

/// Seeded log with the given number of cases and events over the fine
/// management activities. Every case starts with "Create Fine".
pub fn fines_log(seed: u64, cases: usize, events: usize) -> EventLog {
    assert!(events >= 2 * cases && events <= 7 * cases);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut lengths: Vec<usize> = (0..cases).map(|_| rng.gen_range(2..=6)).collect();
    let mut total: usize = lengths.iter().sum();
    let mut i = 0;
    while total != events {
        let l = &mut lengths[i % cases];
        if total < events && *l < 7 {
            *l += 1;
            total += 1;
        } else if total > events && *l > 2 {
            *l -= 1;
            total -= 1;
        }
        i += 1;
    }
    let base = Utc.with_ymd_and_hms(2000, 1, 1, 0, 0, 0).unwrap();
    let log_cases = lengths
        .into_iter()
        .enumerate()
        .map(|(c, len)| {
            let mut t = base + Duration::hours(rng.gen_range(0..100_000));
            let mut evs = vec![Event::new(ROAD_ACTIVITIES[0], t)];
            for _ in 1..len {
                t += Duration::minutes(rng.gen_range(1..100_000));
                let weight: f64 = rng.gen();
                let idx = 1 + ((weight * weight) * 10.0) as usize;
                evs.push(Event::new(ROAD_ACTIVITIES[idx.min(10)], t));
            }
            Case::new(format!("F{c}"), evs)
        })
        .collect();
    EventLog::new(log_cases).unwrap()
}

pub const SENSITIVE: [&str; 4] = ["citizen", "gender", "german speaking", "religious"];

/// Seeded hiring-style log: boolean sensitive case attributes and a
/// `protected` ground-truth attribute set when citizen or gender is false.
pub fn hiring_log(seed: u64, cases: usize) -> EventLog {
    let mut rng = StdRng::seed_from_u64(seed);
    let base = Utc.with_ymd_and_hms(2023, 1, 1, 0, 0, 0).unwrap();
    let steps = ["Hand In Application", "Screening", "Interview", "Make Job Offer", "Reject"];
    let log_cases = (0..cases)
        .map(|c| {
            let mut case = Case::new(format!("H{c}"), Vec::new());
            let mut flags = Vec::new();
            for attr in SENSITIVE {
                let v = rng.gen_bool(0.7);
                flags.push(v);
                case.attributes.insert(attr.to_string(), AttrValue::Bool(v));
            }
            case.attributes.insert("protected".into(), AttrValue::Bool(!flags[0] || !flags[1]));
            let mut t = base + Duration::hours(c as i64);
            let n = rng.gen_range(2..=4);
            for (i, s) in steps.iter().take(n).enumerate() {
                t += Duration::minutes(rng.gen_range(5..600));
                let act = if i == n - 1 && rng.gen_bool(0.5) { steps[4] } else { s };
                case.events.push(Event::new(act, t));
            }
            case
        })
        .collect();
    EventLog::new(log_cases).unwrap()
}

pub fn all_words(letters: &[&'static str], max_len: usize) -> Vec<Vec<&'static str>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<&'static str>> = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|p| {
                letters.iter().map(move |l| {
                    let mut w = p.clone();
                    w.push(*l);
                    w
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

/// Definitional semantics by quantification over trace positions.
pub fn oracle(trace: &[&str], c: &Constraint) -> bool {
    let a = c.activation.as_str();
    let b = c.target.as_deref().unwrap_or("");
    let n = trace.len();
    let at = |i: usize, x: &str| trace[i] == x;
    let exists = |x: &str| (0..n).any(|i| at(i, x));
    let count = |x: &str| (0..n).filter(|&i| at(i, x)).count();
    let response = || (0..n).all(|i| !at(i, a) || (i + 1..n).any(|j| at(j, b)));
    let precedence = || (0..n).all(|j| !at(j, b) || (0..j).any(|i| at(i, a)));
    let alt_response = || {
        (0..n).all(|i| !at(i, a) || (i + 1..n).any(|j| at(j, b) && (i + 1..j).all(|k| !at(k, a))))
    };
    let alt_precedence = || {
        (0..n).all(|j| !at(j, b) || (0..j).any(|i| at(i, a) && (i + 1..j).all(|k| !at(k, b))))
    };
    let chain_response = || (0..n).all(|i| !at(i, a) || (i + 1 < n && at(i + 1, b)));
    let chain_precedence = || (0..n).all(|j| !at(j, b) || (j > 0 && at(j - 1, a)));
    match c.kind {
        DeclareKind::Existence => exists(a),
        DeclareKind::Absence => !exists(a),
        DeclareKind::Exactly1 => count(a) == 1,
        DeclareKind::Initialization => n > 0 && at(0, a),
        DeclareKind::RespondedExistence => !exists(a) || exists(b),
        DeclareKind::CoExistence => exists(a) == exists(b),
        DeclareKind::Response => response(),
        DeclareKind::Precedence => precedence(),
        DeclareKind::Succession => response() && precedence(),
        DeclareKind::AlternateResponse => alt_response(),
        DeclareKind::AlternatePrecedence => alt_precedence(),
        DeclareKind::AlternateSuccession => alt_response() && alt_precedence(),
        DeclareKind::ChainResponse => chain_response(),
        DeclareKind::ChainPrecedence => chain_precedence(),
        DeclareKind::ChainSuccession => chain_response() && chain_precedence(),
        DeclareKind::NonCoExistence => !(exists(a) && exists(b)),
        DeclareKind::NonSuccession => !(0..n).any(|i| at(i, a) && (i + 1..n).any(|j| at(j, b))),
        DeclareKind::NonChainSuccession => !(0..n.saturating_sub(1)).any(|i| at(i, a) && at(i + 1, b)),
    }
}

pub fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
