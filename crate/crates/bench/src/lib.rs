//! Synthetic workloads for the benchmarks.

use chrono::{Duration, TimeZone, Utc};
use pmtext_core::{Case, Event, EventLog};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const ACTIVITIES: [&str; 8] = ["Register", "Check", "Approve", "Reject", "Notify", "Pay", "Remind", "Close"];

/// A seeded log of `cases` cases with 2 to 8 events each.
pub fn synthetic_log(seed: u64, cases: usize) -> EventLog {
    let mut rng = StdRng::seed_from_u64(seed);
    let base = Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap();
    let cases = (0..cases)
        .map(|c| {
            let mut t = base + Duration::minutes(rng.gen_range(0..1_000_000));
            let len = rng.gen_range(2..=8);
            let events = (0..len)
                .map(|i| {
                    let activity = if i == 0 { ACTIVITIES[0] } else { ACTIVITIES[rng.gen_range(1..ACTIVITIES.len())] };
                    t += Duration::minutes(rng.gen_range(1..10_000));
                    Event::new(activity, t)
                })
                .collect();
            Case::new(format!("C{c}"), events)
        })
        .collect();
    EventLog::new(cases).expect("case ids are unique")
}
