//! Timestamp parsing shared by the XES, CSV and OCEL readers.

use chrono::{DateTime, NaiveDate, NaiveDateTime, TimeZone, Utc};

pub type Timestamp = DateTime<Utc>;

const NAIVE_FORMATS: &[&str] = &[
    "%Y-%m-%dT%H:%M:%S%.f",
    "%Y-%m-%d %H:%M:%S%.f",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M",
];

const OFFSET_FORMATS: &[&str] = &["%Y-%m-%d %H:%M:%S%.f%:z", "%Y-%m-%d %H:%M:%S%.f%z", "%Y-%m-%dT%H:%M:%S%.f%z"];

/// Parses an ISO-8601 instant. Values without an offset are taken as UTC.
pub fn parse_timestamp(raw: &str) -> Option<Timestamp> {
    let s = raw.trim();
    if s.is_empty() {
        return None;
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    for fmt in OFFSET_FORMATS {
        if let Ok(dt) = DateTime::parse_from_str(s, fmt) {
            return Some(dt.with_timezone(&Utc));
        }
    }
    let naive = s.strip_suffix('Z').unwrap_or(s);
    for fmt in NAIVE_FORMATS {
        if let Ok(dt) = NaiveDateTime::parse_from_str(naive, fmt) {
            return Some(Utc.from_utc_datetime(&dt));
        }
    }
    NaiveDate::parse_from_str(naive, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| Utc.from_utc_datetime(&dt))
}

/// Elapsed seconds from `from` to `to`, with sub-second precision.
pub fn seconds_between(from: &Timestamp, to: &Timestamp) -> f64 {
    let delta = *to - *from;
    match delta.num_nanoseconds() {
        Some(ns) => ns as f64 / 1e9,
        None => delta.num_milliseconds() as f64 / 1e3,
    }
}

/// Seconds since the Unix epoch.
pub fn epoch_seconds(ts: &Timestamp) -> f64 {
    ts.timestamp() as f64 + f64::from(ts.timestamp_subsec_nanos()) / 1e9
}

pub fn from_epoch_seconds(secs: f64) -> Option<Timestamp> {
    let whole = secs.floor();
    let nanos = ((secs - whole) * 1e9).round() as u32;
    Utc.timestamp_opt(whole as i64, nanos.min(999_999_999)).single()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_common_layouts() {
        let expected = Utc.with_ymd_and_hms(2023, 7, 13, 9, 0, 0).unwrap();
        for raw in [
            "2023-07-13T09:00:00Z",
            "2023-07-13T09:00:00+00:00",
            "2023-07-13T11:00:00+02:00",
            "2023-07-13 09:00:00",
            "2023-07-13 09:00:00+00:00",
            "2023-07-13T09:00:00.000",
            "2023-07-13 10:00:00+0100",
        ] {
            assert_eq!(parse_timestamp(raw), Some(expected), "{raw}");
        }
        assert_eq!(parse_timestamp("yesterday"), None);
        assert_eq!(parse_timestamp(""), None);
    }

    #[test]
    fn epoch_round_trip() {
        let ts = parse_timestamp("2023-07-13 09:00:00").unwrap();
        assert_eq!(epoch_seconds(&ts), 1_689_238_800.0);
        assert_eq!(from_epoch_seconds(1_689_238_800.0), Some(ts));
    }
}
