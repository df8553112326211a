//! Number and time formatting in the conventions the textual abstractions use.
//!
//! Seconds and quantiles print like Python's `repr(float)` (`1350.0`,
//! `0.25`, `1e-05`); fixed two-decimal values round half away from zero.

use chrono::SecondsFormat;

use crate::time::Timestamp;

/// Shortest round-trip representation, laid out like Python's `repr(float)`.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let magnitude = x.abs();
    if (1e-4..1e16).contains(&magnitude) {
        let s = x.to_string();
        if s.contains('.') {
            s
        } else {
            s + ".0"
        }
    } else {
        // Rust: "1e16", "1.5e-5"; Python: "1e+16", "1.5e-05".
        let s = format!("{x:e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let (sign, digits) = match exponent.strip_prefix('-') {
            Some(d) => ('-', d),
            None => ('+', exponent),
        };
        format!("{mantissa}e{sign}{digits:0>2}")
    }
}

/// Two decimals, rounding half away from zero.
pub fn fixed2(x: f64) -> String {
    let scaled = (x * 100.0).round() / 100.0;
    let s = format!("{scaled:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// `2023-07-13 09:00:00+00:00`, with microseconds when present.
pub fn datetime_utc(ts: &Timestamp) -> String {
    format!("{}+00:00", datetime_naive(ts))
}

/// `2023-07-13 09:00:00`, with microseconds when present.
pub fn datetime_naive(ts: &Timestamp) -> String {
    let micros = ts.timestamp_subsec_micros();
    if micros == 0 {
        ts.format("%Y-%m-%d %H:%M:%S").to_string()
    } else {
        format!("{}.{micros:06}", ts.format("%Y-%m-%d %H:%M:%S"))
    }
}

/// `Timestamp('2000-03-14 23:00:00+0000', tz='UTC')`.
pub fn pandas_timestamp(ts: &Timestamp) -> String {
    format!("Timestamp('{}+0000', tz='UTC')", datetime_naive(ts))
}

/// ISO-8601 for machine-readable outputs (CSV cells, JSON dumps).
pub fn iso8601(ts: &Timestamp) -> String {
    ts.to_rfc3339_opts(SecondsFormat::AutoSi, false)
}

pub fn bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

/// `{0.0: 1.0, 0.25: 1.0, ...}` given already formatted values.
pub fn quantile_dict<'a>(entries: impl IntoIterator<Item = (f64, &'a str)>) -> String {
    let body: Vec<String> = entries
        .into_iter()
        .map(|(p, v)| format!("{}: {v}", float(p)))
        .collect();
    format!("{{{}}}", body.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::parse_timestamp;

    #[test]
    fn python_float_repr() {
        assert_eq!(float(1350.0), "1350.0");
        assert_eq!(float(900.0), "900.0");
        assert_eq!(float(0.25), "0.25");
        assert_eq!(float(2925.0), "2925.0");
        assert_eq!(float(1_689_238_800.0), "1689238800.0");
        assert_eq!(float(809_181.818_181_818_2), "809181.8181818182");
        assert_eq!(float(14.0625), "14.0625");
        assert_eq!(float(0.0), "0.0");
        assert_eq!(float(-2.5), "-2.5");
        assert_eq!(float(1e-5), "1e-05");
        assert_eq!(float(1.5e-7), "1.5e-07");
        assert_eq!(float(1e16), "1e+16");
        assert_eq!(float(2.5e20), "2.5e+20");
        assert_eq!(float(0.0001), "0.0001");
    }

    #[test]
    fn fixed_two_decimals() {
        assert_eq!(fixed2(636.396_103_067_892_8), "636.40");
        assert_eq!(fixed2(1350.0), "1350.00");
        assert_eq!(fixed2(0.0), "0.00");
        assert_eq!(fixed2(0.125), "0.13");
        assert_eq!(fixed2(-0.001), "0.00");
    }

    #[test]
    fn timestamps() {
        let ts = parse_timestamp("2023-07-13T09:00:00Z").unwrap();
        assert_eq!(datetime_utc(&ts), "2023-07-13 09:00:00+00:00");
        assert_eq!(datetime_naive(&ts), "2023-07-13 09:00:00");
        assert_eq!(
            pandas_timestamp(&ts),
            "Timestamp('2023-07-13 09:00:00+0000', tz='UTC')"
        );
        assert_eq!(iso8601(&ts), "2023-07-13T09:00:00+00:00");
        let frac = parse_timestamp("2023-07-13T09:00:00.5Z").unwrap();
        assert_eq!(datetime_naive(&frac), "2023-07-13 09:00:00.500000");
    }
}
