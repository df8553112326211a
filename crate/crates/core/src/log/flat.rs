//! One-row-per-event tables: flattening, delimiter-separated I/O and ingest.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use indexmap::IndexMap;
use serde::Serialize;

use super::{
    AttrValue, Attributes, Case, Event, EventLog, ACTIVITY_KEY, CASE_ID_KEY, CASE_INDEX_KEY, CASE_PREFIX,
    INDEX_KEY, RESOURCE_KEY, TIMESTAMP_KEY,
};
use crate::error::{Error, Result};
use crate::pyfmt;
use crate::time::parse_timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Text,
    Integer,
    Float,
    Boolean,
    Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// One row per event, with the case attributes replicated under `case:` names
/// and the derived `@@index` / `@@case_index` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatTable {
    columns: Vec<Column>,
    rows: Vec<Vec<Option<AttrValue>>>,
}

/// Which columns carry the case id, activity, timestamp and resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub case: String,
    pub activity: String,
    pub timestamp: String,
    pub resource: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        Self {
            case: CASE_ID_KEY.into(),
            activity: ACTIVITY_KEY.into(),
            timestamp: TIMESTAMP_KEY.into(),
            resource: Some(RESOURCE_KEY.into()),
        }
    }
}

fn kind_of(value: &AttrValue) -> ColumnKind {
    match value {
        AttrValue::Str(_) => ColumnKind::Text,
        AttrValue::Int(_) => ColumnKind::Integer,
        AttrValue::Float(_) => ColumnKind::Float,
        AttrValue::Bool(_) => ColumnKind::Boolean,
        AttrValue::Date(_) => ColumnKind::Timestamp,
    }
}

fn unify(a: ColumnKind, b: ColumnKind) -> ColumnKind {
    use ColumnKind::*;
    match (a, b) {
        (x, y) if x == y => x,
        (Integer, Float) | (Float, Integer) => Float,
        _ => Text,
    }
}

impl FlatTable {
    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Option<AttrValue>>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Flattens a log. Column order: case id, activity, timestamp, resource
    /// (when any event has one), event attributes, `case:` attributes, then
    /// `@@index` and `@@case_index`.
    pub fn from_log(log: &EventLog) -> Self {
        let mut event_keys: IndexMap<String, ColumnKind> = IndexMap::new();
        let mut case_keys: IndexMap<String, ColumnKind> = IndexMap::new();
        let mut has_resource = false;
        for case in log.cases() {
            for (k, v) in &case.attributes {
                let kind = kind_of(v);
                case_keys.entry(k.clone()).and_modify(|c| *c = unify(*c, kind)).or_insert(kind);
            }
            for ev in &case.events {
                has_resource |= ev.resource.is_some();
                for (k, v) in &ev.attributes {
                    let kind = kind_of(v);
                    event_keys.entry(k.clone()).and_modify(|c| *c = unify(*c, kind)).or_insert(kind);
                }
            }
        }
        event_keys.sort_keys();
        case_keys.sort_keys();

        let mut columns = vec![
            Column { name: CASE_ID_KEY.into(), kind: ColumnKind::Text },
            Column { name: ACTIVITY_KEY.into(), kind: ColumnKind::Text },
            Column { name: TIMESTAMP_KEY.into(), kind: ColumnKind::Timestamp },
        ];
        if has_resource {
            columns.push(Column { name: RESOURCE_KEY.into(), kind: ColumnKind::Text });
        }
        columns.extend(event_keys.iter().map(|(k, kind)| Column { name: k.clone(), kind: *kind }));
        columns.extend(
            case_keys
                .iter()
                .map(|(k, kind)| Column { name: format!("{CASE_PREFIX}{k}"), kind: *kind }),
        );
        columns.push(Column { name: INDEX_KEY.into(), kind: ColumnKind::Integer });
        columns.push(Column { name: CASE_INDEX_KEY.into(), kind: ColumnKind::Integer });

        let mut rows = Vec::with_capacity(log.event_count());
        let mut index = 0i64;
        for (case_index, case) in log.cases().iter().enumerate() {
            for ev in &case.events {
                let mut row = Vec::with_capacity(columns.len());
                row.push(Some(AttrValue::Str(case.id.clone())));
                row.push(Some(AttrValue::Str(ev.activity.clone())));
                row.push(Some(AttrValue::Date(ev.timestamp)));
                if has_resource {
                    row.push(ev.resource.clone().map(AttrValue::Str));
                }
                row.extend(event_keys.keys().map(|k| ev.attributes.get(k).cloned()));
                row.extend(case_keys.keys().map(|k| case.attributes.get(k).cloned()));
                row.push(Some(AttrValue::Int(index)));
                row.push(Some(AttrValue::Int(case_index as i64)));
                rows.push(row);
                index += 1;
            }
        }
        Self { columns, rows }
    }

    /// Writes the table as comma-separated text with a header row.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            writer.write_record(row.iter().map(|cell| match cell {
                None => String::new(),
                Some(AttrValue::Date(ts)) => pyfmt::iso8601(ts),
                Some(v) => v.to_string(),
            }))?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads delimiter-separated text with a header row. Column kinds are
    /// inferred from the non-empty cells: boolean, integer, float, ISO-8601
    /// timestamp, otherwise text.
    pub fn read_delimited(input: impl Read, delimiter: u8) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .flexible(false)
            .from_reader(input);
        let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let mut raw: Vec<Vec<String>> = Vec::new();
        for record in reader.records() {
            let record = record?;
            raw.push(record.iter().map(str::to_string).collect());
        }
        let columns: Vec<Column> = header
            .iter()
            .enumerate()
            .map(|(i, name)| Column {
                name: name.clone(),
                kind: infer_kind(raw.iter().map(|r| r[i].as_str())),
            })
            .collect();
        let rows = raw
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .zip(&columns)
                    .map(|(cell, col)| parse_cell(&cell, col.kind))
                    .collect()
            })
            .collect();
        Ok(Self { columns, rows })
    }

    /// Groups rows back into cases, in first-appearance order.
    pub fn to_event_log(&self, mapping: &ColumnMapping) -> Result<EventLog> {
        let find = |name: &str| self.column_index(name).ok_or_else(|| Error::UnknownColumn(name.to_string()));
        let case_col = find(&mapping.case)?;
        let act_col = find(&mapping.activity)?;
        let ts_col = find(&mapping.timestamp)?;
        let res_col = mapping.resource.as_deref().and_then(|r| self.column_index(r));

        let mapped: BTreeSet<usize> = [Some(case_col), Some(act_col), Some(ts_col), res_col]
            .into_iter()
            .flatten()
            .collect();
        let mut case_cols = Vec::new();
        let mut event_cols = Vec::new();
        for (i, col) in self.columns.iter().enumerate() {
            if mapped.contains(&i) || col.name.starts_with("@@") {
                continue;
            }
            match col.name.strip_prefix(CASE_PREFIX) {
                Some(stripped) => case_cols.push((i, stripped.to_string())),
                None => event_cols.push((i, col.name.clone())),
            }
        }

        let mut cases: IndexMap<String, Case> = IndexMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            let row_no = r + 1;
            let case_id = match &row[case_col] {
                Some(v) => v.to_string(),
                None => {
                    return Err(Error::Row { row: row_no, message: format!("empty `{}`", mapping.case) })
                }
            };
            let activity = match &row[act_col] {
                Some(v) => v.to_string(),
                None => {
                    return Err(Error::Row { row: row_no, message: format!("empty `{}`", mapping.activity) })
                }
            };
            let timestamp = match &row[ts_col] {
                Some(AttrValue::Date(t)) => *t,
                Some(other) => parse_timestamp(&other.to_string()).ok_or_else(|| Error::Row {
                    row: row_no,
                    message: format!("unparseable timestamp `{other}`"),
                })?,
                None => {
                    return Err(Error::Row { row: row_no, message: format!("empty `{}`", mapping.timestamp) })
                }
            };
            let mut attributes = Attributes::new();
            for (i, name) in &event_cols {
                if let Some(v) = &row[*i] {
                    attributes.insert(name.clone(), v.clone());
                }
            }
            let case = cases.entry(case_id.clone()).or_insert_with(|| Case::new(case_id, Vec::new()));
            for (i, name) in &case_cols {
                if let Some(v) = &row[*i] {
                    case.attributes.entry(name.clone()).or_insert_with(|| v.clone());
                }
            }
            case.events.push(Event {
                activity,
                timestamp,
                resource: res_col.and_then(|i| row[i].as_ref().map(ToString::to_string)),
                attributes,
            });
        }
        EventLog::new(cases.into_values().collect())
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "True" | "true" | "TRUE" => Some(true),
        "False" | "false" | "FALSE" => Some(false),
        _ => None,
    }
}

fn infer_kind<'a>(cells: impl Iterator<Item = &'a str>) -> ColumnKind {
    let (mut boolean, mut integer, mut float, mut timestamp) = (true, true, true, true);
    let mut any = false;
    for cell in cells.filter(|c| !c.is_empty()) {
        any = true;
        boolean &= parse_bool(cell).is_some();
        integer &= cell.parse::<i64>().is_ok();
        float &= cell.parse::<f64>().is_ok();
        timestamp &= cell.len() >= 10 && parse_timestamp(cell).is_some();
        if !(boolean || integer || float || timestamp) {
            return ColumnKind::Text;
        }
    }
    match () {
        _ if !any => ColumnKind::Text,
        _ if boolean => ColumnKind::Boolean,
        _ if integer => ColumnKind::Integer,
        _ if float => ColumnKind::Float,
        _ if timestamp => ColumnKind::Timestamp,
        _ => ColumnKind::Text,
    }
}

fn parse_cell(cell: &str, kind: ColumnKind) -> Option<AttrValue> {
    if cell.is_empty() {
        return None;
    }
    Some(match kind {
        ColumnKind::Boolean => AttrValue::Bool(parse_bool(cell)?),
        ColumnKind::Integer => AttrValue::Int(cell.parse().ok()?),
        ColumnKind::Float => AttrValue::Float(cell.parse().ok()?),
        ColumnKind::Timestamp => AttrValue::Date(parse_timestamp(cell)?),
        ColumnKind::Text => AttrValue::Str(cell.to_string()),
    })
}

/// Reads a delimiter-separated table and groups it into an [`EventLog`].
pub fn ingest_flat(input: impl Read, delimiter: u8, mapping: &ColumnMapping) -> Result<EventLog> {
    FlatTable::read_delimited(input, delimiter)?.to_event_log(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::fixtures::{running_log, ts};

    const RUNNING_CSV: &str = "case:concept:name,concept:name,time:timestamp\n\
        Case1,Activity A,2023-07-13 09:00:00\nCase1,Activity B,2023-07-13 09:15:00\n\
        Case1,Activity C,2023-07-13 09:30:00\nCase2,Activity A,2023-07-13 10:00:00\n\
        Case2,Activity B,2023-07-13 10:30:00\nCase3,Activity A,2023-07-13 11:00:00\n\
        Case3,Activity C,2023-07-13 11:30:00\nCase3,Activity D,2023-07-13 11:45:00\n";

    #[test]
    fn flatten_running_example() {
        let table = FlatTable::from_log(&running_log());
        assert_eq!(table.row_count(), 8);
        let names: Vec<_> = table.columns().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            ["case:concept:name", "concept:name", "time:timestamp", "@@index", "@@case_index"]
        );
        assert_eq!(
            table.rows()[0],
            vec![
                Some(AttrValue::Str("Case1".into())),
                Some(AttrValue::Str("Activity A".into())),
                Some(AttrValue::Date(ts("2023-07-13 09:00:00"))),
                Some(AttrValue::Int(0)),
                Some(AttrValue::Int(0)),
            ]
        );
    }

    #[test]
    fn case_index_sequence() {
        let log = crate::log::fixtures::from_rows(&[
            ("x", "A", "2023-01-01 00:00:00"),
            ("x", "B", "2023-01-01 00:01:00"),
            ("y", "A", "2023-01-01 00:00:00"),
            ("y", "B", "2023-01-01 00:02:00"),
        ]);
        let table = FlatTable::from_log(&log);
        let idx = table.column_index(CASE_INDEX_KEY).unwrap();
        let seq: Vec<_> = table.rows().iter().map(|r| r[idx].clone().unwrap()).collect();
        assert_eq!(seq, [0, 0, 1, 1].map(AttrValue::Int));
    }

    #[test]
    fn empty_log_gives_header_only() {
        let table = FlatTable::from_log(&EventLog::empty());
        assert_eq!(table.row_count(), 0);
        let mut out = Vec::new();
        table.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "case:concept:name,concept:name,time:timestamp,@@index,@@case_index\n"
        );
    }

    #[test]
    fn ingest_matches_xes_reader() {
        let log = ingest_flat(RUNNING_CSV.as_bytes(), b',', &ColumnMapping::default()).unwrap();
        assert_eq!(log, running_log());
    }

    #[test]
    fn zero_rows() {
        let log = ingest_flat(
            "case:concept:name,concept:name,time:timestamp\n".as_bytes(),
            b',',
            &ColumnMapping::default(),
        )
        .unwrap();
        assert!(log.cases().is_empty());
    }

    #[test]
    fn unknown_column_and_bad_timestamp() {
        let mapping = ColumnMapping { case: "case".into(), ..Default::default() };
        assert!(matches!(
            ingest_flat(RUNNING_CSV.as_bytes(), b',', &mapping),
            Err(Error::UnknownColumn(c)) if c == "case"
        ));
        let bad = "case:concept:name,concept:name,time:timestamp\nc,A,2023-01-01\nc,B,soon\n";
        match ingest_flat(bad.as_bytes(), b',', &ColumnMapping::default()).unwrap_err() {
            Error::Row { row, message } => {
                assert_eq!(row, 2);
                assert!(message.contains("soon"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_rows_are_kept_in_order() {
        let csv = "case:concept:name,concept:name,time:timestamp\n\
            c,A,2023-01-01 00:00:00\nc,B,2023-01-01 00:00:00\nc,A,2023-01-01 00:00:00\n";
        let log = ingest_flat(csv.as_bytes(), b',', &ColumnMapping::default()).unwrap();
        let acts: Vec<_> = log.cases()[0].activities().collect();
        assert_eq!(acts, ["A", "B", "A"]);
        let mut out = Vec::new();
        FlatTable::from_log(&log).write_csv(&mut out).unwrap();
        let again = ingest_flat(out.as_slice(), b',', &ColumnMapping::default()).unwrap();
        assert_eq!(again, log);
    }

    #[test]
    fn semicolon_delimited_with_custom_columns() {
        let csv = "id;task;when;who;case:region;cost\n7;A;2023-01-01T00:00:00Z;ann;north;1.5\n7;B;2023-01-01T01:00:00Z;;north;\n";
        let mapping = ColumnMapping {
            case: "id".into(),
            activity: "task".into(),
            timestamp: "when".into(),
            resource: Some("who".into()),
        };
        let log = ingest_flat(csv.as_bytes(), b';', &mapping).unwrap();
        let case = &log.cases()[0];
        assert_eq!(case.id, "7");
        assert_eq!(case.attributes["region"], AttrValue::Str("north".into()));
        assert_eq!(case.events[0].resource.as_deref(), Some("ann"));
        assert_eq!(case.events[1].resource, None);
        assert_eq!(case.events[0].attributes["cost"], AttrValue::Float(1.5));
        assert!(!case.events[1].attributes.contains_key("cost"));
    }
}
