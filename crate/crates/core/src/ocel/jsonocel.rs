//! OCEL 1.0 JSON reader.

use std::io::Read;

use serde_json::{Map, Value};

use super::{Ocel, OcelEvent, OcelObject};
use crate::error::{Error, Result};
use crate::log::{AttrValue, Attributes};
use crate::time::parse_timestamp;

fn scalar(value: &Value) -> Option<AttrValue> {
    match value {
        Value::Bool(b) => Some(AttrValue::Bool(*b)),
        Value::Number(n) => Some(match n.as_i64() {
            Some(i) => AttrValue::Int(i),
            None => AttrValue::Float(n.as_f64()?),
        }),
        Value::String(s) => Some(AttrValue::Str(s.clone())),
        _ => None,
    }
}

fn attributes(map: Option<&Value>) -> Attributes {
    map.and_then(Value::as_object)
        .map(|m| m.iter().filter_map(|(k, v)| Some((k.clone(), scalar(v)?))).collect())
        .unwrap_or_default()
}

fn section<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>> {
    match root.get(key) {
        Some(Value::Object(m)) => Ok(m),
        Some(_) => Err(Error::Json(format!("`{key}` must be an object"))),
        None => Err(Error::Json(format!("missing `{key}`"))),
    }
}

fn required<'a>(entry: &'a Value, key: &str, what: &str, id: &str) -> Result<&'a Value> {
    entry.get(key).ok_or_else(|| Error::Json(format!("{what} `{id}`: missing `{key}`")))
}

/// Parses the `ocel:events` / `ocel:objects` layout of OCEL 1.0 JSON.
pub fn parse_jsonocel(mut input: impl Read) -> Result<Ocel> {
    let mut raw = String::new();
    input.read_to_string(&mut raw)?;
    let root: Value = serde_json::from_str(&raw)?;
    let root = root.as_object().ok_or_else(|| Error::Json("top level must be an object".into()))?;

    let mut objects = Vec::new();
    for (id, entry) in section(root, "ocel:objects")? {
        let object_type = required(entry, "ocel:type", "object", id)?
            .as_str()
            .ok_or_else(|| Error::Json(format!("object `{id}`: `ocel:type` must be a string")))?;
        let mut obj = OcelObject::new(id.clone(), object_type);
        obj.attributes = attributes(entry.get("ocel:ovmap"));
        objects.push(obj);
    }

    let mut events = Vec::new();
    for (id, entry) in section(root, "ocel:events")? {
        let activity = required(entry, "ocel:activity", "event", id)?
            .as_str()
            .ok_or_else(|| Error::Json(format!("event `{id}`: `ocel:activity` must be a string")))?;
        let raw_ts = required(entry, "ocel:timestamp", "event", id)?
            .as_str()
            .ok_or_else(|| Error::Json(format!("event `{id}`: `ocel:timestamp` must be a string")))?;
        let timestamp = parse_timestamp(raw_ts)
            .ok_or_else(|| Error::Json(format!("event `{id}`: unparseable timestamp `{raw_ts}`")))?;
        let omap = required(entry, "ocel:omap", "event", id)?
            .as_array()
            .ok_or_else(|| Error::Json(format!("event `{id}`: `ocel:omap` must be an array")))?;
        let related = omap
            .iter()
            .map(|o| {
                o.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Json(format!("event `{id}`: object ids must be strings")))
            })
            .collect::<Result<_>>()?;
        events.push(OcelEvent {
            id: id.clone(),
            activity: activity.to_string(),
            timestamp,
            objects: related,
            attributes: attributes(entry.get("ocel:vmap")),
        });
    }
    Ocel::new(events, objects)
}
