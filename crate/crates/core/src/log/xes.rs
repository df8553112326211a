//! XES reader.
//!
//! Understands the attribute subset used by event logs in practice:
//! `string`, `date`, `int`, `float`, `boolean` and `id` elements at trace
//! and event level. `list`/`container` children are flattened into dotted
//! keys; extensions, globals and classifiers are skipped. Gzip input is
//! detected by its magic bytes.

use std::io::Read;

use flate2::read::GzDecoder;
use quick_xml::events::{BytesStart, Event as XmlEvent};
use quick_xml::Reader;

use super::{AttrValue, Attributes, Case, Event, EventLog, ACTIVITY_KEY, RESOURCE_KEY, TIMESTAMP_KEY};
use crate::error::{Error, Result};
use crate::time::{parse_timestamp, Timestamp};

pub fn parse_xes(mut input: impl Read) -> Result<EventLog> {
    let mut raw = Vec::new();
    input.read_to_end(&mut raw)?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut inflated = Vec::new();
        GzDecoder::new(raw.as_slice()).read_to_end(&mut inflated)?;
        raw = inflated;
    }
    XesParser::new(&raw).run()
}

enum Frame {
    Log,
    Trace,
    Event,
    /// Inside an attribute element; children extend this key path.
    Attr(String),
    Skip,
}

#[derive(Default)]
struct EventDraft {
    activity: Option<String>,
    timestamp: Option<Timestamp>,
    resource: Option<String>,
    attributes: Attributes,
}

#[derive(Default)]
struct TraceDraft {
    id: Option<String>,
    attributes: Attributes,
    events: Vec<Event>,
}

struct XesParser<'a> {
    data: &'a [u8],
    reader: Reader<&'a [u8]>,
    stack: Vec<Frame>,
    cases: Vec<Case>,
    trace: Option<TraceDraft>,
    event: Option<EventDraft>,
}

const ATTR_TAGS: &[&[u8]] = &[b"string", b"date", b"int", b"float", b"boolean", b"id", b"list", b"container"];

impl<'a> XesParser<'a> {
    fn new(data: &'a [u8]) -> Self {
        let mut reader = Reader::from_reader(data);
        reader.config_mut().trim_text(true);
        Self {
            data,
            reader,
            stack: Vec::new(),
            cases: Vec::new(),
            trace: None,
            event: None,
        }
    }

    fn line_at(&self, pos: u64) -> usize {
        let end = (pos as usize).min(self.data.len());
        self.data[..end].iter().filter(|&&b| b == b'\n').count() + 1
    }

    fn xml_error(&self, message: impl ToString) -> Error {
        let pos = self.reader.error_position().max(self.reader.buffer_position());
        Error::Xml {
            line: self.line_at(pos),
            message: message.to_string(),
        }
    }

    fn trace_label(&self) -> String {
        match &self.trace {
            Some(TraceDraft { id: Some(id), .. }) => format!("trace `{id}`"),
            _ => format!("trace #{}", self.cases.len() + 1),
        }
    }

    fn run(mut self) -> Result<EventLog> {
        loop {
            let event = self.reader.read_event().map_err(|e| self.xml_error(e))?;
            match event {
                XmlEvent::Start(e) => {
                    let frame = self.open(&e)?;
                    self.stack.push(frame);
                }
                XmlEvent::Empty(e) => {
                    let frame = self.open(&e)?;
                    self.close(frame)?;
                }
                XmlEvent::End(_) => {
                    let frame = self
                        .stack
                        .pop()
                        .ok_or_else(|| self.xml_error("unbalanced closing tag"))?;
                    self.close(frame)?;
                }
                XmlEvent::Eof => break,
                _ => {}
            }
        }
        if !self.stack.is_empty() {
            return Err(self.xml_error("unexpected end of document"));
        }
        EventLog::new(self.cases)
    }

    fn open(&mut self, e: &BytesStart<'_>) -> Result<Frame> {
        let name = e.local_name();
        let tag = name.as_ref();
        let parent = self.stack.last();
        let frame = match (parent, tag) {
            (None, b"log") => Frame::Log,
            (Some(Frame::Log), b"trace") => {
                self.trace = Some(TraceDraft::default());
                Frame::Trace
            }
            (Some(Frame::Trace), b"event") => {
                self.event = Some(EventDraft::default());
                Frame::Event
            }
            (Some(Frame::Attr(path)), b"values") => Frame::Attr(path.clone()),
            (Some(Frame::Trace | Frame::Event | Frame::Attr(_)), t) if ATTR_TAGS.contains(&t) => {
                let (key, value) = self.read_attribute(e)?;
                let path = match parent {
                    Some(Frame::Attr(p)) => format!("{p}.{key}"),
                    _ => key,
                };
                let top_level = !matches!(parent, Some(Frame::Attr(_)));
                if let Some(v) = value {
                    self.assign(&path, v, top_level)?;
                }
                Frame::Attr(path)
            }
            _ => Frame::Skip,
        };
        Ok(frame)
    }

    fn read_attribute(&self, e: &BytesStart<'_>) -> Result<(String, Option<AttrValue>)> {
        let mut key = None;
        let mut value = None;
        for attr in e.attributes() {
            let attr = attr.map_err(|err| self.xml_error(err))?;
            let text = attr
                .unescape_value()
                .map_err(|err| self.xml_error(err))?
                .into_owned();
            match attr.key.as_ref() {
                b"key" => key = Some(text),
                b"value" => value = Some(text),
                _ => {}
            }
        }
        let key = key.ok_or_else(|| self.xml_error("attribute element without `key`"))?;
        let tag = e.local_name();
        let parsed = match (tag.as_ref(), value) {
            (b"list" | b"container", _) | (_, None) => None,
            (b"string" | b"id", Some(v)) => Some(AttrValue::Str(v)),
            (b"date", Some(v)) => Some(AttrValue::Date(parse_timestamp(&v).ok_or_else(|| {
                Error::structural(format!("{}: unparseable date `{v}` for `{key}`", self.trace_label()))
            })?)),
            (b"int", Some(v)) => Some(AttrValue::Int(v.trim().parse().map_err(|_| {
                Error::structural(format!("{}: invalid int `{v}` for `{key}`", self.trace_label()))
            })?)),
            (b"float", Some(v)) => Some(AttrValue::Float(v.trim().parse().map_err(|_| {
                Error::structural(format!("{}: invalid float `{v}` for `{key}`", self.trace_label()))
            })?)),
            (b"boolean", Some(v)) => Some(AttrValue::Bool(match v.trim().to_ascii_lowercase().as_str() {
                "true" | "1" => true,
                "false" | "0" => false,
                _ => {
                    return Err(Error::structural(format!(
                        "{}: invalid boolean `{v}` for `{key}`",
                        self.trace_label()
                    )))
                }
            })),
            _ => None,
        };
        Ok((key, parsed))
    }

    fn assign(&mut self, key: &str, value: AttrValue, top_level: bool) -> Result<()> {
        if let Some(event) = self.event.as_mut() {
            match (key, value, top_level) {
                (ACTIVITY_KEY, AttrValue::Str(s), true) => event.activity = Some(s),
                (TIMESTAMP_KEY, AttrValue::Date(t), true) => event.timestamp = Some(t),
                (RESOURCE_KEY, v, true) => event.resource = Some(v.to_string()),
                (k, v, _) => {
                    event.attributes.insert(k.to_string(), v);
                }
            }
        } else if let Some(trace) = self.trace.as_mut() {
            match (key, value, top_level) {
                (ACTIVITY_KEY, v, true) => trace.id = Some(v.to_string()),
                (k, v, _) => {
                    trace.attributes.insert(k.to_string(), v);
                }
            }
        }
        Ok(())
    }

    fn close(&mut self, frame: Frame) -> Result<()> {
        match frame {
            Frame::Event => {
                let draft = self.event.take().unwrap_or_default();
                let label = self.trace_label();
                let position = self.trace.as_ref().map_or(0, |t| t.events.len());
                let activity = draft.activity.ok_or_else(|| {
                    Error::structural(format!("{label}: event {position} has no `concept:name`"))
                })?;
                let timestamp = draft.timestamp.ok_or_else(|| {
                    Error::structural(format!("{label}: event {position} has no `time:timestamp`"))
                })?;
                if let Some(trace) = self.trace.as_mut() {
                    trace.events.push(Event {
                        activity,
                        timestamp,
                        resource: draft.resource,
                        attributes: draft.attributes,
                    });
                }
            }
            Frame::Trace => {
                let draft = self.trace.take().unwrap_or_default();
                let id = draft.id.unwrap_or_else(|| (self.cases.len() + 1).to_string());
                self.cases.push(Case {
                    id,
                    attributes: draft.attributes,
                    events: draft.events,
                });
            }
            _ => {}
        }
        Ok(())
    }
}
