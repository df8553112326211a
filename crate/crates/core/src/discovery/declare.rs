use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;

use serde::Serialize;

use crate::error::{Error, Result};

/// Constraint templates, declared in rendering order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DeclareKind {
    Existence,
    Absence,
    Exactly1,
    Initialization,
    RespondedExistence,
    CoExistence,
    Response,
    Precedence,
    Succession,
    AlternateResponse,
    AlternatePrecedence,
    AlternateSuccession,
    ChainResponse,
    ChainPrecedence,
    ChainSuccession,
    NonCoExistence,
    NonSuccession,
    NonChainSuccession,
}

impl DeclareKind {
    pub const ALL: [DeclareKind; 18] = [
        DeclareKind::Existence,
        DeclareKind::Absence,
        DeclareKind::Exactly1,
        DeclareKind::Initialization,
        DeclareKind::RespondedExistence,
        DeclareKind::CoExistence,
        DeclareKind::Response,
        DeclareKind::Precedence,
        DeclareKind::Succession,
        DeclareKind::AlternateResponse,
        DeclareKind::AlternatePrecedence,
        DeclareKind::AlternateSuccession,
        DeclareKind::ChainResponse,
        DeclareKind::ChainPrecedence,
        DeclareKind::ChainSuccession,
        DeclareKind::NonCoExistence,
        DeclareKind::NonSuccession,
        DeclareKind::NonChainSuccession,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DeclareKind::Existence => "Existence",
            DeclareKind::Absence => "Absence",
            DeclareKind::Exactly1 => "Exactly 1",
            DeclareKind::Initialization => "Initialization",
            DeclareKind::RespondedExistence => "Responded existence",
            DeclareKind::CoExistence => "Co-Existence",
            DeclareKind::Response => "Response",
            DeclareKind::Precedence => "Precedence",
            DeclareKind::Succession => "Succession",
            DeclareKind::AlternateResponse => "Alternate response",
            DeclareKind::AlternatePrecedence => "Alternate precedence",
            DeclareKind::AlternateSuccession => "Alternate succession",
            DeclareKind::ChainResponse => "Chain response",
            DeclareKind::ChainPrecedence => "Chain precedence",
            DeclareKind::ChainSuccession => "Chain succession",
            DeclareKind::NonCoExistence => "Non Co-Existence",
            DeclareKind::NonSuccession => "Non Succession",
            DeclareKind::NonChainSuccession => "Non Chain succession",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label().eq_ignore_ascii_case(label.trim()))
    }

    pub fn is_binary(self) -> bool {
        !matches!(
            self,
            DeclareKind::Existence | DeclareKind::Absence | DeclareKind::Exactly1 | DeclareKind::Initialization
        )
    }
}

impl fmt::Display for DeclareKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A unary constraint has `target == None`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Constraint {
    pub kind: DeclareKind,
    pub activation: String,
    pub target: Option<String>,
}

impl Constraint {
    pub fn unary(kind: DeclareKind, activity: impl Into<String>) -> Self {
        Self { kind, activation: activity.into(), target: None }
    }

    pub fn binary(kind: DeclareKind, a: impl Into<String>, b: impl Into<String>) -> Self {
        Self { kind, activation: a.into(), target: Some(b.into()) }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Some(b) => write!(f, "{}: {}, {}", self.kind, self.activation, b),
            None => write!(f, "{}: {}", self.kind, self.activation),
        }
    }
}

/// A set of constraints, ordered by kind then activities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DeclareModel {
    pub constraints: BTreeSet<Constraint>,
}

impl DeclareModel {
    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn insert(&mut self, c: Constraint) {
        self.constraints.insert(c);
    }
}

const BODY_MARKER: &str = "These are the constraints of the model:";

/// Reads `Kind: A` / `Kind: A, B` lines. Blank lines are skipped; when the
/// input contains the rendered model header, everything before it is ignored.
pub fn import_declare(mut input: impl Read) -> Result<DeclareModel> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| l.trim() == BODY_MARKER).map_or(0, |i| i + 1);
    let mut model = DeclareModel::default();
    for (i, line) in lines.iter().enumerate().skip(start) {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| Error::Line { line: line_no, message };
        let (kind_text, rest) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `Kind: activity`, got `{line}`")))?;
        let kind = DeclareKind::from_label(kind_text)
            .ok_or_else(|| bad(format!("unknown constraint kind `{}`", kind_text.trim())))?;
        let rest = rest.trim();
        let constraint = if kind.is_binary() {
            let (a, b) = rest
                .split_once(", ")
                .ok_or_else(|| bad(format!("{kind} needs two activities separated by `, `")))?;
            Constraint::binary(kind, a.trim(), b.trim())
        } else {
            Constraint::unary(kind, rest)
        };
        if constraint.activation.is_empty() || constraint.target.as_deref() == Some("") {
            return Err(bad("empty activity".into()));
        }
        model.insert(constraint);
    }
    Ok(model)
}
