//! Deterministic text renderings of logs, models and feature summaries.
//!
//! Truncatable kinds ([`AbstractionKind::is_truncatable`]) order their items
//! by relevance and keep the longest prefix of that order whose rendering
//! fits the [`Budget`]; the header is never dropped.

mod log;
mod models;
mod ocel;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use self::log::{abstract_case, abstract_log_attributes, abstract_log_case, abstract_log_features};
pub use self::models::{
    abstract_declare, abstract_dfg, abstract_petri_net, abstract_temporal_profile, abstract_variants,
    DECLARE_PREAMBLE, TEMPORAL_PROFILE_PREAMBLE,
};
pub use self::ocel::{abstract_ocel, abstract_ocel_features, abstract_ocel_ocdfg, OCEL_FEATURES_PREAMBLE};

pub const DEFAULT_BUDGET: usize = 10_000;

/// Maximum rendered length in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_chars: Option<usize>,
}

impl Budget {
    pub fn chars(n: usize) -> Self {
        Self { max_chars: Some(n) }
    }

    pub fn unlimited() -> Self {
        Self { max_chars: None }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::chars(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbstractionKind {
    Dfg,
    Variants,
    Case,
    LogAttributes,
    LogFeatures,
    PetriNet,
    Declare,
    TemporalProfile,
    Ocel,
    OcelOcdfg,
    OcelFeatures,
}

impl AbstractionKind {
    pub const ALL: [AbstractionKind; 11] = [
        AbstractionKind::Dfg,
        AbstractionKind::Variants,
        AbstractionKind::Case,
        AbstractionKind::LogAttributes,
        AbstractionKind::LogFeatures,
        AbstractionKind::PetriNet,
        AbstractionKind::Declare,
        AbstractionKind::TemporalProfile,
        AbstractionKind::Ocel,
        AbstractionKind::OcelOcdfg,
        AbstractionKind::OcelFeatures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AbstractionKind::Dfg => "dfg",
            AbstractionKind::Variants => "variants",
            AbstractionKind::Case => "case",
            AbstractionKind::LogAttributes => "log-attributes",
            AbstractionKind::LogFeatures => "log-features",
            AbstractionKind::PetriNet => "petri-net",
            AbstractionKind::Declare => "declare",
            AbstractionKind::TemporalProfile => "temporal-profile",
            AbstractionKind::Ocel => "ocel",
            AbstractionKind::OcelOcdfg => "ocel-ocdfg",
            AbstractionKind::OcelFeatures => "ocel-features",
        }
    }

    pub fn is_truncatable(self) -> bool {
        matches!(
            self,
            AbstractionKind::Dfg
                | AbstractionKind::Variants
                | AbstractionKind::LogFeatures
                | AbstractionKind::OcelOcdfg
        )
    }

    /// Rejects an explicit budget for kinds that are always rendered whole.
    pub fn check_budget(self, budget: Option<usize>) -> Result<()> {
        match budget {
            Some(_) if !self.is_truncatable() => Err(Error::NotTruncatable(self.name())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AbstractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AbstractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown abstraction kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractionText {
    pub kind: AbstractionKind,
    pub text: String,
    pub truncated: bool,
    pub omitted_items: usize,
}

impl AbstractionText {
    fn whole(kind: AbstractionKind, text: String) -> Self {
        Self { kind, text, truncated: false, omitted_items: 0 }
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

impl fmt::Display for AbstractionText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Renders the `k` highest-priority of `items` items for the largest `k`
/// that fits the budget. `render(k)` must grow with `k`.
fn fit(kind: AbstractionKind, budget: Budget, items: usize, render: impl Fn(usize) -> String) -> Result<AbstractionText> {
    let Some(max) = budget.max_chars else {
        return Ok(AbstractionText::whole(kind, render(items)));
    };
    let len = |s: &str| s.chars().count();
    let header = render(0);
    if len(&header) > max {
        return Err(Error::BudgetTooSmall { budget: max, header: len(&header) });
    }
    let full = render(items);
    if len(&full) <= max {
        return Ok(AbstractionText::whole(kind, full));
    }
    // largest k in [0, items) that fits
    let (mut lo, mut hi) = (0, items);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if len(&render(mid)) <= max {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(AbstractionText {
        kind,
        text: render(lo),
        truncated: true,
        omitted_items: items - lo,
    })
}

/// Joins lines, terminating each with a newline.
fn lines_text<S: AsRef<str>>(lines: impl IntoIterator<Item = S>) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(l.as_ref());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in AbstractionKind::ALL {
            assert_eq!(k.name().parse::<AbstractionKind>().unwrap(), k);
        }
        assert!("bpmn".parse::<AbstractionKind>().is_err());
    }

    #[test]
    fn budget_rejected_for_whole_kinds() {
        assert!(matches!(
            AbstractionKind::PetriNet.check_budget(Some(100)),
            Err(Error::NotTruncatable("petri-net"))
        ));
        assert!(AbstractionKind::PetriNet.check_budget(None).is_ok());
        assert!(AbstractionKind::Dfg.check_budget(Some(100)).is_ok());
    }

    #[test]
    fn fit_keeps_longest_prefix() {
        let items = ["aaaa", "bb", "c"];
        let render = |k: usize| lines_text(std::iter::once("H").chain(items[..k].iter().copied()));
        let t = fit(AbstractionKind::Dfg, Budget::chars(9), 3, render).unwrap();
        assert_eq!(t.text, "H\naaaa\n");
        assert_eq!((t.truncated, t.omitted_items), (true, 2));
        let t = fit(AbstractionKind::Dfg, Budget::chars(100), 3, render).unwrap();
        assert!(!t.truncated && t.omitted_items == 0);
        assert!(matches!(
            fit(AbstractionKind::Dfg, Budget::chars(1), 3, render),
            Err(Error::BudgetTooSmall { budget: 1, header: 2 })
        ));
    }
}
