//! Prompt assembly, the LLM transport boundary, SQL generation and execution,
//! the hypothesis loop and fairness metrics.

mod execute;
mod fairness;
mod hypothesis;
mod sql;
mod transport;

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::abstraction::AbstractionText;
use crate::error::{Error, Result};

pub use execute::{execute_sql, CommandExecutor, ExecutionRecord, Executor, MockExecutor, ResultTable};
pub use fairness::{
    classification_report, classify_protected, compose_group_comparison, ground_truth_from_attribute,
    ClassificationReport,
};
pub use hypothesis::{hypothesis_cycle, verification_prompt, CycleRecord, Stage};
pub use sql::{compose_hypothesis_prompt, compose_sql_prompt, extract_sql, SqlHints, DEFAULT_DIALECT_HINT, HYPOTHESIS_QUESTION};
pub use transport::{llm_query, HttpTransport, LlmConfig, MockTransport, Transport, TransportMode};

/// A composed prompt with the warnings raised while composing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prompt {
    pub text: String,
    pub warnings: Vec<String>,
}

impl Prompt {
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// Abstraction blocks separated by blank lines, followed by the question.
pub fn compose_direct(blocks: &[&AbstractionText], question: &str) -> Prompt {
    let mut warnings = Vec::new();
    let mut text = blocks.iter().map(|b| b.text.as_str()).collect::<Vec<_>>().join("\n");
    if question.trim().is_empty() {
        warnings.push("empty question: the prompt contains only the abstraction".to_string());
    } else {
        text.push('\n');
        text.push_str(question);
    }
    Prompt { text, warnings }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Turn {
    pub role: Role,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Direct,
    Multi,
    Sql,
    Hypothesis,
}

/// A conversation with alternating user and assistant turns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptSession {
    pub strategy: Strategy,
    pub config: BTreeMap<String, String>,
    turns: Vec<Turn>,
}

impl PromptSession {
    pub fn new(strategy: Strategy, config: BTreeMap<String, String>) -> Self {
        Self { strategy, config, turns: Vec::new() }
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn last_reply(&self) -> Option<&str> {
        self.turns.last().filter(|t| t.role == Role::Assistant).map(|t| t.text.as_str())
    }

    /// Writes the turns not yet present in the transcript file.
    pub fn append_transcript(&self, path: &Path, already_written: usize) -> Result<usize> {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        for turn in self.turns.iter().skip(already_written) {
            write!(file, "=== {} ===\n{}\n", turn.role.as_str(), turn.text)?;
        }
        Ok(self.turns.len())
    }
}

/// Sends the full history plus `text` and appends both turns.
/// On transport failure the session is left unchanged.
pub fn session_turn(session: &mut PromptSession, text: &str, transport: &dyn Transport) -> Result<String> {
    if session.turns.last().is_some_and(|t| t.role == Role::User) {
        return Err(Error::InvalidArgument("session is waiting for an assistant reply".into()));
    }
    let mut history = session.turns.clone();
    history.push(Turn { role: Role::User, text: text.to_string() });
    let reply = transport.complete(&history)?;
    history.push(Turn { role: Role::Assistant, text: reply.clone() });
    session.turns = history;
    Ok(reply)
}
