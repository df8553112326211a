use serde::Serialize;

use crate::abstraction::AbstractionText;
use crate::error::{Error, Result};
use crate::log::{ACTIVITY_KEY, CASE_ID_KEY, RESOURCE_KEY, TIMESTAMP_KEY};

pub const DEFAULT_DIALECT_HINT: &str =
    "Can you provide me a DuckDB SQL query.\nYou should use the EPOCH function of DuckDB to get the timestamp from the date.";

pub const HYPOTHESIS_QUESTION: &str =
    "can you formulate some hypothesis on the given process?\nplease also formulate for every hypothesis a SQL query.";

/// Names the LLM needs to write SQL against the flattened log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SqlHints {
    pub table: String,
    pub case_column: String,
    pub activity_column: String,
    pub timestamp_column: String,
    pub resource_column: Option<String>,
    /// Opaque text inserted verbatim before the table notes.
    pub dialect_hint: String,
}

impl Default for SqlHints {
    fn default() -> Self {
        Self {
            table: "dataframe".into(),
            case_column: CASE_ID_KEY.into(),
            activity_column: ACTIVITY_KEY.into(),
            timestamp_column: TIMESTAMP_KEY.into(),
            resource_column: Some(RESOURCE_KEY.into()),
            dialect_hint: DEFAULT_DIALECT_HINT.into(),
        }
    }
}

impl SqlHints {
    fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("table", &self.table),
            ("case column", &self.case_column),
            ("activity column", &self.activity_column),
            ("timestamp column", &self.timestamp_column),
        ] {
            if v.trim().is_empty() {
                return Err(Error::InvalidArgument(format!("SQL hints: empty {what}")));
            }
        }
        Ok(())
    }

    fn paragraphs(&self) -> [String; 3] {
        let table = format!(
            "The data is stored in a Pandas dataframe where each row is an event having the provided attributes (so there are no separate table containing the variant).\nThe dataframe is called \"{}\".",
            self.table
        );
        let resource = self
            .resource_column
            .as_ref()
            .map(|r| format!(", the resource is stored inside the attribute \"{r}\""))
            .unwrap_or_default();
        let columns = format!(
            "Please consider the following information: the case identifier is called \"{}\", the activity is stored inside the attribute \"{}\", the timestamp is stored inside the attribute \"{}\"{resource}.\nThere is not a variant column but that can be obtained as concatenation of the activities of a case.\nThere is not a duration column but that can be obtained as difference between the timestamp of the first and the last event.",
            self.case_column, self.activity_column, self.timestamp_column
        );
        [self.dialect_hint.clone(), table, columns]
    }
}

/// Question followed by the hint paragraphs, each closed by a blank line.
pub fn compose_sql_prompt(question: &str, hints: &SqlHints) -> Result<String> {
    hints.validate()?;
    let mut out = format!("{question}\n\n");
    for p in hints.paragraphs() {
        out.push_str(&p);
        out.push_str("\n\n");
    }
    Ok(out)
}

/// Variants and attribute abstractions followed by a request for
/// hypotheses with SQL queries to check them.
pub fn compose_hypothesis_prompt(variants: &AbstractionText, attributes: &AbstractionText, hints: &SqlHints) -> Result<String> {
    hints.validate()?;
    let variant_lines = variants.text.split_once('\n').map_or("", |(_, rest)| rest);
    let mut out = format!("If I have the following process variants:\n\n{variant_lines}\n\nand attributes in the log:\n");
    out.push_str(&attributes.text);
    out.push('\n');
    out.push_str(HYPOTHESIS_QUESTION);
    out.push_str("\n\n\n");
    for p in hints.paragraphs() {
        out.push_str(&p);
        out.push('\n');
    }
    Ok(out)
}

fn fenced_block(text: &str) -> Option<&str> {
    let start = text.find("```")?;
    let after = &text[start + 3..];
    let body_start = after.find('\n')? + 1;
    let body = &after[body_start..];
    let end = body.find("```")?;
    Some(&body[..end])
}

fn statement_start(text: &str) -> Option<usize> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim_start();
        let upper: String = trimmed.chars().take(7).collect::<String>().to_ascii_uppercase();
        let starts = |kw: &str| {
            upper.starts_with(kw) && trimmed[kw.len()..].chars().next().is_none_or(|c| !c.is_alphanumeric() && c != '_')
        };
        if starts("SELECT") || starts("WITH") {
            return Some(offset + line.len() - trimmed.len());
        }
        offset += line.len();
    }
    None
}

/// First fenced code block, otherwise the text from the first line starting
/// with SELECT or WITH; prose after a terminating semicolon and a blank line
/// is dropped.
pub fn extract_sql(response: &str) -> Result<String> {
    if let Some(block) = fenced_block(response) {
        let sql = block.trim();
        return if sql.is_empty() { Err(Error::NoSql) } else { Ok(sql.to_string()) };
    }
    let start = statement_start(response).ok_or(Error::NoSql)?;
    let mut kept: Vec<&str> = Vec::new();
    let mut terminated = false;
    for line in response[start..].lines() {
        if terminated && line.trim().is_empty() {
            break;
        }
        if line.trim_end().ends_with(';') {
            terminated = true;
        }
        kept.push(line);
    }
    Ok(kept.join("\n").trim_end().to_string())
}
