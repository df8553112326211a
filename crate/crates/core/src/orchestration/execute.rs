use std::collections::VecDeque;
use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::log::FlatTable;

/// Rows returned by an executor, as text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ResultTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ResultTable {
    pub fn parse_csv(text: &str) -> std::result::Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| e.to_string())?.iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Self { headers, rows })
    }

    /// Comma-separated header and rows, at most `max_rows` rows.
    pub fn excerpt(&self, max_rows: usize) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in self.rows.iter().take(max_rows) {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        if self.rows.len() > max_rows {
            out.push_str(&format!("... ({} more rows)\n", self.rows.len() - max_rows));
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }
}

/// Runs SQL over a flat table. Errors carry a message only; [`execute_sql`]
/// attaches the statement.
pub trait Executor {
    fn run(&self, sql: &str, table: &FlatTable) -> std::result::Result<ResultTable, String>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExecutionRecord {
    pub sql: String,
    pub row_count: usize,
    pub wall_time: Duration,
}

pub fn execute_sql(sql: &str, table: &FlatTable, executor: &dyn Executor) -> Result<(ResultTable, ExecutionRecord)> {
    let started = Instant::now();
    let result = executor.run(sql, table).map_err(|message| Error::Executor { sql: sql.to_string(), message })?;
    let record = ExecutionRecord { sql: sql.to_string(), row_count: result.rows.len(), wall_time: started.elapsed() };
    Ok((result, record))
}

/// External command reading the table as CSV from `{table}` and the statement
/// from `{sql}`, writing CSV with a header row to stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandExecutor {
    pub template: String,
}

impl CommandExecutor {
    pub fn new(template: impl Into<String>) -> Result<Self> {
        let template = template.into();
        let words = shell_words::split(&template).map_err(|e| Error::Config(format!("executor template: {e}")))?;
        if words.is_empty() {
            return Err(Error::Config("executor template is empty".into()));
        }
        Ok(Self { template })
    }
}

impl Executor for CommandExecutor {
    fn run(&self, sql: &str, table: &FlatTable) -> std::result::Result<ResultTable, String> {
        let mut table_file = tempfile::Builder::new().suffix(".csv").tempfile().map_err(|e| e.to_string())?;
        table.write_csv(&mut table_file).map_err(|e| e.to_string())?;
        table_file.flush().map_err(|e| e.to_string())?;
        let mut sql_file = tempfile::Builder::new().suffix(".sql").tempfile().map_err(|e| e.to_string())?;
        sql_file.write_all(sql.as_bytes()).map_err(|e| e.to_string())?;
        sql_file.flush().map_err(|e| e.to_string())?;
        let table_path = table_file.path().to_string_lossy().into_owned();
        let sql_path = sql_file.path().to_string_lossy().into_owned();
        let words: Vec<String> = shell_words::split(&self.template)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|w| w.replace("{table}", &table_path).replace("{sql}", &sql_path))
            .collect();
        let output = Command::new(&words[0])
            .args(&words[1..])
            .output()
            .map_err(|e| format!("cannot run `{}`: {e}", words[0]))?;
        if !output.status.success() {
            return Err(format!("{}: {}", output.status, String::from_utf8_lossy(&output.stderr).trim()));
        }
        let stdout = String::from_utf8(output.stdout).map_err(|_| "executor output is not UTF-8".to_string())?;
        ResultTable::parse_csv(&stdout).map_err(|e| format!("malformed executor output: {e}"))
    }
}

/// Returns scripted results in order and records the statements received.
#[derive(Debug, Default)]
pub struct MockExecutor {
    results: Mutex<VecDeque<std::result::Result<ResultTable, String>>>,
    statements: Mutex<Vec<String>>,
}

impl MockExecutor {
    pub fn scripted(results: impl IntoIterator<Item = std::result::Result<ResultTable, String>>) -> Self {
        Self { results: Mutex::new(results.into_iter().collect()), ..Self::default() }
    }

    pub fn statements(&self) -> Vec<String> {
        self.statements.lock().unwrap().clone()
    }
}

impl Executor for MockExecutor {
    fn run(&self, sql: &str, _table: &FlatTable) -> std::result::Result<ResultTable, String> {
        self.statements.lock().unwrap().push(sql.to_string());
        self.results.lock().unwrap().pop_front().unwrap_or_else(|| Err("mock executor has no scripted result left".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::fixtures::running_log;

    fn fixed() -> ResultTable {
        ResultTable { headers: vec!["n".into()], rows: vec![vec!["8".into()]] }
    }

    #[test]
    fn mock_passthrough() {
        let ex = MockExecutor::scripted([Ok(fixed())]);
        let (result, record) = execute_sql("SELECT 1", &FlatTable::from_log(&running_log()), &ex).unwrap();
        assert_eq!(result, fixed());
        assert_eq!(record.row_count, 1);
        assert_eq!(ex.statements(), ["SELECT 1"]);
    }

    #[test]
    fn error_carries_sql() {
        let ex = MockExecutor::scripted([Err("syntax error".to_string())]);
        let err = execute_sql("SELEC", &FlatTable::from_log(&running_log()), &ex).unwrap_err();
        assert!(matches!(err, Error::Executor { ref sql, .. } if sql == "SELEC"));
    }

    #[test]
    fn command_executor_failure_and_output() {
        let table = FlatTable::from_log(&running_log());
        let echo = CommandExecutor::new("sh -c 'printf \"a,b\\n1,2\\n\"' {table} {sql}").unwrap();
        let (r, _) = execute_sql("x", &table, &echo).unwrap();
        assert_eq!(r.headers, ["a", "b"]);
        assert_eq!(r.rows, [["1", "2"]]);
        let cat = CommandExecutor::new("cat {sql}").unwrap();
        let (r, _) = execute_sql("col\nvalue\n", &table, &cat).unwrap();
        assert_eq!(r.rows, [["value"]]);
        let fail = CommandExecutor::new("sh -c 'echo boom >&2; exit 3'").unwrap();
        let err = execute_sql("q", &table, &fail).unwrap_err();
        assert!(matches!(err, Error::Executor { ref message, .. } if message.contains("boom")));
        assert!(CommandExecutor::new("  ").is_err());
        assert!(CommandExecutor::new("unterminated 'quote").is_err());
    }

    #[test]
    fn excerpt_limits_rows() {
        let t = ResultTable { headers: vec!["x".into()], rows: (0..5).map(|i| vec![i.to_string()]).collect() };
        assert_eq!(t.excerpt(2), "x\n0\n1\n... (3 more rows)\n");
    }
}
