use serde::Serialize;

use super::execute::{execute_sql, ExecutionRecord, Executor, ResultTable};
use super::sql::extract_sql;
use super::transport::Transport;
use super::{session_turn, PromptSession};
use crate::log::FlatTable;

const RESULT_ROWS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Hypothesis,
    ExtractSql,
    Execute,
    Verify,
}

/// Outcome of one hypothesis iteration. `stages` lists the completed stages;
/// `diagnostic` is set when a stage failed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CycleRecord {
    pub stages: Vec<Stage>,
    pub hypothesis: Option<String>,
    pub sql: Option<String>,
    pub result_excerpt: Option<String>,
    pub execution: Option<ExecutionRecord>,
    pub verdict: Option<String>,
    pub diagnostic: Option<String>,
}

pub fn verification_prompt(sql: &str, result: &ResultTable) -> String {
    let rows = if result.rows.is_empty() {
        format!("{}\n(no rows)\n", result.headers.join(","))
    } else {
        result.excerpt(RESULT_ROWS)
    };
    format!(
        "I executed the following SQL query:\n\n{sql}\n\nand obtained the following result:\n\n{rows}\nIs the hypothesis supported by the data?"
    )
}

/// Hypothesis prompt, SQL extraction, execution over `table`, then a
/// verification prompt embedding the result rows.
pub fn hypothesis_cycle(
    session: &mut PromptSession,
    prompt: &str,
    table: &FlatTable,
    executor: &dyn Executor,
    transport: &dyn Transport,
) -> CycleRecord {
    let mut record = CycleRecord::default();
    let hypothesis = match session_turn(session, prompt, transport) {
        Ok(h) => h,
        Err(e) => return fail(record, Stage::Hypothesis, e),
    };
    record.stages.push(Stage::Hypothesis);
    record.hypothesis = Some(hypothesis.clone());
    let sql = match extract_sql(&hypothesis) {
        Ok(s) => s,
        Err(e) => return fail(record, Stage::ExtractSql, e),
    };
    record.stages.push(Stage::ExtractSql);
    record.sql = Some(sql.clone());
    let (result, execution) = match execute_sql(&sql, table, executor) {
        Ok(r) => r,
        Err(e) => return fail(record, Stage::Execute, e),
    };
    record.stages.push(Stage::Execute);
    record.result_excerpt = Some(result.excerpt(RESULT_ROWS));
    record.execution = Some(execution);
    match session_turn(session, &verification_prompt(&sql, &result), transport) {
        Ok(v) => {
            record.stages.push(Stage::Verify);
            record.verdict = Some(v);
            record
        }
        Err(e) => fail(record, Stage::Verify, e),
    }
}

fn fail(mut record: CycleRecord, stage: Stage, err: crate::error::Error) -> CycleRecord {
    let name = serde_json::to_value(stage).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    record.diagnostic = Some(format!("{name}: {err}"));
    record
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::fixtures::running_log;
    use crate::orchestration::{MockExecutor, MockTransport, Strategy};
    use std::collections::BTreeMap;

    fn run(replies: &[&str], results: Vec<Result<ResultTable, String>>) -> (CycleRecord, PromptSession, MockTransport) {
        let transport = MockTransport::scripted(replies.iter().copied());
        let executor = MockExecutor::scripted(results);
        let mut session = PromptSession::new(Strategy::Hypothesis, BTreeMap::new());
        let table = FlatTable::from_log(&running_log());
        let record = hypothesis_cycle(&mut session, "hypothesize", &table, &executor, &transport);
        (record, session, transport)
    }

    #[test]
    fn full_cycle() {
        let result = ResultTable { headers: vec!["n".into()], rows: vec![vec!["22426".into()]] };
        let (record, session, transport) =
            run(&["H1: penalties.\n```sql\nSELECT COUNT(*) AS n FROM dataframe;\n```", "Not supported."], vec![Ok(result)]);
        assert_eq!(record.stages, [Stage::Hypothesis, Stage::ExtractSql, Stage::Execute, Stage::Verify]);
        assert_eq!(record.sql.as_deref(), Some("SELECT COUNT(*) AS n FROM dataframe;"));
        assert_eq!(record.verdict.as_deref(), Some("Not supported."));
        assert!(record.diagnostic.is_none());
        assert_eq!(session.turns().len(), 4);
        assert!(transport.requests()[1][2].text.contains("n\n22426\n"));
    }

    #[test]
    fn empty_result_still_verifies() {
        let (record, _, transport) = run(&["SELECT 1 WHERE 0", "ok"], vec![Ok(ResultTable { headers: vec!["x".into()], rows: vec![] })]);
        assert_eq!(record.stages.len(), 4);
        assert!(transport.requests()[1][2].text.contains("(no rows)"));
    }

    #[test]
    fn extract_failure_keeps_session() {
        let (record, session, _) = run(&["I have no query for you."], vec![]);
        assert_eq!(record.stages, [Stage::Hypothesis]);
        assert!(record.diagnostic.unwrap().starts_with("extract-sql"));
        assert_eq!(session.turns().len(), 2);
    }

    #[test]
    fn executor_failure_is_diagnosed() {
        let (record, _, _) = run(&["SELECT nope"], vec![Err("no such column".into())]);
        assert_eq!(record.stages, [Stage::Hypothesis, Stage::ExtractSql]);
        assert!(record.diagnostic.unwrap().contains("no such column"));
    }
}
