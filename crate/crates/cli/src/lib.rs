//! Command-line front end: every subcommand reads its inputs, calls into
//! `pmtext-core` and writes the artifact alone to stdout. Diagnostics go to
//! stderr. Exit codes: 1 usage, 2 parse or structural error, 3 transport or
//! executor failure.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmtext_core::abstraction::{self as abs, AbstractionKind, AbstractionText, Budget};
use pmtext_core::conformance::{check_declare, check_temporal, Bound};
use pmtext_core::discovery::{
    discover_dfg, discover_ocdfg, discover_temporal_profile, discover_variants, import_declare, import_pnml, DeclareModel,
    PetriNet, TemporalProfile,
};
use pmtext_core::features::{
    log_feature_table, log_feature_table_with, ocel_feature_table, summarize, FeatureTable, LogFeatureOptions,
};
use pmtext_core::log::{attribute_profile, ingest_flat, parse_xes, ColumnMapping};
use pmtext_core::ocel::{parse_jsonocel, process_executions, ProcessExecution};
use pmtext_core::orchestration::{
    classification_report, classify_protected, compose_direct, compose_group_comparison, compose_hypothesis_prompt,
    compose_sql_prompt, extract_sql, ground_truth_from_attribute, session_turn, CommandExecutor, PromptSession, SqlHints,
    Strategy,
};
use pmtext_core::{Error, EventLog, FlatTable, Ocel, Result};

pub use config::{load_config, Settings, CONFIG_ENV};

#[derive(Debug, Parser)]
#[command(name = "pmtext", version, about = "Process-mining artifacts as text for large language models")]
struct Cli {
    /// `key = value` settings file; defaults to $PMTEXT_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a textual abstraction.
    Abstract {
        #[arg(long, value_parser = parse_kind)]
        kind: AbstractionKind,
        #[command(flatten)]
        selection: Selection,
    },
    /// Write an event log as a flat CSV table.
    Flatten {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Discover a model and print it as JSON.
    Discover {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Check every case of a log against a DECLARE model or a temporal profile.
    Check(CheckArgs),
    /// Print the feature table as CSV.
    Features {
        #[command(flatten)]
        input: InputArgs,
        /// Object type for object-centric logs.
        #[arg(long)]
        object_type: Option<String>,
        /// Activity and succession indicators only.
        #[arg(long)]
        indicators_only: bool,
    },
    /// Compose a prompt.
    Prompt(PromptArgs),
    /// Send a prompt to the configured LLM and print the reply.
    Query(QueryArgs),
    /// Classify cases as protected with SQL and compare with a ground-truth attribute.
    Fairness(FairnessArgs),
    /// List the process executions of an object-centric log.
    Executions {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Xes,
    Csv,
    Jsonocel,
    Pnml,
    Decl,
}

#[derive(Debug, Clone, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
struct Selection {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Character budget for truncatable kinds (default 10000).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    case_id: Option<String>,
    #[arg(long)]
    object_type: Option<String>,
    /// 0-based process execution; the whole log when omitted.
    #[arg(long)]
    execution: Option<usize>,
    /// Add event count and duration to the log features.
    #[arg(long)]
    case_stats: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    Dfg,
    Variants,
    TemporalProfile,
    Ocdfg,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, conflicts_with = "temporal", required_unless_present = "temporal")]
    declare: Option<PathBuf>,
    /// Temporal profile as JSON, or a reference log to discover it from.
    #[arg(long, requires = "zeta")]
    temporal: Option<PathBuf>,
    #[arg(long)]
    zeta: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PromptStrategy {
    Direct,
    Sql,
    Hypothesis,
    GroupCompare,
}

#[derive(Debug, Args)]
struct HintArgs {
    #[arg(long, default_value = "dataframe")]
    table: String,
    #[arg(long, default_value = "case:concept:name")]
    case_column: String,
    #[arg(long, default_value = "concept:name")]
    activity_column: String,
    #[arg(long, default_value = "time:timestamp")]
    timestamp_column: String,
    #[arg(long, default_value = "org:resource")]
    resource_column: String,
    #[arg(long)]
    no_resource: bool,
    /// File whose content replaces the default dialect hint.
    #[arg(long)]
    dialect_hint_file: Option<PathBuf>,
}

impl HintArgs {
    fn hints(&self) -> Result<SqlHints> {
        let mut hints = SqlHints {
            table: self.table.clone(),
            case_column: self.case_column.clone(),
            activity_column: self.activity_column.clone(),
            timestamp_column: self.timestamp_column.clone(),
            resource_column: (!self.no_resource).then(|| self.resource_column.clone()),
            ..SqlHints::default()
        };
        if let Some(path) = &self.dialect_hint_file {
            hints.dialect_hint = std::fs::read_to_string(path)?.trim_end().to_string();
        }
        Ok(hints)
    }
}

#[derive(Debug, Args)]
struct PromptArgs {
    #[arg(long, value_enum)]
    strategy: PromptStrategy,
    #[arg(long)]
    question: Option<String>,
    /// Abstraction kind for the direct strategy.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<AbstractionKind>,
    /// Boolean case attribute splitting the log for group comparison.
    #[arg(long)]
    group_attr: Option<String>,
    #[command(flatten)]
    selection: Selection,
    #[command(flatten)]
    hints: HintArgs,
}

#[derive(Debug, Args)]
struct LlmFlags {
    #[arg(long, value_parser = ["live", "mock"])]
    transport: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    endpoint: Option<String>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long, conflicts_with = "prompt_file", required_unless_present = "prompt_file")]
    prompt: Option<String>,
    /// File holding the prompt; `-` reads stdin.
    #[arg(long)]
    prompt_file: Option<PathBuf>,
    /// Append the exchange to this transcript file.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[command(flatten)]
    llm: LlmFlags,
}

#[derive(Debug, Args)]
struct FairnessArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Boolean case attribute holding the true protected label.
    #[arg(long)]
    ground_truth_attr: String,
    /// SQL selecting the protected cases; asked from the LLM when omitted.
    #[arg(long, conflicts_with = "sql_file")]
    sql: Option<String>,
    #[arg(long)]
    sql_file: Option<PathBuf>,
    /// Executor command template with `{table}` and `{sql}` placeholders.
    #[arg(long)]
    executor: Option<String>,
    #[arg(long, default_value = "case:concept:name")]
    case_column: String,
    #[command(flatten)]
    llm: LlmFlags,
}

fn parse_kind(s: &str) -> std::result::Result<AbstractionKind, String> {
    s.parse::<AbstractionKind>().map_err(|e| e.to_string())
}

/// Runs the CLI. `env` resolves environment variables.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Context { env, stderr };
    match dispatch(cli, &mut ctx).and_then(|payload| stdout.write_all(payload.as_bytes()).map_err(Error::from)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        1
    } else if e.is_io_boundary() {
        3
    } else {
        2
    }
}

struct Context<'a> {
    env: &'a dyn Fn(&str) -> Option<String>,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn warn(&mut self, message: &str) {
        let _ = writeln!(self.stderr, "warning: {message}");
    }

    fn settings(&self, config: Option<&Path>, flags: Option<&LlmFlags>) -> Result<Settings> {
        let mut settings = load_config(config, self.env)?;
        if let Some(flags) = flags {
            for (key, value) in [("transport", &flags.transport), ("model", &flags.model), ("endpoint", &flags.endpoint)] {
                if let Some(v) = value {
                    settings.set(key, v)?;
                }
            }
        }
        Ok(settings)
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::InvalidArgument(message.into())
}

fn infer_format(path: &Path, explicit: Option<Format>) -> Result<Format> {
    if let Some(f) = explicit {
        return Ok(f);
    }
    let name = path.file_name().map(|n| n.to_string_lossy().to_ascii_lowercase()).unwrap_or_default();
    let name = name.strip_suffix(".gz").unwrap_or(&name);
    let ext = name.rsplit_once('.').map(|(_, e)| e).unwrap_or("");
    match ext {
        "xes" => Ok(Format::Xes),
        "csv" => Ok(Format::Csv),
        "jsonocel" | "json" => Ok(Format::Jsonocel),
        "pnml" => Ok(Format::Pnml),
        "decl" => Ok(Format::Decl),
        _ => Err(usage(format!("cannot infer the format of `{}`; pass --format", path.display()))),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_log(path: &Path, format: Option<Format>) -> Result<EventLog> {
    match infer_format(path, format)? {
        Format::Xes => parse_xes(open(path)?),
        Format::Csv => ingest_flat(open(path)?, b',', &ColumnMapping::default()),
        other => Err(usage(format!("expected an event log (xes or csv), got {other:?} input"))),
    }
}

fn load_ocel(path: &Path, format: Option<Format>) -> Result<Ocel> {
    match infer_format(path, format)? {
        Format::Jsonocel => parse_jsonocel(open(path)?),
        other => Err(usage(format!("expected an object-centric log (jsonocel), got {other:?} input"))),
    }
}

fn load_net(path: &Path, format: Option<Format>) -> Result<PetriNet> {
    match infer_format(path, format)? {
        Format::Pnml => import_pnml(open(path)?),
        other => Err(usage(format!("expected a Petri net (pnml), got {other:?} input"))),
    }
}

fn load_declare(path: &Path, format: Option<Format>) -> Result<DeclareModel> {
    match infer_format(path, format)? {
        Format::Decl => import_declare(open(path)?),
        other => Err(usage(format!("expected a DECLARE model (decl), got {other:?} input"))),
    }
}

fn json(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn render(kind: AbstractionKind, sel: &Selection, ctx: &mut Context) -> Result<AbstractionText> {
    kind.check_budget(sel.budget)?;
    let budget = sel.budget.map(Budget::chars).unwrap_or_default();
    let input = sel.input.as_deref().ok_or_else(|| usage("--input is required"))?;
    use AbstractionKind as K;
    let text = match kind {
        K::Dfg => abs::abstract_dfg(&discover_dfg(&load_log(input, sel.format)?), budget)?,
        K::Variants => abs::abstract_variants(&discover_variants(&load_log(input, sel.format)?), budget)?,
        K::Case => {
            let id = sel.case_id.as_deref().ok_or_else(|| usage("--case-id is required for the case abstraction"))?;
            abs::abstract_log_case(&load_log(input, sel.format)?, id)?
        }
        K::LogAttributes => abs::abstract_log_attributes(&attribute_profile(&load_log(input, sel.format)?)),
        K::LogFeatures => {
            let options = if sel.case_stats { LogFeatureOptions::default() } else { LogFeatureOptions::indicators_only() };
            let table = log_feature_table_with(&load_log(input, sel.format)?, options);
            abs::abstract_log_features(&summarize(&table), budget)?
        }
        K::PetriNet => abs::abstract_petri_net(&load_net(input, sel.format)?),
        K::Declare => abs::abstract_declare(&load_declare(input, sel.format)?),
        K::TemporalProfile => abs::abstract_temporal_profile(&discover_temporal_profile(&load_log(input, sel.format)?)),
        K::Ocel => {
            let ocel = load_ocel(input, sel.format)?;
            let execution = match sel.execution {
                Some(k) => {
                    let mut all = process_executions(&ocel);
                    let n = all.len();
                    if k >= n {
                        return Err(usage(format!("execution {k} does not exist ({n} executions)")));
                    }
                    all.swap_remove(k)
                }
                None => ProcessExecution::whole(&ocel),
            };
            abs::abstract_ocel(&ocel, &execution)
        }
        K::OcelOcdfg => abs::abstract_ocel_ocdfg(&discover_ocdfg(&load_ocel(input, sel.format)?), budget)?,
        K::OcelFeatures => {
            let t = sel
                .object_type
                .as_deref()
                .ok_or_else(|| usage("--object-type is required for the ocel-features abstraction"))?;
            abs::abstract_ocel_features(&summarize(&ocel_feature_table(&load_ocel(input, sel.format)?, t)?))
        }
    };
    if text.truncated {
        ctx.warn(&format!("{} items omitted to fit the budget", text.omitted_items));
    }
    Ok(text)
}

fn feature_csv(table: &FeatureTable) -> Result<String> {
    let mut out = Vec::new();
    table.write_csv(&mut out)?;
    Ok(String::from_utf8_lossy(&out).into_owned())
}

fn load_profile(path: &Path) -> Result<TemporalProfile> {
    if path.extension().is_some_and(|e| e == "json") {
        let mut text = String::new();
        open(path)?.read_to_string(&mut text)?;
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(discover_temporal_profile(&load_log(path, None)?))
    }
}

fn check(args: &CheckArgs) -> Result<String> {
    let log = load_log(&args.input.input, args.input.format)?;
    let mut out = String::new();
    if let Some(path) = &args.declare {
        let model = load_declare(path, None)?;
        out.push_str("case\tconstraint\tverdict\n");
        for case in log.cases() {
            let trace: Vec<&str> = case.activities().collect();
            for v in check_declare(&trace, &model) {
                let verdict = if v.satisfied { "satisfied" } else { "violated" };
                out.push_str(&format!("{}\t{}\t{verdict}\n", case.id, v.constraint));
            }
        }
    } else if let Some(path) = &args.temporal {
        let profile = load_profile(path)?;
        let zeta = args.zeta.ok_or_else(|| usage("--zeta is required with --temporal"))?;
        out.push_str("case\tsource\ttarget\tobserved\tbound\n");
        for case in log.cases() {
            for d in check_temporal(&case.events, &profile, zeta)?.deviations {
                let bound = match d.bound {
                    Bound::Lower => "below",
                    Bound::Upper => "above",
                };
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{bound}\n",
                    case.id,
                    d.source,
                    d.target,
                    pmtext_core::pyfmt::float(d.observed)
                ));
            }
        }
    }
    Ok(out)
}

fn prompt(args: &PromptArgs, ctx: &mut Context) -> Result<String> {
    let sel = &args.selection;
    let prompt = match args.strategy {
        PromptStrategy::Direct => {
            let kind = args.kind.ok_or_else(|| usage("--kind is required for the direct strategy"))?;
            let text = render(kind, sel, ctx)?;
            let p = compose_direct(&[&text], args.question.as_deref().unwrap_or(""));
            for w in &p.warnings {
                ctx.warn(w);
            }
            p.text
        }
        PromptStrategy::Sql => {
            let q = args.question.as_deref().ok_or_else(|| usage("--question is required for the sql strategy"))?;
            compose_sql_prompt(q, &args.hints.hints()?)?
        }
        PromptStrategy::Hypothesis => {
            let input = sel.input.as_deref().ok_or_else(|| usage("--input is required"))?;
            AbstractionKind::Variants.check_budget(sel.budget)?;
            let log = load_log(input, sel.format)?;
            let budget = sel.budget.map(Budget::chars).unwrap_or_default();
            let variants = abs::abstract_variants(&discover_variants(&log), budget)?;
            let attributes = abs::abstract_log_attributes(&attribute_profile(&log));
            compose_hypothesis_prompt(&variants, &attributes, &args.hints.hints()?)?
        }
        PromptStrategy::GroupCompare => {
            let input = sel.input.as_deref().ok_or_else(|| usage("--input is required"))?;
            let attr = args.group_attr.as_deref().ok_or_else(|| usage("--group-attr is required for group comparison"))?;
            let q = args.question.as_deref().unwrap_or("What are the differences between the two groups?");
            let log = load_log(input, sel.format)?;
            let labels = ground_truth_from_attribute(&log, attr);
            let protected = discover_variants(&log.filter_cases(|c| labels[&c.id]));
            let others = discover_variants(&log.filter_cases(|c| !labels[&c.id]));
            let budget = sel.budget.map(Budget::chars).unwrap_or_default();
            let p = compose_group_comparison(&protected, &others, q, budget)?;
            for w in &p.warnings {
                ctx.warn(w);
            }
            p.text
        }
    };
    Ok(if prompt.ends_with('\n') { prompt } else { prompt + "\n" })
}

fn query(args: &QueryArgs, config: Option<&Path>, ctx: &mut Context) -> Result<String> {
    let settings = ctx.settings(config, Some(&args.llm))?;
    let text = match (&args.prompt, &args.prompt_file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) if path.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
        (None, Some(path)) => std::fs::read_to_string(path)?,
        (None, None) => return Err(usage("--prompt or --prompt-file is required")),
    };
    if text.is_empty() {
        return Err(usage("empty prompt"));
    }
    let transport = settings.llm.transport(|k| (ctx.env)(k))?;
    let mut session = PromptSession::new(Strategy::Direct, settings.llm.snapshot());
    let reply = session_turn(&mut session, &text, transport.as_ref())?;
    if let Some(path) = &args.transcript {
        session.append_transcript(path, 0)?;
    }
    Ok(if reply.ends_with('\n') { reply } else { reply + "\n" })
}

const PROTECTED_QUESTION: &str = "Which cases belong to the protected group, that is, cases that are likely to be discriminated? Provide a SQL query selecting the events of those cases.";

fn fairness(args: &FairnessArgs, config: Option<&Path>, ctx: &mut Context) -> Result<String> {
    let mut settings = ctx.settings(config, Some(&args.llm))?;
    if let Some(t) = &args.executor {
        settings.executor = Some(t.clone());
    }
    let template = settings
        .executor
        .clone()
        .ok_or_else(|| Error::Config("no SQL executor configured (--executor or `executor` key)".into()))?;
    let executor = CommandExecutor::new(template)?;
    let log = load_log(&args.input.input, args.input.format)?;
    let sql = match (&args.sql, &args.sql_file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)?,
        (None, None) => {
            let attributes = abs::abstract_log_attributes(&attribute_profile(&log));
            let hints = SqlHints { case_column: args.case_column.clone(), ..SqlHints::default() };
            let text = format!("{}\n{}", attributes.text, compose_sql_prompt(PROTECTED_QUESTION, &hints)?);
            let transport = settings.llm.transport(|k| (ctx.env)(k))?;
            let mut session = PromptSession::new(Strategy::Multi, settings.llm.snapshot());
            extract_sql(&session_turn(&mut session, &text, transport.as_ref())?)?
        }
    };
    let table = FlatTable::from_log(&log);
    let predicted = classify_protected(&table, &sql, &executor, &args.case_column)?;
    let truth = ground_truth_from_attribute(&log, &args.ground_truth_attr);
    Ok(classification_report(&predicted, &truth)?.render())
}

fn dispatch(cli: Cli, ctx: &mut Context) -> Result<String> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Abstract { kind, selection } => Ok(render(*kind, selection, ctx)?.text),
        Command::Flatten { input } => {
            let mut out = Vec::new();
            FlatTable::from_log(&load_log(&input.input, input.format)?).write_csv(&mut out)?;
            Ok(String::from_utf8_lossy(&out).into_owned())
        }
        Command::Discover { model, input } => match model {
            ModelKind::Dfg => json(&discover_dfg(&load_log(&input.input, input.format)?)),
            ModelKind::Variants => json(&discover_variants(&load_log(&input.input, input.format)?)),
            ModelKind::TemporalProfile => json(&discover_temporal_profile(&load_log(&input.input, input.format)?)),
            ModelKind::Ocdfg => json(&discover_ocdfg(&load_ocel(&input.input, input.format)?)),
        },
        Command::Check(args) => check(args),
        Command::Features { input, object_type, indicators_only } => match infer_format(&input.input, input.format)? {
            Format::Jsonocel => {
                let t = object_type.as_deref().ok_or_else(|| usage("--object-type is required for object-centric logs"))?;
                feature_csv(&ocel_feature_table(&load_ocel(&input.input, input.format)?, t)?)
            }
            _ => {
                let log = load_log(&input.input, input.format)?;
                let table = if *indicators_only {
                    log_feature_table_with(&log, LogFeatureOptions::indicators_only())
                } else {
                    log_feature_table(&log)
                };
                feature_csv(&table)
            }
        },
        Command::Prompt(args) => prompt(args, ctx),
        Command::Query(args) => query(args, config, ctx),
        Command::Fairness(args) => fairness(args, config, ctx),
        Command::Executions { input } => {
            let ocel = load_ocel(&input.input, input.format)?;
            let mut out = String::new();
            for (k, e) in process_executions(&ocel).iter().enumerate() {
                let objects: Vec<&str> = e.objects.iter().map(String::as_str).collect();
                out.push_str(&format!("{k}\t{} events\t{}\n", e.events.len(), objects.join(", ")));
            }
            Ok(out)
        }
    }
}
