//! Command-line surface: `ml`, `certify`, `verify` and `suite`.
//!
//! [`run`] never exits the process; it returns the exit code together with
//! everything written to standard output and standard error.

use crate::certificates::{
    best_certificate, certify_best_prime, certify_prime_discrete, certify_reduced_with,
    certify_riesz_dissociated, certify_riesz_general, certify_trivial, trivial_bound,
    Certificate, CertificateError, Effort, Witness,
};
use crate::config::RunConfig;
use crate::dissociation::DissociationError;
use crate::document::{ml_record, verify_document, Document, MlRecord, Payload};
use crate::exact_ml::MlError;
use crate::rational::to_decimal;
use crate::reduction::ReductionConfig;
use crate::speeds::{SpeedSet, SpeedSetError};
use crate::suite::{run_suite, SuiteName, SuiteParams, SuiteReport};
use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rayon::prelude::*;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Budget = 3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: ExitCode,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "runnerlab", version, about = "Exact and certified lonely-runner bounds")]
struct Cli {
    /// Config file; defaults to $RUNNERLAB_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact maximum loneliness.
    Ml {
        #[command(flatten)]
        input: InputArgs,
        /// Every n-subset of [max], written `n=4 max=10`.
        #[arg(long, num_args = 1..=2, value_name = "n=N max=M")]
        range: Vec<String>,
        /// Grid size of the cross-check.
        #[arg(long, default_value_t = 100_000)]
        grid: u64,
    },
    /// Emit a lower-bound certificate.
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Prime for `--method prime`.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum)]
        effort: Option<EffortArg>,
    },
    /// Re-verify a certificate, trace or ML document (`-` reads stdin).
    Verify { document: PathBuf },
    /// Run a property suite.
    Suite {
        name: SuiteArg,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        v_max: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(clap::Args, Debug)]
struct InputArgs {
    /// Speeds, whitespace separated.
    speeds: Vec<String>,
    /// One set per line, or a speed-sets document.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Trivial,
    Prime,
    Riesz,
    RieszDissoc,
    ReduceThenPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EffortArg {
    Quick,
    Standard,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Invariants,
    Soundness,
    PaperChecks,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

struct Ctx {
    config: RunConfig,
    format: Format,
    out: String,
    err: String,
}

type CmdResult = Result<ExitCode, (ExitCode, String)>;

fn usage(msg: impl Into<String>) -> (ExitCode, String) {
    (ExitCode::Usage, msg.into())
}

pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.use_stderr() {
                true => CliOutput {
                    code: ExitCode::Usage,
                    stdout: String::new(),
                    stderr: text,
                },
                false => CliOutput {
                    code: ExitCode::Success,
                    stdout: text,
                    stderr: String::new(),
                },
            };
        }
    };
    let config = match RunConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            return CliOutput {
                code: ExitCode::Usage,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let format = match (cli.json, cli.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => Format::Table,
    };
    let mut ctx = Ctx {
        config,
        format,
        out: String::new(),
        err: String::new(),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return CliOutput {
                code: ExitCode::Usage,
                stdout: String::new(),
                stderr: "error: --threads must be positive\n".into(),
            };
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().expect("thread pool");
    let result = pool.install(|| dispatch(&mut ctx, cli.command));
    let code = match result {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            code
        }
    };
    CliOutput {
        code,
        stdout: ctx.out,
        stderr: ctx.err,
    }
}

fn dispatch(ctx: &mut Ctx, command: Command) -> CmdResult {
    match command {
        Command::Ml { input, range, grid } => cmd_ml(ctx, &input, &range, grid),
        Command::Certify {
            input,
            method,
            p,
            effort,
        } => {
            if let Some(e) = effort {
                ctx.config.effort = match e {
                    EffortArg::Quick => Effort::Quick,
                    EffortArg::Standard => Effort::Standard,
                    EffortArg::Exhaustive => Effort::Exhaustive,
                };
            }
            if p.is_some() && method != MethodArg::Prime {
                return Err(usage("--p only applies to --method prime"));
            }
            cmd_certify(ctx, &input, method, p)
        }
        Command::Verify { document } => cmd_verify(ctx, &document),
        Command::Suite {
            name,
            n_max,
            v_max,
            seed,
            samples,
        } => {
            let defaults = SuiteParams::default();
            let params = SuiteParams {
                n_max: n_max.unwrap_or(defaults.n_max),
                v_max: v_max.unwrap_or(defaults.v_max),
                seed: seed.unwrap_or(ctx.config.rng_seed),
                samples: samples.unwrap_or(defaults.samples),
            };
            let name = match name {
                SuiteArg::Invariants => SuiteName::Invariants,
                SuiteArg::Soundness => SuiteName::Soundness,
                SuiteArg::PaperChecks => SuiteName::PaperChecks,
            };
            cmd_suite(ctx, name, &params)
        }
    }
}

// ---------------------------------------------------------------------------
// Input.

/// Parses one line of whitespace-separated speeds; positions are 1-based.
pub fn parse_speed_line(line: &str, line_no: usize) -> Result<SpeedSet, String> {
    let mut raw = Vec::new();
    let mut columns = Vec::new();
    let mut offset = 0;
    for token in line.split_whitespace() {
        let col = line[offset..].find(token).expect("token is in line") + offset;
        offset = col + token.len();
        let v: i128 = token.parse().map_err(|_| {
            format!("line {line_no}, column {}: {token:?} is not an integer", col + 1)
        })?;
        raw.push(v);
        columns.push(col + 1);
    }
    SpeedSet::new(raw.iter().copied()).map_err(|e| {
        let col = match &e {
            SpeedSetError::DuplicateSpeed(d) => {
                raw.iter().positions(|&v| v == *d as i128).nth(1).map(|i| columns[i])
            }
            SpeedSetError::NonPositiveSpeed(v) | SpeedSetError::TooLarge(v) => {
                raw.iter().position(|x| x == v).map(|i| columns[i])
            }
            SpeedSetError::EmptySet => None,
        };
        match col {
            Some(c) => format!("line {line_no}, column {c}: {e}"),
            None => format!("line {line_no}: {e}"),
        }
    })
}

fn read_source(path: &PathBuf) -> Result<String, (ExitCode, String)> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_sets(input: &InputArgs) -> Result<Vec<SpeedSet>, (ExitCode, String)> {
    let mut sets = Vec::new();
    if !input.speeds.is_empty() {
        sets.push(parse_speed_line(&input.speeds.join(" "), 1).map_err(usage)?);
    }
    if let Some(path) = &input.file {
        let text = read_source(path)?;
        if text.trim_start().starts_with('{') {
            let doc = Document::parse(&text).map_err(|e| usage(e.to_string()))?;
            match doc.payload {
                Payload::SpeedSets(s) => sets.extend(s),
                _ => return Err(usage("expected a speed-sets document")),
            }
        } else {
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("");
                if !line.trim().is_empty() {
                    sets.push(parse_speed_line(line, i + 1).map_err(usage)?);
                }
            }
        }
    }
    Ok(sets)
}

fn parse_range(tokens: &[String]) -> Result<(usize, u64), (ExitCode, String)> {
    let mut n = None;
    let mut max = None;
    for token in tokens.iter().flat_map(|t| t.split_whitespace()) {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| usage(format!("range term {token:?} is not key=value")))?;
        let value: u64 = value
            .parse()
            .map_err(|_| usage(format!("range value {value:?} is not an integer")))?;
        match key {
            "n" => n = Some(value as usize),
            "max" => max = Some(value),
            _ => return Err(usage(format!("unknown range key {key:?}"))),
        }
    }
    match (n, max) {
        (Some(n), Some(max)) if n >= 1 && n as u64 <= max => Ok((n, max)),
        _ => Err(usage("range needs n=N max=M with 1 <= N <= M")),
    }
}

// ---------------------------------------------------------------------------
// Commands.

fn budget_hint(e: &MlError) -> String {
    format!("{e}; raise candidate_budget in the config file or try `certify` for a bound")
}

fn cmd_ml(ctx: &mut Ctx, input: &InputArgs, range: &[String], grid: u64) -> CmdResult {
    let mut sets = read_sets(input)?;
    if !range.is_empty() {
        let (n, max) = parse_range(range)?;
        sets.extend(
            (1..=max)
                .combinations(n)
                .map(|c| SpeedSet::new(c).expect("distinct positive")),
        );
    }
    if sets.is_empty() {
        return Err(usage("no speed sets given"));
    }
    if grid == 0 {
        return Err(usage("--grid must be positive"));
    }
    let ml = crate::exact_ml::MlConfig {
        candidate_budget: ctx.config.candidate_budget,
    };
    let records: Vec<MlRecord> = sets
        .par_iter()
        .map(|s| ml_record(s, &ml, grid))
        .collect::<Result<_, _>>()
        .map_err(|e| (ExitCode::Budget, budget_hint(&e)))?;
    match ctx.format {
        Format::Json => ctx.out = Document::new(Payload::Ml(records.clone())).to_json() + "\n",
        Format::Csv => {
            ctx.out.push_str("speeds,ml,decimal,witness_time,oracle_consistent\n");
            for r in &records {
                let _ = writeln!(
                    ctx.out,
                    "\"{}\",{},{},{},{}",
                    r.speeds.iter().join(" "),
                    r.value,
                    r.decimal,
                    r.witness_time,
                    r.oracle.consistent
                );
            }
        }
        Format::Table => {
            let rows: Vec<[String; 5]> = records
                .iter()
                .map(|r| {
                    [
                        r.speeds.to_string(),
                        r.value.to_string(),
                        r.decimal.clone(),
                        r.witness_time.to_string(),
                        if r.oracle.consistent { "ok" } else { "MISMATCH" }.into(),
                    ]
                })
                .collect();
            ctx.out = table(&["speeds", "ML", "decimal", "witness", "grid check"], &rows);
        }
    }
    if records.iter().all(|r| r.oracle.consistent) {
        Ok(ExitCode::Success)
    } else {
        Err((ExitCode::Failure, "grid cross-check disagrees".into()))
    }
}

fn certificate_error(e: CertificateError) -> (ExitCode, String) {
    let budget = matches!(
        e,
        CertificateError::Ml(MlError::BudgetExceeded { .. })
            | CertificateError::Dissociation(DissociationError::BudgetExceeded { .. })
    );
    (if budget { ExitCode::Budget } else { ExitCode::Failure }, e.to_string())
}

fn certify_one(
    config: &RunConfig,
    s: &SpeedSet,
    method: MethodArg,
    p: Option<u64>,
) -> Result<Certificate, CertificateError> {
    let options = config
        .certify_options()
        .map_err(|e| CertificateError::InvalidParameter(e.to_string()))?;
    match method {
        MethodArg::Auto => Ok(best_certificate(s, &options)),
        MethodArg::Trivial => Ok(certify_trivial(s)),
        MethodArg::Prime => match p {
            Some(p) => certify_prime_discrete(s, p),
            None => certify_best_prime(s, options.prime_limit),
        },
        MethodArg::Riesz => certify_riesz_general(s, &options.riesz.unwrap_or_default()),
        MethodArg::RieszDissoc => certify_riesz_dissociated(s, &config.policy()),
        MethodArg::ReduceThenPrime => {
            let (stop, reduction) = options.reduction.unwrap_or((64, ReductionConfig::default()));
            certify_reduced_with(s, stop, &reduction, |model| {
                certify_best_prime(model, options.prime_limit)
            })
        }
    }
}

fn witness_summary(c: &Certificate) -> String {
    let mut s = match &c.witness {
        Witness::TrivialUnion => "union bound".to_string(),
        Witness::Exact { witness_time } => format!("t = {witness_time}"),
        Witness::PrimeDiscrete { prime, residue, .. } => format!("p = {prime}, p mod 2n = {residue}"),
        Witness::RieszDissociated => "cos inequality".to_string(),
        Witness::RieszGeneral {
            base, dilation, riesz, ..
        } => format!("D = {base:?}, j = {dilation}, weight {}", riesz.weight()),
    };
    if let Some(r) = &c.reduction {
        let _ = write!(
            s,
            "; {} reduction steps to {}, error {}",
            r.trace.steps.len(),
            r.trace.final_model,
            r.trace.total_error()
        );
    }
    s
}

fn bound_text(c: &Certificate) -> String {
    match &c.enclosure {
        Some(e) => format!("{} (value {})", c.bound, e.display),
        None => c.bound.to_string(),
    }
}

fn cmd_certify(ctx: &mut Ctx, input: &InputArgs, method: MethodArg, p: Option<u64>) -> CmdResult {
    let sets = read_sets(input)?;
    if sets.is_empty() {
        return Err(usage("no speed sets given"));
    }
    let config = &ctx.config;
    let certs: Vec<Certificate> = sets
        .par_iter()
        .map(|s| certify_one(config, s, method, p))
        .collect::<Result<_, _>>()
        .map_err(certificate_error)?;
    match ctx.format {
        Format::Json => {
            let docs: Vec<Document> = certs
                .iter()
                .map(|c| Document::new(Payload::Certificate(c.clone())))
                .collect();
            ctx.out = if docs.len() == 1 {
                docs[0].to_json()
            } else {
                serde_json::to_string_pretty(&docs).expect("documents serialize")
            } + "\n";
        }
        Format::Csv => {
            ctx.out.push_str("speeds,method,bound,decimal,reduced\n");
            for c in &certs {
                let _ = writeln!(
                    ctx.out,
                    "\"{}\",{},{},{},{}",
                    c.speeds.iter().join(" "),
                    c.method.name(),
                    c.bound,
                    to_decimal(&c.bound, 12),
                    c.reduction.is_some()
                );
            }
        }
        Format::Table => {
            let rows: Vec<[String; 5]> = certs
                .iter()
                .map(|c| {
                    [
                        c.speeds.to_string(),
                        c.method.name().to_string(),
                        bound_text(c),
                        to_decimal(&c.bound, 12),
                        witness_summary(c),
                    ]
                })
                .collect();
            ctx.out = table(&["speeds", "method", "bound", "decimal", "witness"], &rows);
        }
    }
    let beats_trivial =
        |c: &Certificate| -> bool { c.bound > trivial_bound(c.speeds.len()) };
    if method == MethodArg::Trivial || certs.iter().all(beats_trivial) {
        Ok(ExitCode::Success)
    } else {
        let _ = writeln!(ctx.err, "bound does not exceed 1/(2n)");
        Ok(ExitCode::Failure)
    }
}

fn cmd_verify(ctx: &mut Ctx, path: &PathBuf) -> CmdResult {
    let text = read_source(path)?;
    let doc = Document::parse(&text).map_err(|e| usage(e.to_string()))?;
    let v = verify_document(&doc, &ctx.config.policy()).map_err(|e| usage(e.to_string()))?;
    for w in &v.warnings {
        let _ = writeln!(ctx.err, "warning: {w}");
    }
    match ctx.format {
        Format::Json => {
            ctx.out = serde_json::to_string_pretty(&serde_json::json!({
                "result": if v.passed() { "pass" } else { "fail" },
                "warnings": v.warnings,
                "failures": v.failures,
            }))
            .expect("json")
                + "\n";
        }
        Format::Csv => {
            let _ = writeln!(ctx.out, "result,failures\n{},{}", pass_word(v.passed()), v.failures.len());
        }
        Format::Table => {
            let _ = writeln!(ctx.out, "{}", pass_word(v.passed()));
            for f in &v.failures {
                let _ = writeln!(ctx.out, "  {f}");
            }
        }
    }
    Ok(if v.passed() { ExitCode::Success } else { ExitCode::Failure })
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn cmd_suite(ctx: &mut Ctx, name: SuiteName, params: &SuiteParams) -> CmdResult {
    let report: SuiteReport = run_suite(name, params);
    match ctx.format {
        Format::Json => ctx.out = Document::new(Payload::Suite(report.clone())).to_json() + "\n",
        Format::Csv => {
            ctx.out.push_str("property,cases,result\n");
            for p in &report.properties {
                let _ = writeln!(ctx.out, "{},{},{}", p.name, p.cases, pass_word(p.passed));
            }
        }
        Format::Table => {
            let rows: Vec<[String; 3]> = report
                .properties
                .iter()
                .map(|p| [p.name.clone(), p.cases.to_string(), pass_word(p.passed).into()])
                .collect();
            ctx.out = table(&["property", "cases", "result"], &rows);
            for p in report.properties.iter().filter(|p| !p.passed) {
                for f in &p.failures {
                    let _ = writeln!(ctx.out, "  {}: {f}", p.name);
                }
            }
        }
    }
    Ok(if report.passed() { ExitCode::Success } else { ExitCode::Failure })
}

fn table<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}
