//! The `recursorlab` command line: every subsystem as a subcommand with
//! deterministic JSON output and exit-code discipline.
//!
//! Exit 0: success with a JSON report on stdout. Exit 1: a checker
//! subcommand reached an invalid/refuted domain verdict (`audit` with
//! violations, `orient` against a failed `--expect`). Exit 2: usage or
//! parse errors. Diagnostic prose goes to stderr; stdout is always exactly
//! one JSON document (or CSV for `sweep`).

use crate::confess::{self, RankRoute};
use crate::diagnostics::{self, rational_string};
use crate::json::{emit_report, parse_report, Json};
use crate::orient::{self, measure_spec_from_json, BarrierCatalog, MeasureSpec, PrecedenceSpec};
use crate::rewrite;
use crate::supervisor::{self, Obligation, SupervisorCatalog};
use crate::term::Term;
use crate::trs::{emit_trs_text, parse_ground_term, parse_trs, Trs};
use crate::witness::{self, CatalogEntry};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "recursorlab",
    version,
    about = "Termination-analysis laboratory for the step-duplicating primitive recursor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Emit the subcommand's output JSON schema and exit.
    #[arg(long)]
    schema: bool,
    /// Attach tool/version/timestamp metadata to the report (breaks
    /// byte-determinism on purpose).
    #[arg(long)]
    meta: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a rewrite system and report its signature and rules.
    Parse {
        /// Builtin name (`recursor`, `linear-recursor`) or path to a TRS
        /// text file.
        trs: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// The canonical trace of F(base, payload, S^k(Z)) with statistics.
    Trace {
        #[arg(long)]
        k: Option<u64>,
        /// Payload term text (default Z).
        #[arg(long)]
        payload: Option<String>,
        /// Base term text (default Z).
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Orient a system with a measure family, the MPO, or run the barrier.
    Orient {
        trs: Option<String>,
        /// additive | transparent-compositional | affine | poly | mpo | barrier
        #[arg(long)]
        method: Option<String>,
        /// Measure spec JSON file; defaults per family.
        #[arg(long)]
        weights: Option<String>,
        /// Precedence pairs, e.g. "F>G,G>S".
        #[arg(long)]
        precedence: Option<String>,
        /// oriented | refuted: exit 1 when the verdict mismatches.
        #[arg(long)]
        expect: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Extract the dependency-pair problem.
    Dp {
        trs: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a confession route: pairs, base order, license, cost account.
    Confess {
        trs: Option<String>,
        /// dp-projection | counter-projection | sct | argument-filtering
        #[arg(long)]
        route: Option<String>,
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// All closed-form quantitative laws for one (k, payload) pair.
    Diagnose {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        payload: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal witness order against a catalog.
    Kappa {
        trs: Option<String>,
        /// Named catalog (barrier-confined, full) or a catalog JSON file.
        #[arg(long)]
        catalog: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the supervisory loop and emit the typed T3/T4 record.
    Supervise {
        trs: Option<String>,
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        payload: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Audit a typed record against a catalog.
    Audit {
        /// Path to a record JSON file.
        record: Option<String>,
        #[arg(long)]
        catalog: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive oracle for the record-emission theorem.
    Necessity {
        #[arg(long)]
        depth: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify the six-member recursion family.
    Family {
        #[command(flatten)]
        common: Common,
    },
    /// CSV sweep of the dominance and entropy laws over a k range.
    Sweep {
        /// Range "lo:hi" or a single k.
        #[arg(long)]
        k: Option<String>,
        #[arg(long)]
        payload: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> i32 {
        2
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Entry point used by the binary: prints the streams and returns the exit
/// code.
pub fn run_main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let outcome = run(&args);
    if !outcome.stdout.is_empty() {
        println!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr);
    }
    outcome.code
}

/// Pure driver: parses argv, executes, and returns the streams. The
/// library tests call this directly to check determinism and exit codes.
pub fn run(argv: &[String]) -> CliOutcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CliOutcome {
                        code: 0,
                        stdout: rendered,
                        stderr: String::new(),
                    }
                }
                _ => CliOutcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    match execute(cli.command) {
        Ok(stdout) => CliOutcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Executed {
            code,
            stdout,
            stderr,
        }) => CliOutcome {
            code,
            stdout,
            stderr,
        },
    }
}

/// Internal result carrying a nonzero exit code alongside the streams.
struct Executed {
    code: i32,
    stdout: String,
    stderr: String,
}

fn execute(command: Command) -> Result<String, Executed> {
    let (name, common) = command_common(&command);
    if common.schema {
        return Ok(emit_report(&schema_for(name)));
    }
    let meta = common.meta;
    let result: Result<(Output, i32), CliError> = dispatch(command);
    match result {
        Ok((output, code)) => {
            let text = match output {
                Output::Report(mut report) => {
                    if meta {
                        report.insert("meta", meta_block());
                    }
                    emit_report(&report)
                }
                Output::Csv(csv) => csv.trim_end().to_string(),
            };
            if code == 0 {
                Ok(text)
            } else {
                Err(Executed {
                    code,
                    stdout: text,
                    stderr: String::new(),
                })
            }
        }
        // usage and parse errors: prose on stderr, nothing on stdout
        Err(err) => Err(Executed {
            code: err.code(),
            stdout: String::new(),
            stderr: format!("error: {}", err),
        }),
    }
}

/// A subcommand's stdout payload: one JSON document, or CSV for `sweep`.
enum Output {
    Report(Json),
    Csv(String),
}

fn command_common(command: &Command) -> (&'static str, Common) {
    let clone = |c: &Common| Common {
        schema: c.schema,
        meta: c.meta,
    };
    match command {
        Command::Parse { common, .. } => ("parse", clone(common)),
        Command::Trace { common, .. } => ("trace", clone(common)),
        Command::Orient { common, .. } => ("orient", clone(common)),
        Command::Dp { common, .. } => ("dp", clone(common)),
        Command::Confess { common, .. } => ("confess", clone(common)),
        Command::Diagnose { common, .. } => ("diagnose", clone(common)),
        Command::Kappa { common, .. } => ("kappa", clone(common)),
        Command::Supervise { common, .. } => ("supervise", clone(common)),
        Command::Audit { common, .. } => ("audit", clone(common)),
        Command::Necessity { common, .. } => ("necessity", clone(common)),
        Command::Family { common } => ("family", clone(common)),
        Command::Sweep { common, .. } => ("sweep", clone(common)),
    }
}

fn meta_block() -> Json {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Json::obj([
        ("tool", Json::from("recursorlab")),
        ("version", Json::from(env!("CARGO_PKG_VERSION"))),
        ("generated_at_unix", Json::from(now)),
    ])
}

// ---------------------------------------------------------------------------
// Argument resolution
// ---------------------------------------------------------------------------

fn resolve_trs(arg: Option<&str>) -> Result<Trs, CliError> {
    let arg = arg.ok_or_else(|| usage("a TRS argument is required (builtin name or file path)"))?;
    if let Some(trs) = Trs::builtin(arg) {
        return Ok(trs);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| usage(format!("cannot read TRS {:?}: {}", arg, e)))?;
    let name = std::path::Path::new(arg)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("parsed")
        .to_string();
    parse_trs(&text)
        .map(|t| t.rename(&name))
        .map_err(|e| usage(format!("TRS parse error in {:?}: {}", arg, e)))
}

fn resolve_term(arg: Option<&str>, default: &str) -> Result<Term, CliError> {
    let text = arg.unwrap_or(default);
    parse_ground_term(text).map_err(|e| usage(format!("term parse error in {:?}: {}", text, e)))
}

fn resolve_supervisor_catalog(arg: Option<&str>) -> Result<SupervisorCatalog, CliError> {
    let arg = arg.unwrap_or("barrier-confined");
    if let Some(catalog) = SupervisorCatalog::named(arg) {
        return Ok(catalog);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| usage(format!("cannot read catalog {:?}: {}", arg, e)))?;
    let json = parse_report(&text).map_err(|e| usage(format!("catalog {:?}: {}", arg, e)))?;
    SupervisorCatalog::from_json(&json).map_err(|e| usage(format!("catalog {:?}: {}", arg, e)))
}

fn resolve_kappa_entries(arg: Option<&str>) -> Result<Vec<CatalogEntry>, CliError> {
    let arg = arg.unwrap_or("barrier-confined");
    if let Some(entries) = witness::named_catalog(arg) {
        return Ok(entries);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| usage(format!("cannot read catalog {:?}: {}", arg, e)))?;
    let json = parse_report(&text).map_err(|e| usage(format!("catalog {:?}: {}", arg, e)))?;
    if json.as_arr().is_some() {
        witness::entries_from_json(&json).map_err(|e| usage(format!("catalog {:?}: {}", arg, e)))
    } else {
        SupervisorCatalog::from_json(&json)
            .map(|c| c.flat_entries())
            .map_err(|e| usage(format!("catalog {:?}: {}", arg, e)))
    }
}

fn load_measure(path: Option<&str>) -> Result<Option<MeasureSpec>, CliError> {
    match path {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read weights {:?}: {}", path, e)))?;
            let json =
                parse_report(&text).map_err(|e| usage(format!("weights {:?}: {}", path, e)))?;
            measure_spec_from_json(&json)
                .map(Some)
                .map_err(|e| usage(format!("weights {:?}: {}", path, e)))
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn dispatch(command: Command) -> Result<(Output, i32), CliError> {
    match command {
        Command::Parse { trs, .. } => {
            let trs = resolve_trs(trs.as_deref())?;
            Ok((
                Output::Report(Json::obj([
                    ("name", Json::from(trs.name.as_str())),
                    (
                        "signature",
                        Json::arr(trs.signature.iter().map(|s| {
                            Json::obj([
                                ("name", Json::from(s.name())),
                                ("arity", Json::from(s.arity())),
                            ])
                        })),
                    ),
                    (
                        "rules",
                        Json::arr(trs.rules.iter().map(|r| {
                            Json::obj([
                                ("label", Json::from(r.label.as_str())),
                                ("lhs", Json::from(r.lhs.to_string())),
                                ("rhs", Json::from(r.rhs.to_string())),
                            ])
                        })),
                    ),
                    ("text", Json::from(emit_trs_text(&trs))),
                ])),
                0,
            ))
        }
        Command::Trace {
            k, payload, base, ..
        } => {
            let k = k.ok_or_else(|| usage("trace requires --k"))?;
            let payload = resolve_term(payload.as_deref(), "Z")?;
            let base = resolve_term(base.as_deref(), "Z")?;
            let trace = rewrite::canonical_trace(&base, &payload, k)
                .map_err(|e| usage(format!("trace: {}", e)))?;
            Ok((
                Output::Report(Json::obj([
                    ("k", Json::from(trace.k)),
                    ("base", Json::from(trace.base.to_string())),
                    ("payload", Json::from(trace.payload.to_string())),
                    ("firings", Json::from(trace.firings)),
                    (
                        "steps",
                        Json::arr(trace.steps.iter().map(|s| {
                            let mut obj = Json::obj([
                                ("index", Json::from(s.index)),
                                ("term", Json::from(s.term.to_string())),
                                ("pay", Json::from(s.pay)),
                                ("g_frames", Json::from(s.g_frames)),
                                ("fired_rule", Json::from(s.fired_rule.as_str())),
                            ]);
                            obj.insert("ctr", s.ctr.map(Json::from).unwrap_or(Json::Null));
                            obj
                        })),
                    ),
                ])),
                0,
            ))
        }
        Command::Orient {
            trs,
            method,
            weights,
            precedence,
            expect,
            ..
        } => {
            let trs = resolve_trs(trs.as_deref())?;
            let method = method.ok_or_else(|| usage("orient requires --method"))?;
            let spec = load_measure(weights.as_deref())?;
            let report = match method.as_str() {
                "additive" | "transparent-compositional" => {
                    let m = spec.unwrap_or_else(|| MeasureSpec::uniform_additive(&trs));
                    orient::orient_linear(&trs, &m)
                        .map_err(|e| usage(format!("orient: {}", e)))?
                        .to_json()
                }
                "affine" => {
                    let m = spec.unwrap_or_else(|| MeasureSpec::uniform_affine(&trs));
                    orient::orient_linear(&trs, &m)
                        .map_err(|e| usage(format!("orient: {}", e)))?
                        .to_json()
                }
                "poly" => {
                    let m = spec.unwrap_or_else(orient::default_poly_witness);
                    orient::orient_poly(&trs, &m)
                        .map_err(|e| usage(format!("orient: {}", e)))?
                        .to_json()
                }
                "mpo" => {
                    let p = PrecedenceSpec::parse(precedence.as_deref().unwrap_or(""))
                        .map_err(|e| usage(format!("precedence: {}", e)))?;
                    orient::orient_mpo(&trs, &p).to_json()
                }
                "barrier" => {
                    let certs = orient::run_barrier(&BarrierCatalog::default(), &BTreeMap::new())
                        .map_err(|e| usage(format!("barrier: {}", e)))?;
                    Json::obj([("certificates", Json::arr(certs.iter().map(|c| c.to_json())))])
                }
                other => return Err(usage(format!("unknown method {:?}", other))),
            };
            let code = match expect.as_deref() {
                None => 0,
                Some(expected) => {
                    let outcome = report
                        .get("outcome")
                        .and_then(Json::as_str)
                        .unwrap_or("oriented");
                    if outcome == expected {
                        0
                    } else {
                        1
                    }
                }
            };
            Ok((Output::Report(report), code))
        }
        Command::Dp { trs, .. } => {
            let trs = resolve_trs(trs.as_deref())?;
            Ok((
                Output::Report(confess::extract_dependency_pairs(&trs).to_json()),
                0,
            ))
        }
        Command::Confess { trs, route, k, .. } => {
            let trs = resolve_trs(trs.as_deref())?;
            let route = match route.as_deref() {
                None => RankRoute::DpProjection,
                Some(r) => {
                    RankRoute::parse(r).ok_or_else(|| usage(format!("unknown route {:?}", r)))?
                }
            };
            let k = k.unwrap_or(0);
            let problem = confess::extract_dependency_pairs(&trs);
            let base_order = confess::check_base_order(&problem);
            let witness = confess::build_forgetting_witness(route);
            let mut report = Json::obj([
                ("problem", problem.to_json()),
                ("base_order", base_order.to_json()),
                ("witness", witness.to_json()),
            ]);
            match confess::ag_account(&trs, k) {
                Ok(account) => report.insert("ag_account", account.to_json()),
                Err(e) => report.insert("ag_account_error", Json::from(e.to_string())),
            }
            Ok((Output::Report(report), 0))
        }
        Command::Diagnose {
            k, payload, base, ..
        } => {
            let k = k.ok_or_else(|| usage("diagnose requires --k"))?;
            let payload = resolve_term(payload.as_deref(), "Z")?;
            let base = resolve_term(base.as_deref(), "Z")?;
            let c_star = diagnostics::default_base_overhead(base.size(), payload.size());
            let report = diagnostics::diagnose(k, payload.size(), c_star)
                .map_err(|e| usage(format!("diagnose: {}", e)))?;
            Ok((Output::Report(report.to_json()), 0))
        }
        Command::Kappa { trs, catalog, .. } => {
            let trs = resolve_trs(trs.as_deref())?;
            let entries = resolve_kappa_entries(catalog.as_deref())?;
            let result = witness::compute_kappa(&trs, &entries)
                .map_err(|e| usage(format!("kappa: {}", e)))?;
            Ok((Output::Report(result.to_json()), 0))
        }
        Command::Supervise {
            trs,
            catalog,
            k,
            payload,
            base,
            ..
        } => {
            let trs = resolve_trs(trs.as_deref())?;
            let catalog = resolve_supervisor_catalog(catalog.as_deref())?;
            let obligation = Obligation {
                trs,
                k: k.unwrap_or(0),
                base: resolve_term(base.as_deref(), "Z")?,
                payload: resolve_term(payload.as_deref(), "Z")?,
            };
            let record = supervisor::supervise_loop(&obligation, &catalog)
                .map_err(|e| usage(format!("supervise: {}", e)))?;
            Ok((Output::Report(record.to_json()), 0))
        }
        Command::Audit {
            record, catalog, ..
        } => {
            let path = record.ok_or_else(|| usage("audit requires a record file"))?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| usage(format!("cannot read record {:?}: {}", path, e)))?;
            let json =
                parse_report(&text).map_err(|e| usage(format!("record {:?}: {}", path, e)))?;
            let record = supervisor::record_from_json(&json)
                .map_err(|e| usage(format!("record {:?}: {}", path, e)))?;
            let catalog = resolve_supervisor_catalog(catalog.as_deref())?;
            // reference witness order: recompute against the obligation
            let obligation_trs = json
                .get("obligation")
                .and_then(|o| o.get("trs_text"))
                .and_then(Json::as_str)
                .and_then(|t| parse_trs(t).ok())
                .or_else(|| {
                    json.get("obligation")
                        .and_then(|o| o.get("trs"))
                        .and_then(Json::as_str)
                        .and_then(Trs::builtin)
                })
                .ok_or_else(|| usage("record obligation carries no resolvable system"))?;
            let entries = catalog.flat_entries();
            let kappa = if entries.is_empty() {
                witness::Kappa::UndefinedAboveTop
            } else {
                witness::compute_kappa(&obligation_trs, &entries)
                    .map_err(|e| usage(format!("kappa for audit: {}", e)))?
                    .kappa
            };
            let verdict = supervisor::audit_record(&record, &catalog, kappa);
            let code = if verdict.valid { 0 } else { 1 };
            Ok((Output::Report(verdict.to_json()), code))
        }
        Command::Necessity { depth, .. } => {
            let depth = depth.unwrap_or(6);
            let outcome = crate::necessity::enumerate_and_verify(depth)
                .map_err(|e| usage(format!("necessity: {}", e)))?;
            Ok((Output::Report(outcome.to_json()), 0))
        }
        Command::Family { .. } => {
            let verdicts = crate::family::classify_family();
            Ok((
                Output::Report(crate::family::classification_to_json(&verdicts)),
                0,
            ))
        }
        Command::Sweep {
            k, payload, base, ..
        } => {
            let range = k.ok_or_else(|| usage("sweep requires --k (range lo:hi or single k)"))?;
            let (lo, hi) = parse_range(&range)?;
            let payload = resolve_term(payload.as_deref(), "Z")?;
            let base = resolve_term(base.as_deref(), "Z")?;
            let c_star = diagnostics::default_base_overhead(base.size(), payload.size());
            let csv = sweep_csv(lo, hi, payload.size(), c_star)?;
            Ok((Output::Csv(csv), 0))
        }
    }
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    if let Some((lo, hi)) = text.split_once(':') {
        let lo = lo
            .parse()
            .map_err(|_| usage(format!("bad range start {:?}", lo)))?;
        let hi = hi
            .parse()
            .map_err(|_| usage(format!("bad range end {:?}", hi)))?;
        if lo > hi {
            return Err(usage("range start exceeds range end"));
        }
        Ok((lo, hi))
    } else {
        let k = text
            .parse()
            .map_err(|_| usage(format!("bad k value {:?}", text)))?;
        Ok((k, k))
    }
}

fn sweep_csv(lo: u64, hi: u64, payload_size: u64, c_star: u64) -> Result<String, CliError> {
    let mut out = String::from("k,payload_size,con,res,ratio,eta,hproof_max\n");
    for k in lo..=hi {
        let report = diagnostics::diagnose(k, payload_size, c_star)
            .map_err(|e| usage(format!("sweep: {}", e)))?;
        let ratio = report
            .con_over_res
            .as_ref()
            .map(|r| {
                use num_traits::ToPrimitive;
                format!("{:.16e}", r.to_f64().unwrap_or(f64::NAN))
            })
            .unwrap_or_default();
        let eta = report
            .eta
            .map(|e| format!("{:.16e}", e))
            .unwrap_or_default();
        let hproof_max = {
            use num_traits::ToPrimitive;
            format!(
                "{:.16e}",
                report
                    .h_proof
                    .last()
                    .and_then(|r| r.to_f64())
                    .unwrap_or(0.0)
            )
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            k,
            payload_size,
            rational_string(&report.con),
            report.res,
            ratio,
            eta,
            hproof_max
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Output schemas
// ---------------------------------------------------------------------------

fn schema_object(title: &str, properties: &[(&str, Json)], required: &[&str]) -> Json {
    Json::obj([
        (
            "$schema",
            Json::from("http://json-schema.org/draft-07/schema#"),
        ),
        ("title", Json::from(title)),
        ("type", Json::from("object")),
        (
            "properties",
            Json::Obj(
                properties
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect(),
            ),
        ),
        (
            "required",
            Json::arr(required.iter().map(|&r| Json::from(r))),
        ),
    ])
}

fn ty(name: &str) -> Json {
    Json::obj([("type", Json::from(name))])
}

fn array_of(items: Json) -> Json {
    Json::obj([("type", Json::from("array")), ("items", items)])
}

/// Hand-written output schemas, one per subcommand.
pub fn schema_for(subcommand: &str) -> Json {
    match subcommand {
        "parse" => schema_object(
            "recursorlab parse report",
            &[
                ("name", ty("string")),
                (
                    "signature",
                    array_of(schema_object(
                        "symbol",
                        &[("name", ty("string")), ("arity", ty("integer"))],
                        &["name", "arity"],
                    )),
                ),
                (
                    "rules",
                    array_of(schema_object(
                        "rule",
                        &[
                            ("label", ty("string")),
                            ("lhs", ty("string")),
                            ("rhs", ty("string")),
                        ],
                        &["label", "lhs", "rhs"],
                    )),
                ),
                ("text", ty("string")),
            ],
            &["name", "signature", "rules", "text"],
        ),
        "trace" => schema_object(
            "recursorlab trace report",
            &[
                ("k", ty("integer")),
                ("base", ty("string")),
                ("payload", ty("string")),
                ("firings", ty("integer")),
                (
                    "steps",
                    array_of(schema_object(
                        "trace step",
                        &[
                            ("index", ty("integer")),
                            ("term", ty("string")),
                            (
                                "ctr",
                                Json::obj([(
                                    "type",
                                    Json::arr([Json::from("integer"), Json::from("null")]),
                                )]),
                            ),
                            ("pay", ty("integer")),
                            ("g_frames", ty("integer")),
                            ("fired_rule", ty("string")),
                        ],
                        &["index", "term", "pay", "g_frames", "fired_rule"],
                    )),
                ),
            ],
            &["k", "base", "payload", "firings", "steps"],
        ),
        "orient" => schema_object(
            "recursorlab orientation verdict",
            &[
                ("outcome", ty("string")),
                ("witness", ty("object")),
                ("failing_rule", ty("string")),
                ("reason", ty("string")),
                ("pump", ty("object")),
                ("certificates", array_of(ty("object"))),
            ],
            &[],
        ),
        "dp" => schema_object(
            "recursorlab dependency-pair problem",
            &[
                ("pairs", array_of(ty("object"))),
                ("edges", array_of(array_of(ty("integer")))),
                ("base_trs", ty("string")),
            ],
            &["pairs", "edges", "base_trs"],
        ),
        "confess" => schema_object(
            "recursorlab confession report",
            &[
                ("problem", ty("object")),
                ("base_order", ty("object")),
                ("witness", ty("object")),
                ("ag_account", ty("object")),
                ("ag_account_error", ty("string")),
            ],
            &["problem", "base_order", "witness"],
        ),
        "diagnose" => schema_object(
            "recursorlab diagnostics report",
            &[
                ("k", ty("integer")),
                ("payload_size", ty("integer")),
                ("wrapper_symbol_size", ty("integer")),
                ("cell_weight", ty("integer")),
                ("base_overhead", ty("integer")),
                ("con", ty("string")),
                ("con_total", ty("string")),
                ("res", ty("integer")),
                (
                    "con_over_res",
                    Json::obj([(
                        "type",
                        Json::arr([Json::from("string"), Json::from("null")]),
                    )]),
                ),
                (
                    "con_over_res_squared",
                    Json::obj([(
                        "type",
                        Json::arr([Json::from("string"), Json::from("null")]),
                    )]),
                ),
                ("h_proof_curve", array_of(ty("string"))),
                ("h_gauge_curve", array_of(ty("number"))),
                (
                    "eta",
                    Json::obj([(
                        "type",
                        Json::arr([Json::from("number"), Json::from("null")]),
                    )]),
                ),
                ("norm_triples", array_of(array_of(ty("integer")))),
                ("norm_method_tags", ty("object")),
                ("description_gap_curve", array_of(ty("integer"))),
                ("hidden_progress_bits", ty("number")),
                ("channel_costs", ty("object")),
            ],
            &[
                "k",
                "payload_size",
                "con",
                "con_total",
                "res",
                "h_proof_curve",
            ],
        ),
        "kappa" => schema_object(
            "recursorlab witness-order report",
            &[
                ("kappa_star", ty("string")),
                ("ob", ty("boolean")),
                ("per_level", ty("object")),
            ],
            &["kappa_star", "ob", "per_level"],
        ),
        "supervise" => schema_object(
            "recursorlab typed output record",
            &[
                ("kind", ty("string")),
                ("obligation", ty("object")),
                ("steps_consumed", ty("integer")),
                ("license_name", ty("string")),
                ("framework", ty("string")),
                ("dimension", ty("string")),
                ("claimed_level", ty("integer")),
                ("residual", ty("object")),
                ("certificate_length", ty("integer")),
                ("tried_languages", ty("object")),
                ("boundary_condition", ty("string")),
                ("unresolved_declaration", ty("boolean")),
                ("certificates", array_of(ty("object"))),
                ("richer_language_ref", ty("string")),
            ],
            &["kind", "obligation", "steps_consumed", "certificates"],
        ),
        "audit" => schema_object(
            "recursorlab audit verdict",
            &[
                ("valid", ty("boolean")),
                (
                    "violations",
                    array_of(schema_object(
                        "violation",
                        &[
                            ("kind", ty("string")),
                            ("detail", ty("string")),
                            ("found", ty("integer")),
                            ("required", ty("integer")),
                        ],
                        &["kind", "detail"],
                    )),
                ),
            ],
            &["valid", "violations"],
        ),
        "necessity" => schema_object(
            "recursorlab necessity oracle report",
            &[
                ("max_depth", ty("integer")),
                ("enumerated", ty("integer")),
                ("counterexamples", ty("integer")),
            ],
            &["max_depth", "enumerated", "counterexamples"],
        ),
        "family" => schema_object(
            "recursorlab family classification",
            &[(
                "members",
                array_of(schema_object(
                    "member",
                    &[
                        ("name", ty("string")),
                        ("has_base", ty("boolean")),
                        ("step_kind", ty("string")),
                        ("class", ty("string")),
                        ("rules", ty("integer")),
                        ("additive_all_ones", ty("object")),
                    ],
                    &["name", "has_base", "step_kind", "class"],
                )),
            )],
            &["members"],
        ),
        "sweep" => Json::obj([
            (
                "$schema",
                Json::from("http://json-schema.org/draft-07/schema#"),
            ),
            ("title", Json::from("recursorlab sweep CSV")),
            ("type", Json::from("string")),
            (
                "description",
                Json::from("CSV with columns k,payload_size,con,res,ratio,eta,hproof_max"),
            ),
        ]),
        other => Json::obj([("error", Json::from(format!("unknown subcommand {}", other)))]),
    }
}
