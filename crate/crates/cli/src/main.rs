mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use hf_frege::abstraction::{
    blv_check, cardinal_of, class_abstraction, class_number, extension_of, AbstractionObject, ClassEquivalence,
    Presentation, ScottAbstraction, SetRelation,
};
use hf_frege::diagonal::{russell_escape, russell_witness};
use hf_frege::eliminate::{eval_extended, translate_literal, translate_uniform};
use hf_frege::model::{eval, Env, Universe, DEFAULT_BUDGET};
use hf_frege::syntax::{
    code_formula, decode_formula, enumerate_u64, index_of, index_of_u64, normalize, parse, CoreFormula,
    ENUMERATION_VERSION,
};
use hf_frege::HfSet;
use hf_frege_suite::acceptance::{run_criterion, CRITERIA, DEFAULT_SEED};

/// Universe used when `--universe` is not given.
const DEFAULT_UNIVERSE: &str = "v3";
/// Most formulas `enumerate` prints in one call.
const MAX_ENUMERATE: u64 = 100_000;

#[derive(Parser)]
#[command(name = "hf-frege", about = "Abstraction operators over finite universes of hereditarily finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Universe: v2, v3, v4, v5!, ack:N or closure:#a,#b,... [default: v3]
    #[arg(long, global = true)]
    universe: Option<String>,
    /// Parameter value, as name=<hf literal>; repeatable.
    #[arg(long = "bind", value_name = "NAME=HF", global = true)]
    binds: Vec<String>,
    /// Enumeration indices the first-equivalent search may scan.
    #[arg(long, global = true, env = "HF_FREGE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Truth value of a formula, which may contain ε-terms.
    Eval {
        #[arg(long)]
        formula: String,
    },
    /// Extension object of {object : formula}.
    Extension {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "x")]
        object: String,
    },
    /// Number object of {object : formula}.
    Number {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "x")]
        object: String,
    },
    /// Abstraction object of {object : formula} along a class equivalence.
    Abstract {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "x")]
        object: String,
        /// `extensional`, `equinumerous`, or a formula relating the classes `$F` and `$G`.
        #[arg(long, default_value = "extensional")]
        equiv: String,
    },
    /// Scott's trick: the cardinal of a set, or its class under a relation in `a` and `b`.
    Scott {
        #[arg(long)]
        element: String,
        #[arg(long)]
        relation: Option<String>,
    },
    /// Rewrites a formula with ε-terms into a pure one.
    Eliminate {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value_t = Mode::Literal)]
        mode: Mode,
    },
    /// Diagonal witness against a candidate truth predicate in `y` (code) and `x` (object).
    Diagonal {
        #[arg(long = "T", value_name = "FORMULA")]
        predicate: String,
    },
    /// The extension object of the Russell class of the universe, which lies outside it.
    Escape,
    /// Core formulas in enumeration order.
    Enumerate {
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long, default_value_t = 10)]
        count: u64,
    },
    /// Checks that extension objects agree exactly when extensions do.
    BlvCheck {
        /// Presentations to compare; repeatable.
        #[arg(long)]
        formula: Vec<String>,
        /// Without --formula: the first N enumerated formulas, each with every parameter.
        #[arg(long, default_value_t = 30)]
        corpus: u64,
    },
    /// Code and enumeration index of a formula in `x` and `p`.
    Code {
        #[arg(long)]
        formula: String,
    },
    /// The core formula coded by a set.
    Decode {
        #[arg(long)]
        set: String,
    },
    /// Runs the acceptance battery.
    Suite {
        /// Criteria to run; all when omitted.
        #[arg(long)]
        only: Vec<u8>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Literal,
    Uniform,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] hf_frege::Error),
    #[error("{0}")]
    Usage(String),
    #[error("acceptance criteria failed: {0:?}")]
    SuiteFailed(Vec<u8>),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Usage(_) => "usage",
            CliError::SuiteFailed(_) => "suite_failed",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(hf_frege::Error::Invariant(_)) | CliError::SuiteFailed(_) => 4,
            CliError::Lib(e) if e.is_budget() => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let version: &'static str = format!("{} ({ENUMERATION_VERSION})", env!("CARGO_PKG_VERSION")).leak();
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(out) => {
            write_stdout(&out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                eprintln!("{}", json!({"error": {"code": e.code(), "message": e.to_string()}}));
            } else {
                eprintln!("error[{}]: {e}", e.code());
            }
            ExitCode::from(e.exit_code())
        }
    }
}

/// Writes to stdout, treating a closed pipe (e.g. `| head`) as success.
fn write_stdout(s: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

/// Runs the command and returns everything it prints.
fn run(cli: &Cli) -> Result<String> {
    if let Command::Suite { only } = &cli.command {
        return suite(cli, only);
    }
    let value = match &cli.command {
        Command::Eval { formula } => {
            let u = universe(cli)?;
            let f = parse(formula).map_err(hf_frege::Error::from)?;
            let env = bindings(cli)?;
            let value = if f.is_pure() { eval(&u, &f, &env)? } else { eval_extended(&u, &f, &env, cli.budget)? };
            json!({"formula": f.to_string(), "universe": u.name(), "bindings": env_json(&env), "value": value})
        }
        Command::Extension { formula, object } => {
            let (u, p) = presentation(cli, formula, object)?;
            object_json(&u, &p, extension_of(&u, &p, cli.budget)?)?
        }
        Command::Number { formula, object } => {
            let (u, p) = presentation(cli, formula, object)?;
            object_json(&u, &p, class_number(&u, &p, cli.budget)?)?
        }
        Command::Abstract { formula, object, equiv } => {
            let (u, p) = presentation(cli, formula, object)?;
            let equiv = match equiv.as_str() {
                "extensional" => ClassEquivalence::Extensional,
                "equinumerous" => ClassEquivalence::Equinumerous,
                src => ClassEquivalence::first_order(src)?,
            };
            object_json(&u, &p, class_abstraction(&u, &equiv, &p, cli.budget)?)?
        }
        Command::Scott { element, relation } => {
            let x = literal(element)?;
            match relation {
                None => json!({
                    "element": x.to_string(),
                    "cardinality": x.cardinality(),
                    "cardinal": cardinal_of(&x)?.to_string(),
                }),
                Some(src) => {
                    let u = universe(cli)?;
                    let scott = ScottAbstraction::new(&u, &SetRelation::formula(src)?)?;
                    json!({
                        "element": x.to_string(),
                        "relation": src,
                        "universe": u.name(),
                        "classes": scott.class_count(),
                        "abstraction": scott.abstract_of(&x)?.to_string(),
                    })
                }
            }
        }
        Command::Eliminate { formula, mode } => {
            let u = universe(cli)?;
            let f = parse(formula).map_err(hf_frege::Error::from)?;
            let t = match mode {
                Mode::Literal => translate_literal(&u, &f, &bindings(cli)?, cli.budget)?,
                Mode::Uniform => translate_uniform(&u, &f, cli.budget)?,
            };
            let mut v = serde_json::to_value(t.audit()).expect("audit serializes");
            v["input"] = json!(f.to_string());
            v["mode"] = json!(match mode {
                Mode::Literal => "literal",
                Mode::Uniform => "uniform",
            });
            v
        }
        Command::Diagonal { predicate } => {
            let base = cli.universe.as_deref().map(Universe::from_descriptor).transpose()?;
            let t = parse(predicate).map_err(hf_frege::Error::from)?;
            serde_json::to_value(russell_witness(&t, base.as_ref())?.to_json()).expect("witness serializes")
        }
        Command::Escape => {
            let u = universe(cli)?;
            serde_json::to_value(russell_escape(&u, cli.budget)?.to_json(&u)).expect("escape serializes")
        }
        Command::Enumerate { from, count } => {
            if *count > MAX_ENUMERATE {
                return Err(CliError::Usage(format!("--count is capped at {MAX_ENUMERATE}")));
            }
            let end =
                from.checked_add(*count).ok_or_else(|| CliError::Usage("--from plus --count overflows".into()))?;
            let rows: Vec<Value> =
                (*from..end).map(|n| json!({"index": n, "formula": enumerate_u64(n).to_string()})).collect();
            json!({"enumeration": ENUMERATION_VERSION, "formulas": rows})
        }
        Command::BlvCheck { formula, corpus } => blv(cli, formula, *corpus)?,
        Command::Code { formula } => {
            let f = parse(formula).map_err(hf_frege::Error::from)?;
            let core = normalize(&f, "x", "p")?;
            json!({
                "formula": core.to_string(),
                "code": code_formula(&core).to_string(),
                "index": index_json(&core)?,
            })
        }
        Command::Decode { set } => {
            let core = decode_formula(&literal(set)?)?;
            json!({"formula": core.to_string(), "index": index_json(&core)?})
        }
        Command::Suite { .. } => unreachable!("handled above"),
    };
    Ok(emit(cli, &value))
}

fn emit(cli: &Cli, v: &Value) -> String {
    if cli.json {
        format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize"))
    } else {
        render::text(v)
    }
}

fn suite(cli: &Cli, only: &[u8]) -> Result<String> {
    let ids: Vec<u8> = if only.is_empty() { (1..=CRITERIA).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > CRITERIA) {
        return Err(CliError::Usage(format!("no criterion {bad}; criteria run from 1 to {CRITERIA}")));
    }
    let reports: Vec<_> = ids.iter().map(|&id| run_criterion(id, cli.seed)).collect();
    let out = if cli.json {
        let rows: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "id": r.id,
                    "title": r.title,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seconds": r.elapsed.as_secs_f64(),
                    "limit_seconds": r.limit.as_secs(),
                })
            })
            .collect();
        emit(cli, &json!({"seed": cli.seed, "criteria": rows}))
    } else {
        reports.iter().map(|r| format!("{r}\n")).collect()
    };
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if failed.is_empty() {
        Ok(out)
    } else {
        write_stdout(&out);
        Err(CliError::SuiteFailed(failed))
    }
}

fn blv(cli: &Cli, formulas: &[String], corpus: u64) -> Result<Value> {
    let u = universe(cli)?;
    let presentations: Vec<Presentation> = if formulas.is_empty() {
        let mut out = Vec::new();
        for n in 0..corpus {
            let f = enumerate_u64(n).to_surface("x", "p");
            for p in u.elements() {
                out.push(Presentation::new(f.clone(), Env::from([("p".to_string(), p.clone())])));
            }
        }
        out
    } else {
        let env = bindings(cli)?;
        formulas.iter().map(|f| Presentation::parse(f, env.clone())).collect::<hf_frege::Result<_>>()?
    };
    let report = blv_check(&u, &presentations, cli.budget)?;
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|&(i, j)| json!([describe(&presentations[i]), describe(&presentations[j])]))
        .collect();
    Ok(json!({
        "universe": u.name(),
        "presentations": report.presentations,
        "pairs": report.pairs,
        "equal_extensions": report.equal_extensions,
        "distinct_objects": report.distinct_objects,
        "violations": violations,
    }))
}

fn describe(p: &Presentation) -> String {
    let binds: Vec<String> = p.env.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{} [{}]", p.formula, binds.join(", "))
}

fn universe(cli: &Cli) -> Result<Universe> {
    Ok(Universe::from_descriptor(cli.universe.as_deref().unwrap_or(DEFAULT_UNIVERSE))?)
}

fn presentation(cli: &Cli, formula: &str, object: &str) -> Result<(Universe, Presentation)> {
    let u = universe(cli)?;
    let p = Presentation::parse(formula, bindings(cli)?)?.with_object(object);
    Ok((u, p))
}

fn object_json(u: &Universe, p: &Presentation, obj: AbstractionObject) -> Result<Value> {
    let mut v = serde_json::to_value(obj.to_json()).expect("objects serialize");
    let class: Vec<String> = p.extension(u)?.members(u).iter().map(HfSet::to_string).collect();
    v["class"] = json!(class);
    v["presentation"] = json!(describe(p));
    Ok(v)
}

fn literal(src: &str) -> Result<HfSet> {
    src.trim().parse().map_err(|e| CliError::Usage(format!("bad set literal `{src}`: {e}")))
}

fn bindings(cli: &Cli) -> Result<Env> {
    let mut env = Env::new();
    for b in &cli.binds {
        let (name, value) =
            b.split_once('=').ok_or_else(|| CliError::Usage(format!("--bind expects name=<set>, got `{b}`")))?;
        let name = name.trim().trim_start_matches('$');
        if name.is_empty() {
            return Err(CliError::Usage(format!("--bind `{b}` has no name")));
        }
        env.insert(name.to_string(), literal(value)?);
    }
    Ok(env)
}

fn env_json(env: &Env) -> Value {
    Value::Object(env.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect())
}

/// The enumeration index as a number when it fits in `u64`, else as a decimal string.
fn index_json(core: &CoreFormula) -> Result<Value> {
    Ok(match index_of_u64(core)? {
        Some(n) => json!(n),
        None => json!(index_of(core)?.to_string()),
    })
}
