//! Command-line front end: `plan`, `verify`, `export` and `gridgen`.
//!
//! Exit codes: 0 success, 1 input error, 2 no feasible plan, 3 the plan
//! failed verification.

mod doc;
mod grid;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::buchi::translate;
use crate::ltl::{parse, Formula};
use crate::model::{Alpha, Wts};
use crate::oracle::{is_secure, satisfies, witness_certifies};
use crate::planner::{plan, Outcome, PlanError};
use crate::synthesis::{build_product, build_twin};

pub use doc::{CostDoc, InfeasibleDoc, PlanDoc, VerdictDoc};
pub use grid::{cell_name, CellLabel, EdgeCost, GridSpec, OutputClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_VAR: &str = "OPAQUE_PLAN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "opaque-plan",
    version,
    about = "Secure optimal LTL planning on weighted transition systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a minimum-cost secure plan.
    Plan {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long)]
        init: String,
        #[arg(long, default_value = "0.5")]
        alpha: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a plan document for security and formula satisfaction.
    Verify {
        #[arg(short, long)]
        model: PathBuf,
        #[arg(short, long)]
        formula: String,
        /// Plan document as written by `plan`.
        plan: PathBuf,
    },
    /// Write a structure as Graphviz DOT.
    Export {
        what: Exported,
        #[arg(short, long)]
        model: Option<PathBuf>,
        #[arg(short, long)]
        formula: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a grid-world model from a grid spec.
    Gridgen {
        spec: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Exported {
    Wts,
    Nba,
    Twin,
    Product,
}

/// Bad arguments or unreadable/invalid inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct InputError(pub String);

impl InputError {
    fn at(path: &Path, e: impl std::fmt::Display) -> Self {
        InputError(format!("{}: {e}", path.display()))
    }
}

/// What a command produced: the document to emit, a diagnostic for stderr
/// and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub code: i32,
    pub document: String,
    pub message: Option<String>,
}

impl Response {
    fn ok(document: String) -> Self {
        Response {
            code: EXIT_OK,
            document,
            message: None,
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::at(path, e))
}

fn load_model(path: &Path) -> Result<Wts, InputError> {
    Wts::load(path).map_err(|e| InputError::at(path, e))
}

fn parse_formula(text: &str) -> Result<Formula, InputError> {
    parse(text).map_err(|e| InputError(format!("formula {text:?}: {e}")))
}

fn json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn cmd_plan(
    model: &Path,
    formula: &str,
    init: &str,
    alpha: &str,
) -> Result<Response, InputError> {
    let t = load_model(model)?;
    let f = parse_formula(formula)?;
    let alpha: Alpha = alpha
        .parse()
        .map_err(|e| InputError(format!("--alpha: {e}")))?;
    let q0 = t
        .id(init)
        .ok_or_else(|| InputError(format!("unknown initial state {init:?}")))?;
    let outcome = plan(&t, &f, q0, alpha).map_err(|e| match e {
        PlanError::UnknownState(s) | PlanError::NotInitial(s) => {
            InputError(format!("{s:?} is not an initial state"))
        }
    })?;
    Ok(match outcome {
        Outcome::Found(r) => Response::ok(json(&PlanDoc::from_result(&t, &r))),
        Outcome::Infeasible(why) => Response {
            code: EXIT_INFEASIBLE,
            document: json(&InfeasibleDoc {
                initial: init.to_string(),
                feasible: false,
                reason: why.as_str().to_string(),
            }),
            message: Some(format!("no feasible plan from {init}")),
        },
    })
}

pub fn cmd_verify(model: &Path, plan_path: &Path, formula: &str) -> Result<Response, InputError> {
    let t = load_model(model)?;
    let f = parse_formula(formula)?;
    let doc = PlanDoc::from_json(&read(plan_path)?).map_err(|e| InputError::at(plan_path, e))?;
    let p = doc.plan(&t).map_err(|e| InputError::at(plan_path, e))?;
    let claimed = doc.witness(&t).map_err(|e| InputError::at(plan_path, e))?;
    let verdict = is_secure(&t, &p);
    let sat = satisfies(&t, &p, &f);
    let claimed_ok = claimed.map(|w| witness_certifies(&t, &p, &w));
    let out = VerdictDoc::new(
        &t,
        verdict.secure,
        verdict.witness.as_ref(),
        sat,
        claimed_ok,
    );
    let mut failures = Vec::new();
    if !verdict.secure {
        failures.push("plan is not secure");
    }
    if !sat {
        failures.push("plan does not satisfy the formula");
    }
    Ok(Response {
        code: if failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_VERIFY
        },
        document: json(&out),
        message: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

pub fn cmd_export(
    what: Exported,
    model: Option<&Path>,
    formula: Option<&str>,
) -> Result<Response, InputError> {
    let need_model = || model.ok_or_else(|| InputError(format!("export {what:?} needs --model")));
    let need_formula =
        || formula.ok_or_else(|| InputError(format!("export {what:?} needs --formula")));
    let dot = match what {
        Exported::Wts => load_model(need_model()?)?.to_dot(),
        Exported::Nba => translate(&parse_formula(need_formula()?)?).to_dot(),
        Exported::Twin => build_twin(&load_model(need_model()?)?).to_dot(),
        Exported::Product => {
            let t = load_model(need_model()?)?;
            let nba = translate(&parse_formula(need_formula()?)?);
            let twin = build_twin(&t);
            let product = build_product(&twin, &nba);
            assert!(
                product.within_size_bounds(),
                "product exceeds |Q|^2 * |QB| states"
            );
            product.to_dot()
        }
    };
    Ok(Response::ok(dot))
}

pub fn cmd_gridgen(spec: &Path) -> Result<Response, InputError> {
    let g = GridSpec::from_json(&read(spec)?).map_err(|e| InputError::at(spec, e))?;
    let doc = g.to_model().map_err(|e| InputError::at(spec, e))?;
    let mut text = doc.to_json();
    text.push('\n');
    Ok(Response::ok(text))
}

/// Applies the thread cap from the environment to the global pool.
pub fn configure_threads() -> Result<(), InputError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        InputError(format!(
            "{THREADS_VAR} must be a positive integer, got {v:?}"
        ))
    })?;
    // Fails only if the pool already exists, in which case it stays as is.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn dispatch(cmd: &Command) -> Result<(Response, Option<PathBuf>), InputError> {
    Ok(match cmd {
        Command::Plan {
            model,
            formula,
            init,
            alpha,
            out,
        } => (cmd_plan(model, formula, init, alpha)?, out.clone()),
        Command::Verify {
            model,
            formula,
            plan,
        } => (cmd_verify(model, plan, formula)?, None),
        Command::Export {
            what,
            model,
            formula,
            out,
        } => (
            cmd_export(*what, model.as_deref(), formula.as_deref())?,
            out.clone(),
        ),
        Command::Gridgen { spec, out } => (cmd_gridgen(spec)?, out.clone()),
    })
}

fn execute(cmd: &Command) -> Result<i32, InputError> {
    configure_threads()?;
    let (resp, out) = dispatch(cmd)?;
    match out {
        Some(path) => {
            std::fs::write(&path, &resp.document).map_err(|e| InputError::at(&path, e))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(resp.document.as_bytes());
        }
    }
    if let Some(m) = resp.message {
        eprintln!("{m}");
    }
    Ok(resp.code)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
