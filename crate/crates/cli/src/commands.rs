use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use evoverse_core::analysis::{
    flood_bounded, order_experiment, order_experiment_parallel, realize, refute,
    replay_certificate, run_once, scan_budget, AnalysisError, BudgetFn, Certificate, RefuteOptions,
    TraceSet,
};
use evoverse_core::pe::PEAutomaton;
use evoverse_core::sim_e::{EvolutionaryState, EvolutionaryUc};
use evoverse_core::sim_v::StaticUc;
use evoverse_core::uc::{
    compile_tm, ControlState, Instruction, Move, Procedure, TmDescription, UniverseComputer, BLANK,
};
use evoverse_server::ServerConfig;

use crate::{BackendArg, Cli, Command, StateArgs};

const DEFAULT_RUN_BUDGET: usize = 10_000;

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "code": self.code, "message": self.message } }).to_string()
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::Uc(_) => "procedure-error",
            AnalysisError::BadBudget(_) => "bad-budget",
            AnalysisError::NotPermutation => "not-permutation",
            AnalysisError::FloodTooLarge { .. } => "flood-too-large",
            AnalysisError::NotSubExponential { .. } => "not-subexponential",
            AnalysisError::ChallengeTooShort { .. } => "challenge-too-short",
            AnalysisError::BudgetTooLarge(_) => "budget-too-large",
            AnalysisError::AdversaryFailed(_) => "adversary-failed",
            AnalysisError::WitnessTooLong { .. } => "witness-too-long",
            AnalysisError::CheckerBudgetExhausted(_) => "budget-exhausted",
            AnalysisError::IllDefinedTrace(_) => "ill-defined-trace",
            AnalysisError::RealizationMismatch(_) => "realization-mismatch",
            AnalysisError::Replay(_) => "replay-failed",
        };
        Self::new(code, e.to_string())
    }
}

impl From<evoverse_core::uc::UcError> for CliError {
    fn from(e: evoverse_core::uc::UcError) -> Self {
        Self::new("procedure-error", e.to_string())
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::new("io", format!("{}: {e}", path.display()))
}

fn emit(value: &impl Serialize) -> Result<(), CliError> {
    let line = serde_json::to_string(value).expect("outputs serialize");
    writeln!(io::stdout().lock(), "{line}").map_err(|e| CliError::new("io", e.to_string()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn load_world(state: &StateArgs) -> Result<EvolutionaryUc, CliError> {
    match &state.state {
        None => Ok(EvolutionaryUc::new()),
        Some(path) => {
            let parsed = EvolutionaryState::from_json(&read(path)?)
                .map_err(|e| CliError::new("bad-state", e.to_string()))?;
            EvolutionaryUc::restore(&parsed).map_err(|e| CliError::new("bad-state", e.to_string()))
        }
    }
}

fn save_world(state: &StateArgs, world: &EvolutionaryUc) -> Result<(), CliError> {
    match &state.save_state {
        Some(path) => write(path, &world.state().to_json()),
        None => Ok(()),
    }
}

fn accept_all() -> Procedure {
    Procedure::new([Instruction::new(
        ControlState::START,
        BLANK,
        ControlState::Halt,
        BLANK,
        Move::L,
    )])
    .expect("single instruction")
}

/// `scan`, `empty`/`none`, `all`, or a JSON file holding either an
/// instruction list or a machine description.
fn load_procedure(spec: &str) -> Result<Procedure, CliError> {
    match spec {
        "scan" => return Ok(Procedure::scan()),
        "empty" | "none" => return Ok(Procedure::empty()),
        "all" => return Ok(accept_all()),
        _ => {}
    }
    let text = read(Path::new(spec))?;
    if let Ok(tm) = serde_json::from_str::<TmDescription>(&text) {
        return Ok(compile_tm(&tm)?);
    }
    Ok(Procedure::from_json(&text)?)
}

#[derive(Serialize)]
struct RunLine<'a> {
    input: &'a str,
    backend: evoverse_core::uc::Backend,
    procedure: String,
    outcome: evoverse_core::uc::Outcome,
    time: usize,
    steps: usize,
    output: Option<String>,
    clock_cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    configs: Option<Vec<String>>,
}

fn run_inputs<U: UniverseComputer>(
    uc: &mut U,
    procedure: &Procedure,
    inputs: &[String],
    budget: usize,
    trace: bool,
) -> Result<(), CliError> {
    let mut computist = evoverse_core::uc::Computist::new(&mut *uc);
    for x in inputs {
        let path = computist.run(procedure, x, budget)?;
        emit(&RunLine {
            input: x,
            backend: computist.uc().backend(),
            procedure: path.procedure.to_string(),
            outcome: path.outcome,
            time: path.time(),
            steps: path.steps(),
            output: path.output(),
            clock_cost: path.clock_cost,
            configs: trace.then(|| path.render()),
        })?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct TraceLine {
    input: String,
    output: String,
}

fn load_trace(trace: Option<&Path>, pairs: &[String]) -> Result<TraceSet, CliError> {
    let bad = |m: String| CliError::new("bad-trace", m);
    let parsed: Vec<(String, String)> = match trace {
        Some(path) => read(path)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str::<TraceLine>(l)
                    .map(|t| (t.input, t.output))
                    .map_err(|e| bad(format!("line {}: {e}", i + 1)))
            })
            .collect::<Result<_, _>>()?,
        None => pairs
            .iter()
            .map(|p| {
                p.split_once('=')
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .ok_or_else(|| bad(format!("{p:?} is not input=output")))
            })
            .collect::<Result<_, _>>()?,
    };
    Ok(TraceSet::new(parsed))
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Run {
            backend,
            procedure,
            inputs,
            trace,
            state,
        } => {
            let procedure = load_procedure(&procedure)?;
            let budget = cli.budget.unwrap_or(DEFAULT_RUN_BUDGET);
            match backend {
                BackendArg::Static => {
                    if state.state.is_some() || state.save_state.is_some() {
                        return Err(CliError::new(
                            "state-unsupported",
                            "the static backend has no state",
                        ));
                    }
                    run_inputs(&mut StaticUc::new(), &procedure, &inputs, budget, trace)
                }
                BackendArg::Evolutionary => {
                    let mut world = load_world(&state)?;
                    run_inputs(&mut world, &procedure, &inputs, budget, trace)?;
                    save_world(&state, &world)
                }
            }
        }
        Command::Pt1 { inputs, snapshot } => {
            let mut a = PEAutomaton::new();
            for x in &inputs {
                let out = a
                    .query(x)
                    .map_err(|e| CliError::new("malformed-input", e.to_string()))?;
                emit(&evoverse_core::pe::QueryLogEntry::new(x.clone(), &out))?;
            }
            if snapshot {
                emit(&json!({ "snapshot": a.snapshot() }))?;
            }
            Ok(())
        }
        Command::Flood {
            n,
            bound,
            then,
            fresh_then,
            state,
        } => {
            let mut world = load_world(&state)?;
            let mut fresh = world.branch();
            let report = flood_bounded(&mut world, n, bound)?;
            emit(&report)?;
            for (branch, uc, inputs) in [
                ("flooded", &mut world, &then),
                ("fresh", &mut fresh, &fresh_then),
            ] {
                for x in inputs {
                    let outcome =
                        run_once(uc, &Procedure::scan(), x, scan_budget(x.len()))?.outcome;
                    emit(&json!({
                        "branch": branch,
                        "input": x,
                        "answer": outcome.answer().map(|a| a.as_str()),
                    }))?;
                }
            }
            save_world(&state, &world)
        }
        Command::OrderExp {
            backend,
            first,
            second,
            jobs,
        } => {
            let second = second.unwrap_or_else(|| {
                let mut s = first.clone();
                s.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                s
            });
            let report = match (backend, jobs > 1) {
                (BackendArg::Static, false) => order_experiment(&StaticUc::new(), &first, &second)?,
                (BackendArg::Static, true) => {
                    order_experiment_parallel(&StaticUc::new(), &first, &second)?
                }
                (BackendArg::Evolutionary, false) => {
                    order_experiment(&EvolutionaryUc::new(), &first, &second)?
                }
                (BackendArg::Evolutionary, true) => {
                    order_experiment_parallel(&EvolutionaryUc::new(), &first, &second)?
                }
            };
            emit(&report)
        }
        Command::Refute {
            decider,
            f,
            threshold,
            k,
            challenge,
            out,
            state,
        } => {
            let decider = load_procedure(&decider)?;
            let budget: BudgetFn = f.parse()?;
            let mut world = load_world(&state)?;
            let opts = RefuteOptions {
                budget,
                threshold,
                validity: k,
                challenge,
            };
            let cert = refute(&mut world, &decider, &opts)?;
            if let Some(cap) = cli.budget {
                if cert.budget.steps > cap {
                    return Err(CliError::new(
                        "budget-too-large",
                        format!("f(|w|) = {} exceeds --budget {cap}", cert.budget.steps),
                    ));
                }
            }
            let summary = json!({
                "challenge": cert.challenge,
                "steps": cert.budget.steps,
                "case": cert.case,
                "contradiction": cert.contradiction,
                "witness": cert.witness,
                "transcript_len": cert.transcript.len(),
                "verified": true,
            });
            match out {
                Some(path) => {
                    write(&path, &cert.to_json())?;
                    emit(&summary)?;
                }
                None => emit(&cert)?,
            }
            save_world(&state, &world)
        }
        Command::Realize { trace, pairs } => {
            let trace = load_trace(trace.as_deref(), &pairs)?;
            emit(&realize(&trace)?)
        }
        Command::ReplayCert { file } => {
            let cert = Certificate::from_json(&read(&file)?)
                .map_err(|e| CliError::new("bad-certificate", e.to_string()))?;
            let report = replay_certificate(&cert).map_err(AnalysisError::from)?;
            emit(&json!({
                "status": "verified",
                "steps": report.steps,
                "contradiction": report.contradiction,
            }))
        }
        Command::Serve { port } => {
            let env_seed = std::env::var("EVOVERSE_SEED")
                .ok()
                .map(|s| {
                    s.parse::<u64>()
                        .map_err(|_| CliError::new("bad-config", format!("EVOVERSE_SEED={s:?}")))
                })
                .transpose()?;
            let config = ServerConfig {
                port,
                seed: cli.seed.or(env_seed),
                budget: cli.budget,
                ..ServerConfig::default()
            };
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| CliError::new("io", e.to_string()))?;
            eprintln!("listening on port {port}");
            runtime
                .block_on(evoverse_server::serve(config))
                .map_err(|e| CliError::new("io", e.to_string()))
        }
        Command::Snapshot { inputs, log, state } => {
            let mut world = load_world(&state)?;
            for x in &inputs {
                run_once(&mut world, &Procedure::scan(), x, scan_budget(x.len()))?;
            }
            let a = world.automaton();
            let mut summary = BTreeMap::new();
            summary.insert("states", a.state_count() as u64);
            summary.insert("transitions", a.transition_count() as u64);
            summary.insert("accepting", a.accepting().count() as u64);
            summary.insert("clock", a.clock());
            summary.insert("queries", world.query_log().len() as u64);
            summary.insert("max_accepted_length", world.max_accepted_length() as u64);
            emit(&summary)?;
            if log {
                for entry in world.query_log() {
                    emit(entry)?;
                }
            }
            save_world(&state, &world)
        }
    }
}
