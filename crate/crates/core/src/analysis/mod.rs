//! Experiments and constructions on top of the two backends: path analysis,
//! order experiments, flooding, the polynomial-time refuter, the witness
//! checker and trace realization.

mod budget;
mod flood;
mod np;
mod order;
mod path;
mod realize;
mod refute;

use thiserror::Error;

use crate::uc::{ComputationPath, Outcome, Procedure, Run, UcError, UniverseComputer};

pub use budget::BudgetFn;
pub use flood::{flood, flood_bounded, FloodReport, DEFAULT_FLOOD_BOUND};
pub use np::{
    decode_pair, encode_pair, equality_checker, np_witness_check, pair_budget,
    same_length_witness_checker,
};
pub use order::{order_experiment, order_experiment_parallel, Divergence, OrderReport};
pub use path::{analyze_path, PathAnalysis};
pub use realize::{
    realize, CounterSeededMachine, Realization, StaticTableMachine, TraceSet, TraceViolation,
};
pub use refute::{
    refute, replay_certificate, BranchSnapshots, BudgetSpec, Certificate, ChallengeCase,
    ContradictionKind, Purpose, RefuteOptions, ReplayError, ReplayReport, Role, TranscriptStep,
    DEFAULT_VALIDITY,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Uc(#[from] UcError),
    #[error("bad budget function {0}")]
    BadBudget(String),
    #[error("the two sequences are not permutations of each other")]
    NotPermutation,
    #[error("flooding length {length} takes {queries} queries; bound is length {bound}")]
    FloodTooLarge {
        length: usize,
        bound: usize,
        queries: u128,
    },
    #[error("declared threshold {declared} is below {required}, the least t with f(n) < 2^n for all n > t")]
    NotSubExponential { declared: u64, required: u64 },
    #[error("challenge must be longer than {min} symbols, got {len}")]
    ChallengeTooShort { len: usize, min: usize },
    #[error("step budget {0} is too large to simulate")]
    BudgetTooLarge(u64),
    #[error("adversary could not build a contradiction: {0}")]
    AdversaryFailed(String),
    #[error("witness of length {len} exceeds the bound {bound}")]
    WitnessTooLong { len: usize, bound: u64 },
    #[error("checker did not terminate within {0} steps")]
    CheckerBudgetExhausted(usize),
    #[error(transparent)]
    IllDefinedTrace(#[from] TraceViolation),
    #[error("realization disagrees with the trace: {0}")]
    RealizationMismatch(String),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// Steps the scanning procedure needs on an input of length `len`.
pub fn scan_budget(len: usize) -> usize {
    len + 1
}

/// Runs `procedure` to completion on `uc` without an experience set.
pub fn run_once<U: UniverseComputer + ?Sized>(
    uc: &mut U,
    procedure: &Procedure,
    input: &str,
    budget: usize,
) -> Result<ComputationPath, UcError> {
    let mut run = Run::new(procedure, input, budget)?;
    while !run.advance(uc, usize::MAX) {}
    Ok(run.path())
}

/// Outcome of the scanning procedure on `x`.
pub fn scan_outcome<U: UniverseComputer + ?Sized>(uc: &mut U, x: &str) -> Result<Outcome, UcError> {
    Ok(run_once(uc, &Procedure::scan(), x, scan_budget(x.chars().count()))?.outcome)
}
