//! The universe-computer abstraction: a transition box and a success box
//! behind one interface, procedures, and the step-wise executor.

mod clock;
mod config;
mod exec;
mod experience;
mod procedure;
mod tm;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clock::{BoxKind, ClockBounds, ClockEntry, ClockMeter};
pub use config::{is_input_symbol, Configuration, ControlState, Instruction, Move, Symbol, BLANK};
pub use exec::{ComputationPath, Computist, Outcome, Run};
pub use experience::{ExperienceEntry, ExperienceSet};
pub use procedure::{Procedure, ProcedureId};
pub use tm::{compile_tm, TmDescription, TmRule};

/// Output of the success box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Static,
    Evolutionary,
}

/// A pair of opaque boxes with a universal clock.
pub trait UniverseComputer {
    /// `TBOX(C, ι)`; `None` is `⊥`.
    fn tbox(&mut self, c: &Configuration, ins: &Instruction) -> Option<Configuration>;
    /// `SBOX(C)`. Evolutionary backends may change internally.
    fn sbox(&mut self, c: &Configuration) -> Answer;
    fn clock(&self) -> &ClockMeter;
    /// The backend's declared `(a, b)` with `ticks ≤ a·|C| + b` per call.
    fn clock_bounds(&self) -> ClockBounds;
    fn backend(&self) -> Backend;
}

impl<U: UniverseComputer + ?Sized> UniverseComputer for &mut U {
    fn tbox(&mut self, c: &Configuration, ins: &Instruction) -> Option<Configuration> {
        (**self).tbox(c, ins)
    }

    fn sbox(&mut self, c: &Configuration) -> Answer {
        (**self).sbox(c)
    }

    fn clock(&self) -> &ClockMeter {
        (**self).clock()
    }

    fn clock_bounds(&self) -> ClockBounds {
        (**self).clock_bounds()
    }

    fn backend(&self) -> Backend {
        (**self).backend()
    }
}

/// Transition box shared by both backends; costs `|C| + 1` ticks.
pub(crate) fn metered_rewrite(
    clock: &mut ClockMeter,
    c: &Configuration,
    ins: &Instruction,
) -> Option<Configuration> {
    clock.charge(BoxKind::Tbox, c.len(), c.len() as u64 + 1);
    c.rewrite(ins)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UcError {
    #[error("symbol {symbol:?} at position {position} is not in {{0,1}}")]
    MalformedInput { position: usize, symbol: char },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("determination condition violated: {first} and {second} share a key")]
    DeterminationViolation {
        first: Instruction,
        second: Instruction,
    },
    #[error("step budget must be at least 1")]
    InvalidBudget,
    #[error("procedure {procedure} on {input:?} was observed as {earlier:?} and now {now:?}")]
    IllDefinedExperience {
        procedure: ProcedureId,
        input: String,
        earlier: Outcome,
        now: Outcome,
    },
    #[error("run ended {0:?}; no output")]
    NoOutput(Outcome),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("machine is nondeterministic at state {state} on {symbol:?}")]
    NondeterministicMachine { state: usize, symbol: Symbol },
}
