//! Step-wise execution of procedures on a universe-computer.
//!
//! A [`Run`] is a resumable computation: it can be advanced a few box calls
//! at a time, set aside, and resumed later, so several runs may interleave
//! on one universe-computer.

use serde::{Deserialize, Serialize};

use super::config::Configuration;
use super::experience::ExperienceSet;
use super::procedure::{Procedure, ProcedureId};
use super::{Answer, UcError, UniverseComputer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// No applicable instruction and the success box said YES.
    Accepted,
    /// No applicable instruction and the success box said NO.
    Rejected,
    /// The step budget ran out while an instruction was still applicable.
    BudgetExhausted,
    /// The run was set aside before terminating.
    Suspended,
}

impl Outcome {
    pub fn is_terminal(self) -> bool {
        matches!(self, Outcome::Accepted | Outcome::Rejected)
    }

    pub fn answer(self) -> Option<Answer> {
        match self {
            Outcome::Accepted => Some(Answer::Yes),
            Outcome::Rejected => Some(Answer::No),
            _ => None,
        }
    }
}

/// `C_0 … C_n` together with how the run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationPath {
    pub procedure: ProcedureId,
    pub input: String,
    pub configs: Vec<Configuration>,
    pub outcome: Outcome,
    pub clock_cost: u64,
}

impl ComputationPath {
    /// Number of configurations on the path (`time_M(x)`).
    pub fn time(&self) -> usize {
        self.configs.len()
    }

    /// Number of transition-box applications.
    pub fn steps(&self) -> usize {
        self.configs.len() - 1
    }

    pub fn last(&self) -> &Configuration {
        self.configs.last().expect("a path holds at least C_0")
    }

    pub fn is_accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }

    /// `y_{C_n}` of an accepted path.
    pub fn output(&self) -> Option<String> {
        self.is_accepted().then(|| self.last().associated_string())
    }

    /// Path log lines (`state|left|[head]|right`).
    pub fn render(&self) -> Vec<String> {
        self.configs.iter().map(Configuration::render).collect()
    }
}

/// A resumable run of one procedure on one input.
#[derive(Debug, Clone)]
pub struct Run {
    procedure: Procedure,
    id: ProcedureId,
    input: String,
    budget: usize,
    configs: Vec<Configuration>,
    clock_cost: u64,
    outcome: Option<Outcome>,
}

impl Run {
    pub fn new(procedure: &Procedure, input: &str, budget: usize) -> Result<Self, UcError> {
        if budget == 0 {
            return Err(UcError::InvalidBudget);
        }
        Ok(Self {
            procedure: procedure.clone(),
            id: procedure.id(),
            input: input.to_string(),
            budget,
            configs: vec![Configuration::initial(input)?],
            clock_cost: 0,
            outcome: None,
        })
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn steps_taken(&self) -> usize {
        self.configs.len() - 1
    }

    pub fn current(&self) -> &Configuration {
        self.configs.last().expect("a run holds at least C_0")
    }

    /// Performs up to `max_calls` box calls. Returns true once the run has
    /// terminated.
    pub fn advance<U: UniverseComputer + ?Sized>(&mut self, uc: &mut U, max_calls: usize) -> bool {
        for _ in 0..max_calls {
            if self.outcome.is_some() {
                break;
            }
            let current = self.current().clone();
            let before = uc.clock().ticks();
            let next = match self.procedure.select(&current) {
                Some(_) if self.steps_taken() == self.budget => {
                    self.outcome = Some(Outcome::BudgetExhausted);
                    break;
                }
                Some(ins) => uc.tbox(&current, ins),
                None => None,
            };
            match next {
                Some(c) => self.configs.push(c),
                None => {
                    let outcome = match uc.sbox(&current) {
                        Answer::Yes => Outcome::Accepted,
                        Answer::No => Outcome::Rejected,
                    };
                    self.outcome = Some(outcome);
                }
            }
            self.clock_cost += uc.clock().ticks() - before;
        }
        self.outcome.is_some()
    }

    /// The path so far; `Suspended` while the run is unfinished.
    pub fn path(&self) -> ComputationPath {
        ComputationPath {
            procedure: self.id.clone(),
            input: self.input.clone(),
            configs: self.configs.clone(),
            outcome: self.outcome.unwrap_or(Outcome::Suspended),
            clock_cost: self.clock_cost,
        }
    }
}

/// A computist working on one universe-computer and accumulating its
/// experience set.
#[derive(Debug, Clone)]
pub struct Computist<U> {
    uc: U,
    experience: ExperienceSet,
}

impl<U: UniverseComputer> Computist<U> {
    pub fn new(uc: U) -> Self {
        Self {
            uc,
            experience: ExperienceSet::new(),
        }
    }

    pub fn uc(&self) -> &U {
        &self.uc
    }

    pub fn uc_mut(&mut self) -> &mut U {
        &mut self.uc
    }

    pub fn into_uc(self) -> U {
        self.uc
    }

    pub fn experience(&self) -> &ExperienceSet {
        &self.experience
    }

    pub fn start(&self, procedure: &Procedure, input: &str, budget: usize) -> Result<Run, UcError> {
        Run::new(procedure, input, budget)
    }

    /// Advances a suspended run; returns its path once it has terminated.
    pub fn resume(
        &mut self,
        run: &mut Run,
        max_calls: usize,
    ) -> Result<Option<ComputationPath>, UcError> {
        if !run.advance(&mut self.uc, max_calls) {
            return Ok(None);
        }
        let path = run.path();
        self.experience
            .record(path.procedure.clone(), &path.input, path.outcome)?;
        Ok(Some(path))
    }

    /// Runs `procedure` on `input` until it terminates or exhausts `budget`
    /// transition steps.
    pub fn run(
        &mut self,
        procedure: &Procedure,
        input: &str,
        budget: usize,
    ) -> Result<ComputationPath, UcError> {
        let mut run = self.start(procedure, input, budget)?;
        loop {
            if let Some(path) = self.resume(&mut run, usize::MAX)? {
                return Ok(path);
            }
        }
    }

    /// The function computed by `procedure`: `y_{C_n}` of an accepting path.
    pub fn compute_function(
        &mut self,
        procedure: &Procedure,
        input: &str,
        budget: usize,
    ) -> Result<String, UcError> {
        let path = self.run(procedure, input, budget)?;
        path.output().ok_or(UcError::NoOutput(path.outcome))
    }
}
