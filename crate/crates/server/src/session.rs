//! Game sessions: a hidden backend chosen by a seeded coin flip, an
//! append-only transcript and a one-shot guess.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use evoverse_core::analysis::{realize, Realization, TraceSet};
use evoverse_core::sim_e::EvolutionaryUc;
use evoverse_core::sim_v::StaticUc;
use evoverse_core::uc::{Answer, Backend, ComputationPath, Computist, Procedure, UcError};

use crate::error::ApiError;

/// Longest input a session accepts.
pub const MAX_INPUT_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Querying,
    Revealed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchange {
    pub input: String,
    pub answer: Answer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reveal {
    pub id: String,
    pub claim: Backend,
    pub truth: Backend,
    pub correct: bool,
    pub transcript: Vec<Exchange>,
    pub realization: Realization,
}

#[derive(Debug, Clone)]
enum HiddenBox {
    Static(Computist<StaticUc>),
    Evolutionary(Computist<EvolutionaryUc>),
}

impl HiddenBox {
    fn run(&mut self, p: &Procedure, x: &str, budget: usize) -> Result<ComputationPath, UcError> {
        match self {
            HiddenBox::Static(c) => c.run(p, x, budget),
            HiddenBox::Evolutionary(c) => c.run(p, x, budget),
        }
    }
}

/// Backend picked by seed `seed`.
pub fn backend_for_seed(seed: u64) -> Backend {
    if ChaCha8Rng::seed_from_u64(seed).random_bool(0.5) {
        Backend::Evolutionary
    } else {
        Backend::Static
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    backend: Backend,
    hidden: HiddenBox,
    transcript: Vec<Exchange>,
    phase: Phase,
}

impl Session {
    pub fn new(id: String, seed: u64) -> Self {
        let backend = backend_for_seed(seed);
        let hidden = match backend {
            Backend::Static => HiddenBox::Static(Computist::new(StaticUc::new())),
            Backend::Evolutionary => HiddenBox::Evolutionary(Computist::new(EvolutionaryUc::new())),
        };
        Self {
            id,
            backend,
            hidden,
            transcript: Vec::new(),
            phase: Phase::Querying,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn transcript(&self) -> &[Exchange] {
        &self.transcript
    }

    pub fn query(
        &mut self,
        procedure: &Procedure,
        input: &str,
        budget: usize,
    ) -> Result<Answer, ApiError> {
        if self.phase != Phase::Querying {
            return Err(ApiError::AlreadyGuessed);
        }
        if input.len() > MAX_INPUT_LEN {
            return Err(ApiError::MalformedInput(format!(
                "input longer than {MAX_INPUT_LEN} symbols"
            )));
        }
        let path = self
            .hidden
            .run(procedure, input, budget)
            .map_err(|e| match e {
                UcError::MalformedInput { .. } => ApiError::MalformedInput(e.to_string()),
                other => ApiError::Internal(other.to_string()),
            })?;
        let answer = path
            .outcome
            .answer()
            .ok_or(ApiError::BudgetExhausted(budget))?;
        self.transcript.push(Exchange {
            input: input.to_string(),
            answer,
        });
        Ok(answer)
    }

    pub fn guess(&mut self, claim: Backend) -> Result<Reveal, ApiError> {
        if self.phase != Phase::Querying {
            return Err(ApiError::AlreadyGuessed);
        }
        let trace = TraceSet::new(
            self.transcript
                .iter()
                .map(|e| (e.input.clone(), e.answer.as_str().to_string())),
        );
        let realization = realize(&trace).map_err(|e| ApiError::Internal(e.to_string()))?;
        self.phase = Phase::Revealed;
        Ok(Reveal {
            id: self.id.clone(),
            claim,
            truth: self.backend,
            correct: claim == self.backend,
            transcript: self.transcript.clone(),
            realization,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed_for(backend: Backend) -> u64 {
        (0..).find(|&s| backend_for_seed(s) == backend).unwrap()
    }

    #[test]
    fn seeds_pick_backends_reproducibly_and_evenly() {
        assert_eq!(backend_for_seed(42), backend_for_seed(42));
        let evolutionary = (0..100)
            .filter(|&s| backend_for_seed(s) == Backend::Evolutionary)
            .count();
        assert!((35..=65).contains(&evolutionary), "{evolutionary}");
    }

    #[test]
    fn flood_then_query_tells_backends_apart() {
        let scan = Procedure::scan();
        let mut answers = Vec::new();
        for backend in [Backend::Static, Backend::Evolutionary] {
            let mut s = Session::new("s".into(), seed_for(backend));
            for x in ["00", "01", "10", "11"] {
                s.query(&scan, x, 10).unwrap();
            }
            answers.push(s.query(&scan, "0", 10).unwrap());
        }
        assert_eq!(answers, [Answer::Yes, Answer::No]);
    }

    #[test]
    fn guess_reveals_once() {
        let mut s = Session::new("s".into(), 1);
        s.query(&Procedure::scan(), "101", 10).unwrap();
        let reveal = s.guess(Backend::Static).unwrap();
        assert_eq!(reveal.transcript.len(), 1);
        assert_eq!(s.guess(Backend::Static), Err(ApiError::AlreadyGuessed));
        assert_eq!(
            s.query(&Procedure::scan(), "1", 10),
            Err(ApiError::AlreadyGuessed)
        );
    }

    #[test]
    fn malformed_input_is_refused_without_recording() {
        let mut s = Session::new("s".into(), 1);
        assert!(matches!(
            s.query(&Procedure::scan(), "12x", 10),
            Err(ApiError::MalformedInput(_))
        ));
        assert!(s.transcript().is_empty());
    }
}
