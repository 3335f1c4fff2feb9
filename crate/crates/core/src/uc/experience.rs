use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::exec::Outcome;
use super::procedure::ProcedureId;
use super::UcError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperienceEntry {
    pub procedure: ProcedureId,
    pub input: String,
    pub outcome: Outcome,
}

/// `EXP`: every `(procedure, input, outcome)` the computist has observed.
///
/// Only terminal outcomes are observations; exhausted or suspended runs are
/// not recorded.
#[derive(Debug, Clone, Default)]
pub struct ExperienceSet {
    entries: Vec<ExperienceEntry>,
    index: HashMap<(ProcedureId, String), Outcome>,
}

impl ExperienceSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an observation. Returns `Ok(true)` if it was new, `Ok(false)`
    /// if it repeats an earlier observation, and an error if it contradicts
    /// one.
    pub fn record(
        &mut self,
        procedure: ProcedureId,
        input: &str,
        outcome: Outcome,
    ) -> Result<bool, UcError> {
        if !outcome.is_terminal() {
            return Ok(false);
        }
        let key = (procedure, input.to_string());
        if let Some(&earlier) = self.index.get(&key) {
            if earlier != outcome {
                return Err(UcError::IllDefinedExperience {
                    procedure: key.0,
                    input: key.1,
                    earlier,
                    now: outcome,
                });
            }
            return Ok(false);
        }
        self.entries.push(ExperienceEntry {
            procedure: key.0.clone(),
            input: key.1.clone(),
            outcome,
        });
        self.index.insert(key, outcome);
        Ok(true)
    }

    pub fn get(&self, procedure: &ProcedureId, input: &str) -> Option<Outcome> {
        self.index
            .get(&(procedure.clone(), input.to_string()))
            .copied()
    }

    pub fn entries(&self) -> &[ExperienceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeats_are_idempotent_and_conflicts_rejected() {
        let mut exp = ExperienceSet::new();
        let p = ProcedureId("p".into());
        assert_eq!(exp.record(p.clone(), "10", Outcome::Accepted), Ok(true));
        assert_eq!(exp.record(p.clone(), "10", Outcome::Accepted), Ok(false));
        assert!(exp.record(p.clone(), "10", Outcome::Rejected).is_err());
        assert_eq!(
            exp.record(p.clone(), "11", Outcome::BudgetExhausted),
            Ok(false)
        );
        assert_eq!(exp.len(), 1);
        assert_eq!(exp.get(&p, "10"), Some(Outcome::Accepted));
    }
}
