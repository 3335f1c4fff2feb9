use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{run_once, AnalysisError};
use crate::sim_e::EvolutionaryUc;
use crate::uc::{ComputationPath, Outcome, Procedure};

/// What a computation path can reveal to the evolving automaton.
///
/// `halting` lists the configurations of the form `(h, x△̲)` with `x` over
/// `{0,1}`; `strings` their contents; `same_length` and `plus_two` the
/// contents of length `|y|` and `|y| + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathAnalysis {
    pub input: String,
    pub budget: usize,
    pub outcome: Outcome,
    pub time: usize,
    pub halting: Vec<String>,
    pub strings: BTreeSet<String>,
    pub same_length: BTreeSet<String>,
    pub plus_two: BTreeSet<String>,
}

impl PathAnalysis {
    pub fn from_path(path: &ComputationPath, budget: usize) -> Self {
        let n = path.input.chars().count();
        let mut halting = Vec::new();
        let mut strings = BTreeSet::new();
        for c in &path.configs {
            if !c.is_right_blank_halt() {
                continue;
            }
            if let Some(x) = c.input_content() {
                halting.push(c.render());
                strings.insert(x);
            }
        }
        let with_len = |k: usize| -> BTreeSet<String> {
            strings.iter().filter(|x| x.len() == k).cloned().collect()
        };
        Self {
            input: path.input.clone(),
            budget,
            outcome: path.outcome,
            time: path.time(),
            same_length: with_len(n),
            plus_two: with_len(n + 2),
            halting,
            strings,
        }
    }

    pub fn has_halting_configs(&self) -> bool {
        !self.halting.is_empty()
    }
}

/// Runs `procedure` on `y` in a throwaway branch of `world` and analyses the
/// path. `world` itself is left untouched.
pub fn analyze_path(
    world: &EvolutionaryUc,
    procedure: &Procedure,
    y: &str,
    budget: usize,
) -> Result<(PathAnalysis, ComputationPath), AnalysisError> {
    let mut branch = world.branch();
    let path = run_once(&mut branch, procedure, y, budget)?;
    Ok((PathAnalysis::from_path(&path, budget), path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uc::{ControlState, Instruction, Move, BLANK};

    #[test]
    fn scan_on_101_reveals_only_itself() {
        let world = EvolutionaryUc::new();
        let (a, path) = analyze_path(&world, &Procedure::scan(), "101", 10).unwrap();
        assert_eq!(a.halting, ["h|_101|[_]|"]);
        assert_eq!(a.strings, BTreeSet::from(["101".to_string()]));
        assert_eq!(a.same_length, a.strings);
        assert!(a.plus_two.is_empty());
        assert_eq!(a.time, 5);
        assert!(path.is_accepted());
        assert!(world.query_log().is_empty());
    }

    #[test]
    fn empty_procedure_reveals_nothing() {
        let (a, _) = analyze_path(&EvolutionaryUc::new(), &Procedure::empty(), "101", 10).unwrap();
        assert!(!a.has_halting_configs());
        assert!(a.strings.is_empty());
        assert_eq!(a.outcome, Outcome::Rejected);
    }

    #[test]
    fn growing_path_is_bounded_by_its_length() {
        // scan, then keep appending 0 while in h: every step is a trailing halt
        let grow = Procedure::new([
            Instruction::new(
                ControlState::START,
                BLANK,
                ControlState::Halt,
                BLANK,
                Move::R,
            ),
            Instruction::new(ControlState::Halt, '0', ControlState::Halt, '0', Move::R),
            Instruction::new(ControlState::Halt, '1', ControlState::Halt, '1', Move::R),
            Instruction::new(ControlState::Halt, BLANK, ControlState::Halt, '0', Move::R),
        ])
        .unwrap();
        let (a, path) = analyze_path(&EvolutionaryUc::new(), &grow, "1", 6).unwrap();
        assert_eq!(a.outcome, Outcome::BudgetExhausted);
        assert!(a.strings.len() <= path.time());
        assert!(a.strings.contains("1") && a.strings.contains("100"));
        assert_eq!(a.plus_two, BTreeSet::from(["100".to_string()]));
        assert_eq!(a.same_length, BTreeSet::from(["1".to_string()]));
    }
}
