//! Transcription of single-tape deterministic Turing machines into
//! procedures.
//!
//! Acceptance convention shared with the static backend: the machine accepts
//! when it stops (no applicable rule) in the halting state with the head on a
//! blank at the left or right end of the visited tape.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::config::{ControlState, Instruction, Move, Symbol, BLANK};
use super::procedure::Procedure;
use super::UcError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmRule {
    pub state: usize,
    pub read: Symbol,
    pub next: usize,
    pub write: Symbol,
    pub dir: Move,
}

/// States are `0..states`; `start` and `halt` are distinguished indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmDescription {
    pub states: usize,
    pub start: usize,
    pub halt: usize,
    pub alphabet: Vec<Symbol>,
    pub rules: Vec<TmRule>,
}

impl TmDescription {
    /// Control state each machine state is mapped to: start → `q0`,
    /// halt → `h`, the rest → `q1, q2, …` in index order.
    pub fn state_map(&self) -> Vec<ControlState> {
        let mut next = 1;
        (0..self.states)
            .map(|i| {
                if i == self.halt {
                    ControlState::Halt
                } else if i == self.start {
                    ControlState::START
                } else {
                    next += 1;
                    ControlState::Q(next - 1)
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), UcError> {
        let bad = |msg: String| Err(UcError::InvalidMachine(msg));
        if self.start >= self.states || self.halt >= self.states {
            return bad("start and halt must be machine states".into());
        }
        if self.start == self.halt {
            return bad("start and halt must differ".into());
        }
        let alphabet: BTreeSet<Symbol> = self.alphabet.iter().copied().collect();
        for needed in ['0', '1', BLANK] {
            if !alphabet.contains(&needed) {
                return bad(format!("alphabet must contain {needed:?}"));
            }
        }
        let mut seen: BTreeMap<(usize, Symbol), &TmRule> = BTreeMap::new();
        for rule in &self.rules {
            if rule.state >= self.states || rule.next >= self.states {
                return bad(format!(
                    "rule from {} to {} leaves the state set",
                    rule.state, rule.next
                ));
            }
            if !alphabet.contains(&rule.read) || !alphabet.contains(&rule.write) {
                return bad(format!(
                    "rule on {:?}/{:?} leaves the alphabet",
                    rule.read, rule.write
                ));
            }
            if let Some(prev) = seen.insert((rule.state, rule.read), rule) {
                if prev != rule {
                    return Err(UcError::NondeterministicMachine {
                        state: rule.state,
                        symbol: rule.read,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Compiles `T` into a procedure whose runs match `T` step for step.
pub fn compile_tm(t: &TmDescription) -> Result<Procedure, UcError> {
    t.validate()?;
    let map = t.state_map();
    Procedure::new(t.rules.iter().map(|r| Instruction {
        from: map[r.state],
        read: r.read,
        to: map[r.next],
        write: r.write,
        dir: r.dir,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(state: usize, read: Symbol, next: usize, write: Symbol, dir: Move) -> TmRule {
        TmRule {
            state,
            read,
            next,
            write,
            dir,
        }
    }

    fn machine(rules: Vec<TmRule>) -> TmDescription {
        TmDescription {
            states: 3,
            start: 0,
            halt: 2,
            alphabet: vec!['0', '1', BLANK],
            rules,
        }
    }

    #[test]
    fn one_rule_machine_transcribes_directly() {
        let t = machine(vec![rule(0, BLANK, 2, BLANK, Move::R)]);
        let p = compile_tm(&t).unwrap();
        let expected = Procedure::new([Instruction::new(
            ControlState::START,
            BLANK,
            ControlState::Halt,
            BLANK,
            Move::R,
        )])
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn state_numbering_skips_start_and_halt() {
        let t = TmDescription {
            states: 4,
            start: 2,
            halt: 0,
            alphabet: vec!['0', '1', BLANK],
            rules: vec![],
        };
        assert_eq!(
            t.state_map(),
            vec![
                ControlState::Halt,
                ControlState::Q(1),
                ControlState::Q(0),
                ControlState::Q(2)
            ]
        );
    }

    #[test]
    fn nondeterminism_is_rejected() {
        let t = machine(vec![
            rule(0, '0', 1, '0', Move::R),
            rule(0, '0', 2, '1', Move::L),
        ]);
        assert_eq!(
            compile_tm(&t),
            Err(UcError::NondeterministicMachine {
                state: 0,
                symbol: '0'
            })
        );
    }

    #[test]
    fn malformed_machines_are_rejected() {
        let mut t = machine(vec![rule(0, '0', 7, '0', Move::R)]);
        assert!(matches!(compile_tm(&t), Err(UcError::InvalidMachine(_))));
        t.rules.clear();
        t.alphabet = vec!['0', '1'];
        assert!(matches!(compile_tm(&t), Err(UcError::InvalidMachine(_))));
        let mut t = machine(vec![rule(0, 'x', 1, '0', Move::R)]);
        assert!(matches!(compile_tm(&t), Err(UcError::InvalidMachine(_))));
        t.rules.clear();
        t.halt = 0;
        assert!(matches!(compile_tm(&t), Err(UcError::InvalidMachine(_))));
    }
}
