//! Any well-defined finite trace of input/output pairs is produced both by a
//! fixed lookup machine and by an order-sensitive counter-backed one, so a
//! finite observation cannot tell the two kinds of universe apart.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{run_once, AnalysisError};
use crate::pe::CounterProcess;
use crate::sim_v::StaticUc;
use crate::uc::{ControlState, Instruction, Move, Procedure, BLANK};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("input {input:?} is paired with both {first:?} and {second:?}")]
pub struct TraceViolation {
    pub input: String,
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSet {
    pub pairs: Vec<(String, String)>,
}

impl TraceSet {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }

    /// Every input has exactly one output.
    pub fn check_well_defined(&self) -> Result<(), TraceViolation> {
        self.table().map(|_| ())
    }

    fn table(&self) -> Result<BTreeMap<String, String>, TraceViolation> {
        let mut table: BTreeMap<String, String> = BTreeMap::new();
        for (input, output) in &self.pairs {
            if let Some(first) = table.get(input) {
                if first != output {
                    return Err(TraceViolation {
                        input: input.clone(),
                        first: first.clone(),
                        second: output.clone(),
                    });
                }
            }
            table.insert(input.clone(), output.clone());
        }
        Ok(table)
    }

    fn is_decision_trace(&self) -> bool {
        self.pairs.iter().all(|(_, o)| o == "YES" || o == "NO")
    }
}

/// Fixed input/output table. For YES/NO traces over `{0,1}` it also carries
/// a trie procedure that decides the table on the static backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticTableMachine {
    pub table: BTreeMap<String, String>,
    pub default_output: String,
    pub procedure: Option<Procedure>,
}

impl StaticTableMachine {
    pub fn answer(&self, input: &str) -> String {
        self.table
            .get(input)
            .unwrap_or(&self.default_output)
            .clone()
    }
}

/// Answers seeded inputs from the trace. Any other input gets the output
/// `palette[(g(x) - 1) mod |palette|]`, where `g` is a counter process, so
/// the answer for a new input depends on how many new inputs came before.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterSeededMachine {
    pub seeded: BTreeMap<String, String>,
    pub palette: Vec<String>,
    pub counter: CounterProcess<String>,
}

impl CounterSeededMachine {
    pub fn answer(&mut self, input: &str) -> String {
        if let Some(out) = self.seeded.get(input) {
            return out.clone();
        }
        let z = self.counter.eval(input.to_string());
        self.palette[((z - 1) % self.palette.len() as u64) as usize].clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realization {
    pub static_machine: StaticTableMachine,
    pub evolutionary_machine: CounterSeededMachine,
}

fn trie_procedure(table: &BTreeMap<String, String>) -> Option<Procedure> {
    if !table
        .keys()
        .all(|k| k.chars().all(|c| c == '0' || c == '1'))
    {
        return None;
    }
    let root = 1u32;
    let mut next = 2u32;
    let mut children: BTreeMap<(u32, char), u32> = BTreeMap::new();
    let mut rules = vec![Instruction::new(
        ControlState::START,
        BLANK,
        ControlState::Q(root),
        BLANK,
        Move::R,
    )];
    for (input, output) in table {
        let mut node = root;
        for c in input.chars() {
            node = *children.entry((node, c)).or_insert_with(|| {
                rules.push(Instruction::new(
                    ControlState::Q(node),
                    c,
                    ControlState::Q(next),
                    c,
                    Move::R,
                ));
                next += 1;
                next - 1
            });
        }
        if output == "YES" {
            rules.push(Instruction::new(
                ControlState::Q(node),
                BLANK,
                ControlState::Halt,
                BLANK,
                Move::R,
            ));
        }
    }
    Some(Procedure::new(rules).expect("trie edges are unique"))
}

/// Builds both machines for a well-defined trace and checks each against
/// every pair.
pub fn realize(trace: &TraceSet) -> Result<Realization, AnalysisError> {
    let table = trace.table()?;
    let decision = trace.is_decision_trace();
    let palette: Vec<String> = if decision {
        vec!["NO".into(), "YES".into()]
    } else {
        let distinct: BTreeSet<&String> = table.values().collect();
        distinct.into_iter().cloned().collect()
    };
    let static_machine = StaticTableMachine {
        default_output: if decision { "NO".into() } else { String::new() },
        procedure: if decision {
            trie_procedure(&table)
        } else {
            None
        },
        table: table.clone(),
    };
    let evolutionary_machine = CounterSeededMachine {
        seeded: table,
        palette,
        counter: CounterProcess::new(),
    };

    let mut probe = evolutionary_machine.clone();
    for (input, output) in &trace.pairs {
        if &static_machine.answer(input) != output {
            return Err(AnalysisError::RealizationMismatch(format!(
                "table on {input:?}"
            )));
        }
        if &probe.answer(input) != output {
            return Err(AnalysisError::RealizationMismatch(format!(
                "counter machine on {input:?}"
            )));
        }
        if let Some(p) = &static_machine.procedure {
            let path = run_once(&mut StaticUc::new(), p, input, input.len() + 2)?;
            if path.is_accepted() != (output == "YES") {
                return Err(AnalysisError::RealizationMismatch(format!(
                    "trie procedure on {input:?}"
                )));
            }
        }
    }
    Ok(Realization {
        static_machine,
        evolutionary_machine,
    })
}
