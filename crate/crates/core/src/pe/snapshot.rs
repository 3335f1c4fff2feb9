//! Canonical snapshots of a [`PEAutomaton`].
//!
//! The JSON form has sorted keys and sorted arrays, so two machines with the
//! same structure always serialize to the same bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::automaton::{PEAutomaton, StateId};
use super::Bit;

/// Serialized automaton. Field order is alphabetical so the derived
/// serializer emits sorted keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub accepting: Vec<u32>,
    pub clock: u64,
    pub start: u32,
    pub states: Vec<u32>,
    pub transitions: Vec<(u32, u8, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnapshotError {
    #[error("snapshot is not valid JSON: {0}")]
    Json(String),
    #[error("snapshot violates `{invariant}`: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },
}

fn violated(invariant: &'static str, detail: impl Into<String>) -> SnapshotError {
    SnapshotError::Invariant {
        invariant,
        detail: detail.into(),
    }
}

impl Snapshot {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("snapshot serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, SnapshotError> {
        serde_json::from_str(text).map_err(|e| SnapshotError::Json(e.to_string()))
    }
}

fn strictly_sorted<T: Ord>(items: &[T]) -> bool {
    items.windows(2).all(|w| w[0] < w[1])
}

impl PEAutomaton {
    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            accepting: self.accepting.iter().map(|s| s.0).collect(),
            clock: self.clock,
            start: self.start.0,
            states: self.states.iter().map(|s| s.0).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|(&(p, b), &q)| (p.0, b.as_u8(), q.0))
                .collect(),
        }
    }

    /// Rebuilds a machine, checking invariants in a fixed order and naming
    /// the first one that fails.
    pub fn restore(snap: &Snapshot) -> Result<Self, SnapshotError> {
        if snap.states.is_empty() {
            return Err(violated("states-nonempty", "no states"));
        }
        if !strictly_sorted(&snap.states) {
            return Err(violated(
                "states-sorted-unique",
                "state ids must be strictly increasing",
            ));
        }
        let states: BTreeSet<StateId> = snap.states.iter().map(|&s| StateId(s)).collect();
        let start = StateId(snap.start);
        if !states.contains(&start) {
            return Err(violated(
                "start-in-states",
                format!("start {start} is not a state"),
            ));
        }
        let keys: Vec<(u32, u8)> = snap.transitions.iter().map(|&(p, b, _)| (p, b)).collect();
        if !strictly_sorted(&keys) {
            return Err(violated(
                "transitions-partial-function",
                "transitions must be sorted with at most one per (state, bit)",
            ));
        }
        let mut transitions = BTreeMap::new();
        for &(p, b, q) in &snap.transitions {
            let bit = Bit::from_u8(b).ok_or_else(|| {
                violated("transition-alphabet", format!("symbol {b} is not a bit"))
            })?;
            let (p, q) = (StateId(p), StateId(q));
            if !states.contains(&p) || !states.contains(&q) {
                return Err(violated(
                    "transition-endpoints-in-states",
                    format!("({p},{bit},{q}) leaves the state set"),
                ));
            }
            transitions.insert((p, bit), q);
        }
        if !strictly_sorted(&snap.accepting) {
            return Err(violated(
                "accepting-sorted-unique",
                "accepting ids must be strictly increasing",
            ));
        }
        let accepting: BTreeSet<StateId> = snap.accepting.iter().map(|&s| StateId(s)).collect();
        if let Some(s) = accepting.iter().find(|s| !states.contains(s)) {
            return Err(violated(
                "accepting-subset-of-states",
                format!("{s} is not a state"),
            ));
        }
        let structural = (states.len() - 1 + transitions.len() + accepting.len()) as u64;
        if snap.clock != structural {
            return Err(violated(
                "clock-equals-additions",
                format!("clock {} but {structural} structural additions", snap.clock),
            ));
        }
        let next_id = states.iter().next_back().map_or(1, |s| s.0 + 1);
        Ok(Self {
            states,
            start,
            transitions,
            accepting,
            clock: snap.clock,
            next_id,
        })
    }
}
