//! Persistently evolving machinery: the counter process, the evolving
//! automaton and its snapshots.

mod automaton;
mod counter;
mod snapshot;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use automaton::{
    max_accepted_length, Decision, EvolutionCase, EvolutionRecord, EvolutionRule, Mutation,
    PEAutomaton, Pt1, QueryOutcome, StateId, Transition,
};
pub use counter::CounterProcess;
pub use snapshot::{Snapshot, SnapshotError};

/// A symbol of the input alphabet `{0,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Bit::Zero),
            1 => Some(Bit::One),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Bit::Zero),
            '1' => Some(Bit::One),
            _ => None,
        }
    }
}

impl From<Bit> for u8 {
    fn from(b: Bit) -> u8 {
        b.as_u8()
    }
}

impl TryFrom<u8> for Bit {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        Bit::from_u8(v).ok_or_else(|| format!("{v} is not a bit"))
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Answer of an acceptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeError {
    #[error("symbol {symbol:?} at position {position} is not in {{0,1}}")]
    MalformedInput { position: usize, symbol: char },
    #[error("evolution rule requested a removal; only additive evolution is supported")]
    RemovalUnsupported,
    #[error("invalid mutation: {0}")]
    InvalidMutation(String),
}

/// Parses a string over `{0,1}`. The empty string is valid.
pub fn parse_bits(input: &str) -> Result<Vec<Bit>, PeError> {
    input
        .chars()
        .enumerate()
        .map(|(position, symbol)| {
            Bit::from_char(symbol).ok_or(PeError::MalformedInput { position, symbol })
        })
        .collect()
}

pub fn bits_to_string(bits: &[Bit]) -> String {
    bits.iter().map(|b| b.as_char()).collect()
}

/// One line of a query log (`{input, verdict, case, clock_delta}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLogEntry {
    pub input: String,
    pub verdict: Verdict,
    pub case: EvolutionCase,
    pub clock_delta: u64,
}

impl QueryLogEntry {
    pub fn new(input: impl Into<String>, outcome: &QueryOutcome) -> Self {
        Self {
            input: input.into(),
            verdict: outcome.verdict,
            case: outcome.record.case_taken,
            clock_delta: outcome.record.clock_delta,
        }
    }
}

/// All strings over `{0,1}` of length `n`, in lexicographic order.
pub fn strings_of_length(n: usize) -> impl Iterator<Item = String> {
    assert!(n < 64, "length {n} is too large to enumerate");
    (0..1u64 << n).map(move |i| {
        (0..n)
            .rev()
            .map(|k| if i >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_empty_and_bits() {
        assert_eq!(parse_bits("").unwrap(), vec![]);
        assert_eq!(parse_bits("10").unwrap(), vec![Bit::One, Bit::Zero]);
        assert_eq!(
            parse_bits("0 1"),
            Err(PeError::MalformedInput {
                position: 1,
                symbol: ' '
            })
        );
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<String> = strings_of_length(2).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(strings_of_length(0).collect::<Vec<_>>(), [""]);
    }

    #[test]
    fn log_entry_json_shape() {
        let mut m = PEAutomaton::new();
        let out = m.query("1").unwrap();
        let line = serde_json::to_string(&QueryLogEntry::new("1", &out)).unwrap();
        assert_eq!(
            line,
            r#"{"input":"1","verdict":"accept","case":"case3","clock_delta":3}"#
        );
    }
}
