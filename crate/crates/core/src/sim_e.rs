//! The evolutionary universe-computer.
//!
//! The transition box is the static one. The success box answers `(h, △̲x)`
//! with YES like the static box, but hands every `(h, x△̲)` configuration to
//! an embedded evolving automaton, which may grow in response. Repeating a
//! configuration always repeats its answer; presenting configurations in a
//! different order can change the answers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pe::{
    max_accepted_length, parse_bits, PEAutomaton, QueryLogEntry, Snapshot, SnapshotError, Verdict,
};
use crate::uc::{
    metered_rewrite, Answer, Backend, BoxKind, ClockBounds, ClockMeter, Configuration, Instruction,
    UniverseComputer,
};

/// Declared clock constants. A success-box call costs `|C| + 1` to inspect
/// the configuration, plus at most `|x| + 2` for the automaton's read and
/// `2|x| + 1` evolution ticks, with `|x| < |C|`.
pub const EVOLUTIONARY_CLOCK_BOUNDS: ClockBounds = ClockBounds { a: 4, b: 4 };

/// Persisted form: the automaton snapshot plus the full oracle query log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionaryState {
    pub automaton: Snapshot,
    pub log: Vec<QueryLogEntry>,
}

impl EvolutionaryState {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, StateError> {
        serde_json::from_str(text).map_err(|e| StateError::Json(e.to_string()))
    }

    /// The query log as JSONL.
    pub fn log_jsonl(&self) -> String {
        self.log
            .iter()
            .map(|e| serde_json::to_string(e).expect("log serialization is infallible") + "\n")
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("state is not valid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error("query log entry {index} ({input:?}) does not replay: {detail}")]
    LogMismatch {
        index: usize,
        input: String,
        detail: String,
    },
}

#[derive(Debug, Clone, Default)]
pub struct EvolutionaryUc {
    automaton: PEAutomaton,
    clock: ClockMeter,
    log: Vec<QueryLogEntry>,
}

impl EvolutionaryUc {
    pub fn new() -> Self {
        Self::default()
    }

    /// An independent copy; later queries on either side never affect the
    /// other.
    pub fn branch(&self) -> Self {
        self.clone()
    }

    pub fn automaton(&self) -> &PEAutomaton {
        &self.automaton
    }

    pub fn query_log(&self) -> &[QueryLogEntry] {
        &self.log
    }

    /// Longest string the embedded automaton has accepted so far.
    pub fn max_accepted_length(&self) -> usize {
        max_accepted_length(self.log.iter().map(|e| (e.input.as_str(), e.verdict)))
    }

    /// True if the embedded automaton has ever been asked about `x`.
    pub fn has_seen(&self, x: &str) -> bool {
        self.log.iter().any(|e| e.input == x)
    }

    /// The answer a trailing-blank halt on `x` would get, without evolving.
    pub fn peek(&self, x: &str) -> Option<Verdict> {
        parse_bits(x).ok().map(|bits| self.automaton.peek(&bits).0)
    }

    pub fn state(&self) -> EvolutionaryState {
        EvolutionaryState {
            automaton: self.automaton.snapshot(),
            log: self.log.clone(),
        }
    }

    /// Restores a persisted state. The log is replayed on a fresh automaton
    /// and must reproduce both its own entries and the snapshot.
    pub fn restore(state: &EvolutionaryState) -> Result<Self, StateError> {
        let automaton = PEAutomaton::restore(&state.automaton)?;
        let mut replay = PEAutomaton::new();
        for (index, entry) in state.log.iter().enumerate() {
            let mismatch = |detail: String| StateError::LogMismatch {
                index,
                input: entry.input.clone(),
                detail,
            };
            let out = replay
                .query(&entry.input)
                .map_err(|e| mismatch(e.to_string()))?;
            let replayed = QueryLogEntry::new(entry.input.clone(), &out);
            if &replayed != entry {
                return Err(mismatch(format!("replay gave {replayed:?}")));
            }
        }
        if replay != automaton {
            return Err(StateError::LogMismatch {
                index: state.log.len(),
                input: String::new(),
                detail: "replayed log does not rebuild the snapshot".into(),
            });
        }
        Ok(Self {
            automaton,
            clock: ClockMeter::new(),
            log: state.log.clone(),
        })
    }

    fn consult(&mut self, x: &str) -> (Answer, u64) {
        let bits = parse_bits(x).expect("caller extracted a {0,1} string");
        let out = self.automaton.query_bits(&bits);
        self.log.push(QueryLogEntry::new(x, &out));
        let ticks = out.symbols_read as u64 + 2 + out.record.clock_delta;
        let answer = match out.verdict {
            Verdict::Accept => Answer::Yes,
            Verdict::Reject => Answer::No,
        };
        (answer, ticks)
    }
}

impl UniverseComputer for EvolutionaryUc {
    fn tbox(&mut self, c: &Configuration, ins: &Instruction) -> Option<Configuration> {
        metered_rewrite(&mut self.clock, c, ins)
    }

    fn sbox(&mut self, c: &Configuration) -> Answer {
        let mut ticks = c.len() as u64 + 1;
        let answer = if c.is_left_blank_halt() {
            Answer::Yes
        } else if c.is_right_blank_halt() {
            match c.input_content() {
                Some(x) => {
                    let (answer, extra) = self.consult(&x);
                    ticks += extra;
                    answer
                }
                None => Answer::No,
            }
        } else {
            Answer::No
        };
        self.clock.charge(BoxKind::Sbox, c.len(), ticks);
        answer
    }

    fn clock(&self) -> &ClockMeter {
        &self.clock
    }

    fn clock_bounds(&self) -> ClockBounds {
        EVOLUTIONARY_CLOCK_BOUNDS
    }

    fn backend(&self) -> Backend {
        Backend::Evolutionary
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pe::strings_of_length;
    use crate::sim_v::static_success;
    use crate::uc::{Computist, Procedure};

    fn conf(text: &str) -> Configuration {
        Configuration::parse(text).unwrap()
    }

    #[test]
    fn left_blank_halt_is_static_yes_and_untouched() {
        let mut e = EvolutionaryUc::new();
        assert_eq!(e.sbox(&conf("h||[_]|101")), Answer::Yes);
        assert_eq!(e.sbox(&conf("h||[_]|")), Answer::Yes);
        assert_eq!(e.automaton(), &PEAutomaton::new());
        assert!(e.query_log().is_empty());
    }

    #[test]
    fn trailing_blank_halt_consults_the_automaton() {
        let mut e = EvolutionaryUc::new();
        assert_eq!(e.sbox(&conf("h|_10|[_]|")), Answer::Yes);
        assert_eq!(e.query_log().len(), 1);
        assert_eq!(e.query_log()[0].input, "10");
        assert_eq!(e.sbox(&conf("h|_10|[_]|")), Answer::Yes);
        assert_eq!(e.automaton().clock(), 5);
    }

    #[test]
    fn flooding_length_two_rejects_length_one() {
        let mut e = EvolutionaryUc::new();
        for v in ["00", "01", "10", "11"] {
            assert_eq!(e.sbox(&conf(&format!("h|_{v}|[_]|"))), Answer::Yes);
        }
        assert_eq!(e.sbox(&conf("h|_0|[_]|")), Answer::No);
    }

    #[test]
    fn non_input_symbols_are_no_without_consulting() {
        let mut e = EvolutionaryUc::new();
        assert_eq!(e.sbox(&conf("h|_#1|[_]|")), Answer::No);
        assert!(e.query_log().is_empty());
    }

    #[test]
    fn agrees_with_static_box_off_the_trailing_pattern() {
        let mut e = EvolutionaryUc::new();
        for text in [
            "q0||[_]|101",
            "h|1|[0]|",
            "h|_|[1]|01",
            "q2|_1|[_]|",
            "h||[_]|1",
        ] {
            let c = conf(text);
            assert!(!c.is_right_blank_halt() || c.is_left_blank_halt());
            assert_eq!(e.sbox(&c), static_success(&c), "{text}");
        }
    }

    #[test]
    fn scan_on_fresh_e_matches_direct_automaton_query() {
        let mut c = Computist::new(EvolutionaryUc::new());
        let path = c.run(&Procedure::scan(), "10", 10).unwrap();
        assert!(path.is_accepted());
        let mut direct = PEAutomaton::new();
        direct.query("10").unwrap();
        assert_eq!(c.uc().automaton(), &direct);
    }

    #[test]
    fn branches_are_independent() {
        let fresh = EvolutionaryUc::new();
        let mut a = Computist::new(fresh.branch());
        let mut b = Computist::new(fresh.branch());
        let scan = Procedure::scan();
        assert!(a.run(&scan, "101", 10).unwrap().is_accepted());
        assert!(!a.run(&scan, "10", 10).unwrap().is_accepted());
        assert!(b.run(&scan, "10", 10).unwrap().is_accepted());
        assert!(fresh.query_log().is_empty());
    }

    #[test]
    fn untouched_branches_snapshot_identically() {
        let mut e = EvolutionaryUc::new();
        e.sbox(&conf("h|_0110|[_]|"));
        let copy = e.branch();
        assert_eq!(e.state().to_json(), copy.state().to_json());
    }

    #[test]
    fn branch_after_flood_rejects_in_both_copies() {
        let mut e = Computist::new(EvolutionaryUc::new());
        let scan = Procedure::scan();
        for v in strings_of_length(2) {
            e.run(&scan, &v, 10).unwrap();
        }
        let mut left = Computist::new(e.uc().branch());
        let mut right = Computist::new(e.uc().branch());
        assert!(!left.run(&scan, "0", 10).unwrap().is_accepted());
        assert!(!right.run(&scan, "0", 10).unwrap().is_accepted());
    }

    #[test]
    fn state_round_trip_and_tamper_detection() {
        let mut e = EvolutionaryUc::new();
        for x in ["101", "10", "0", ""] {
            e.sbox(&Configuration::from_parts(
                crate::uc::ControlState::Halt,
                &format!("_{x}"),
                '_',
                "",
            ));
        }
        let state = e.state();
        let restored =
            EvolutionaryUc::restore(&EvolutionaryState::from_json(&state.to_json()).unwrap())
                .unwrap();
        assert_eq!(restored.state(), state);
        assert_eq!(state.log_jsonl().lines().count(), 4);

        let mut tampered = state.clone();
        tampered.log[1].verdict = Verdict::Accept;
        assert!(matches!(
            EvolutionaryUc::restore(&tampered),
            Err(StateError::LogMismatch { index: 1, .. })
        ));
        // dropping "" (a frontier reject) loses nothing; dropping "0" does
        let mut truncated = state.clone();
        truncated.log.pop();
        assert!(EvolutionaryUc::restore(&truncated).is_ok());
        truncated.log.pop();
        assert!(matches!(
            EvolutionaryUc::restore(&truncated),
            Err(StateError::LogMismatch { index: 2, .. })
        ));
    }

    #[test]
    fn evolution_ticks_charged_to_the_causing_call() {
        let mut e = EvolutionaryUc::new();
        let c = conf("h|_101|[_]|");
        e.sbox(&c);
        let entry = e.clock().log()[0];
        // 5 cells + 1, read 0 symbols + 2, 7 evolution ticks
        assert_eq!(entry.ticks, 6 + 2 + 7);
        assert!(EVOLUTIONARY_CLOCK_BOUNDS.admits(&entry));
    }
}
