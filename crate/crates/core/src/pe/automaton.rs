//! A partial automaton over `{0,1}` whose structure grows as it is queried.
//!
//! Each query is resolved by an [`EvolutionRule`], which inspects the
//! current machine and the input and returns a [`Decision`]: the verdict and
//! the structural mutations that make the verdict permanent. [`Pt1`] is the
//! only rule that ships; it only ever adds states, transitions and accepting
//! states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Bit, PeError, Verdict};

/// Identifier of an automaton state. Rendered as `q<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Which branch of the evolution rule resolved a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvolutionCase {
    /// Full read ending in an accepting state.
    #[serde(rename = "case1")]
    AcceptAsIs,
    /// Full read ending next to an accepting state.
    #[serde(rename = "case2-reject")]
    FrontierReject,
    /// Full read ending at a state that is promoted to accepting.
    #[serde(rename = "case2-evolve")]
    Promote,
    /// The read crashed on an undefined transition; a fresh chain is grown.
    #[serde(rename = "case3")]
    Extend,
}

impl EvolutionCase {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::AcceptAsIs => "case1",
            Self::FrontierReject => "case2-reject",
            Self::Promote => "case2-evolve",
            Self::Extend => "case3",
        }
    }
}

/// A transition `(from, bit, to)`.
pub type Transition = (StateId, Bit, StateId);

/// A single structural change requested by an evolution rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    AddState(StateId),
    AddTransition(Transition),
    AddAccepting(StateId),
    RemoveState(StateId),
    RemoveTransition(StateId, Bit),
    RemoveAccepting(StateId),
}

/// Outcome of an evolution rule: what to answer and how to change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub case: EvolutionCase,
    pub mutations: Vec<Mutation>,
    /// Symbols consumed while reading the input (for clock accounting).
    pub symbols_read: usize,
}

/// A persistent evolution policy.
///
/// Implementations must keep the machine well-defined: once an input has
/// been answered, every later query of that input must produce the same
/// verdict.
pub trait EvolutionRule {
    fn decide(&self, machine: &PEAutomaton, input: &[Bit]) -> Decision;
}

/// What one query added to the machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvolutionRecord {
    pub added_states: Vec<StateId>,
    pub added_transitions: Vec<Transition>,
    pub added_accepting: Vec<StateId>,
    pub case_taken: EvolutionCase,
    pub clock_delta: u64,
}

impl EvolutionRecord {
    pub fn is_empty(&self) -> bool {
        self.added_states.is_empty()
            && self.added_transitions.is_empty()
            && self.added_accepting.is_empty()
    }
}

/// Result of [`PEAutomaton::query`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub verdict: Verdict,
    pub record: EvolutionRecord,
    pub symbols_read: usize,
}

/// The evolving automaton `(Q, q0, δ, F)` with its evolution clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PEAutomaton {
    pub(super) states: BTreeSet<StateId>,
    pub(super) start: StateId,
    pub(super) transitions: BTreeMap<(StateId, Bit), StateId>,
    pub(super) accepting: BTreeSet<StateId>,
    pub(super) clock: u64,
    pub(super) next_id: u32,
}

impl Default for PEAutomaton {
    fn default() -> Self {
        Self::new()
    }
}

/// Where reading an input ended.
enum ReadEnd {
    Completed(StateId),
    Crashed { at: StateId, consumed: usize },
}

impl PEAutomaton {
    /// `Q = {q0}`, `F = ∅`, `δ = ∅`.
    pub fn new() -> Self {
        let start = StateId(0);
        Self {
            states: BTreeSet::from([start]),
            start,
            transitions: BTreeMap::new(),
            accepting: BTreeSet::new(),
            clock: 0,
            next_id: 1,
        }
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states.iter().copied()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.transitions.iter().map(|(&(p, b), &q)| (p, b, q))
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn accepting(&self) -> impl Iterator<Item = StateId> + '_ {
        self.accepting.iter().copied()
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting.contains(&state)
    }

    pub fn step(&self, state: StateId, bit: Bit) -> Option<StateId> {
        self.transitions.get(&(state, bit)).copied()
    }

    /// Cumulative evolution ticks: one per structural addition.
    pub fn clock(&self) -> u64 {
        self.clock
    }

    /// The id the next fresh state will receive.
    pub fn next_fresh(&self) -> StateId {
        StateId(self.next_id)
    }

    /// True if some defined transition from `state` lands in `F`.
    pub fn reaches_accepting_in_one(&self, state: StateId) -> bool {
        Bit::ALL
            .iter()
            .filter_map(|&b| self.step(state, b))
            .any(|q| self.is_accepting(q))
    }

    fn read(&self, input: &[Bit]) -> ReadEnd {
        let mut state = self.start;
        for (consumed, &bit) in input.iter().enumerate() {
            match self.step(state, bit) {
                Some(next) => state = next,
                None => {
                    return ReadEnd::Crashed {
                        at: state,
                        consumed,
                    }
                }
            }
        }
        ReadEnd::Completed(state)
    }

    /// Queries a `0`/`1` string, evolving the machine under [`Pt1`].
    pub fn query(&mut self, input: &str) -> Result<QueryOutcome, PeError> {
        let bits = super::parse_bits(input)?;
        Ok(self.query_bits(&bits))
    }

    pub fn query_bits(&mut self, input: &[Bit]) -> QueryOutcome {
        self.query_with(&Pt1, input)
            .expect("PT1 only produces additive mutations")
    }

    /// Queries under an arbitrary rule. Removal mutations are rejected before
    /// any change is applied.
    pub fn query_with<R: EvolutionRule + ?Sized>(
        &mut self,
        rule: &R,
        input: &[Bit],
    ) -> Result<QueryOutcome, PeError> {
        let decision = rule.decide(self, input);
        if decision.mutations.iter().any(|m| {
            matches!(
                m,
                Mutation::RemoveState(_)
                    | Mutation::RemoveTransition(..)
                    | Mutation::RemoveAccepting(_)
            )
        }) {
            return Err(PeError::RemovalUnsupported);
        }
        let record = self.apply(&decision)?;
        Ok(QueryOutcome {
            verdict: decision.verdict,
            record,
            symbols_read: decision.symbols_read,
        })
    }

    /// The verdict a query would produce, without evolving the machine.
    pub fn peek(&self, input: &[Bit]) -> (Verdict, EvolutionCase) {
        let d = Pt1.decide(self, input);
        (d.verdict, d.case)
    }

    fn apply(&mut self, decision: &Decision) -> Result<EvolutionRecord, PeError> {
        let mut record = EvolutionRecord {
            added_states: Vec::new(),
            added_transitions: Vec::new(),
            added_accepting: Vec::new(),
            case_taken: decision.case,
            clock_delta: 0,
        };
        // validate first so a bad decision leaves the machine untouched
        let mut pending_states: BTreeSet<StateId> = BTreeSet::new();
        for m in &decision.mutations {
            match *m {
                Mutation::AddState(s) => {
                    if self.states.contains(&s) || !pending_states.insert(s) {
                        return Err(PeError::InvalidMutation(format!(
                            "state {s} already exists"
                        )));
                    }
                }
                Mutation::AddTransition((p, b, q)) => {
                    let known = |s: &StateId| self.states.contains(s) || pending_states.contains(s);
                    if !known(&p) || !known(&q) {
                        return Err(PeError::InvalidMutation(format!(
                            "transition ({p},{b},{q}) has an unknown endpoint"
                        )));
                    }
                    if self.transitions.contains_key(&(p, b)) {
                        return Err(PeError::InvalidMutation(format!(
                            "({p},{b}) already has a transition"
                        )));
                    }
                }
                Mutation::AddAccepting(s) => {
                    if !self.states.contains(&s) && !pending_states.contains(&s) {
                        return Err(PeError::InvalidMutation(format!("unknown state {s}")));
                    }
                }
                _ => return Err(PeError::RemovalUnsupported),
            }
        }
        for m in &decision.mutations {
            match *m {
                Mutation::AddState(s) => {
                    self.states.insert(s);
                    self.next_id = self.next_id.max(s.0 + 1);
                    record.added_states.push(s);
                }
                Mutation::AddTransition((p, b, q)) => {
                    self.transitions.insert((p, b), q);
                    record.added_transitions.push((p, b, q));
                }
                Mutation::AddAccepting(s) => {
                    if self.accepting.insert(s) {
                        record.added_accepting.push(s);
                    }
                }
                _ => unreachable!(),
            }
        }
        record.clock_delta = (record.added_states.len()
            + record.added_transitions.len()
            + record.added_accepting.len()) as u64;
        self.clock += record.clock_delta;
        Ok(record)
    }
}

/// The three-case additive evolution rule.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pt1;

impl EvolutionRule for Pt1 {
    fn decide(&self, machine: &PEAutomaton, input: &[Bit]) -> Decision {
        match machine.read(input) {
            ReadEnd::Completed(p) if machine.is_accepting(p) => Decision {
                verdict: Verdict::Accept,
                case: EvolutionCase::AcceptAsIs,
                mutations: Vec::new(),
                symbols_read: input.len(),
            },
            ReadEnd::Completed(p) if machine.reaches_accepting_in_one(p) => Decision {
                verdict: Verdict::Reject,
                case: EvolutionCase::FrontierReject,
                mutations: Vec::new(),
                symbols_read: input.len(),
            },
            ReadEnd::Completed(p) => Decision {
                verdict: Verdict::Accept,
                case: EvolutionCase::Promote,
                mutations: vec![Mutation::AddAccepting(p)],
                symbols_read: input.len(),
            },
            ReadEnd::Crashed { at, consumed } => {
                let rest = &input[consumed..];
                let mut mutations = Vec::with_capacity(2 * rest.len() + 1);
                let mut from = at;
                for (id, &bit) in (machine.next_id..).zip(rest) {
                    let fresh = StateId(id);
                    mutations.push(Mutation::AddState(fresh));
                    mutations.push(Mutation::AddTransition((from, bit, fresh)));
                    from = fresh;
                }
                mutations.push(Mutation::AddAccepting(from));
                Decision {
                    verdict: Verdict::Accept,
                    case: EvolutionCase::Extend,
                    mutations,
                    symbols_read: consumed,
                }
            }
        }
    }
}

/// Longest accepted input in a query history; `0` if nothing was accepted.
pub fn max_accepted_length<'a, I>(history: I) -> usize
where
    I: IntoIterator<Item = (&'a str, Verdict)>,
{
    history
        .into_iter()
        .filter(|(_, v)| *v == Verdict::Accept)
        .map(|(x, _)| x.len())
        .max()
        .unwrap_or(0)
}
