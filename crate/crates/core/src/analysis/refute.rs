//! Adversary against a claimed polynomial-time decider for the language the
//! scanning procedure recognizes on the evolutionary backend.
//!
//! Given a decider `M'` and a budget `f`, the adversary picks a challenge
//! `w` with `f(|w|) < 2^|w|`, studies which strings the run of `M'` on `w`
//! hands to the evolving automaton, and then shapes the automaton's future
//! so that `M'` and the scanning procedure must disagree about whether some
//! length-`|w|` string is accepted. Everything is recorded in a certificate
//! that [`replay_certificate`] re-checks from scratch.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{analyze_path, run_once, scan_budget, AnalysisError, BudgetFn, PathAnalysis};
use crate::pe::strings_of_length;
use crate::sim_e::{EvolutionaryState, EvolutionaryUc};
use crate::uc::{Outcome, Procedure};

/// Default validity bound `k`: the challenge is longer than every string
/// the automaton accepted before and longer than `k`.
pub const DEFAULT_VALIDITY: usize = 2;

/// Largest decider budget the adversary will simulate.
const MAX_STEPS: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Scan,
    Decider,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Purpose {
    /// Forces strings the decider's path already exposed out of the language.
    PreFlood,
    /// The decider on the challenge.
    DeciderRun,
    /// Pushes every challenge-length string out of the language.
    Flood,
    /// Confirms a challenge-length string is now rejected.
    Check,
    /// Creates a fresh accepted string of challenge length.
    WitnessSearch,
    /// The decider on the challenge once more, after the automaton moved on.
    DeciderRerun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub procedure: Role,
    pub input: String,
    pub outcome: Outcome,
    pub purpose: Purpose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContradictionKind {
    /// The decider accepts the challenge, yet no string of its length is
    /// accepted by the scanning procedure.
    AcceptsWithoutWitness,
    /// The decider rejects the challenge, yet a string of its length is
    /// accepted by the scanning procedure.
    RejectsDespiteWitness,
    /// The decider did not stop within its declared budget.
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChallengeCase {
    /// The decider's path never hands a string to the automaton.
    NoHaltingConfigs,
    HaltingConfigs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub function: BudgetFn,
    pub threshold: u64,
    pub validity: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSnapshots {
    pub initial: EvolutionaryState,
    #[serde(rename = "final")]
    pub final_state: EvolutionaryState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub challenge: String,
    pub budget: BudgetSpec,
    pub max_accepted_before: usize,
    pub m: usize,
    pub decider: Procedure,
    pub case: ChallengeCase,
    pub analysis: PathAnalysis,
    pub branch_snapshots: BranchSnapshots,
    pub transcript: Vec<TranscriptStep>,
    pub contradiction: ContradictionKind,
    pub witness: Option<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, ReplayError> {
        serde_json::from_str(text).map_err(|e| ReplayError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct RefuteOptions {
    pub budget: BudgetFn,
    /// Declared threshold; must not be below the computed one.
    pub threshold: Option<u64>,
    pub validity: usize,
    /// Explicit challenge; defaults to `0^len`.
    pub challenge: Option<String>,
}

impl RefuteOptions {
    pub fn new(budget: BudgetFn) -> Self {
        Self {
            budget,
            threshold: None,
            validity: DEFAULT_VALIDITY,
            challenge: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub steps: usize,
    pub contradiction: ContradictionKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("certificate is not valid JSON: {0}")]
    Json(String),
    #[error("initial state does not restore: {0}")]
    State(String),
    #[error("parameter check failed: {0}")]
    Parameters(String),
    #[error("path analysis differs from the recorded one")]
    Analysis,
    #[error("step {index} ({input:?}) gave {actual:?}, certificate says {recorded:?}")]
    VerdictMismatch {
        index: usize,
        input: String,
        recorded: Outcome,
        actual: Outcome,
    },
    #[error("replay failed at step {index}: {detail}")]
    Run { index: usize, detail: String },
    #[error("final state differs from the recorded one")]
    FinalState,
    #[error("contradiction does not hold: {0}")]
    Contradiction(String),
}

fn checked_steps(f: &BudgetFn, len: usize) -> Result<usize, AnalysisError> {
    let steps = f.eval(len as u64).max(1);
    if steps > MAX_STEPS {
        return Err(AnalysisError::BudgetTooLarge(steps));
    }
    Ok(steps as usize)
}

struct Adversary<'a> {
    world: &'a mut EvolutionaryUc,
    decider: &'a Procedure,
    steps: usize,
    transcript: Vec<TranscriptStep>,
}

impl Adversary<'_> {
    fn scan(&mut self, x: &str, purpose: Purpose) -> Result<Outcome, AnalysisError> {
        let outcome = run_once(self.world, &Procedure::scan(), x, scan_budget(x.len()))?.outcome;
        self.push(Role::Scan, x, outcome, purpose);
        Ok(outcome)
    }

    fn decide(&mut self, w: &str, purpose: Purpose) -> Result<Outcome, AnalysisError> {
        let outcome = run_once(self.world, self.decider, w, self.steps)?.outcome;
        self.push(Role::Decider, w, outcome, purpose);
        Ok(outcome)
    }

    fn push(&mut self, procedure: Role, input: &str, outcome: Outcome, purpose: Purpose) {
        self.transcript.push(TranscriptStep {
            procedure,
            input: input.to_string(),
            outcome,
            purpose,
        });
    }

    /// Floods so that nothing of length `n` is accepted, then confirms it.
    fn flood_length(&mut self, n: usize) -> Result<(), AnalysisError> {
        for v in strings_of_length(n) {
            self.scan(&format!("{v}0"), Purpose::Flood)?;
            self.scan(&format!("{v}1"), Purpose::Flood)?;
        }
        for v in strings_of_length(n) {
            if self.scan(&v, Purpose::Check)? != Outcome::Rejected {
                return Err(AnalysisError::AdversaryFailed(format!(
                    "{v:?} survived the flood"
                )));
            }
        }
        Ok(())
    }

    /// Finds a length-`n` string the automaton has not seen, nor its one-bit
    /// extensions, and gets it accepted.
    fn plant_witness(&mut self, n: usize) -> Result<String, AnalysisError> {
        let fresh = |world: &EvolutionaryUc, z: &str| {
            !world.has_seen(z)
                && !world.has_seen(&format!("{z}0"))
                && !world.has_seen(&format!("{z}1"))
        };
        for z in strings_of_length(n) {
            if fresh(self.world, &z) && self.scan(&z, Purpose::WitnessSearch)? == Outcome::Accepted
            {
                return Ok(z);
            }
        }
        Err(AnalysisError::AdversaryFailed(format!(
            "no fresh string of length {n}"
        )))
    }
}

/// Builds a certificate that `decider` does not decide the scanning
/// procedure's language within `opts.budget`. `world` is advanced along the
/// way; the certificate is replayed before it is returned.
pub fn refute(
    world: &mut EvolutionaryUc,
    decider: &Procedure,
    opts: &RefuteOptions,
) -> Result<Certificate, AnalysisError> {
    let required = opts.budget.subexp_threshold();
    let threshold = opts.threshold.unwrap_or(required);
    if threshold < required {
        return Err(AnalysisError::NotSubExponential {
            declared: threshold,
            required,
        });
    }
    let max_accepted_before = world.max_accepted_length();
    let m = max_accepted_before.max(opts.validity);
    let min = m.max(threshold as usize);
    let challenge = match &opts.challenge {
        Some(w) if w.len() <= min => {
            return Err(AnalysisError::ChallengeTooShort { len: w.len(), min })
        }
        Some(w) => {
            crate::pe::parse_bits(w).map_err(|e| AnalysisError::AdversaryFailed(e.to_string()))?;
            w.clone()
        }
        None => "0".repeat(min + 1),
    };
    let n = challenge.len();
    let steps = checked_steps(&opts.budget, n)?;
    let initial = world.state();
    let (analysis, _) = analyze_path(world, decider, &challenge, steps)?;
    let case = if analysis.has_halting_configs() {
        ChallengeCase::HaltingConfigs
    } else {
        ChallengeCase::NoHaltingConfigs
    };

    let mut adv = Adversary {
        world,
        decider,
        steps,
        transcript: Vec::new(),
    };
    if case == ChallengeCase::HaltingConfigs {
        for u in analysis.same_length.iter().chain(&analysis.plus_two) {
            adv.scan(&format!("{u}0"), Purpose::PreFlood)?;
        }
    }
    let (contradiction, witness) = match adv.decide(&challenge, Purpose::DeciderRun)? {
        Outcome::Accepted => {
            adv.flood_length(n)?;
            adv.decide(&challenge, Purpose::DeciderRerun)?;
            (ContradictionKind::AcceptsWithoutWitness, None)
        }
        Outcome::Rejected => {
            let z = adv.plant_witness(n)?;
            adv.decide(&challenge, Purpose::DeciderRerun)?;
            (ContradictionKind::RejectsDespiteWitness, Some(z))
        }
        _ => (ContradictionKind::BudgetExceeded, None),
    };
    let transcript = adv.transcript;

    let cert = Certificate {
        challenge,
        budget: BudgetSpec {
            function: opts.budget.clone(),
            threshold,
            validity: opts.validity,
            steps,
        },
        max_accepted_before,
        m,
        decider: decider.clone(),
        case,
        analysis,
        branch_snapshots: BranchSnapshots {
            initial,
            final_state: world.state(),
        },
        transcript,
        contradiction,
        witness,
    };
    replay_certificate(&cert)?;
    Ok(cert)
}

/// Re-derives every claim in `cert` from its initial snapshot.
pub fn replay_certificate(cert: &Certificate) -> Result<ReplayReport, ReplayError> {
    let bad = |s: String| Err(ReplayError::Parameters(s));
    let mut world = EvolutionaryUc::restore(&cert.branch_snapshots.initial)
        .map_err(|e| ReplayError::State(e.to_string()))?;
    let w = &cert.challenge;
    let n = w.len();
    let b = &cert.budget;

    let required = b.function.subexp_threshold();
    if b.threshold < required {
        return bad(format!(
            "threshold {} below required {required}",
            b.threshold
        ));
    }
    if cert.max_accepted_before != world.max_accepted_length() {
        return bad("recorded max accepted length does not match the initial state".into());
    }
    if cert.m != cert.max_accepted_before.max(b.validity) {
        return bad("m is not max(m1, k)".into());
    }
    if n <= cert.m.max(b.threshold as usize) || !w.chars().all(|c| c == '0' || c == '1') {
        return bad("challenge is too short or not over {0,1}".into());
    }
    if b.steps as u64 != b.function.eval(n as u64).max(1) {
        return bad("steps do not equal f(|w|)".into());
    }
    if n < 128 && (b.steps as u128) >= 1u128 << n {
        return bad("f(|w|) is not below 2^|w|".into());
    }

    let (analysis, _) =
        analyze_path(&world, &cert.decider, w, b.steps).map_err(|e| ReplayError::Run {
            index: 0,
            detail: e.to_string(),
        })?;
    if analysis != cert.analysis
        || analysis.has_halting_configs() != (cert.case == ChallengeCase::HaltingConfigs)
    {
        return Err(ReplayError::Analysis);
    }

    let scan = Procedure::scan();
    let mut scans: BTreeMap<&str, Outcome> = BTreeMap::new();
    let mut decider_outcomes = Vec::new();
    for (index, step) in cert.transcript.iter().enumerate() {
        let (procedure, budget) = match step.procedure {
            Role::Scan => (&scan, scan_budget(step.input.len())),
            Role::Decider => (&cert.decider, b.steps),
        };
        let actual = run_once(&mut world, procedure, &step.input, budget)
            .map_err(|e| ReplayError::Run {
                index,
                detail: e.to_string(),
            })?
            .outcome;
        if actual != step.outcome {
            return Err(ReplayError::VerdictMismatch {
                index,
                input: step.input.clone(),
                recorded: step.outcome,
                actual,
            });
        }
        match step.procedure {
            Role::Scan => {
                if let Some(prev) = scans.insert(&step.input, actual) {
                    if prev != actual {
                        return Err(ReplayError::Contradiction(format!(
                            "scan answered {:?} twice differently",
                            step.input
                        )));
                    }
                }
            }
            Role::Decider if &step.input == w => decider_outcomes.push(actual),
            Role::Decider => {}
        }
    }
    if world.state() != cert.branch_snapshots.final_state {
        return Err(ReplayError::FinalState);
    }

    let fail = |s: &str| Err(ReplayError::Contradiction(s.into()));
    if decider_outcomes.is_empty() {
        return fail("the decider never ran on the challenge");
    }
    match cert.contradiction {
        ContradictionKind::BudgetExceeded => {
            if !decider_outcomes.contains(&Outcome::BudgetExhausted) {
                return fail("the decider always stopped within budget");
            }
        }
        ContradictionKind::AcceptsWithoutWitness => {
            if decider_outcomes.iter().any(|&o| o != Outcome::Accepted) {
                return fail("the decider did not always accept the challenge");
            }
            if !strings_of_length(n).all(|v| scans.get(v.as_str()) == Some(&Outcome::Rejected)) {
                return fail("some challenge-length string is not shown rejected");
            }
        }
        ContradictionKind::RejectsDespiteWitness => {
            if decider_outcomes.iter().any(|&o| o != Outcome::Rejected) {
                return fail("the decider did not always reject the challenge");
            }
            let Some(z) = &cert.witness else {
                return fail("no witness recorded");
            };
            if z.len() != n || scans.get(z.as_str()) != Some(&Outcome::Accepted) {
                return fail("the witness is not an accepted challenge-length string");
            }
        }
    }
    Ok(ReplayReport {
        steps: cert.transcript.len(),
        contradiction: cert.contradiction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uc::{ControlState, Instruction, Move, BLANK};

    fn accept_all() -> Procedure {
        Procedure::new([Instruction::new(
            ControlState::START,
            BLANK,
            ControlState::Halt,
            BLANK,
            Move::L,
        )])
        .unwrap()
    }

    fn quadratic() -> RefuteOptions {
        RefuteOptions::new("n^2".parse().unwrap())
    }

    #[test]
    fn accept_all_is_refuted_by_flooding() {
        let mut world = EvolutionaryUc::new();
        let cert = refute(&mut world, &accept_all(), &quadratic()).unwrap();
        assert_eq!(cert.challenge, "00000");
        assert_eq!(cert.budget.steps, 25);
        assert_eq!(cert.case, ChallengeCase::NoHaltingConfigs);
        assert_eq!(cert.contradiction, ContradictionKind::AcceptsWithoutWitness);
        let report = replay_certificate(&Certificate::from_json(&cert.to_json()).unwrap()).unwrap();
        assert_eq!(
            report.contradiction,
            ContradictionKind::AcceptsWithoutWitness
        );
    }

    #[test]
    fn reject_all_is_refuted_by_a_witness() {
        let mut world = EvolutionaryUc::new();
        let cert = refute(&mut world, &Procedure::empty(), &quadratic()).unwrap();
        assert_eq!(cert.contradiction, ContradictionKind::RejectsDespiteWitness);
        assert_eq!(cert.witness.as_deref(), Some("00000"));
    }

    #[test]
    fn scan_as_its_own_decider_is_caught_after_preflooding() {
        let mut world = EvolutionaryUc::new();
        let cert = refute(&mut world, &Procedure::scan(), &quadratic()).unwrap();
        assert_eq!(cert.case, ChallengeCase::HaltingConfigs);
        assert_eq!(cert.transcript[0].input, "000000");
        assert_eq!(cert.transcript[0].purpose, Purpose::PreFlood);
        assert_eq!(cert.transcript[1].outcome, Outcome::Rejected);
        assert_eq!(cert.contradiction, ContradictionKind::RejectsDespiteWitness);
        assert_eq!(cert.witness.as_deref(), Some("00001"));
    }

    #[test]
    fn history_lengthens_the_challenge() {
        let mut world = EvolutionaryUc::new();
        super::super::scan_outcome(&mut world, "1111111").unwrap();
        let cert = refute(&mut world, &accept_all(), &quadratic()).unwrap();
        assert_eq!(cert.max_accepted_before, 7);
        assert_eq!(cert.challenge.len(), 8);
    }

    #[test]
    fn tampered_certificates_fail_replay() {
        let mut world = EvolutionaryUc::new();
        let cert = refute(&mut world, &Procedure::empty(), &quadratic()).unwrap();
        let mut flipped = cert.clone();
        let last = flipped.transcript.len() - 1;
        flipped.transcript[last].outcome = Outcome::Accepted;
        assert!(matches!(
            replay_certificate(&flipped),
            Err(ReplayError::VerdictMismatch { .. })
        ));

        let mut wrong_kind = cert.clone();
        wrong_kind.contradiction = ContradictionKind::AcceptsWithoutWitness;
        assert!(matches!(
            replay_certificate(&wrong_kind),
            Err(ReplayError::Contradiction(_))
        ));

        let mut short = cert.clone();
        short.challenge = "000".into();
        assert!(matches!(
            replay_certificate(&short),
            Err(ReplayError::Parameters(_))
        ));

        let mut final_state = cert;
        final_state.branch_snapshots.final_state = EvolutionaryUc::new().state();
        assert_eq!(
            replay_certificate(&final_state),
            Err(ReplayError::FinalState)
        );
    }

    #[test]
    fn bad_parameters_are_refused() {
        let mut world = EvolutionaryUc::new();
        let mut opts = quadratic();
        opts.threshold = Some(3);
        assert_eq!(
            refute(&mut world, &accept_all(), &opts).unwrap_err(),
            AnalysisError::NotSubExponential {
                declared: 3,
                required: 4
            }
        );
        let mut opts = quadratic();
        opts.challenge = Some("0000".into());
        assert_eq!(
            refute(&mut world, &accept_all(), &opts).unwrap_err(),
            AnalysisError::ChallengeTooShort { len: 4, min: 4 }
        );
    }

    #[test]
    fn non_halting_decider_exceeds_its_budget() {
        let spin = Procedure::new([
            Instruction::new(
                ControlState::START,
                BLANK,
                ControlState::Q(1),
                BLANK,
                Move::R,
            ),
            Instruction::new(ControlState::Q(1), '0', ControlState::START, '0', Move::L),
        ])
        .unwrap();
        let mut world = EvolutionaryUc::new();
        let cert = refute(&mut world, &spin, &quadratic()).unwrap();
        assert_eq!(cert.contradiction, ContradictionKind::BudgetExceeded);
    }
}
