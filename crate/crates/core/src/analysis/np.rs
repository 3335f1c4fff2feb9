//! Witness checking for languages of the form
//! `{x : ∃y, |y| ≤ q(|x|), J accepts ⟨x, y⟩}`.
//!
//! Pairs are encoded as `1^|x| 0 x y`.

use super::{run_once, AnalysisError, BudgetFn};
use crate::uc::{
    ControlState, Instruction, Move, Outcome, Procedure, Symbol, UniverseComputer, BLANK,
};

pub fn encode_pair(x: &str, y: &str) -> String {
    format!("{}0{x}{y}", "1".repeat(x.len()))
}

pub fn decode_pair(s: &str) -> Option<(String, String)> {
    let n = s.find('0')?;
    if !s[..n].bytes().all(|b| b == b'1') {
        return None;
    }
    let rest = &s[n + 1..];
    (rest.len() >= n).then(|| (rest[..n].to_string(), rest[n..].to_string()))
}

/// Step budget generous enough for the quadratic checkers below.
pub fn pair_budget(x: &str, y: &str) -> usize {
    let n = 2 * x.len() + y.len() + 4;
    4 * n * n
}

const START: usize = 0;
const SEP: usize = 1;
const BACK: usize = 2;
const MARK: usize = 3;
const CROSS: usize = 4;
const SEEK: usize = 5;
const RETURN: usize = 6;
const MATCH: usize = 7;
const CARRY0: usize = 8;
const CARRY1: usize = 9;
const REWIND: usize = 10;
const REST: usize = 11;
const ACCEPT: usize = 12;
const RESTORE: usize = 13;
const ERASE: usize = 14;
const FIND: usize = 15;
const OVER: usize = 16;
const EMPTY: usize = 17;
const EMPTY2: usize = 18;
const HALT: usize = usize::MAX;

fn state(i: usize) -> ControlState {
    if i == HALT {
        ControlState::Halt
    } else {
        ControlState::Q(i as u32)
    }
}

fn rule(
    rules: &mut Vec<Instruction>,
    from: usize,
    read: Symbol,
    to: usize,
    write: Symbol,
    dir: Move,
) {
    rules.push(Instruction::new(state(from), read, state(to), write, dir));
}

fn pass(rules: &mut Vec<Instruction>, s: usize, symbols: &str, dir: Move) {
    for c in symbols.chars() {
        rule(rules, s, c, s, c, dir);
    }
}

/// Shared prefix: turn the separator into `#`, then for every leading `1`
/// (marked `I`) convert the next unmarked symbol after `#` to `a`/`b`.
fn mark_first_component(r: &mut Vec<Instruction>) {
    use Move::{L, R};
    rule(r, START, BLANK, SEP, BLANK, R);
    pass(r, SEP, "1", R);
    rule(r, SEP, '0', BACK, '#', L);
    pass(r, BACK, "1", L);
    rule(r, BACK, BLANK, MARK, BLANK, R);
    pass(r, MARK, "I", R);
    rule(r, MARK, '1', CROSS, 'I', R);
    rule(r, MARK, '#', MATCH, '#', R);
    pass(r, CROSS, "1", R);
    rule(r, CROSS, '#', SEEK, '#', R);
    pass(r, SEEK, "ab", R);
    rule(r, SEEK, '0', RETURN, 'a', L);
    rule(r, SEEK, '1', RETURN, 'b', L);
    pass(r, RETURN, "ab#1I", L);
    rule(r, RETURN, BLANK, MARK, BLANK, R);
}

/// Accepts `⟨x, y⟩` iff `x = y`, by stopping in `h` on a fresh left blank.
pub fn equality_checker() -> Procedure {
    use Move::{L, R};
    let mut r = Vec::new();
    mark_first_component(&mut r);
    pass(&mut r, MATCH, "X", R);
    rule(&mut r, MATCH, 'a', CARRY0, 'X', R);
    rule(&mut r, MATCH, 'b', CARRY1, 'X', R);
    rule(&mut r, MATCH, 'c', REST, 'c', R);
    rule(&mut r, MATCH, 'd', REST, 'd', R);
    rule(&mut r, MATCH, BLANK, ACCEPT, BLANK, L);
    pass(&mut r, CARRY0, "abXcd", R);
    rule(&mut r, CARRY0, '0', REWIND, 'c', L);
    pass(&mut r, CARRY1, "abXcd", R);
    rule(&mut r, CARRY1, '1', REWIND, 'd', L);
    pass(&mut r, REWIND, "abXcd", L);
    rule(&mut r, REWIND, '#', MATCH, '#', R);
    pass(&mut r, REST, "cd", R);
    rule(&mut r, REST, BLANK, ACCEPT, BLANK, L);
    pass(&mut r, ACCEPT, "cdX#Iab01", L);
    rule(&mut r, ACCEPT, BLANK, HALT, BLANK, L);
    Procedure::new(r).expect("checker is deterministic")
}

/// Accepts `⟨x, y⟩` iff `|y| = |x|` and the scanning procedure would accept
/// `y`: it erases everything but `y` and stops at `(h, △…y△̲)`, so on the
/// evolutionary backend the decision is handed to the evolving automaton.
pub fn same_length_witness_checker() -> Procedure {
    use Move::{L, R};
    let mut r = Vec::new();
    mark_first_component(&mut r);
    pass(&mut r, MATCH, "X", R);
    rule(&mut r, MATCH, 'a', CARRY0, 'X', R);
    rule(&mut r, MATCH, 'b', CARRY0, 'X', R);
    rule(&mut r, MATCH, 'c', REST, 'c', R);
    rule(&mut r, MATCH, 'd', REST, 'd', R);
    rule(&mut r, MATCH, BLANK, EMPTY, BLANK, L);
    pass(&mut r, CARRY0, "abXcd", R);
    rule(&mut r, CARRY0, '0', REWIND, 'c', L);
    rule(&mut r, CARRY0, '1', REWIND, 'd', L);
    pass(&mut r, REWIND, "abXcd", L);
    rule(&mut r, REWIND, '#', MATCH, '#', R);
    pass(&mut r, REST, "cd", R);
    rule(&mut r, REST, BLANK, RESTORE, BLANK, L);
    rule(&mut r, RESTORE, 'c', RESTORE, '0', L);
    rule(&mut r, RESTORE, 'd', RESTORE, '1', L);
    rule(&mut r, RESTORE, 'X', ERASE, BLANK, L);
    for c in "X#I".chars() {
        rule(&mut r, ERASE, c, ERASE, BLANK, L);
    }
    rule(&mut r, ERASE, BLANK, FIND, BLANK, R);
    pass(&mut r, FIND, "_", R);
    rule(&mut r, FIND, '0', OVER, '0', R);
    rule(&mut r, FIND, '1', OVER, '1', R);
    pass(&mut r, OVER, "01", R);
    rule(&mut r, OVER, BLANK, HALT, BLANK, R);
    // x = y = ε: the tape is △#△
    rule(&mut r, EMPTY, '#', EMPTY2, BLANK, R);
    rule(&mut r, EMPTY2, BLANK, HALT, BLANK, R);
    Procedure::new(r).expect("checker is deterministic")
}

/// Runs `checker` on `⟨x, y⟩` in a throwaway branch of `world` after checking
/// `|y| ≤ q(|x|)`.
pub fn np_witness_check<U: UniverseComputer + Clone>(
    checker: &Procedure,
    q: &BudgetFn,
    x: &str,
    y: &str,
    world: &U,
    budget: usize,
) -> Result<bool, AnalysisError> {
    let bound = q.eval(x.len() as u64);
    if y.len() as u64 > bound {
        return Err(AnalysisError::WitnessTooLong {
            len: y.len(),
            bound,
        });
    }
    let mut branch = world.clone();
    let path = run_once(&mut branch, checker, &encode_pair(x, y), budget)?;
    match path.outcome {
        Outcome::Accepted => Ok(true),
        Outcome::Rejected => Ok(false),
        _ => Err(AnalysisError::CheckerBudgetExhausted(budget)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pe::strings_of_length;
    use crate::sim_e::EvolutionaryUc;
    use crate::sim_v::StaticUc;

    fn linear() -> BudgetFn {
        "n".parse().unwrap()
    }

    fn check<U: UniverseComputer + Clone>(p: &Procedure, x: &str, y: &str, uc: &U) -> bool {
        np_witness_check(p, &"n+3".parse().unwrap(), x, y, uc, pair_budget(x, y)).unwrap()
    }

    #[test]
    fn pairing_round_trips() {
        assert_eq!(encode_pair("01", "10"), "1100110");
        assert_eq!(decode_pair("1100110"), Some(("01".into(), "10".into())));
        assert_eq!(decode_pair("0"), Some((String::new(), String::new())));
        assert_eq!(decode_pair("110"), None);
        assert_eq!(decode_pair("111"), None);
    }

    #[test]
    fn equality_checker_examples() {
        let eq = equality_checker();
        let v = StaticUc::new();
        assert!(check(&eq, "01", "01", &v));
        assert!(!check(&eq, "01", "10", &v));
        assert!(check(&eq, "", "", &v));
        assert!(!check(&eq, "0", "", &v));
        assert!(!check(&eq, "", "1", &v));
    }

    #[test]
    fn equality_checker_exhaustive_up_to_three_on_both_backends() {
        let eq = equality_checker();
        for n in 0..=3 {
            for m in 0..=3 {
                for x in strings_of_length(n) {
                    for y in strings_of_length(m) {
                        let want = x == y;
                        assert_eq!(check(&eq, &x, &y, &StaticUc::new()), want, "{x} {y}");
                        assert_eq!(check(&eq, &x, &y, &EvolutionaryUc::new()), want, "{x} {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn same_length_checker_consults_the_automaton_on_y() {
        let j = same_length_witness_checker();
        let fresh = EvolutionaryUc::new();
        assert!(check(&j, "0", "1", &fresh));
        assert!(!check(&j, "0", "10", &fresh));
        assert!(!check(&j, "00", "1", &fresh));
        assert!(check(&j, "", "", &fresh));
        assert!(fresh.query_log().is_empty());

        let mut flooded = EvolutionaryUc::new();
        super::super::flood(&mut flooded, 1).unwrap();
        assert!(!check(&j, "0", "1", &flooded));
        for n in 0..=3 {
            for x in strings_of_length(n) {
                for y in strings_of_length(n) {
                    assert!(check(&j, &x, &y, &StaticUc::new()), "{x} {y}");
                }
            }
        }
    }

    #[test]
    fn overlong_witness_is_refused() {
        let r = np_witness_check(
            &equality_checker(),
            &linear(),
            "0",
            "01",
            &StaticUc::new(),
            100,
        );
        assert_eq!(r, Err(AnalysisError::WitnessTooLong { len: 2, bound: 1 }));
    }
}
