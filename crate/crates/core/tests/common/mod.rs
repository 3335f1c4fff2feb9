//! Shared helpers for integration tests: an independent Turing-machine
//! simulator and seeded generators.

#![allow(dead_code)]

use std::collections::HashMap;

use evoverse_core::uc::{Move, TmDescription, TmRule, BLANK};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRun {
    /// `None` when the budget ran out with a rule still applicable.
    pub accepted: Option<bool>,
    pub steps: usize,
}

/// Plain TM semantics on a sparse tape. The blank cell left of the input is
/// position 0, the input sits at 1..=n, the head starts at 0. Acceptance:
/// stuck in the halting state on a blank at either end of the tape seen so
/// far (the initial cells count as seen).
pub fn reference_run(t: &TmDescription, input: &str, budget: usize) -> ReferenceRun {
    let mut tape: HashMap<i64, char> = input.chars().zip(1..).map(|(c, i)| (i, c)).collect();
    let (mut lo, mut hi) = (0i64, input.chars().count() as i64);
    let mut head = 0i64;
    let mut state = t.start;
    let mut steps = 0;
    loop {
        let sym = tape.get(&head).copied().unwrap_or(BLANK);
        let rule = t.rules.iter().find(|r| r.state == state && r.read == sym);
        let Some(rule) = rule else {
            let accepted = state == t.halt && sym == BLANK && (head == lo || head == hi);
            return ReferenceRun {
                accepted: Some(accepted),
                steps,
            };
        };
        if steps == budget {
            return ReferenceRun {
                accepted: None,
                steps,
            };
        }
        tape.insert(head, rule.write);
        head += match rule.dir {
            Move::L => -1,
            Move::R => 1,
        };
        lo = lo.min(head);
        hi = hi.max(head);
        state = rule.next;
        steps += 1;
    }
}

/// A random deterministic machine over `{0, 1, _}` with 2 to `max_states`
/// states.
pub fn random_tm<R: Rng>(rng: &mut R, max_states: usize) -> TmDescription {
    let states = rng.random_range(2..=max_states);
    let halt = rng.random_range(1..states);
    let alphabet = vec!['0', '1', BLANK];
    let mut rules = Vec::new();
    for state in 0..states {
        let density = if state == halt { 0.3 } else { 0.8 };
        for &read in &alphabet {
            if rng.random_bool(density) {
                rules.push(TmRule {
                    state,
                    read,
                    next: rng.random_range(0..states),
                    write: alphabet[rng.random_range(0..alphabet.len())],
                    dir: if rng.random_bool(0.5) {
                        Move::L
                    } else {
                        Move::R
                    },
                });
            }
        }
    }
    TmDescription {
        states,
        start: 0,
        halt,
        alphabet,
        rules,
    }
}

pub fn random_bits<R: Rng>(rng: &mut R, max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| if rng.random_bool(0.5) { '1' } else { '0' })
        .collect()
}
