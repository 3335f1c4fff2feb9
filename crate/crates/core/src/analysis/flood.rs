use serde::{Deserialize, Serialize};

use super::{scan_outcome, AnalysisError};
use crate::pe::{strings_of_length, Verdict};
use crate::sim_e::EvolutionaryUc;
use crate::uc::Outcome;

/// Largest `n` flooded without an explicit override.
pub const DEFAULT_FLOOD_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloodReport {
    pub length: usize,
    pub flooded_length: usize,
    pub queries: usize,
    pub accepted: usize,
    pub evolution_ticks: u64,
    pub length_all_rejected: bool,
}

/// Presents the scanning procedure with every string of length `n + 1`, in
/// lexicographic order. Afterwards every string of length `n` is rejected.
pub fn flood(world: &mut EvolutionaryUc, n: usize) -> Result<FloodReport, AnalysisError> {
    flood_bounded(world, n, DEFAULT_FLOOD_BOUND)
}

pub fn flood_bounded(
    world: &mut EvolutionaryUc,
    n: usize,
    bound: usize,
) -> Result<FloodReport, AnalysisError> {
    if n > bound {
        return Err(AnalysisError::FloodTooLarge {
            length: n,
            bound,
            queries: 1u128.checked_shl(n as u32 + 1).unwrap_or(u128::MAX),
        });
    }
    let before = world.automaton().clock();
    let mut queries = 0;
    let mut accepted = 0;
    for v in strings_of_length(n + 1) {
        queries += 1;
        if scan_outcome(world, &v)? == Outcome::Accepted {
            accepted += 1;
        }
    }
    let length_all_rejected = strings_of_length(n).all(|x| world.peek(&x) == Some(Verdict::Reject));
    Ok(FloodReport {
        length: n,
        flooded_length: n + 1,
        queries,
        accepted,
        evolution_ticks: world.automaton().clock() - before,
        length_all_rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flooding_rejects_the_shorter_length() {
        for n in 0..=4 {
            let mut e = EvolutionaryUc::new();
            let r = flood(&mut e, n).unwrap();
            assert!(r.length_all_rejected, "n = {n}");
            assert_eq!(r.queries, 1 << (n + 1));
            assert_eq!(r.accepted, r.queries);
            for x in strings_of_length(n) {
                assert_eq!(scan_outcome(&mut e, &x).unwrap(), Outcome::Rejected);
            }
        }
    }

    #[test]
    fn flooding_after_history_still_rejects() {
        let mut e = EvolutionaryUc::new();
        for x in ["0", "110", "1"] {
            scan_outcome(&mut e, x).unwrap();
        }
        let r = flood(&mut e, 2).unwrap();
        assert!(r.length_all_rejected);
    }

    #[test]
    fn bound_is_enforced_with_cost_estimate() {
        let mut e = EvolutionaryUc::new();
        assert_eq!(
            flood_bounded(&mut e, 12, 10),
            Err(AnalysisError::FloodTooLarge {
                length: 12,
                bound: 10,
                queries: 8192
            })
        );
        assert!(e.query_log().is_empty());
    }
}
