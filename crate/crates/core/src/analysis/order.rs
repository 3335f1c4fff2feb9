use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{scan_budget, AnalysisError};
use crate::uc::{Answer, Backend, Computist, Procedure, UniverseComputer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    pub input: String,
    pub first: Answer,
    pub second: Answer,
}

/// Result of feeding the scanning procedure two orderings of one input set
/// on fresh branches of the same universe-computer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub backend: Backend,
    pub first: Vec<(String, Answer)>,
    pub second: Vec<(String, Answer)>,
    pub divergences: Vec<Divergence>,
    pub first_well_defined: bool,
    pub second_well_defined: bool,
}

impl OrderReport {
    pub fn order_independent(&self) -> bool {
        self.divergences.is_empty()
    }
}

fn check_permutation(a: &[String], b: &[String]) -> Result<(), AnalysisError> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    if a == b {
        Ok(())
    } else {
        Err(AnalysisError::NotPermutation)
    }
}

fn run_sequence<U: UniverseComputer>(
    uc: U,
    seq: &[String],
) -> Result<(Vec<(String, Answer)>, bool), AnalysisError> {
    let mut computist = Computist::new(uc);
    let scan = Procedure::scan();
    let mut answers = Vec::with_capacity(seq.len());
    let mut well_defined = true;
    for x in seq {
        match computist.run(&scan, x, scan_budget(x.chars().count())) {
            Ok(path) => {
                let answer = path
                    .outcome
                    .answer()
                    .expect("scan always terminates within its budget");
                answers.push((x.clone(), answer));
            }
            Err(crate::uc::UcError::IllDefinedExperience { .. }) => well_defined = false,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((answers, well_defined))
}

fn report(
    backend: Backend,
    (first, first_well_defined): (Vec<(String, Answer)>, bool),
    (second, second_well_defined): (Vec<(String, Answer)>, bool),
) -> OrderReport {
    let a: BTreeMap<&str, Answer> = first.iter().map(|(x, r)| (x.as_str(), *r)).collect();
    let b: BTreeMap<&str, Answer> = second.iter().map(|(x, r)| (x.as_str(), *r)).collect();
    let divergences = a
        .iter()
        .filter_map(|(x, &ra)| {
            let rb = b[x];
            (ra != rb).then(|| Divergence {
                input: x.to_string(),
                first: ra,
                second: rb,
            })
        })
        .collect();
    OrderReport {
        backend,
        first,
        second,
        divergences,
        first_well_defined,
        second_well_defined,
    }
}

/// Runs the scanning procedure over `first` and over `second` (which must be
/// a permutation of `first`) on independent branches of `base`.
pub fn order_experiment<U: UniverseComputer + Clone>(
    base: &U,
    first: &[String],
    second: &[String],
) -> Result<OrderReport, AnalysisError> {
    check_permutation(first, second)?;
    let a = run_sequence(base.clone(), first)?;
    let b = run_sequence(base.clone(), second)?;
    Ok(report(base.backend(), a, b))
}

/// Same as [`order_experiment`] with the two branches on separate threads.
pub fn order_experiment_parallel<U: UniverseComputer + Clone + Send>(
    base: &U,
    first: &[String],
    second: &[String],
) -> Result<OrderReport, AnalysisError> {
    check_permutation(first, second)?;
    let (ua, ub) = (base.clone(), base.clone());
    let (a, b) = std::thread::scope(|s| {
        let ha = s.spawn(move || run_sequence(ua, first));
        let hb = s.spawn(move || run_sequence(ub, second));
        (
            ha.join().expect("branch thread panicked"),
            hb.join().expect("branch thread panicked"),
        )
    });
    Ok(report(base.backend(), a?, b?))
}
