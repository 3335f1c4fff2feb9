//! The counter process `g`: a well-defined but non-predetermined function.
//!
//! Each previously unseen argument is bound to `|W| + 1`, so the value an
//! argument receives depends on the order in which arguments are presented.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// State of the counter process: the set `W` of `(argument, value)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterProcess<K: Ord = u64> {
    assigned: BTreeMap<K, u64>,
}

impl<K: Ord> Default for CounterProcess<K> {
    fn default() -> Self {
        Self {
            assigned: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> CounterProcess<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Evaluates `g(n)`, binding `n` to `|W| + 1` if it has not been seen.
    pub fn eval(&mut self, n: K) -> u64 {
        let next = self.assigned.len() as u64 + 1;
        *self.assigned.entry(n).or_insert(next)
    }

    /// The value already bound to `n`, without extending `W`.
    pub fn lookup(&self, n: &K) -> Option<u64> {
        self.assigned.get(n).copied()
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }

    /// Pairs of `W`, ordered by argument.
    pub fn pairs(&self) -> impl Iterator<Item = (&K, u64)> {
        self.assigned.iter().map(|(k, v)| (k, *v))
    }
}
