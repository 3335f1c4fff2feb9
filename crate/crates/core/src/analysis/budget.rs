use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AnalysisError;

/// A polynomial step budget `f(n) = Σ cᵢ nⁱ` with non-negative integer
/// coefficients (hence monotone). Written like `n^2`, `3n^2+2n+1`, `5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BudgetFn {
    coeffs: Vec<u64>,
}

impl BudgetFn {
    pub fn from_coefficients(mut coeffs: Vec<u64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, n: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.saturating_mul(n).saturating_add(c))
    }

    /// Smallest `t` with `f(n) < 2ⁿ` for every `n > t`.
    pub fn subexp_threshold(&self) -> u64 {
        // beyond n = 127 a polynomial of degree < 64 with u64 coefficients
        // saturates below 2^n
        (0..128u64)
            .filter(|&n| u128::from(self.eval(n)) >= 1u128 << n)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for BudgetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}n"),
                _ => format!("{coef}n^{i}"),
            });
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join("+"))
    }
}

impl FromStr for BudgetFn {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, AnalysisError> {
        let bad = |why: &str| AnalysisError::BadBudget(format!("{s:?}: {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut coeffs: Vec<u64> = Vec::new();
        for term in compact.split('+') {
            let (coef, power) = match term.find('n') {
                None => (term, 0usize),
                Some(pos) => {
                    let (c, rest) = term.split_at(pos);
                    let c = c.strip_suffix('*').unwrap_or(c);
                    let power = match &rest[1..] {
                        "" => 1,
                        e => e
                            .strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(|| bad("exponent must be written ^<integer>"))?,
                    };
                    (if c.is_empty() { "1" } else { c }, power)
                }
            };
            if power >= 64 {
                return Err(bad("degree too large"));
            }
            let coef: u64 = coef
                .parse()
                .map_err(|_| bad("coefficients must be integers"))?;
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = coeffs[power].saturating_add(coef);
        }
        Ok(Self::from_coefficients(coeffs))
    }
}

impl Serialize for BudgetFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BudgetFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
