use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::config::{Configuration, ControlState, Instruction, Move, Symbol, BLANK};
use super::UcError;

/// Content-derived identifier of a procedure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProcedureId(pub String);

impl fmt::Display for ProcedureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite instruction set with at most one instruction per
/// `(state, symbol)` key.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Procedure {
    instructions: BTreeMap<(ControlState, Symbol), Instruction>,
}

impl Procedure {
    /// Validates the determination condition. Exact duplicates collapse, as
    /// in a set; two different instructions on one key are rejected.
    pub fn new(instructions: impl IntoIterator<Item = Instruction>) -> Result<Self, UcError> {
        let mut map: BTreeMap<(ControlState, Symbol), Instruction> = BTreeMap::new();
        for ins in instructions {
            match map.get(&ins.key()) {
                Some(existing) if *existing != ins => {
                    return Err(UcError::DeterminationViolation {
                        first: *existing,
                        second: ins,
                    })
                }
                _ => {
                    map.insert(ins.key(), ins);
                }
            }
        }
        Ok(Self { instructions: map })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The scanning procedure: step off the leading blank, then run right
    /// over the input, halting on the first blank after it.
    pub fn scan() -> Self {
        use ControlState::{Halt, Q};
        Self::new([
            Instruction::new(Q(0), BLANK, Halt, BLANK, Move::R),
            Instruction::new(Halt, '0', Halt, '0', Move::R),
            Instruction::new(Halt, '1', Halt, '1', Move::R),
        ])
        .expect("scan procedure is deterministic")
    }

    /// `υ(M, C)`: the instruction keyed by the configuration's state and head
    /// symbol.
    pub fn select(&self, c: &Configuration) -> Option<&Instruction> {
        self.instructions.get(&(c.state(), c.head_symbol()))
    }

    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.instructions.values()
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn id(&self) -> ProcedureId {
        let json = serde_json::to_string(self).expect("procedure serialization is infallible");
        let digest = Sha256::digest(json.as_bytes());
        ProcedureId(hex::encode(&digest[..8]))
    }

    pub fn from_json(text: &str) -> Result<Self, UcError> {
        serde_json::from_str(text).map_err(|e| UcError::Parse(e.to_string()))
    }
}

/// Wire form: a JSON list of 5-tuples, sorted by key.
impl Serialize for Procedure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.instructions.values())
    }
}

impl<'de> Deserialize<'de> for Procedure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let list = Vec::<Instruction>::deserialize(d)?;
        Procedure::new(list).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ControlState::{Halt, Q};

    #[test]
    fn scan_procedure_is_valid() {
        let p = Procedure::from_json(
            r#"[["q0","_","h","_","R"],["h","0","h","0","R"],["h","1","h","1","R"]]"#,
        )
        .unwrap();
        assert_eq!(p, Procedure::scan());
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn conflicting_key_is_a_determination_violation() {
        let a = Instruction::new(Q(0), BLANK, Halt, BLANK, Move::R);
        let b = Instruction::new(Q(0), BLANK, Q(1), '0', Move::L);
        assert_eq!(
            Procedure::new([a, b]),
            Err(UcError::DeterminationViolation {
                first: a,
                second: b
            })
        );
        assert!(
            Procedure::from_json(r#"[["q0","_","h","_","R"],["q0","_","q1","0","L"]]"#).is_err()
        );
    }

    #[test]
    fn exact_duplicates_collapse() {
        let a = Instruction::new(Q(0), BLANK, Halt, BLANK, Move::R);
        assert_eq!(Procedure::new([a, a]).unwrap().len(), 1);
    }

    #[test]
    fn empty_procedure_is_valid_and_never_applies() {
        let p = Procedure::new([]).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.select(&Configuration::initial("101").unwrap()), None);
    }

    #[test]
    fn selection_by_state_and_head() {
        let p = Procedure::scan();
        let c0 = Configuration::initial("101").unwrap();
        assert_eq!(
            p.select(&c0),
            Some(&Instruction::new(Q(0), BLANK, Halt, BLANK, Move::R))
        );
        let c = Configuration::from_parts(Q(1), "", BLANK, "");
        assert_eq!(p.select(&c), None);
    }

    #[test]
    fn id_depends_only_on_content() {
        let reordered = Procedure::from_json(
            r#"[["h","1","h","1","R"],["q0","_","h","_","R"],["h","0","h","0","R"]]"#,
        )
        .unwrap();
        assert_eq!(reordered.id(), Procedure::scan().id());
        assert_ne!(Procedure::empty().id(), Procedure::scan().id());
        assert_eq!(Procedure::scan().id().0.len(), 16);
    }
}
