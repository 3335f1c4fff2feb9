//! Instructions and configurations of the transition box.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::UcError;

/// A tape symbol of `Γ`.
pub type Symbol = char;

/// The blank symbol `△`. Rendered as `_`; `△` is accepted as an alias.
pub const BLANK: Symbol = '_';

const BLANK_ALIAS: Symbol = '△';

pub fn is_input_symbol(s: Symbol) -> bool {
    s == '0' || s == '1'
}

fn parse_symbol(text: &str) -> Result<Symbol, UcError> {
    let mut chars = text.chars();
    match (chars.next(), chars.next()) {
        (Some(BLANK_ALIAS), None) => Ok(BLANK),
        (Some(c), None) if !c.is_whitespace() && !matches!(c, '|' | '[' | ']') => Ok(c),
        _ => Err(UcError::Parse(format!("{text:?} is not a tape symbol"))),
    }
}

/// A control state in `{h} ∪ {q_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ControlState {
    Halt,
    Q(u32),
}

impl ControlState {
    pub const START: ControlState = ControlState::Q(0);
}

impl fmt::Display for ControlState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlState::Halt => f.write_str("h"),
            ControlState::Q(i) => write!(f, "q{i}"),
        }
    }
}

impl FromStr for ControlState {
    type Err = UcError;
    fn from_str(s: &str) -> Result<Self, UcError> {
        if s == "h" {
            return Ok(ControlState::Halt);
        }
        s.strip_prefix('q')
            .and_then(|n| n.parse().ok())
            .map(ControlState::Q)
            .ok_or_else(|| UcError::Parse(format!("{s:?} is not a control state (h or q<n>)")))
    }
}

impl Serialize for ControlState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ControlState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

/// `[(from, read) → (to, write, move)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instruction {
    pub from: ControlState,
    pub read: Symbol,
    pub to: ControlState,
    pub write: Symbol,
    pub dir: Move,
}

impl Instruction {
    pub fn new(
        from: ControlState,
        read: Symbol,
        to: ControlState,
        write: Symbol,
        dir: Move,
    ) -> Self {
        Self {
            from,
            read,
            to,
            write,
            dir,
        }
    }

    pub fn key(&self) -> (ControlState, Symbol) {
        (self.from, self.read)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[({},{})->({},{},{:?})]",
            self.from, self.read, self.to, self.write, self.dir
        )
    }
}

/// Wire form: `[from, read, to, write, move]`.
impl Serialize for Instruction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dir = match self.dir {
            Move::L => "L",
            Move::R => "R",
        };
        [
            self.from.to_string(),
            self.read.to_string(),
            self.to.to_string(),
            self.write.to_string(),
            dir.to_string(),
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instruction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let [from, read, to, write, dir] = <[String; 5]>::deserialize(d)?;
        let dir = match dir.as_str() {
            "L" => Move::L,
            "R" => Move::R,
            other => {
                return Err(D::Error::custom(format!(
                    "{other:?} is not a move (L or R)"
                )))
            }
        };
        Ok(Instruction {
            from: from.parse().map_err(D::Error::custom)?,
            read: parse_symbol(&read).map_err(D::Error::custom)?,
            to: to.parse().map_err(D::Error::custom)?,
            write: parse_symbol(&write).map_err(D::Error::custom)?,
            dir,
        })
    }
}

/// A configuration `(q, x a̲ z)`: control state, tape and head position.
///
/// The tape holds exactly the cells visited so far; moving past either end
/// extends it with a blank, so the head always rests on a symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    state: ControlState,
    tape: Vec<Symbol>,
    head: usize,
}

impl Configuration {
    pub fn new(state: ControlState, tape: Vec<Symbol>, head: usize) -> Result<Self, UcError> {
        if head >= tape.len() {
            return Err(UcError::Parse(format!(
                "head position {head} is outside a tape of {} cells",
                tape.len()
            )));
        }
        Ok(Self { state, tape, head })
    }

    /// Builds a configuration from its three tape segments.
    pub fn from_parts(state: ControlState, left: &str, head: Symbol, right: &str) -> Self {
        let mut tape: Vec<Symbol> = left.chars().map(normalize).collect();
        let pos = tape.len();
        tape.push(normalize(head));
        tape.extend(right.chars().map(normalize));
        Self {
            state,
            tape,
            head: pos,
        }
    }

    /// `C_{0,x} = (q0, △̲x)`.
    pub fn initial(input: &str) -> Result<Self, UcError> {
        if let Some((position, symbol)) = input
            .chars()
            .enumerate()
            .find(|(_, c)| !is_input_symbol(*c))
        {
            return Err(UcError::MalformedInput { position, symbol });
        }
        let mut tape = Vec::with_capacity(input.len() + 1);
        tape.push(BLANK);
        tape.extend(input.chars());
        Ok(Self {
            state: ControlState::START,
            tape,
            head: 0,
        })
    }

    pub fn state(&self) -> ControlState {
        self.state
    }

    pub fn head_symbol(&self) -> Symbol {
        self.tape[self.head]
    }

    pub fn head_position(&self) -> usize {
        self.head
    }

    pub fn tape(&self) -> &[Symbol] {
        &self.tape
    }

    pub fn left(&self) -> &[Symbol] {
        &self.tape[..self.head]
    }

    pub fn right(&self) -> &[Symbol] {
        &self.tape[self.head + 1..]
    }

    /// Number of tape cells; the size measure used for clock accounting.
    pub fn len(&self) -> usize {
        self.tape.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(h, △̲x)`: halted on a blank at the left end of the tape.
    pub fn is_left_blank_halt(&self) -> bool {
        self.state == ControlState::Halt && self.head == 0 && self.head_symbol() == BLANK
    }

    /// `(h, x△̲)`: halted on a blank at the right end of the tape.
    pub fn is_right_blank_halt(&self) -> bool {
        self.state == ControlState::Halt
            && self.head + 1 == self.tape.len()
            && self.head_symbol() == BLANK
    }

    /// `y_C`: the tape contents with blank padding stripped from both ends.
    pub fn associated_string(&self) -> String {
        let s: String = self.tape.iter().collect();
        s.trim_matches(BLANK).to_string()
    }

    /// The tape with every blank removed, if what remains is over `{0,1}`.
    pub fn input_content(&self) -> Option<String> {
        let mut out = String::new();
        for &c in &self.tape {
            if c == BLANK {
                continue;
            }
            if !is_input_symbol(c) {
                return None;
            }
            out.push(c);
        }
        Some(out)
    }

    /// Path-log rendering: `state|left|[head]|right`.
    pub fn render(&self) -> String {
        let left: String = self.left().iter().collect();
        let right: String = self.right().iter().collect();
        format!("{}|{}|[{}]|{}", self.state, left, self.head_symbol(), right)
    }

    pub fn parse(text: &str) -> Result<Self, UcError> {
        let bad = || UcError::Parse(format!("{text:?} is not a rendered configuration"));
        let mut parts = text.splitn(4, '|');
        let state: ControlState = parts.next().ok_or_else(bad)?.parse()?;
        let left = parts.next().ok_or_else(bad)?;
        let head = parts.next().ok_or_else(bad)?;
        let right = parts.next().ok_or_else(bad)?;
        let head = head
            .strip_prefix('[')
            .and_then(|h| h.strip_suffix(']'))
            .ok_or_else(bad)?;
        let head = parse_symbol(head)?;
        Ok(Self::from_parts(state, left, head, right))
    }

    /// The transition-box rewrite. `None` is `⊥`: the instruction's key does
    /// not match this configuration.
    pub fn rewrite(&self, ins: &Instruction) -> Option<Configuration> {
        if ins.key() != (self.state, self.head_symbol()) {
            return None;
        }
        let mut next = self.clone();
        next.state = ins.to;
        next.tape[next.head] = ins.write;
        match ins.dir {
            Move::R => {
                next.head += 1;
                if next.head == next.tape.len() {
                    next.tape.push(BLANK);
                }
            }
            Move::L => {
                if next.head == 0 {
                    next.tape.insert(0, BLANK);
                } else {
                    next.head -= 1;
                }
            }
        }
        Some(next)
    }
}

fn normalize(c: Symbol) -> Symbol {
    if c == BLANK_ALIAS {
        BLANK
    } else {
        c
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ControlState::{Halt, Q};

    fn ins(text: &str) -> Instruction {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn initial_configuration() {
        let c = Configuration::initial("101").unwrap();
        assert_eq!(c.render(), "q0||[_]|101");
        assert_eq!(
            Configuration::initial("1a"),
            Err(UcError::MalformedInput {
                position: 1,
                symbol: 'a'
            })
        );
    }

    #[test]
    fn rewrite_moves_right_onto_input() {
        let c = Configuration::initial("101").unwrap();
        let next = c.rewrite(&ins(r#"["q0","_","h","_","R"]"#)).unwrap();
        assert_eq!(next, Configuration::from_parts(Halt, "_", '1', "01"));
    }

    #[test]
    fn rewrite_extends_right_end_with_blank() {
        let c = Configuration::from_parts(Halt, "_10", '1', "");
        let next = c.rewrite(&ins(r#"["h","1","h","1","R"]"#)).unwrap();
        assert_eq!(next.render(), "h|_101|[_]|");
        assert!(next.is_right_blank_halt());
    }

    #[test]
    fn rewrite_extends_left_end_with_blank() {
        let c = Configuration::initial("0").unwrap();
        let next = c.rewrite(&ins(r#"["q0","_","h","_","L"]"#)).unwrap();
        assert_eq!(next.render(), "h||[_]|_0");
        assert!(next.is_left_blank_halt());
        assert!(!next.is_right_blank_halt());
    }

    #[test]
    fn rewrite_with_foreign_key_is_bottom() {
        let c = Configuration::initial("101").unwrap();
        assert_eq!(c.rewrite(&ins(r#"["q5","0","h","0","R"]"#)), None);
    }

    #[test]
    fn associated_string_strips_padding() {
        let c = Configuration::from_parts(Halt, "_101", BLANK, "");
        assert_eq!(c.associated_string(), "101");
        assert_eq!(c.input_content().as_deref(), Some("101"));
        let c = Configuration::from_parts(Halt, "_#1", BLANK, "");
        assert_eq!(c.input_content(), None);
    }

    #[test]
    fn render_parse_round_trip() {
        let c = Configuration::from_parts(Q(3), "_1", '0', "1_");
        assert_eq!(Configuration::parse(&c.render()).unwrap(), c);
        assert_eq!(
            Configuration::parse("h|△1|[△]|").unwrap().render(),
            "h|_1|[_]|"
        );
        assert!(Configuration::parse("h|1|0|").is_err());
    }

    #[test]
    fn instruction_wire_form() {
        let i = Instruction::new(Q(0), BLANK, Halt, BLANK, Move::R);
        assert_eq!(
            serde_json::to_string(&i).unwrap(),
            r#"["q0","_","h","_","R"]"#
        );
        assert_eq!(ins(r#"["q0","△","h","△","R"]"#), i);
        assert!(serde_json::from_str::<Instruction>(r#"["q0","_","h","_","U"]"#).is_err());
        assert!(serde_json::from_str::<Instruction>(r#"["x","_","h","_","R"]"#).is_err());
    }
}
