//! The static universe-computer: Turing-machine transition box and a
//! pattern-matching success box. Nothing inside it ever changes.

use crate::uc::{
    metered_rewrite, Answer, Backend, BoxKind, ClockBounds, ClockMeter, Configuration, Instruction,
    UniverseComputer,
};

/// Declared clock constants: every call costs `|C| + 1` ticks.
pub const STATIC_CLOCK_BOUNDS: ClockBounds = ClockBounds { a: 1, b: 1 };

/// YES for `(h, △̲x)` and `(h, x△̲)`, NO otherwise.
pub fn static_success(c: &Configuration) -> Answer {
    if c.is_left_blank_halt() || c.is_right_blank_halt() {
        Answer::Yes
    } else {
        Answer::No
    }
}

#[derive(Debug, Clone, Default)]
pub struct StaticUc {
    clock: ClockMeter,
}

impl StaticUc {
    pub fn new() -> Self {
        Self::default()
    }
}

impl UniverseComputer for StaticUc {
    fn tbox(&mut self, c: &Configuration, ins: &Instruction) -> Option<Configuration> {
        metered_rewrite(&mut self.clock, c, ins)
    }

    fn sbox(&mut self, c: &Configuration) -> Answer {
        self.clock
            .charge(BoxKind::Sbox, c.len(), c.len() as u64 + 1);
        static_success(c)
    }

    fn clock(&self) -> &ClockMeter {
        &self.clock
    }

    fn clock_bounds(&self) -> ClockBounds {
        STATIC_CLOCK_BOUNDS
    }

    fn backend(&self) -> Backend {
        Backend::Static
    }
}
