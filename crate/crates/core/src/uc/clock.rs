use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoxKind {
    Tbox,
    Sbox,
}

/// One metered box call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockEntry {
    #[serde(rename = "box")]
    pub box_kind: BoxKind,
    pub config_len: usize,
    pub ticks: u64,
}

/// The universal clock: total ticks plus a per-call log.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockMeter {
    ticks: u64,
    log: Vec<ClockEntry>,
}

impl ClockMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, box_kind: BoxKind, config_len: usize, ticks: u64) {
        self.ticks += ticks;
        self.log.push(ClockEntry {
            box_kind,
            config_len,
            ticks,
        });
    }

    pub fn ticks(&self) -> u64 {
        self.ticks
    }

    pub fn log(&self) -> &[ClockEntry] {
        &self.log
    }
}

/// Declared linear bound `ticks ≤ a·|C| + b` for every box call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockBounds {
    pub a: u64,
    pub b: u64,
}

impl ClockBounds {
    pub fn admits(&self, entry: &ClockEntry) -> bool {
        entry.ticks <= self.a * entry.config_len as u64 + self.b
    }

    /// `(ticks − b) / |C|`: the slope this call actually needed.
    pub fn effective_slope(&self, entry: &ClockEntry) -> f64 {
        entry.ticks.saturating_sub(self.b) as f64 / entry.config_len.max(1) as f64
    }

    /// First logged call exceeding the bound, if any.
    pub fn first_violation<'a>(&self, log: &'a [ClockEntry]) -> Option<&'a ClockEntry> {
        log.iter().find(|e| !self.admits(e))
    }
}
