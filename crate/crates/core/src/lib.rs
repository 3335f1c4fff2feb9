//! Simulators for universe-computers: a static Turing-style backend and an
//! evolutionary backend whose acceptance box is a persistently evolving
//! automaton, plus the experiment layer built on top of them.

pub mod analysis;
pub mod pe;
pub mod sim_e;
pub mod sim_v;
pub mod uc;
