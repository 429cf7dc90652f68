//! Engines for pushdown automata that cooperate: parallel systems whose
//! components communicate by transferring stack contents, distributed systems
//! that hand a single input around, plus the single-machine and queue-machine
//! building blocks and the translations between all of these.

pub mod compile;
pub mod dpas;
pub mod fixtures;
pub mod json;
pub mod pcpa;
pub mod pda;
pub mod post;
pub mod shuffle;
pub mod symbol;
pub mod verdict;

pub use pda::{AcceptanceMode, Move, Pda, PdaConfig, PdaParts};
pub use symbol::{StateId, Symbol};
pub use verdict::{Budget, SearchStats, Verdict, VerdictKind};
