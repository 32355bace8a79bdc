//! Coding Theorem Method core: enumerate small Turing machines, run them
//! to a cutoff, and aggregate halting outputs into an empirical
//! frequency table whose `-log2` frequencies estimate algorithmic
//! complexity.

mod machine;
mod table;

pub use machine::{
    enumerate_machines, enumerate_range, Dim, MachineClass, Move, RunOutcome, RunStatus,
    Transition, TuringMachine,
};
pub use table::{
    build_table, complement_key, load_table, load_table_with_env, save_table, CtmTable,
    Provenance,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CtmError {
    #[error("machine class {0} exceeds the 64-bit index capacity")]
    ClassTooLarge(String),
    #[error("only 2-symbol machine classes are supported (got {0})")]
    UnsupportedSymbols(u8),
    #[error("invalid machine class: {0}")]
    InvalidClass(String),
    #[error("table file line {0}: {1}")]
    Parse(usize, String),
    #[error("duplicate table key {0}")]
    DuplicateKey(String),
    #[error("table checksum mismatch (file says {expected}, rows hash to {actual})")]
    ChecksumMismatch { expected: String, actual: String },
    #[error("inconsistent table: {0}")]
    InconsistentTable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
