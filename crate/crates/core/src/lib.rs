//! Interpreter, state-machine builder, information-flow security checkers,
//! and rely-guarantee proof-outline checkers for finite-state event-based
//! concurrent system models.
//!
//! A model declares finite-domain shared variables, guarded parameterized
//! events grouped into per-core event systems, a security policy (domains,
//! interference relation, observations), and optional rely-guarantee
//! annotations. Everything the checkers decide is decided by enumeration at
//! desk scale, guarded by explicit resource caps.

pub mod model;
pub mod syntax;
pub mod semantics;
pub mod machine;
pub mod verdict;
pub mod ifs;
pub mod rg;
pub mod eventucs;
pub mod arinc;

/// Resource caps shared by the interpreter and checkers. Exhausting a cap is
/// a hard error, never silent truncation.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum number of states in the declared universe.
    pub max_universe: u128,
    /// Maximum number of distinct configurations explored by machine
    /// building or semantic enumeration.
    pub max_configs: usize,
    /// Maximum number of computations an enumeration may produce.
    pub max_computations: usize,
    /// Inner-execution fuel for atomic await bodies; `None` derives
    /// 10 * |universe| at use time.
    pub await_fuel: Option<u64>,
    /// Maximum number of action sequences a bounded oracle may enumerate.
    pub max_sequences: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_universe: 1_000_000,
            max_configs: 200_000,
            max_computations: 1_000_000,
            await_fuel: None,
            max_sequences: 5_000_000,
        }
    }
}

impl Caps {
    pub fn fuel_for(&self, universe_len: usize) -> u64 {
        self.await_fuel.unwrap_or(10 * universe_len as u64)
    }
}
