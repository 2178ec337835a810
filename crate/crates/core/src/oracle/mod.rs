//! Brute-force ground truth.
//!
//! Everything here is computed from scratch: finite rings enumerated element
//! by element, characters found as index-2 subgroups, coefficient arrays by
//! depth-first search over prime ideals. Nothing is shared with
//! [`crate::localdata`] or [`crate::series`] beyond the data types they return.

pub mod arith;
pub mod baseline;
pub mod characters;
pub mod dfs;
pub mod fields;
pub mod report;
pub mod ring;

use thiserror::Error;

pub use baseline::rational_baseline;
pub use characters::{characters_mod2, unit_group_structure, LocalCharacter};
pub use dfs::{ideal_dfs, ideal_dfs_count, DfsCounts};
pub use report::{derive_two_adic_tables, verify_local_tables, CheckRecord, LocalTablesReport};
pub use ring::{Elem, FiniteRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("ring {ring} has {size} elements, above the enumeration limit")]
    TooLarge { ring: String, size: u64 },
    #[error("character of conductor {conductor} in {ring} exceeds filtration depth {depth}")]
    DepthInsufficient {
        ring: String,
        conductor: u32,
        depth: u32,
    },
    #[error("bound {n} exceeds oracle capacity {max}")]
    CapacityExceeded { n: u64, max: u64 },
    #[error("minimal polynomial of Q(sqrt({d})) is not Eisenstein at {p}")]
    NotEisenstein { d: i64, p: u64 },
}
