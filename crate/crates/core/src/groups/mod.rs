//! Backends for the ambient group `H` and the finite group `B`.

mod ambient;
mod finite;

pub use ambient::{
    Ambient, AmbientElement, BallSpec, FreeWord, LatticePoint, Shortlex, MAX_FREE_RANK, MAX_ZD_DIM,
};
pub(crate) use ambient::{parse_x_token, split_exponent, tokens};
pub use finite::{validate_table, FiniteGroupTable, TableData, TableDiagnostic, MAX_TABLE_ORDER};
