//! Word problem, Cayley balls and condensation certificates for the
//! subgroups `G_S = ⟨H, ā, b̄_S⟩` of an unrestricted wreath product `B Wr H`.
//!
//! - [`groups`]: the ambient group `H` (`free:k`, `zd:d`) and the finite group `B`.
//! - [`wreath`]: marked words, collected forms, and the two word-problem oracles.
//! - [`forcing`]: the lazily forced subset `S` and its density bookkeeping.
//! - [`marked`]: radius-`r` balls of marked groups and `r`-similarity.
//! - [`condense`]: distinctness witnesses and condensation certificates.
//! - [`session`]: configuration, state files and the operation journal.

pub mod condense;
pub mod error;
pub mod forcing;
pub mod groups;
mod json;
pub mod marked;
pub mod session;
pub mod wreath;

pub use condense::{
    certify_condensed, distinguish, verify_certificate, xi, CondensationCertificate, DistinctnessWitness,
};
pub use error::{Error, ParseError, Result};
pub use forcing::{
    transitivity_witness, Fallback, ForcedSubset, FrozenView, Limits, Membership, Pattern, Realization, Side,
    SubsetView, TransitivityWitness,
};
pub use groups::{validate_table, Ambient, AmbientElement, BallSpec, FiniteGroupTable, TableData, TableDiagnostic};
pub use marked::{r_similar, MarkedBall, MarkedPair, MarkedSpec, PairSide, Subsets};
pub use session::{Operation, Outcome, PatternFile, Session, SessionConfig, StateLock, TableSource};
pub use wreath::{collect, CollectedForm, MarkedWord, Verdict, WindowElement, WindowOracle, WindowVerdict, Witness};
