//! Exhaustive decision procedures for the manipulability of social choice
//! correspondences on small electorates.
//!
//! The crate is organised around six modules:
//!
//! * [`prefs`] — alternatives, linear orders, (partial) preference profiles,
//!   deterministic enumeration, and the text wire format.
//! * [`scc`] — social choice correspondences (positional rules, Copeland,
//!   qualified majority) with exact rational scoring, plus the winner cache
//!   that backs every exhaustive search.
//! * [`extension`] — the Kelly and Fishburn set-extension rules as decidable
//!   comparison predicates over nonempty sets of alternatives.
//! * [`info`] — information families (complete, zero, winner) over the
//!   partial-profile space and the informativeness order between them.
//! * [`manip`] — manipulability searches with deterministic witness
//!   extraction, independent witness re-verification, and the
//!   monotonicity-transfer consistency checks.
//! * [`axioms`] — exhaustive checkers for weak set-monotonicity,
//!   set-monotonicity, upward sensitivity, and unanimity.
//!
//! All winner determination uses exact integer/rational arithmetic; no
//! floating point is involved anywhere. Every search visits its state space
//! in a fixed documented order, so reported witnesses are identical across
//! runs and across worker counts.

pub mod axioms;
mod error;
pub mod extension;
pub mod info;
pub mod manip;
pub mod prefs;
pub mod scc;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
