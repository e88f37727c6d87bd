//! Exact arithmetic for coset topologies on the integers and their profinite
//! shadows: named topology families on Z realized through finite quotients,
//! general Golomb systems with Kirch coarsenings, truncated arithmetic in the
//! profinite completion, and the supernatural-number monoid.
//!
//! Everything is computed exactly: residue sets are bitsets, measures and
//! densities are arbitrary-precision rationals, and each closed-form
//! criterion ships with tests that compare it against brute-force evaluation
//! on finite quotients.

pub mod arith;
pub mod error;
pub mod finite_topology;
pub mod golomb;
pub mod families;
pub mod profinite;
pub mod ratio;
pub mod residue;
pub mod sieve;
pub mod supernatural;

pub use error::{Error, Result};
