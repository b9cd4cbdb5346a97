//! Generalized progressions in the integer Heisenberg group and in free groups,
//! shattering decisions for translated progressions, and exact evaluation of
//! the VC-dimension bound functions that go with them.
//!
//! The crate is organised by subsystem:
//!
//! * [`setsystem`] explicit finite set systems: shattering, shatter function,
//!   exact VC dimension, and the complement/intersection/preimage constructions.
//! * [`bounds`] big-integer evaluation of the Sauer–Shelah polynomial, the
//!   intersection and coset-union bound functions, the Karpinski–Macintyre
//!   bound, and the two Heisenberg threshold checks.
//! * [`heisenberg`] arithmetic in the Heisenberg group, word reduction, the
//!   closed-form membership test for `P(N1, N2)` and its enumeration oracle.
//! * [`freegroup`] reduced words in `F_k`, the coordinate pseudometrics,
//!   Cayley-tree geometry and a complete cut-out/shatter decision procedure.

pub mod bounds;
pub mod error;
pub mod freegroup;
pub mod heisenberg;
pub mod report;
pub mod setsystem;

pub use error::{Error, Result};
pub use freegroup::{FProgressionSpec, FWord, TreeSlice};
pub use heisenberg::{HPoint, HProgressionSpec, HWord};
pub use report::{CutWitness, ShatterReport, Verdict};
pub use setsystem::{PointSet, SetSystem};
