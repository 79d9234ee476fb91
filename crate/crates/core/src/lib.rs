//! Rigidity of bar-joint frameworks constrained to a cylinder.
//!
//! The crate pairs a combinatorial engine (the (2,2)-sparsity matroid, its
//! circuits and their inductive constructions) with exact linear algebra over
//! rationals and `Q(sqrt d)`, and uses each to check the other.

pub mod graph;
pub mod sparsity;
pub mod constructions;
pub mod numeric;
pub mod decide;
pub mod golden;
pub mod io;
