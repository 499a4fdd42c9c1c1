//! Exact constructive invariant theory for Lie nilpotent relatively free
//! algebras and universal enveloping algebras.
//!
//! The crate builds explicit generating sets for the invariant algebras
//! `U(L)^G` and `F(N_p, V)^G` of a finite rational matrix group `G` out of
//! commutative invariants, with full symmetrization, PBW straightening, and
//! degreewise T-ideal normal forms over exact rational arithmetic. Every
//! construction ships with an independent verification oracle (trace
//! averaging vs Reynolds rank, degreewise generation checks) and degree-bound
//! reports.

pub mod error;
pub mod scalar;
pub mod linalg;
pub mod freelie;
pub mod assoc;
pub mod group;
pub mod comm;
pub mod pipeline;
pub mod polarize;

pub use error::{Error, Result};
pub use scalar::Scalar;
