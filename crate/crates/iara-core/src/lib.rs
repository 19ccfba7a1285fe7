//! Exact-arithmetic construction and machine verification of invariant
//! affine reflection algebras: finite-order automorphism gradings, fixed
//! point subalgebras, extended affinization over graded coefficient
//! algebras, and the combinatorics of affine reflection systems.
//!
//! Everything runs over Q or Q(zeta_m) with zero tolerance; infinite
//! lattice-graded objects are materialized on symmetric degree windows and
//! every verdict is stamped with its window.

pub mod coeff;
pub mod fixed;
pub mod grading;
pub mod lie;
pub mod matrix;
pub mod par;
pub mod report;
pub mod scalar;
