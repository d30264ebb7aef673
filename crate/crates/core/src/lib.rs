//! Numerical invariants of line bundles on unnodal Enriques surfaces.
//!
//! All computation happens exactly in `Num(S) = U ⊕ E8(-1)`: φ and μ come from
//! certified short-vector searches, cohomology from intersection numbers, and
//! the Brill-Noether layer turns these into predictions and audits.

#![allow(clippy::needless_range_loop)]

pub mod brill_noether;
pub mod cli;
pub mod invariants;
pub mod lattice;
pub mod literal;
pub mod positivity;
pub mod selftest;
pub mod shortvec;

pub use lattice::{DivisorClass, IntersectionForm, NumClass};
