//! Exact machinery for sum-free and (k,l)-free subsets of finite abelian groups.
//!
//! The crate provides:
//!
//! * [`group`] — finite abelian groups as lists of cyclic factor moduli, with
//!   element indexing, homomorphism / automorphism enumeration;
//! * [`subset`] — subsets as bit vectors, sumsets, t-fold sumsets, sum-free and
//!   (k,l)-free predicates, stabilizers, Kneser reports, subgroup enumeration;
//! * [`density`] — exact-rational densities: the extremal density formula
//!   `mu(G)`, the group-type taxonomy, and the `lambda_{k,l}` formula;
//! * [`construct`] — the named extremal families: interval sets, coset-patterned
//!   exceptional sets, maximum-set templates, a (k,1)-free example, and a
//!   maximal-but-not-maximum example;
//! * [`classify`] — the analysis pipeline: special directions, fiber profiles,
//!   large fibers, fiber lower bounds, and classification of maximum sets;
//! * [`search`] — an independent branch-and-bound oracle for maximum sum-free
//!   and (k,l)-free subsets, with automorphism-orbit reduction;
//! * [`verify`] — randomized and exhaustive invariant batteries shared by the
//!   CLI and the acceptance tests.
//!
//! Everything that feeds a predicate is computed in exact integer or rational
//! arithmetic; floating point is never used.

pub mod bits;
pub mod classify;
pub mod construct;
pub mod density;
pub mod error;
pub mod group;
pub mod search;
pub mod subset;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
