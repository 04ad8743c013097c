//! Cohomology invariants of quaternionic reflection arrangements.
//!
//! The imprimitive groups `G_n(K,H) = A_n(K,H) ⋊ S_n` are modelled
//! combinatorially: `K` is an abstract Cayley table, the arrangement is a
//! gain graph over `K`, and the cohomology of the complement is the
//! Orlik–Solomon algebra with generators in degree 3. Invariant dimensions
//! are computed by character averaging and compared with closed forms.

pub mod equivariant;
pub mod error;
pub mod exact_quaternions;
pub mod finite_groups;
pub mod gain_arrangement;
pub mod invariant_bases;
pub mod matroid;
pub mod os_algebra;
pub mod parabolic_orbits;
pub mod primitive_pipeline;

pub use error::{Error, Result};
