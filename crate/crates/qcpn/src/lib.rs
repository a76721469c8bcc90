//! Computer algebra and numerical checks for quantum projective spaces CP^n_q.
//!
//! Exact parts work over Q(s), s = q^(1/2) ([`qcoeff`]); the sphere algebra
//! and its U_q(su(n+1)) action live in [`ncpoly`]; Hilbert-space
//! representations are truncated and evaluated at a numeric q0.

pub mod qcoeff;
pub mod ncpoly;
pub mod projections;
pub mod rep_sphere;
pub mod sparse;
pub mod suq2;
pub mod identities;
