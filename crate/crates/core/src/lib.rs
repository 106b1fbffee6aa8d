//! Exact directed path algebra on cellular multipointed d-spaces.
//!
//! The crate is layered bottom-up: [`reparam`] models the reparametrization
//! category with exact PL maps, [`gspace`] free 𝒢-spaces on finite bases,
//! [`complex`] cell complexes and path normal forms, [`reedy`] the rewriting
//! system computing path spaces of a one-cell pushout, and [`mooreflow`] the
//! flow-level constructions built on top.

pub mod complex;
pub mod gspace;
pub mod identities;
pub mod mooreflow;
pub mod rational;
pub mod reedy;
pub mod reparam;
pub mod sample;
pub mod selftest;

pub use rational::Rational;
pub use reparam::{PLHomeo, PosLen, ReparamError};
