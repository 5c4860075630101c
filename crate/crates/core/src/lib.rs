//! Computational tools for Reeb graphs of simple Morse functions on closed
//! manifolds and the group-theoretic invariants that bound them.

pub mod bounds;
pub mod closure;
pub mod error;
pub mod handles;
pub mod nielsen;
pub mod presentation;
pub mod reeb;
pub mod snf;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
