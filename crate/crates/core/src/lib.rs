//! Braids traced by orbits of area-preserving disk maps, and the asymptotic
//! invariants built from their word length and free-group growth.

pub mod braid;
pub mod cli;
pub mod config;
pub mod disk;
pub mod dynnikov;
pub mod error;
pub mod extraction;
pub mod free_group;
pub mod growth;
pub mod invariants;
pub mod protocols;
pub mod selftest;

pub use error::{Error, Result};
