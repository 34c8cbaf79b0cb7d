//! Posets of A-even semi-induced subgraphs of multigraphs: construction,
//! shellability certificates, falling chains, order-complex homology and
//! Betti numbers of the associated real toric manifolds.

pub mod classify;
pub mod cli;
pub mod error;
pub mod evenposet;
pub mod homology;
pub mod multigraph;
pub mod poset;
pub mod shellability;
pub mod toric;

pub use error::{Error, Result};
