//! Verification and construction toolkit for projective and generalized
//! Kochen-Specker sets, quantum graph colorings, nonlocal games and
//! entanglement-assisted zero-error channel capacity.

pub mod channels;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod games;
pub mod graphs;
pub mod ks;
pub mod linalg;
pub mod theta;

pub use error::{Error, Result};
