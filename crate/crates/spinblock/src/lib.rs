//! Exact combinatorics, graded dimensions and finite algebra computations for
//! RoCK blocks of double covers of symmetric groups.

pub mod error;
pub mod laurent;
pub mod root_datum;
pub mod bar_partitions;
pub mod tableaux;
pub mod fock;
pub mod dims;
pub mod super_algebra;
pub mod spin_blocks;
pub mod cli;

pub use error::{Result, SpinError};
pub use laurent::LaurentPoly;
