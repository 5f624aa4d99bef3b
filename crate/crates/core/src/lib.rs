//! Semi-magic squares over dihedral groups.
//!
//! Builds `2m × 2m` squares over `D_{2m²}` from a classical magic square of
//! side `m`, checks row and column products under linear, circular,
//! semi-circular and arbitrary orderings, and runs small exhaustive or
//! budgeted searches for the cases no construction covers.

pub mod base;
pub mod cli;
pub mod construct;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod grid;
pub mod io;
pub mod power;
pub mod search;
pub mod selftest;
pub mod verify;

pub use base::IntMagicSquare;
pub use construct::{build, expected_constant, Admissibility, Blocks, ConstantPair};
pub use error::{Error, Result};
pub use grid::GroupGrid;
pub use group::{Cyclic, Dihedral, DihedralElement, FiniteGroup};
pub use power::PowerSquares;
pub use verify::{OrderingClass, Verdict, VerificationReport};
