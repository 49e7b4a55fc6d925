//! Finite abelian groups, characters, the Fourier transform on weight
//! functions and the standard self-dual weight families.

mod group;
mod weight;

pub use group::{FiniteAbelianGroup, GroupElement};
pub use weight::*;
