//! Six-vertex model, its height function, Baxter's oriented loops and the
//! free-fermion dimer correspondence.

mod baxter;
mod dimer;
mod height;
mod model;

pub use baxter::*;
pub use dimer::*;
pub use height::*;
pub use model::*;
