//! Exact computations for planar abelian lattice models: spin models with
//! finite abelian symmetry, the discrete Gaussian free field, random-cluster
//! percolation, the six-vertex model and dimers, together with the dualities
//! and mappings between them.

pub mod abelian_groups;
pub mod dgff;
pub mod error;
pub mod planar_map;
pub mod random_cluster;
pub mod six_vertex;
pub mod spin_engine;
pub mod suites;

pub use error::{Error, Result};
