//! Fortuin-Kasteleyn percolation, its duality, loop representation,
//! Edwards-Sokal coupling and winding observables.

mod loops;
mod model;
mod sampling;
mod winding;

pub use loops::{dual_clusters, primal_clusters, Loop, LoopGasConfig, LoopLattice};
pub use model::{ConnectivityCheck, Dsu, FkConfig, FkModel, FK_CAP};
pub use sampling::{
    edwards_sokal_sample, es_distribution_check, sample_potts, spin_index, EsCoupling,
    FkExactSampler,
};
pub use winding::{corner_dart, winding_observable};
