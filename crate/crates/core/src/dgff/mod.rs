//! Discrete Gaussian free field, its currents, and compactified instantons.

mod continuum;
mod forms;
mod harmonic;
mod lattice;
mod network;

pub use continuum::{
    coupling_swap_check, electric_two_point, magnetic_two_point, mixed_four_point,
    scaling_exponent, spinor_two_point, spinor_two_point_closed_form,
};
pub use forms::{dual_face_of_vertex, Form1, HodgeDecomposition};
pub use harmonic::{t_duality_check, HarmonicBasis, TDuality};
pub use lattice::{gaussian_lattice_sum, poisson_check, tail_bound};
pub use network::{ConductanceNetwork, GreenKernel};
