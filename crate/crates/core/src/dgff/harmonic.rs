use nalgebra::{DMatrix, Matrix2};

use super::forms::Form1;
use super::lattice::gaussian_lattice_sum;
use super::network::ConductanceNetwork;
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart, Surface};

/// Harmonic forms on a torus network with periods `(1, 0)` and `(0, 1)` along
/// the homology basis `(A, B)`.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub omega_a: Form1,
    pub omega_b: Form1,
    /// Gram matrix of the basis under `Σ c ω η`.
    pub gram: Matrix2<f64>,
}

impl HarmonicBasis {
    /// The harmonic form with periods `(a, b)`.
    pub fn with_periods(&self, a: f64, b: f64) -> Form1 {
        self.omega_a.scale(a).add(&self.omega_b.scale(b))
    }
}

/// Closed form that counts signed crossings of the dual cycle `dual_path`.
fn crossing_form(map: &CombinatorialMap, dual_path: &[Dart]) -> Form1 {
    let mut f = Form1::zeros(map.num_edges());
    for &x in dual_path {
        f.values[map.edge(x)] += map.orientation_sign(x);
    }
    f
}

impl ConductanceNetwork {
    pub fn harmonic_basis(&self) -> Result<HarmonicBasis> {
        let map = &self.map;
        if map.surface() != Surface::Torus {
            return Err(Error::NotATorus);
        }
        let h = map.homology_basis()?;
        let raw = [
            crossing_form(map, &map.push_off_left(&h.cycle_b)),
            crossing_form(map, &map.push_off_left(&h.cycle_a)),
        ];
        let mut harm = Vec::with_capacity(2);
        for r in &raw {
            harm.push(self.hodge_decompose(r)?.harmonic);
        }
        let periods = Matrix2::new(
            harm[0].integrate(map, &h.cycle_a),
            harm[1].integrate(map, &h.cycle_a),
            harm[0].integrate(map, &h.cycle_b),
            harm[1].integrate(map, &h.cycle_b),
        );
        let inv = periods
            .try_inverse()
            .ok_or_else(|| Error::SingularSystem("period matrix is singular".into()))?;
        let omega_a = harm[0].scale(inv[(0, 0)]).add(&harm[1].scale(inv[(1, 0)]));
        let omega_b = harm[0].scale(inv[(0, 1)]).add(&harm[1].scale(inv[(1, 1)]));
        let gram = Matrix2::new(
            self.inner(&omega_a, &omega_a),
            self.inner(&omega_a, &omega_b),
            self.inner(&omega_b, &omega_a),
            self.inner(&omega_b, &omega_b),
        );
        Ok(HarmonicBasis {
            omega_a,
            omega_b,
            gram,
        })
    }

    /// `Z_inst(r) = Σ_{ω ∈ Λ_r} exp(−κ/2 Σ c ω²)`, where `Λ_r` is the lattice of
    /// harmonic forms with periods in `2πr Z`.
    pub fn instanton_partition(&self, r: f64, kappa: f64) -> Result<f64> {
        if !(r > 0.0 && kappa > 0.0) {
            return Err(Error::DomainError(
                "radius and coupling must be positive".into(),
            ));
        }
        let q = self.harmonic_basis()?.gram;
        let s = 0.5 * kappa * (2.0 * std::f64::consts::PI * r).powi(2);
        let a = DMatrix::from_fn(2, 2, |i, j| s * q[(i, j)]);
        gaussian_lattice_sum(&a, 1e-17)
    }
}

/// Result of comparing the instanton sums of a torus network and its dual.
#[derive(Debug, Clone, Copy)]
pub struct TDuality {
    pub primal: f64,
    pub dual: f64,
    pub dual_radius: f64,
    /// Closed-form value expected for `primal / dual`.
    pub factor: f64,
}

impl TDuality {
    pub fn ratio(&self) -> f64 {
        self.primal / self.dual
    }

    pub fn rel_error(&self) -> f64 {
        (self.ratio() - self.factor).abs() / self.factor
    }
}

/// `Z_inst(r)` against `Z†_inst(r†)` with `r† = 1/(2πκr)`; the ratio should be
/// `1 / (2πκ r² √det Q)`. At `κ = 1/(2π)` the dual radius is `1/r`.
pub fn t_duality_check(net: &ConductanceNetwork, r: f64, kappa: f64) -> Result<TDuality> {
    let dual = net.dual()?;
    let q = net.harmonic_basis()?.gram;
    let dual_radius = 1.0 / (2.0 * std::f64::consts::PI * kappa * r);
    let primal = net.instanton_partition(r, kappa)?;
    let dual_z = dual.instanton_partition(dual_radius, kappa)?;
    let factor = 1.0 / (2.0 * std::f64::consts::PI * kappa * r * r * q.determinant().sqrt());
    Ok(TDuality {
        primal,
        dual: dual_z,
        dual_radius,
        factor,
    })
}
