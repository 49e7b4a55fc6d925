use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::network::ConductanceNetwork;
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart};

/// Real 1-form, stored as its value on each edge's reference dart.
#[derive(Debug, Clone, PartialEq)]
pub struct Form1 {
    pub values: Vec<f64>,
}

impl Form1 {
    pub fn zeros(num_edges: usize) -> Self {
        Self {
            values: vec![0.0; num_edges],
        }
    }

    pub fn eval(&self, map: &CombinatorialMap, d: Dart) -> f64 {
        map.orientation_sign(d) * self.values[map.edge(d)]
    }

    pub fn integrate(&self, map: &CombinatorialMap, path: &[Dart]) -> f64 {
        path.iter().map(|&d| self.eval(map, d)).sum()
    }

    /// `df(d) = f(head d) − f(origin d)`.
    pub fn exact(map: &CombinatorialMap, f: &[f64]) -> Self {
        let values = (0..map.num_edges())
            .map(|e| {
                let (a, b) = map.edge_endpoints(e);
                f[b] - f[a]
            })
            .collect();
        Self { values }
    }

    /// Counterclockwise circulation around every face.
    pub fn coboundary(&self, map: &CombinatorialMap) -> Vec<f64> {
        (0..map.num_faces())
            .map(|f| self.integrate(map, map.face_boundary(f)))
            .collect()
    }

    /// Net outflow at every vertex.
    pub fn divergence(&self, map: &CombinatorialMap) -> Vec<f64> {
        (0..map.num_vertices())
            .map(|v| map.rotation(v).iter().map(|&d| self.eval(map, d)).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            values: self.values.iter().map(|a| a * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Orthogonal pieces of a 1-form under the conductance inner product.
#[derive(Debug, Clone)]
pub struct HodgeDecomposition {
    pub exact: Form1,
    pub coexact: Form1,
    pub harmonic: Form1,
}

impl ConductanceNetwork {
    /// `Σ c_e ω_e η_e`.
    pub fn inner(&self, a: &Form1, b: &Form1) -> f64 {
        self.conductances
            .iter()
            .zip(a.values.iter().zip(&b.values))
            .map(|(c, (x, y))| c * x * y)
            .sum()
    }

    pub fn norm_sq(&self, a: &Form1) -> f64 {
        self.inner(a, a)
    }

    /// Hodge star into the dual network: the dual edge gets `c_e ω_e` on the
    /// dart crossing the reference dart from right to left.
    pub fn star(&self, omega: &Form1) -> Form1 {
        Form1 {
            values: omega
                .values
                .iter()
                .zip(&self.conductances)
                .map(|(w, c)| c * w)
                .collect(),
        }
    }

    /// Hodge star from the dual network back to this one, `−η_e / c_e`, so that
    /// `star_from_dual ∘ star = −1`.
    pub fn star_from_dual(&self, eta: &Form1) -> Form1 {
        Form1 {
            values: eta
                .values
                .iter()
                .zip(&self.conductances)
                .map(|(w, c)| -w / c)
                .collect(),
        }
    }

    /// Hodge star from the dual network that identifies each dual dart with
    /// the primal dart it crosses: `η_e / c_e`. This is `−star_from_dual`,
    /// and with it `⟨ω_{a,b}, ∗ω†_{c,d}⟩ = ad − bc`.
    pub fn star_dual(&self, eta: &Form1) -> Form1 {
        Form1 {
            values: eta
                .values
                .iter()
                .zip(&self.conductances)
                .map(|(w, c)| w / c)
                .collect(),
        }
    }

    /// `∗dψ` for a function `ψ` on faces: `(ψ(right d) − ψ(left d)) / c_e`.
    pub fn star_d_dual(&self, psi: &[f64]) -> Form1 {
        let map = &self.map;
        let values = (0..map.num_edges())
            .map(|e| {
                let r = map.edge_darts(e)[0];
                (psi[map.right_face(r)] - psi[map.left_face(r)]) / self.conductances[e]
            })
            .collect();
        Form1 { values }
    }

    pub fn hodge_decompose(&self, omega: &Form1) -> Result<HodgeDecomposition> {
        let map = &self.map;
        let (nv, nf, ne) = (map.num_vertices(), map.num_faces(), map.num_edges());
        let c = DVector::from_vec(self.conductances.clone());
        let w = DVector::from_vec(omega.values.clone());
        // Exact part: weighted least squares over vertex potentials.
        let d = DMatrix::from_fn(ne, nv, |e, v| {
            let (a, b) = map.edge_endpoints(e);
            (if v == b { 1.0 } else { 0.0 }) - (if v == a { 1.0 } else { 0.0 })
        });
        let phi = weighted_lsq(&d, &c, &w)?;
        let exact = Form1 {
            values: (&d * phi).iter().copied().collect(),
        };
        // Coexact part: ∗dψ over face potentials.
        let k = DMatrix::from_fn(ne, nf, |e, f| {
            let r = map.edge_darts(e)[0];
            let s = (if map.right_face(r) == f { 1.0 } else { 0.0 })
                - (if map.left_face(r) == f { 1.0 } else { 0.0 });
            s / self.conductances[e]
        });
        let psi = weighted_lsq(&k, &c, &w)?;
        let coexact = Form1 {
            values: (&k * psi).iter().copied().collect(),
        };
        let harmonic = omega.sub(&exact).sub(&coexact);
        Ok(HodgeDecomposition {
            exact,
            coexact,
            harmonic,
        })
    }

    /// Minimal-energy current with face circulations `m` (no boundary).
    pub fn minimal_current(&self, m: &[f64]) -> Result<Form1> {
        let total: f64 = m.iter().sum();
        if total.abs() > 1e-12 * (1.0 + m.iter().map(|x| x.abs()).sum::<f64>()) {
            return Err(Error::ChargeImbalance(total));
        }
        if m.len() != self.map.num_faces() {
            return Err(Error::SpecInvalid(
                "one magnetic charge per face required".into(),
            ));
        }
        let dual = self.dual()?;
        let g = dual.pseudo_green()?;
        let psi: Vec<f64> = (0..m.len())
            .map(|f| -(0..m.len()).map(|h| g.get(f, h) * m[h]).sum::<f64>())
            .collect();
        Ok(self.star_d_dual(&psi))
    }

    /// Unnormalised electric-magnetic correlator. `electric` pairs each dart
    /// path with the charge it carries from its start to its end; `magnetic`
    /// lists face charges summing to zero.
    pub fn em_correlator(
        &self,
        electric: &[(Vec<Dart>, f64)],
        magnetic: &[(usize, f64)],
    ) -> Result<Complex64> {
        let map = &self.map;
        let mut alpha = vec![0.0; map.num_vertices()];
        for (path, a) in electric {
            map.check_path(path)?;
            if let (Some(&first), Some(&last)) = (path.first(), path.last()) {
                alpha[map.origin(first)] -= a;
                alpha[map.head(last)] += a;
            }
        }
        let total: f64 = alpha.iter().sum();
        if total.abs() > 1e-12 {
            return Err(Error::ChargeImbalance(total));
        }
        let mut m = vec![0.0; map.num_faces()];
        for &(f, q) in magnetic {
            if f >= m.len() {
                return Err(Error::SpecInvalid(format!("face {f} out of range")));
            }
            m[f] += q;
        }
        let j = self.minimal_current(&m)?;
        let phase: f64 = electric.iter().map(|(p, a)| a * j.integrate(map, p)).sum();
        let g = self.pseudo_green()?;
        let charges: Vec<(usize, f64)> = alpha
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, a)| *a != 0.0)
            .collect();
        let log_mod = -0.5 * g.quadratic(&charges) - 0.5 * self.norm_sq(&j);
        Ok(Complex64::from_polar(log_mod.exp(), phase))
    }
}

/// Face of the dual map that sits at primal vertex `v`.
pub fn dual_face_of_vertex(map: &CombinatorialMap, dual: &CombinatorialMap, v: usize) -> usize {
    dual.left_face(map.rotation(v)[0])
}

/// Minimiser of `Σ c_i (A x − b)_i²` with the smallest norm.
fn weighted_lsq(a: &DMatrix<f64>, c: &DVector<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let normal = a.transpose() * DMatrix::from_diagonal(c) * a;
    let rhs = a.transpose() * c.component_mul(b);
    let svd = normal.svd(true, true);
    let tol = 1e-12 * svd.singular_values.max().max(1.0);
    svd.solve(&rhs, tol)
        .map_err(|e| Error::SingularSystem(e.into()))
}
