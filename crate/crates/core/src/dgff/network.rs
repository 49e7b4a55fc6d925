use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::planar_map::CombinatorialMap;

/// Weighted graph with a (possibly empty) Dirichlet boundary.
#[derive(Debug, Clone)]
pub struct ConductanceNetwork {
    pub map: CombinatorialMap,
    pub conductances: Vec<f64>,
    pub boundary: Vec<usize>,
}

/// Green kernel over all vertices; rows and columns of boundary vertices
/// vanish. Without boundary this is the zero-mean pseudo-inverse.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    pub matrix: DMatrix<f64>,
}

impl GreenKernel {
    pub fn get(&self, v: usize, w: usize) -> f64 {
        self.matrix[(v, w)]
    }

    /// `Σ a_j a_k G(v_j, v_k)`.
    pub fn quadratic(&self, charges: &[(usize, f64)]) -> f64 {
        charges
            .iter()
            .flat_map(|&(v, a)| charges.iter().map(move |&(w, b)| (v, a, w, b)))
            .map(|(v, a, w, b)| a * b * self.matrix[(v, w)])
            .sum()
    }

    /// `Cov(J(v1v2), J(v3v4))`.
    pub fn current_covariance(&self, v1: usize, v2: usize, v3: usize, v4: usize) -> f64 {
        self.get(v2, v4) + self.get(v1, v3) - self.get(v2, v3) - self.get(v1, v4)
    }
}

impl ConductanceNetwork {
    pub fn new(
        map: CombinatorialMap,
        conductances: Vec<f64>,
        boundary: Vec<usize>,
    ) -> Result<Self> {
        if conductances.len() != map.num_edges() {
            return Err(Error::SpecInvalid(
                "one conductance per edge required".into(),
            ));
        }
        if let Some(e) = conductances
            .iter()
            .position(|&c| !(c > 0.0 && c.is_finite()))
        {
            return Err(Error::DomainError(format!(
                "conductance of edge {e} must be positive"
            )));
        }
        if boundary.iter().any(|&v| v >= map.num_vertices()) {
            return Err(Error::SpecInvalid("boundary vertex out of range".into()));
        }
        let mut boundary = boundary;
        boundary.sort_unstable();
        boundary.dedup();
        Ok(Self {
            map,
            conductances,
            boundary,
        })
    }

    pub fn unit(map: CombinatorialMap, boundary: Vec<usize>) -> Result<Self> {
        let ne = map.num_edges();
        Self::new(map, vec![1.0; ne], boundary)
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.binary_search(&v).is_ok()
    }

    /// Dual network with reciprocal conductances and no boundary.
    pub fn dual(&self) -> Result<Self> {
        let dual = self.map.dual()?;
        Self::new(
            dual,
            self.conductances.iter().map(|c| 1.0 / c).collect(),
            Vec::new(),
        )
    }

    /// Positive weighted Laplacian `(Δf)(v) = Σ c (f(v) − f(v'))`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.map.num_vertices();
        let mut l = DMatrix::zeros(n, n);
        for e in 0..self.map.num_edges() {
            let (a, b) = self.map.edge_endpoints(e);
            if a == b {
                continue;
            }
            let c = self.conductances[e];
            l[(a, a)] += c;
            l[(b, b)] += c;
            l[(a, b)] -= c;
            l[(b, a)] -= c;
        }
        l
    }

    pub fn laplacian_apply(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.map.num_vertices()];
        for e in 0..self.map.num_edges() {
            let (a, b) = self.map.edge_endpoints(e);
            let flow = self.conductances[e] * (f[a] - f[b]);
            out[a] += flow;
            out[b] -= flow;
        }
        out
    }

    /// `½ Σ c_e (f(v') − f(v))²`.
    pub fn dirichlet_energy(&self, f: &[f64]) -> f64 {
        (0..self.map.num_edges())
            .map(|e| {
                let (a, b) = self.map.edge_endpoints(e);
                0.5 * self.conductances[e] * (f[b] - f[a]).powi(2)
            })
            .sum()
    }

    fn free_vertices(&self) -> Vec<usize> {
        (0..self.map.num_vertices())
            .filter(|&v| !self.is_boundary(v))
            .collect()
    }

    pub fn green_kernel(&self) -> Result<GreenKernel> {
        let n = self.map.num_vertices();
        let l = self.laplacian();
        if self.boundary.is_empty() {
            if self.map.surface().euler_characteristic() == 2 && n > 1 {
                return Err(Error::SingularSystem("empty boundary on the sphere".into()));
            }
            let ones = DMatrix::from_element(n, n, 1.0 / n as f64);
            let inv = (&l + &ones).try_inverse().ok_or_else(|| {
                Error::SingularSystem("Laplacian plus constants is singular".into())
            })?;
            return Ok(GreenKernel { matrix: inv - ones });
        }
        let free = self.free_vertices();
        let k = free.len();
        let sub = DMatrix::from_fn(k, k, |i, j| l[(free[i], free[j])]);
        let inv = sub.clone().cholesky().map(|c| c.inverse()).ok_or_else(|| {
            Error::SingularSystem("reduced Laplacian is not positive definite".into())
        })?;
        verify_inverse(&sub, &inv)?;
        let mut g = DMatrix::zeros(n, n);
        for i in 0..k {
            for j in 0..k {
                g[(free[i], free[j])] = inv[(i, j)];
            }
        }
        Ok(GreenKernel { matrix: g })
    }

    /// Torus-only variant: zero-mean pseudo-inverse, regardless of boundary.
    pub fn pseudo_green(&self) -> Result<GreenKernel> {
        let n = self.map.num_vertices();
        let ones = DMatrix::from_element(n, n, 1.0 / n as f64);
        let inv = (self.laplacian() + &ones)
            .try_inverse()
            .ok_or_else(|| Error::SingularSystem("Laplacian plus constants is singular".into()))?;
        Ok(GreenKernel { matrix: inv - ones })
    }

    /// Harmonic extension of `values` given on the boundary.
    pub fn dirichlet_solve(&self, values: &[(usize, f64)]) -> Result<Vec<f64>> {
        if self.boundary.is_empty() {
            return Err(Error::SingularSystem(
                "Dirichlet problem needs a boundary".into(),
            ));
        }
        let n = self.map.num_vertices();
        let mut phi = vec![0.0; n];
        for &(v, x) in values {
            if !self.is_boundary(v) {
                return Err(Error::SpecInvalid(format!(
                    "vertex {v} is not on the boundary"
                )));
            }
            phi[v] = x;
        }
        let free = self.free_vertices();
        if free.is_empty() {
            return Ok(phi);
        }
        let l = self.laplacian();
        let k = free.len();
        let sub = DMatrix::from_fn(k, k, |i, j| l[(free[i], free[j])]);
        let rhs = DVector::from_fn(k, |i, _| {
            -(0..n)
                .filter(|&w| self.is_boundary(w))
                .map(|w| l[(free[i], w)] * phi[w])
                .sum::<f64>()
        });
        let sol = sub
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::SingularSystem("reduced Laplacian is singular".into()))?;
        let resid = (&sub * &sol - &rhs).amax();
        if resid > 1e-10 * (1.0 + rhs.amax()) {
            return Err(Error::SingularSystem(format!(
                "residual {resid} after solve"
            )));
        }
        for (i, &v) in free.iter().enumerate() {
            phi[v] = sol[i];
        }
        Ok(phi)
    }

    /// `E exp(iΣα_jφ(v_j)) = exp(iΣα_jφ0(v_j)) exp(−½ΣΣα_jα_kG(v_j,v_k))`.
    pub fn characteristic_function(
        &self,
        boundary_values: &[(usize, f64)],
        charges: &[(usize, f64)],
    ) -> Result<Complex64> {
        let phi0 = if self.boundary.is_empty() {
            vec![0.0; self.map.num_vertices()]
        } else {
            self.dirichlet_solve(boundary_values)?
        };
        let g = self.green_kernel()?;
        let mean: f64 = charges.iter().map(|&(v, a)| a * phi0[v]).sum();
        Ok(Complex64::from_polar(
            (-0.5 * g.quadratic(charges)).exp(),
            mean,
        ))
    }

    /// Monte Carlo estimate of the characteristic function from `samples`
    /// exact Gaussian draws. Returns the estimate and the standard errors of
    /// its real and imaginary parts.
    pub fn characteristic_function_mc(
        &self,
        boundary_values: &[(usize, f64)],
        charges: &[(usize, f64)],
        samples: usize,
        seed: u64,
    ) -> Result<(Complex64, f64, f64)> {
        let phi0 = self.dirichlet_solve(boundary_values)?;
        let free = self.free_vertices();
        let g = self.green_kernel()?;
        let k = free.len();
        let cov = DMatrix::from_fn(k, k, |i, j| g.get(free[i], free[j]));
        let chol = cov
            .cholesky()
            .ok_or_else(|| Error::SingularSystem("covariance not positive definite".into()))?;
        let lower = chol.l();
        let mut pos = vec![usize::MAX; self.map.num_vertices()];
        for (i, &v) in free.iter().enumerate() {
            pos[v] = i;
        }
        // Σ α_j φ(v_j) = mean + aᵀ L ξ
        let mut a = DVector::zeros(k);
        let mut mean = 0.0;
        for &(v, alpha) in charges {
            mean += alpha * phi0[v];
            if pos[v] != usize::MAX {
                a[pos[v]] += alpha;
            }
        }
        let coeff = lower.transpose() * a;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut sc, mut ss, mut sc2, mut ss2) = (0.0, 0.0, 0.0, 0.0);
        let mut xi = vec![0.0; k];
        for _ in 0..samples {
            for x in xi.iter_mut() {
                *x = StandardNormal.sample(&mut rng);
            }
            let s: f64 = mean + coeff.iter().zip(&xi).map(|(c, x)| c * x).sum::<f64>();
            let (c, si) = (s.cos(), s.sin());
            sc += c;
            ss += si;
            sc2 += c * c;
            ss2 += si * si;
        }
        let n = samples as f64;
        let (mc, ms) = (sc / n, ss / n);
        let se_c = ((sc2 / n - mc * mc).max(0.0) / n).sqrt();
        let se_s = ((ss2 / n - ms * ms).max(0.0) / n).sqrt();
        Ok((Complex64::new(mc, ms), se_c, se_s))
    }
}

fn verify_inverse(a: &DMatrix<f64>, inv: &DMatrix<f64>) -> Result<()> {
    let n = a.nrows();
    let resid = (a * inv - DMatrix::<f64>::identity(n, n)).amax();
    if resid > 1e-10 {
        return Err(Error::SingularSystem(format!("inverse residual {resid}")));
    }
    Ok(())
}
