use num_complex::Complex64;
use rayon::prelude::*;

use crate::abelian_groups::{FiniteAbelianGroup, WeightFunction};
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Surface};
use crate::spin_engine::SpinModel;

/// Default cap on the number of edge subsets enumerated.
pub const FK_CAP: f64 = (1u64 << 26) as f64;

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Open-edge subset, one flag per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FkConfig {
    pub open: Vec<bool>,
}

impl FkConfig {
    pub fn from_mask(mask: u64, num_edges: usize) -> Self {
        Self {
            open: (0..num_edges).map(|e| mask >> e & 1 == 1).collect(),
        }
    }

    pub fn num_open(&self) -> usize {
        self.open.iter().filter(|&&b| b).count()
    }

    /// The dual configuration: `e†` open iff `e` closed.
    pub fn complement(&self) -> Self {
        Self {
            open: self.open.iter().map(|b| !b).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FkModel {
    pub map: CombinatorialMap,
    pub q: f64,
    pub weights: Vec<f64>,
    pub cap: f64,
}

impl FkModel {
    pub fn new(map: CombinatorialMap, q: f64, weights: Vec<f64>) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::DomainError(format!("q = {q} must be positive")));
        }
        if weights.len() != map.num_edges() {
            return Err(Error::SpecInvalid("one weight per edge required".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::DomainError(
                "edge weights must be nonnegative".into(),
            ));
        }
        Ok(Self {
            map,
            q,
            weights,
            cap: FK_CAP,
        })
    }

    pub fn uniform(map: CombinatorialMap, q: f64, w: f64) -> Result<Self> {
        let ne = map.num_edges();
        Self::new(map, q, vec![w; ne])
    }

    /// Weights `w = e^{2βJ} − 1` from Potts couplings `βJ`.
    pub fn from_potts_couplings(map: CombinatorialMap, q: f64, beta_j: &[f64]) -> Result<Self> {
        Self::new(map, q, beta_j.iter().map(|k| (2.0 * k).exp_m1()).collect())
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn clusters(&self, config: &FkConfig) -> Dsu {
        let mut dsu = Dsu::new(self.map.num_vertices());
        for (e, &open) in config.open.iter().enumerate() {
            if open {
                let (a, b) = self.map.edge_endpoints(e);
                dsu.union(a, b);
            }
        }
        dsu
    }

    pub fn cluster_count(&self, config: &FkConfig) -> usize {
        self.clusters(config).components()
    }

    /// `q^{C(E0)} ∏_{E0} w(e)`.
    pub fn weight(&self, config: &FkConfig) -> f64 {
        let prod: f64 = config
            .open
            .iter()
            .zip(&self.weights)
            .filter(|(o, _)| **o)
            .map(|(_, w)| w)
            .product();
        self.q.powi(self.cluster_count(config) as i32) * prod
    }

    fn check_enumerable(&self) -> Result<()> {
        let required = 2f64.powi(self.map.num_edges() as i32);
        if required > self.cap || self.map.num_edges() >= 63 {
            return Err(Error::TooLarge {
                required,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Ordered, chunk-parallel sum of `f` over all `2^{|E|}` configurations.
    pub fn enumerate_sum<T, F>(&self, zero: T, f: F) -> Result<T>
    where
        T: Send + Sync + Clone + std::ops::Add<Output = T>,
        F: Fn(&FkConfig) -> T + Sync,
    {
        self.check_enumerable()?;
        let ne = self.map.num_edges();
        let total = 1u64 << ne;
        let chunk = 1u64 << 12;
        let chunks = total.div_ceil(chunk);
        let parts: Vec<T> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = zero.clone();
                for mask in c * chunk..((c + 1) * chunk).min(total) {
                    acc = acc + f(&FkConfig::from_mask(mask, ne));
                }
                acc
            })
            .collect();
        Ok(parts.into_iter().fold(zero, |a, b| a + b))
    }

    pub fn partition_function(&self) -> Result<f64> {
        self.enumerate_sum(0.0, |c| self.weight(c))
    }

    /// `P(v1 ↔ v2)`.
    pub fn connectivity(&self, v1: usize, v2: usize) -> Result<f64> {
        let num = self.enumerate_sum(0.0, |c| {
            let mut dsu = self.clusters(c);
            if dsu.find(v1) == dsu.find(v2) {
                self.weight(c)
            } else {
                0.0
            }
        })?;
        Ok(num / self.partition_function()?)
    }

    /// Integer `q ≥ 2`, or `NotInteger`.
    pub fn integer_q(&self) -> Result<usize> {
        let r = self.q.round();
        if (self.q - r).abs() > 1e-12 || r < 1.0 {
            return Err(Error::NotInteger(self.q));
        }
        Ok(r as usize)
    }

    /// Potts model on `Z/q` with edge weight `1 + w_e δ_{σ(v),σ(v')}`.
    pub fn potts_model(&self) -> Result<SpinModel> {
        let q = self.integer_q()?;
        let group = FiniteAbelianGroup::cyclic(q)?;
        let weights = self
            .weights
            .iter()
            .map(|&w| {
                let mut vals = vec![1.0; q];
                vals[0] += w;
                WeightFunction::from_real(group.clone(), &vals)
            })
            .collect::<Result<Vec<_>>>()?;
        SpinModel::new(self.map.clone(), group, weights)
    }

    /// `(Z_Potts, Z_FK, Z_Potts / Z_FK)`.
    pub fn potts_fk_identity(&self) -> Result<(f64, f64, f64)> {
        let zp = self.potts_model()?.partition_function()?.re;
        let zf = self.partition_function()?;
        Ok((zp, zf, zp / zf))
    }

    /// Potts side and FK side of both connectivity identities:
    /// `⟨σ(v2)σ(v1)⁻¹⟩ = P(v1↔v2)` and
    /// `Cov(δ_{σ(v1),0}, δ_{σ(v2),0}) = (q−1)/q² · P(v1↔v2)`.
    pub fn spin_identity_check(&self, v1: usize, v2: usize) -> Result<ConnectivityCheck> {
        let q = self.integer_q()?;
        let potts = self.potts_model()?;
        let p = self.connectivity(v1, v2)?;
        let corr = if v1 == v2 {
            Complex64::new(1.0, 0.0)
        } else {
            potts.correlator(&[(v2, 1), (v1, q - 1)])?
        };
        // δ_{σ,0} = (1/q) Σ_k χ_k(σ).
        let mut both = Complex64::new(0.0, 0.0);
        for k in 0..q {
            for l in 0..q {
                let ins: Vec<(usize, usize)> = if v1 == v2 {
                    vec![(v1, (k + l) % q)]
                } else {
                    vec![(v1, k), (v2, l)]
                };
                both += potts.correlator(&ins)?;
            }
        }
        let both = both.re / (q * q) as f64;
        let qf = q as f64;
        Ok(ConnectivityCheck {
            spin_correlator: corr.re,
            spin_correlator_imag: corr.im,
            covariance: both - 1.0 / (qf * qf),
            fk_probability: p,
            covariance_predicted: (qf - 1.0) / (qf * qf) * p,
        })
    }

    /// Dual model on the dual map with `w(e†) = q / w(e)`.
    pub fn dual_model(&self) -> Result<FkModel> {
        if self.map.surface() != Surface::Sphere {
            return Err(Error::NotPlanar);
        }
        if let Some(e) = self.weights.iter().position(|&w| w == 0.0) {
            return Err(Error::ZeroWeightEdge(e));
        }
        let dual = self.map.dual()?;
        let mut m = FkModel::new(
            dual,
            self.q,
            self.weights.iter().map(|w| self.q / w).collect(),
        )?;
        m.cap = self.cap;
        Ok(m)
    }

    /// `q^{|V|−|E|−1} ∏_E w(e)`.
    pub fn duality_prefactor(&self) -> f64 {
        let ex = self.map.num_vertices() as i32 - self.map.num_edges() as i32 - 1;
        self.q.powi(ex) * self.weights.iter().product::<f64>()
    }

    pub fn dual_config(&self, config: &FkConfig) -> Result<(FkModel, FkConfig)> {
        Ok((self.dual_model()?, config.complement()))
    }

    /// Both sides of the per-configuration duality identity.
    pub fn duality_weight_check(&self, config: &FkConfig) -> Result<(f64, f64)> {
        let (dual, dc) = self.dual_config(config)?;
        Ok((
            self.weight(config),
            self.duality_prefactor() * dual.weight(&dc),
        ))
    }
}

/// Output of [`FkModel::spin_identity_check`].
#[derive(Debug, Clone, Copy)]
pub struct ConnectivityCheck {
    pub spin_correlator: f64,
    pub spin_correlator_imag: f64,
    pub covariance: f64,
    pub fk_probability: f64,
    pub covariance_predicted: f64,
}

impl ConnectivityCheck {
    pub fn max_error(&self) -> f64 {
        (self.spin_correlator - self.fk_probability)
            .abs()
            .max(self.spin_correlator_imag.abs())
            .max((self.covariance - self.covariance_predicted).abs())
    }
}
