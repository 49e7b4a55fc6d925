use num_complex::Complex64;

use super::enumerate::{FactorSum, DEFAULT_CAP};
use crate::abelian_groups::{FiniteAbelianGroup, WeightFunction};
use crate::error::{Error, Result};
use crate::planar_map::CombinatorialMap;

/// Abelian spin model: a map, a group, one weight function per edge and
/// optional fixed spins. The Boltzmann weight of `σ` is
/// `∏_e w_e(σ(head) − σ(origin))` over the reference dart of every edge.
#[derive(Debug, Clone)]
pub struct SpinModel {
    pub map: CombinatorialMap,
    pub group: FiniteAbelianGroup,
    pub weights: Vec<WeightFunction>,
    pub fixed: Vec<(usize, usize)>,
    pub cap: f64,
}

/// Assignment of a group element (by index) to every vertex.
pub type SpinConfig = Vec<usize>;

impl SpinModel {
    pub fn new(
        map: CombinatorialMap,
        group: FiniteAbelianGroup,
        weights: Vec<WeightFunction>,
    ) -> Result<Self> {
        if weights.len() != map.num_edges() {
            return Err(Error::SpecInvalid(format!(
                "{} weight functions for {} edges",
                weights.len(),
                map.num_edges()
            )));
        }
        if weights.iter().any(|w| w.group != group) {
            return Err(Error::WrongGroup(
                "edge weight defined on another group".into(),
            ));
        }
        Ok(Self {
            map,
            group,
            weights,
            fixed: Vec::new(),
            cap: DEFAULT_CAP,
        })
    }

    pub fn uniform(map: CombinatorialMap, w: WeightFunction) -> Result<Self> {
        let group = w.group.clone();
        let weights = vec![w; map.num_edges()];
        Self::new(map, group, weights)
    }

    /// Ising model with weights `(e^{βJ_e}, e^{−βJ_e})`.
    pub fn ising(map: CombinatorialMap, beta_j: &[f64]) -> Result<Self> {
        let group = FiniteAbelianGroup::cyclic(2)?;
        if beta_j.len() != map.num_edges() {
            return Err(Error::SpecInvalid("one coupling per edge required".into()));
        }
        let weights = beta_j
            .iter()
            .map(|&k| WeightFunction::from_real(group.clone(), &[k.exp(), (-k).exp()]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(map, group, weights)
    }

    pub fn with_fixed(mut self, fixed: Vec<(usize, usize)>) -> Result<Self> {
        for &(v, g) in &fixed {
            if v >= self.map.num_vertices() || g >= self.group.order() {
                return Err(Error::SpecInvalid(format!(
                    "fixed spin ({v}, {g}) out of range"
                )));
            }
        }
        self.fixed = fixed;
        Ok(self)
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn is_ising(&self) -> bool {
        self.group.factors() == [2]
    }

    /// Ising couplings `βJ_e = ½ log(w(0)/w(1))`, when the weights are of that form.
    pub fn ising_couplings(&self) -> Result<Vec<f64>> {
        if !self.is_ising() {
            return Err(Error::WrongGroup("Ising (Z/2) model required".into()));
        }
        self.weights
            .iter()
            .map(|w| {
                let (a, b) = (w.values[0], w.values[1]);
                if a.im != 0.0 || b.im != 0.0 || a.re <= 0.0 || b.re <= 0.0 {
                    return Err(Error::DomainError("Ising weights must be positive".into()));
                }
                Ok(0.5 * (a.re / b.re).ln())
            })
            .collect()
    }

    pub(crate) fn factor_sum(&self) -> FactorSum {
        let q = self.group.order();
        let mut fs = FactorSum::new(q, self.map.num_vertices());
        for e in 0..self.map.num_edges() {
            let (a, b) = self.map.edge_endpoints(e);
            let w = &self.weights[e];
            let table = (0..q * q)
                .map(|k| w.values[self.group.sub(k % q, k / q)])
                .collect();
            fs.edges.push((a, b, table));
        }
        for &(v, g) in &self.fixed {
            fs.fixed[v] = Some(g);
        }
        fs
    }

    /// Weight of a single configuration.
    pub fn config_weight(&self, spins: &[usize]) -> Complex64 {
        (0..self.map.num_edges())
            .map(|e| {
                let (a, b) = self.map.edge_endpoints(e);
                self.weights[e].values[self.group.sub(spins[b], spins[a])]
            })
            .product()
    }

    /// Calls `f` on every configuration compatible with the fixed spins.
    pub fn for_each_config(&self, mut f: impl FnMut(&[usize])) -> Result<()> {
        let nv = self.map.num_vertices();
        let q = self.group.order();
        let work = self.factor_sum().work();
        if work > self.cap {
            return Err(Error::TooLarge {
                required: work,
                cap: self.cap,
            });
        }
        let mut fixed = vec![None; nv];
        for &(v, g) in &self.fixed {
            fixed[v] = Some(g);
        }
        let free: Vec<usize> = (0..nv).filter(|&v| fixed[v].is_none()).collect();
        let mut spins: Vec<usize> = (0..nv).map(|v| fixed[v].unwrap_or(0)).collect();
        loop {
            f(&spins);
            let mut k = 0;
            while k < free.len() {
                spins[free[k]] += 1;
                if spins[free[k]] < q {
                    break;
                }
                spins[free[k]] = 0;
                k += 1;
            }
            if k == free.len() {
                return Ok(());
            }
        }
    }

    pub fn partition_function(&self) -> Result<Complex64> {
        self.factor_sum().sum(self.cap)
    }

    /// Unnormalized `Z⟨∏ χ_i(σ(v_i))⟩`; `orders` holds `(vertex, character index)`.
    pub fn order_sum(&self, orders: &[(usize, usize)]) -> Result<Complex64> {
        let mut fs = self.factor_sum();
        for &(v, k) in orders {
            for s in 0..self.group.order() {
                fs.vertex[v][s] *= self.group.character(k, s);
            }
        }
        fs.sum(self.cap)
    }

    /// Normalized `⟨∏ χ_i(σ(v_i))⟩`. Exactly zero when the characters do not
    /// multiply to the identity and no spin is fixed.
    pub fn correlator(&self, orders: &[(usize, usize)]) -> Result<Complex64> {
        for &(v, k) in orders {
            if v >= self.map.num_vertices() || k >= self.group.order() {
                return Err(Error::SpecInvalid(format!(
                    "order insertion ({v}, {k}) out of range"
                )));
            }
        }
        let total = orders.iter().fold(0, |acc, &(_, k)| self.group.add(acc, k));
        if total != 0 && self.fixed.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.order_sum(orders)? / self.partition_function()?)
    }
}
