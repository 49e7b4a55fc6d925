use rand::Rng;

use super::model::{FkConfig, FkModel};
use crate::error::{Error, Result};
use crate::spin_engine::SpinConfig;

/// Exact sampler for FK configurations by inversion of the enumerated CDF.
#[derive(Debug, Clone)]
pub struct FkExactSampler {
    num_edges: usize,
    cdf: Vec<f64>,
}

impl FkExactSampler {
    pub fn new(model: &FkModel) -> Result<Self> {
        let ne = model.map.num_edges();
        let required = 2f64.powi(ne as i32);
        if required > model.cap.min(1e7) {
            return Err(Error::TooLarge {
                required,
                cap: model.cap.min(1e7),
            });
        }
        let mut cdf = Vec::with_capacity(1 << ne);
        let mut acc = 0.0;
        for mask in 0..1u64 << ne {
            acc += model.weight(&FkConfig::from_mask(mask, ne));
            cdf.push(acc);
        }
        Ok(Self { num_edges: ne, cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FkConfig {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let idx = self
            .cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1);
        FkConfig::from_mask(idx as u64, self.num_edges)
    }
}

/// Assigns a uniform spin in `Z/q` to every cluster of `config`.
pub fn edwards_sokal_sample<R: Rng + ?Sized>(
    model: &FkModel,
    config: &FkConfig,
    rng: &mut R,
) -> Result<SpinConfig> {
    let q = model.integer_q()?;
    let mut dsu = model.clusters(config);
    let n = model.map.num_vertices();
    let mut label = vec![usize::MAX; n];
    let mut spins = vec![0; n];
    for v in 0..n {
        let root = dsu.find(v);
        if label[root] == usize::MAX {
            label[root] = rng.random_range(0..q);
        }
        spins[v] = label[root];
    }
    Ok(spins)
}

/// Draws an FK configuration and then the spins.
pub fn sample_potts<R: Rng + ?Sized>(
    model: &FkModel,
    sampler: &FkExactSampler,
    rng: &mut R,
) -> Result<SpinConfig> {
    let config = sampler.sample(rng);
    edwards_sokal_sample(model, &config, rng)
}

/// Index of a spin configuration in mixed radix `q`, first vertex slowest.
pub fn spin_index(spins: &[usize], q: usize) -> usize {
    spins.iter().fold(0, |acc, &s| acc * q + s)
}

/// Exact joint law of the coupling, as a table `joint[fk mask][spin index]`,
/// built as `P_FK(E0) q^{−C(E0)}` on compatible pairs.
#[derive(Debug, Clone)]
pub struct EsCoupling {
    pub joint: Vec<Vec<f64>>,
    /// Marginal on spins of the joint law.
    pub spin_marginal: Vec<f64>,
    /// Marginal on FK configurations of the joint law.
    pub fk_marginal: Vec<f64>,
    /// Potts law from the spin weights, computed independently.
    pub potts: Vec<f64>,
    /// FK law from the FK weights.
    pub fk: Vec<f64>,
}

impl EsCoupling {
    pub fn max_error(&self) -> f64 {
        let a = self
            .spin_marginal
            .iter()
            .zip(&self.potts)
            .map(|(x, y)| (x - y).abs());
        let b = self
            .fk_marginal
            .iter()
            .zip(&self.fk)
            .map(|(x, y)| (x - y).abs());
        a.chain(b).fold(0.0, f64::max)
    }
}

pub fn es_distribution_check(model: &FkModel) -> Result<EsCoupling> {
    let q = model.integer_q()?;
    let nv = model.map.num_vertices();
    let ne = model.map.num_edges();
    let nspins = q
        .checked_pow(nv as u32)
        .filter(|&n| n <= 1 << 20)
        .ok_or(Error::TooLarge {
            required: (q as f64).powi(nv as i32),
            cap: (1 << 20) as f64,
        })?;
    let nfk = 1usize << ne;
    if (nspins * nfk) as f64 > 1e8 {
        return Err(Error::TooLarge {
            required: (nspins * nfk) as f64,
            cap: 1e8,
        });
    }
    let z = model.partition_function()?;
    let mut joint = vec![vec![0.0; nspins]; nfk];
    let mut fk = vec![0.0; nfk];
    let mut spins = vec![0; nv];
    for (mask, row) in joint.iter_mut().enumerate() {
        let cfg = FkConfig::from_mask(mask as u64, ne);
        let p = model.weight(&cfg) / z;
        fk[mask] = p;
        let c = model.cluster_count(&cfg) as i32;
        for (idx, cell) in row.iter_mut().enumerate() {
            let mut x = idx;
            for v in (0..nv).rev() {
                spins[v] = x % q;
                x /= q;
            }
            let compatible = (0..ne).all(|e| {
                let (a, b) = model.map.edge_endpoints(e);
                !cfg.open[e] || spins[a] == spins[b]
            });
            if compatible {
                *cell = p * (q as f64).powi(-c);
            }
        }
    }
    let spin_marginal: Vec<f64> = (0..nspins)
        .map(|s| joint.iter().map(|r| r[s]).sum())
        .collect();
    let fk_marginal: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    // Potts law straight from the spin-model weights.
    let potts_model = model.potts_model()?;
    let mut potts = vec![0.0; nspins];
    potts_model.for_each_config(|s| potts[spin_index(s, q)] = potts_model.config_weight(s).re)?;
    let zp: f64 = potts.iter().sum();
    potts.iter_mut().for_each(|p| *p /= zp);
    Ok(EsCoupling {
        joint,
        spin_marginal,
        fk_marginal,
        potts,
        fk,
    })
}
