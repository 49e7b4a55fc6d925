use num_complex::Complex64;

use super::SpinModel;
use crate::error::{Error, Result};
use crate::planar_map::CombinatorialMap;

/// Edge subset (edge indices, shared between a map and its dual).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polygon {
    pub edges: Vec<usize>,
}

impl Polygon {
    /// Even degree at every vertex of `map`.
    pub fn is_even_in(&self, map: &CombinatorialMap) -> bool {
        let mut deg = vec![0usize; map.num_vertices()];
        for &e in &self.edges {
            let (a, b) = map.edge_endpoints(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.iter().all(|d| d % 2 == 0)
    }

    /// On a torus, also requires crossing every homology cycle of the dual
    /// an even number of times (the polygon must bound).
    pub fn is_admissible_in(&self, map: &CombinatorialMap) -> Result<bool> {
        if !self.is_even_in(map) {
            return Ok(false);
        }
        if map.surface().euler_characteristic() == 2 {
            return Ok(true);
        }
        let h = map.homology_basis()?;
        let inside: std::collections::HashSet<usize> = self.edges.iter().copied().collect();
        for cycle in [&h.cycle_a, &h.cycle_b] {
            let dual_cycle = map.push_off_left(cycle);
            let crossings = dual_cycle
                .iter()
                .filter(|&&d| inside.contains(&map.edge(d)))
                .count();
            if crossings % 2 == 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Disagreement edges of a spin configuration, as a subgraph of the dual.
pub fn low_temp_polygon(model: &SpinModel, spins: &[usize]) -> Polygon {
    let edges = (0..model.map.num_edges())
        .filter(|&e| {
            let (a, b) = model.map.edge_endpoints(e);
            spins[a] != spins[b]
        })
        .collect();
    Polygon { edges }
}

/// All even subgraphs of `map`, by enumeration of edge subsets.
pub fn even_subgraphs(map: &CombinatorialMap) -> Result<Vec<Polygon>> {
    let ne = map.num_edges();
    if ne > 24 {
        return Err(Error::TooLarge {
            required: 2f64.powi(ne as i32),
            cap: 2f64.powi(24),
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << ne) {
        let p = Polygon {
            edges: (0..ne).filter(|&e| mask >> e & 1 == 1).collect(),
        };
        if p.is_even_in(map) {
            out.push(p);
        }
    }
    Ok(out)
}

/// High-temperature expansion `2^{|V|} ∏ A_e Σ_P ∏_{e∈P} t_e`, writing each
/// Ising weight as `A_e (1 + t_e σσ′)`.
pub fn high_temp_z(model: &SpinModel) -> Result<Complex64> {
    if !model.is_ising() {
        return Err(Error::WrongGroup(
            "high-temperature expansion is implemented for Ising".into(),
        ));
    }
    if !model.fixed.is_empty() {
        return Err(Error::SpecInvalid(
            "high-temperature expansion needs free boundary".into(),
        ));
    }
    let amp: Vec<Complex64> = model
        .weights
        .iter()
        .map(|w| (w.values[0] + w.values[1]) / 2.0)
        .collect();
    let t: Vec<Complex64> = model
        .weights
        .iter()
        .map(|w| (w.values[0] - w.values[1]) / (w.values[0] + w.values[1]))
        .collect();
    let sum: Complex64 = even_subgraphs(&model.map)?
        .iter()
        .map(|p| p.edges.iter().map(|&e| t[e]).product::<Complex64>())
        .sum();
    let pre: Complex64 = amp.iter().product();
    Ok(pre * 2f64.powi(model.map.num_vertices() as i32) * sum)
}
