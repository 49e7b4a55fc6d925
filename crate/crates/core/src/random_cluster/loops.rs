use super::model::{Dsu, FkConfig, FkModel};
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart};

/// The medial lattice of the diamond graph of a map, on which FK
/// configurations become dense loop configurations. Medial vertex `d` is the
/// diamond edge joining `origin(d)` to the face left of `d`; medial edge `δ`
/// (darts `2δ`, `2δ+1`) follows diamond dart `δ` around its quadrilateral.
#[derive(Debug, Clone)]
pub struct LoopLattice {
    pub primal: CombinatorialMap,
    pub diamond: CombinatorialMap,
    pub medial: CombinatorialMap,
}

/// One closed loop as a cyclic sequence of medial darts.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    pub darts: Vec<Dart>,
    /// Homology class on a torus, `None` on the sphere.
    pub class: Option<(i64, i64)>,
}

impl Loop {
    pub fn is_contractible(&self) -> bool {
        self.class.is_none_or(|c| c == (0, 0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopGasConfig {
    /// Included medial edges, indexed by diamond dart.
    pub included: Vec<bool>,
    pub loops: Vec<Loop>,
    /// Loop index of every included medial edge.
    pub loop_of_edge: Vec<Option<usize>>,
}

impl LoopGasConfig {
    pub fn num_loops(&self) -> usize {
        self.loops.len()
    }

    pub fn num_contractible(&self) -> usize {
        self.loops.iter().filter(|l| l.is_contractible()).count()
    }
}

impl LoopLattice {
    pub fn new(map: &CombinatorialMap) -> Result<Self> {
        let diamond = map.diamond()?;
        let medial = diamond.medial()?;
        Ok(Self {
            primal: map.clone(),
            diamond,
            medial,
        })
    }

    /// Medial edge of diamond dart `δ`.
    fn medial_edge(&self, delta: Dart) -> usize {
        self.medial.edge(2 * delta)
    }

    /// Diamond dart `2d` turns around a face and is kept when the primal edge
    /// of its quadrilateral is open; `2d+1` turns around a vertex and is kept
    /// when that edge is closed.
    pub fn included_edges(&self, config: &FkConfig) -> Vec<bool> {
        let nd = self.primal.num_darts();
        let mut inc = vec![false; 2 * nd];
        for d in 0..nd {
            let around_face = config.open[self.primal.edge(self.primal.sigma(d))];
            inc[self.medial_edge(2 * d)] = around_face;
            inc[self.medial_edge(2 * d + 1)] = !config.open[self.primal.edge(d)];
        }
        inc
    }

    pub fn loop_representation(&self, config: &FkConfig) -> Result<LoopGasConfig> {
        let inc = self.included_edges(config);
        let m = &self.medial;
        let mut loop_of_edge = vec![None; m.num_edges()];
        let mut loops = Vec::new();
        for start_edge in 0..m.num_edges() {
            if !inc[start_edge] || loop_of_edge[start_edge].is_some() {
                continue;
            }
            let id = loops.len();
            let start = m.edge_darts(start_edge)[0];
            let mut darts = Vec::new();
            let mut x = start;
            loop {
                loop_of_edge[m.edge(x)] = Some(id);
                darts.push(x);
                let back = m.alpha(x);
                let next = m
                    .rotation(m.origin(back))
                    .iter()
                    .copied()
                    .find(|&y| y != back && inc[m.edge(y)])
                    .ok_or_else(|| {
                        Error::DegenerateMap("loop configuration is not 2-regular".into())
                    })?;
                if next == start {
                    break;
                }
                if loop_of_edge[m.edge(next)].is_some() {
                    return Err(Error::DegenerateMap(
                        "loop configuration is not 2-regular".into(),
                    ));
                }
                x = next;
            }
            let class = self.loop_class(&darts);
            loops.push(Loop { darts, class });
        }
        Ok(LoopGasConfig {
            included: inc,
            loops,
            loop_of_edge,
        })
    }

    fn loop_class(&self, darts: &[Dart]) -> Option<(i64, i64)> {
        let emb = self.medial.embedding()?;
        let period = emb.period?;
        let (mut x, mut y) = (0.0, 0.0);
        for &d in darts {
            let s = emb.dart_disp[d];
            x += s[0];
            y += s[1];
        }
        Some((
            (x / period[0]).round() as i64,
            (y / period[1]).round() as i64,
        ))
    }

    /// Recovers the FK configuration from the kept medial edges.
    pub fn invert(&self, included: &[bool]) -> FkConfig {
        let p = &self.primal;
        let open = (0..p.num_edges())
            .map(|e| {
                let r = p.edge_darts(e)[0];
                included[self.medial_edge(2 * p.sigma_inv(r))]
            })
            .collect();
        FkConfig { open }
    }

    /// `(loops, C(E0), C(E0†))`.
    pub fn loop_count_check(&self, config: &FkConfig) -> Result<(usize, usize, usize)> {
        let loops = self.loop_representation(config)?.num_loops();
        let c = primal_clusters(&self.primal, config).components();
        let dual = dual_clusters(&self.primal, config).components();
        Ok((loops, c, dual))
    }

    /// `√q^{#loops} ∏ w′(e′)` with `w′ = (w/√q)^{1/4}` on segments turning
    /// around a face and `(√q/w)^{1/4}` on segments turning around a vertex.
    pub fn loop_weight(&self, model: &FkModel, gas: &LoopGasConfig) -> f64 {
        let sq = model.q.sqrt();
        let mut weight = sq.powi(gas.num_loops() as i32);
        for delta in 0..2 * self.primal.num_darts() {
            if gas.included[self.medial_edge(delta)] {
                let w = model.weights[self.primal.diamond_quad_edge(delta)];
                weight *= if delta % 2 == 0 {
                    (w / sq).powf(0.25)
                } else {
                    (sq / w).powf(0.25)
                };
            }
        }
        weight
    }
}

pub fn primal_clusters(map: &CombinatorialMap, config: &FkConfig) -> Dsu {
    let mut dsu = Dsu::new(map.num_vertices());
    for e in (0..map.num_edges()).filter(|&e| config.open[e]) {
        let (a, b) = map.edge_endpoints(e);
        dsu.union(a, b);
    }
    dsu
}

/// Clusters of the dual configuration on faces.
pub fn dual_clusters(map: &CombinatorialMap, config: &FkConfig) -> Dsu {
    let mut dsu = Dsu::new(map.num_faces());
    for e in (0..map.num_edges()).filter(|&e| !config.open[e]) {
        let r = map.edge_darts(e)[0];
        dsu.union(map.left_face(r), map.right_face(r));
    }
    dsu
}
