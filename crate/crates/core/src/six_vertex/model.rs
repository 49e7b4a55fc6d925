use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart};

/// Default cap on backtracking nodes visited during enumeration.
pub const SIXV_CAP: f64 = 1e8;

/// Edge orientation: `true` means the edge points along its reference dart.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SixVertexConfig {
    pub forward: Vec<bool>,
}

impl SixVertexConfig {
    /// Whether the arrow on `d`'s edge leaves `origin(d)` along `d`.
    pub fn is_out(&self, map: &CombinatorialMap, d: Dart) -> bool {
        self.forward[map.edge(d)] == (map.orientation_sign(d) > 0.0)
    }

    /// The chosen dart of every edge.
    pub fn darts(&self, map: &CombinatorialMap) -> Vec<Dart> {
        (0..map.num_edges())
            .map(|e| map.edge_darts(e)[usize::from(!self.forward[e])])
            .collect()
    }

    pub fn reversed(&self) -> Self {
        Self {
            forward: self.forward.iter().map(|b| !b).collect(),
        }
    }
}

/// Vertex type from the in/out pattern on the rotation `d0 d1 d2 d3`:
/// 1 = OOII, 2 = IIOO, 3 = IOOI, 4 = OIIO, 5 = OIOI, 6 = IOIO.
pub fn vertex_type(map: &CombinatorialMap, config: &SixVertexConfig, v: usize) -> Result<usize> {
    let rot = map.rotation(v);
    if rot.len() != 4 {
        return Err(Error::NotFourRegular);
    }
    let o: Vec<bool> = rot.iter().map(|&d| config.is_out(map, d)).collect();
    type_from_pattern([o[0], o[1], o[2], o[3]]).ok_or(Error::InvalidIce(v))
}

/// Type of an out-pattern on `d0 d1 d2 d3`, `None` off the ice rule.
pub fn type_from_pattern(o: [bool; 4]) -> Option<usize> {
    match o {
        [true, true, false, false] => Some(1),
        [false, false, true, true] => Some(2),
        [false, true, true, false] => Some(3),
        [true, false, false, true] => Some(4),
        [true, false, true, false] => Some(5),
        [false, true, false, true] => Some(6),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct SixVertexModel {
    pub map: CombinatorialMap,
    /// `w_1 … w_6` at every vertex.
    pub weights: Vec<[f64; 6]>,
    pub cap: f64,
}

impl SixVertexModel {
    pub fn new(map: CombinatorialMap, weights: Vec<[f64; 6]>) -> Result<Self> {
        if (0..map.num_vertices()).any(|v| map.degree(v) != 4) {
            return Err(Error::NotFourRegular);
        }
        if weights.len() != map.num_vertices() {
            return Err(Error::SpecInvalid(
                "one weight table per vertex required".into(),
            ));
        }
        if (0..map.num_edges()).any(|e| {
            let (a, b) = map.edge_endpoints(e);
            a == b
        }) {
            return Err(Error::SizeTooSmall(
                "loop edges (odd cycles) are not supported".into(),
            ));
        }
        Ok(Self {
            map,
            weights,
            cap: SIXV_CAP,
        })
    }

    /// Symmetric weights `w1 = w2 = a`, `w3 = w4 = b`, `w5 = w6 = c`.
    pub fn symmetric(map: CombinatorialMap, a: f64, b: f64, c: f64) -> Result<Self> {
        let nv = map.num_vertices();
        Self::new(map, vec![[a, a, b, b, c, c]; nv])
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn check_ice(&self, config: &SixVertexConfig) -> Result<()> {
        for v in 0..self.map.num_vertices() {
            let outs = self
                .map
                .rotation(v)
                .iter()
                .filter(|&&d| config.is_out(&self.map, d))
                .count();
            if outs != 2 {
                return Err(Error::InvalidIce(v));
            }
        }
        Ok(())
    }

    pub fn weight(&self, config: &SixVertexConfig) -> Result<f64> {
        let mut w = 1.0;
        for v in 0..self.map.num_vertices() {
            w *= self.weights[v][vertex_type(&self.map, config, v)? - 1];
        }
        Ok(w)
    }

    /// Visits every ice-rule configuration, edges assigned in index order
    /// with pruning on vertex in/out counts.
    pub fn for_each_config(&self, mut f: impl FnMut(&SixVertexConfig)) -> Result<()> {
        let map = &self.map;
        let ne = map.num_edges();
        let mut outs = vec![0u8; map.num_vertices()];
        let mut ins = vec![0u8; map.num_vertices()];
        let mut config = SixVertexConfig {
            forward: vec![false; ne],
        };
        let mut nodes = 0.0;
        // Iterative backtracking over (edge, next choice).
        let mut choice = vec![0u8; ne + 1];
        let mut k = 0usize;
        loop {
            if k == ne {
                f(&config);
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                undo(map, &config, k, &mut outs, &mut ins);
                continue;
            }
            if choice[k] == 2 {
                choice[k] = 0;
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                undo(map, &config, k, &mut outs, &mut ins);
                continue;
            }
            nodes += 1.0;
            if nodes > self.cap {
                return Err(Error::TooLarge {
                    required: nodes,
                    cap: self.cap,
                });
            }
            let fwd = choice[k] == 0;
            choice[k] += 1;
            config.forward[k] = fwd;
            let (a, b) = map.edge_endpoints(k);
            let (src, dst) = if fwd { (a, b) } else { (b, a) };
            outs[src] += 1;
            ins[dst] += 1;
            if outs[src] > 2 || ins[dst] > 2 {
                outs[src] -= 1;
                ins[dst] -= 1;
                continue;
            }
            k += 1;
        }
    }

    pub fn configs(&self) -> Result<Vec<SixVertexConfig>> {
        let mut out = Vec::new();
        self.for_each_config(|c| out.push(c.clone()))?;
        Ok(out)
    }

    pub fn partition_function(&self) -> Result<f64> {
        let mut z = 0.0;
        let mut err = None;
        self.for_each_config(|c| match self.weight(c) {
            Ok(w) => z += w,
            Err(e) => err = Some(e),
        })?;
        err.map_or(Ok(z), Err)
    }
}

fn undo(
    map: &CombinatorialMap,
    config: &SixVertexConfig,
    k: usize,
    outs: &mut [u8],
    ins: &mut [u8],
) {
    let (a, b) = map.edge_endpoints(k);
    let (src, dst) = if config.forward[k] { (a, b) } else { (b, a) };
    outs[src] -= 1;
    ins[dst] -= 1;
}

/// `Δ = (a² + b² − c²) / (2ab)`.
pub fn delta_param(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::DomainError("a and b must be positive".into()));
    }
    Ok((a * a + b * b - c * c) / (2.0 * a * b))
}

/// `g = (8/π) arcsin(c/2)` for `0 < c < 2`.
pub fn coupling_constant(c: f64) -> Result<f64> {
    if !(c > 0.0 && c < 2.0) {
        return Err(Error::DomainError(format!("c = {c} outside (0, 2)")));
    }
    Ok(8.0 / std::f64::consts::PI * (c / 2.0).asin())
}
