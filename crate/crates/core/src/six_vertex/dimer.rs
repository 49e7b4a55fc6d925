use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use super::model::{type_from_pattern, SixVertexConfig, SixVertexModel};
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart, Surface};

/// Matched edges of a bipartite map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimerMatching {
    pub edges: Vec<usize>,
}

/// Cap on the number of matchings produced by enumeration.
pub const MATCHING_CAP: usize = 1 << 24;

pub fn check_matching(map: &CombinatorialMap, matching: &DimerMatching) -> Result<()> {
    let mut covered = vec![0usize; map.num_vertices()];
    for &e in &matching.edges {
        if e >= map.num_edges() {
            return Err(Error::NotPerfectMatching);
        }
        let (a, b) = map.edge_endpoints(e);
        covered[a] += 1;
        covered[b] += 1;
    }
    if covered.iter().all(|&c| c == 1) {
        Ok(())
    } else {
        Err(Error::NotPerfectMatching)
    }
}

/// All perfect matchings of `map` avoiding the vertices in `removed`.
/// Parallel edges give distinct matchings.
pub fn enumerate_matchings(
    map: &CombinatorialMap,
    removed: &[usize],
) -> Result<Vec<DimerMatching>> {
    let nv = map.num_vertices();
    let mut covered = vec![false; nv];
    for &v in removed {
        covered[v] = true;
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(
        map: &CombinatorialMap,
        covered: &mut [bool],
        stack: &mut Vec<usize>,
        out: &mut Vec<DimerMatching>,
    ) -> Result<()> {
        let Some(v) = covered.iter().position(|c| !c) else {
            if out.len() >= MATCHING_CAP {
                return Err(Error::TooLarge {
                    required: out.len() as f64 + 1.0,
                    cap: MATCHING_CAP as f64,
                });
            }
            out.push(DimerMatching {
                edges: stack.clone(),
            });
            return Ok(());
        };
        covered[v] = true;
        for &d in map.rotation(v) {
            let w = map.head(d);
            if w == v || covered[w] {
                continue;
            }
            covered[w] = true;
            stack.push(map.edge(d));
            rec(map, covered, stack, out)?;
            stack.pop();
            covered[w] = false;
        }
        covered[v] = false;
        Ok(())
    }
    rec(map, &mut covered, &mut stack, &mut out)?;
    Ok(out)
}

pub fn matching_weight(matching: &DimerMatching, weights: &[f64]) -> f64 {
    matching.edges.iter().map(|&e| weights[e]).product()
}

/// Brute-force weighted matching sum.
pub fn matching_sum(map: &CombinatorialMap, weights: &[f64]) -> Result<f64> {
    Ok(enumerate_matchings(map, &[])?
        .iter()
        .map(|m| matching_weight(m, weights))
        .sum())
}

/// Dimer graph of a square-lattice map: its medial map, black vertices
/// being the horizontal edges.
#[derive(Debug, Clone)]
pub struct DimerGraph {
    pub lattice: CombinatorialMap,
    pub graph: CombinatorialMap,
    pub black: Vec<bool>,
}

impl DimerGraph {
    pub fn new(lattice: &CombinatorialMap) -> Result<Self> {
        let emb = lattice.embedding().ok_or_else(|| {
            Error::SpecInvalid("dimer graph needs an embedded square lattice".into())
        })?;
        let black: Vec<bool> = (0..lattice.num_edges())
            .map(|e| {
                let s = emb.dart_disp[lattice.edge_darts(e)[0]];
                s[1].abs() < 1e-12 && s[0].abs() > 1e-12
            })
            .collect();
        let graph = lattice.medial()?;
        for e in 0..graph.num_edges() {
            let (a, b) = graph.edge_endpoints(e);
            if black[a] == black[b] {
                return Err(Error::NotBipartite);
            }
        }
        Ok(Self {
            lattice: lattice.clone(),
            graph,
            black,
        })
    }

    /// Dart of dimer edge `e` leaving its black end, and its displacement.
    fn black_dart(&self, e: usize) -> (Dart, [f64; 2]) {
        let [d, r] = self.graph.edge_darts(e);
        let d = if self.black[self.graph.origin(d)] {
            d
        } else {
            r
        };
        (d, self.graph.embedding().unwrap().dart_disp[d])
    }

    /// `cos θ` on SW–NE edges and `sin θ` on SE–NW edges.
    pub fn weights(&self, theta: f64) -> Vec<f64> {
        (0..self.graph.num_edges())
            .map(|e| {
                let (_, s) = self.black_dart(e);
                if s[0] * s[1] > 0.0 {
                    theta.cos()
                } else {
                    theta.sin()
                }
            })
            .collect()
    }

    /// Six-vertex configuration on the lattice: the horizontal edge at `b`
    /// points along the x-component of `w − b`, the vertical edge at `w`
    /// along its y-component.
    pub fn dimer_to_6v(&self, matching: &DimerMatching) -> Result<SixVertexConfig> {
        check_matching(&self.graph, matching)?;
        let emb = self.lattice.embedding().unwrap();
        let mut forward = vec![false; self.lattice.num_edges()];
        for &e in &matching.edges {
            let (d, s) = self.black_dart(e);
            let (b, w) = (self.graph.origin(d), self.graph.head(d));
            forward[b] = (s[0] > 0.0) == (emb.dart_disp[self.lattice.edge_darts(b)[0]][0] > 0.0);
            forward[w] = (s[1] > 0.0) == (emb.dart_disp[self.lattice.edge_darts(w)[0]][1] > 0.0);
        }
        Ok(SixVertexConfig { forward })
    }

    /// Out-pattern at every lattice vertex with monomers at `b` (black) and
    /// `w` (white): the halves of edge `b` both point into its midpoint and
    /// those of `w` both point away from it.
    fn defect_partition(&self, weights: [f64; 3], b: usize, w: usize) -> Result<f64> {
        let lat = &self.lattice;
        let free: Vec<usize> = (0..lat.num_edges()).filter(|&e| e != b && e != w).collect();
        if free.len() > 30 {
            return Err(Error::TooLarge {
                required: 2f64.powi(free.len() as i32),
                cap: 2f64.powi(30),
            });
        }
        let mut forward = vec![false; lat.num_edges()];
        let mut total = 0.0;
        'outer: for mask in 0..1u64 << free.len() {
            for (i, &e) in free.iter().enumerate() {
                forward[e] = mask >> i & 1 == 1;
            }
            let mut weight = 1.0;
            for v in 0..lat.num_vertices() {
                let rot = lat.rotation(v);
                let mut o = [false; 4];
                for (k, &d) in rot.iter().enumerate() {
                    let e = lat.edge(d);
                    o[k] = if e == b {
                        true
                    } else if e == w {
                        false
                    } else {
                        forward[e] == (lat.orientation_sign(d) > 0.0)
                    };
                }
                match type_from_pattern(o) {
                    Some(t) => weight *= weights[(t - 1) / 2],
                    None => continue 'outer,
                }
            }
            total += weight;
        }
        Ok(total)
    }
}

/// Both sides of the free-fermion correspondence.
#[derive(Debug, Clone)]
pub struct FreeFermionCheck {
    pub theta: f64,
    pub z_dimer: f64,
    pub z_6v: f64,
    pub matchings: usize,
    pub sixv_configs: usize,
    /// Largest deviation, over six-vertex configurations, of the summed
    /// weight of its dimer preimages from its own weight.
    pub fiber_error: f64,
}

impl FreeFermionCheck {
    pub fn rel_error(&self) -> f64 {
        (self.z_dimer - self.z_6v).abs() / self.z_6v.abs()
    }
}

pub fn sixv_dimer_partition_check(
    theta: f64,
    lattice: &CombinatorialMap,
) -> Result<FreeFermionCheck> {
    let dg = DimerGraph::new(lattice)?;
    let weights = dg.weights(theta);
    let matchings = enumerate_matchings(&dg.graph, &[])?;
    let mut fibers: HashMap<SixVertexConfig, f64> = HashMap::new();
    let mut z_dimer = 0.0;
    for m in &matchings {
        let w = matching_weight(m, &weights);
        z_dimer += w;
        *fibers.entry(dg.dimer_to_6v(m)?).or_default() += w;
    }
    let model = SixVertexModel::symmetric(lattice.clone(), theta.cos(), theta.sin(), 1.0)?;
    let mut z_6v = 0.0;
    let mut sixv_configs = 0;
    let mut fiber_error = 0.0f64;
    let mut err = None;
    model.for_each_config(|cfg| match model.weight(cfg) {
        Ok(w) => {
            z_6v += w;
            sixv_configs += 1;
            fiber_error = fiber_error.max((fibers.remove(cfg).unwrap_or(0.0) - w).abs());
        }
        Err(e) => err = Some(e),
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    if !fibers.is_empty() {
        // a matching projected off the ice rule
        fiber_error = f64::INFINITY;
    }
    Ok(FreeFermionCheck {
        theta,
        z_dimer,
        z_6v,
        matchings: matchings.len(),
        sixv_configs,
        fiber_error,
    })
}

/// Monomer-defect partition sums on both sides of the correspondence.
#[derive(Debug, Clone, Copy)]
pub struct MonomerDefect {
    pub z_dimer: f64,
    pub z_6v: f64,
}

/// Dimers with monomers at lattice edges `b` (horizontal) and `w`
/// (vertical), against six-vertex configurations with edge `b` split into a
/// sink and edge `w` into a source.
pub fn monomer_defect_check(
    lattice: &CombinatorialMap,
    theta: f64,
    b: usize,
    w: usize,
) -> Result<MonomerDefect> {
    let dg = DimerGraph::new(lattice)?;
    if b >= dg.black.len() || w >= dg.black.len() || !dg.black[b] || dg.black[w] {
        return Err(Error::SpecInvalid(
            "monomers need one horizontal and one vertical edge".into(),
        ));
    }
    let weights = dg.weights(theta);
    let z_dimer = enumerate_matchings(&dg.graph, &[b, w])?
        .iter()
        .map(|m| matching_weight(m, &weights))
        .sum();
    let z_6v = dg.defect_partition([theta.cos(), theta.sin(), 1.0], b, w)?;
    Ok(MonomerDefect { z_dimer, z_6v })
}

/// Kasteleyn signs on a planar bipartite map: `+1` on a spanning tree, the
/// remaining edges fixed face by face so that a face of length `2ℓ` has sign
/// product `(−1)^{ℓ+1}`. The outer face (or the last face) is left over.
pub fn kasteleyn_signs(map: &CombinatorialMap) -> Result<Vec<f64>> {
    if map.surface() != Surface::Sphere {
        return Err(Error::NotPlanar);
    }
    map.is_bipartite().ok_or(Error::NotBipartite)?;
    let ne = map.num_edges();
    let mut sign = vec![1.0; ne];
    let mut in_tree = vec![false; ne];
    let mut seen = vec![false; map.num_vertices()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &d in map.rotation(v) {
            let u = map.head(d);
            if !seen[u] {
                seen[u] = true;
                in_tree[map.edge(d)] = true;
                queue.push_back(u);
            }
        }
    }
    let nf = map.num_faces();
    let root = map.outer_face().unwrap_or(nf - 1);
    let mut parent_edge = vec![usize::MAX; nf];
    let mut fseen = vec![false; nf];
    fseen[root] = true;
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &d in map.face_boundary(f) {
            let e = map.edge(d);
            let g = map.right_face(d);
            if !in_tree[e] && !fseen[g] {
                fseen[g] = true;
                parent_edge[g] = e;
                order.push(g);
                queue.push_back(g);
            }
        }
    }
    for &f in order.iter().skip(1).rev() {
        let boundary = map.face_boundary(f);
        let pe = parent_edge[f];
        let others: f64 = boundary
            .iter()
            .map(|&d| map.edge(d))
            .filter(|&e| e != pe)
            .map(|e| sign[e])
            .product();
        let l = boundary.len() / 2;
        let want = if l % 2 == 1 { 1.0 } else { -1.0 };
        sign[pe] = want * others;
    }
    Ok(sign)
}

/// Signed weighted adjacency matrix, black (first color class) rows against
/// white columns.
pub fn kasteleyn_matrix(map: &CombinatorialMap, weights: &[f64]) -> Result<DMatrix<f64>> {
    let sign = kasteleyn_signs(map)?;
    let color = map.is_bipartite().ok_or(Error::NotBipartite)?;
    let mut index = vec![0; map.num_vertices()];
    let (mut nb, mut nw) = (0, 0);
    for (v, &c) in color.iter().enumerate() {
        if c {
            index[v] = nw;
            nw += 1;
        } else {
            index[v] = nb;
            nb += 1;
        }
    }
    let mut k = DMatrix::zeros(nb, nw);
    for e in 0..map.num_edges() {
        let (a, b) = map.edge_endpoints(e);
        let (bl, wh) = if color[a] { (b, a) } else { (a, b) };
        k[(index[bl], index[wh])] += sign[e] * weights[e];
    }
    Ok(k)
}

/// `|det K|`, zero when the color classes differ in size.
pub fn kasteleyn_partition(map: &CombinatorialMap, weights: &[f64]) -> Result<f64> {
    let k = kasteleyn_matrix(map, weights)?;
    if k.nrows() != k.ncols() {
        return Ok(0.0);
    }
    Ok(k.determinant().abs())
}
