use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::map::{add, CombinatorialMap, Dart, Embedding, Surface};
use super::HomologyBasis;

/// Dual, diamond and medial maps of one base map.
#[derive(Debug, Clone)]
pub struct DerivedGraphs {
    pub dual: CombinatorialMap,
    pub diamond: CombinatorialMap,
    pub medial: CombinatorialMap,
}

impl CombinatorialMap {
    /// Planar dual. Dual vertex `f` is face `f`, and dual dart `d` crosses
    /// primal dart `d` from right to left (it runs from the face right of `d`
    /// to the face left of `d`). The bijection `e ↔ e†` is the identity on
    /// dart indices.
    pub fn dual(&self) -> Result<CombinatorialMap> {
        let rotations: Vec<Vec<Dart>> = (0..self.num_faces())
            .map(|f| {
                self.face_boundary(f)
                    .iter()
                    .map(|&b| self.alpha(b))
                    .collect()
            })
            .collect();
        let alpha = (0..self.num_darts()).map(|d| self.alpha(d)).collect();
        let homology = match self.surface() {
            Surface::Torus => {
                let h = self.homology_basis()?;
                Some(HomologyBasis {
                    cycle_a: self.push_off_left(&h.cycle_a),
                    cycle_b: self.push_off_left(&h.cycle_b),
                })
            }
            Surface::Sphere => None,
        };
        let embedding = match (self.embedding(), self.outer_face()) {
            (Some(emb), None) => {
                let vertex_pos = (0..self.num_faces())
                    .map(|f| self.face_pos(f).unwrap())
                    .collect();
                let dart_disp = (0..self.num_darts())
                    .map(|d| {
                        let own = self.corner_offset(d).unwrap();
                        let other = self.corner_offset(self.alpha(d)).unwrap();
                        let step = self.dart_disp(d).unwrap();
                        [own[0] - step[0] - other[0], own[1] - step[1] - other[1]]
                    })
                    .collect();
                Some(Embedding {
                    vertex_pos,
                    dart_disp,
                    period: emb.period,
                })
            }
            _ => None,
        };
        CombinatorialMap::assemble(rotations, alpha, self.surface(), homology, embedding)
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.has_loop() {
            return Err(Error::DegenerateMap("map has a loop edge".into()));
        }
        if self.has_bridge() {
            return Err(Error::DegenerateMap(
                "dual has a loop edge (map has a bridge)".into(),
            ));
        }
        Ok(())
    }

    /// Quadrangulation on `V ⊔ V†`: vertex `v` keeps its index, face `f`
    /// becomes vertex `|V| + f`. Diamond edge `d` joins `origin(d)` to the face
    /// left of `d`; its darts are `2d` (vertex to face) and `2d + 1`.
    pub fn diamond(&self) -> Result<CombinatorialMap> {
        self.require_nondegenerate()?;
        let nv = self.num_vertices();
        let mut rotations: Vec<Vec<Dart>> = (0..nv)
            .map(|v| self.rotation(v).iter().map(|&d| 2 * d).collect())
            .collect();
        rotations.extend(
            (0..self.num_faces())
                .map(|f| self.face_boundary(f).iter().map(|&b| 2 * b + 1).collect()),
        );
        let alpha = (0..2 * self.num_darts()).map(|x| x ^ 1).collect();
        let embedding = match (self.embedding(), self.outer_face()) {
            (Some(emb), None) => {
                let mut vertex_pos = emb.vertex_pos.clone();
                vertex_pos.extend((0..self.num_faces()).map(|f| self.face_pos(f).unwrap()));
                let mut dart_disp = Vec::with_capacity(2 * self.num_darts());
                for d in 0..self.num_darts() {
                    let o = self.corner_offset(d).unwrap();
                    dart_disp.push(o);
                    dart_disp.push([-o[0], -o[1]]);
                }
                Some(Embedding {
                    vertex_pos,
                    dart_disp,
                    period: emb.period,
                })
            }
            _ => None,
        };
        CombinatorialMap::assemble(rotations, alpha, self.surface(), None, embedding)
    }

    /// For a diamond dart, the base edge whose quadrilateral lies left of it.
    pub fn diamond_quad_edge(&self, diamond_dart: Dart) -> usize {
        let d = diamond_dart / 2;
        if diamond_dart % 2 == 0 {
            self.edge(self.sigma(d))
        } else {
            self.edge(d)
        }
    }

    /// Medial (derived) map: one vertex per edge, and medial dart `2δ` joins
    /// edge(δ) to edge(φ(δ)) across the face left of `δ`, passing the corner
    /// head(δ) on its right.
    pub fn medial(&self) -> Result<CombinatorialMap> {
        let rotations: Vec<Vec<Dart>> = (0..self.num_edges())
            .map(|k| {
                let [d, r] = self.edge_darts(k);
                vec![
                    2 * d,
                    2 * self.phi_inv(d) + 1,
                    2 * r,
                    2 * self.phi_inv(r) + 1,
                ]
            })
            .collect();
        let alpha = (0..2 * self.num_darts()).map(|x| x ^ 1).collect();
        let embedding = self.embedding().map(|emb| {
            let vertex_pos = (0..self.num_edges())
                .map(|k| {
                    let d = self.edge_darts(k)[0];
                    let s = emb.dart_disp[d];
                    add(emb.vertex_pos[self.origin(d)], [s[0] / 2.0, s[1] / 2.0])
                })
                .collect();
            let mut dart_disp = Vec::with_capacity(2 * self.num_darts());
            for d in 0..self.num_darts() {
                let a = emb.dart_disp[d];
                let b = emb.dart_disp[self.phi(d)];
                let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                dart_disp.push(m);
                dart_disp.push([-m[0], -m[1]]);
            }
            Embedding {
                vertex_pos,
                dart_disp,
                period: emb.period,
            }
        });
        CombinatorialMap::assemble(rotations, alpha, self.surface(), None, embedding)
    }

    pub fn derived_graphs(&self) -> Result<DerivedGraphs> {
        let dual = self.dual()?;
        let diamond = self.diamond()?;
        let medial = diamond.medial()?;
        Ok(DerivedGraphs {
            dual,
            diamond,
            medial,
        })
    }

    /// Orientation-preserving isomorphism invariant: the lexicographically
    /// smallest breadth-first relabeling over all starting darts.
    pub fn canonical_form(&self) -> Vec<(usize, usize)> {
        let n = self.num_darts();
        let mut best: Option<Vec<(usize, usize)>> = None;
        for start in 0..n {
            let mut label = vec![usize::MAX; n];
            let mut order = Vec::with_capacity(n);
            label[start] = 0;
            order.push(start);
            let mut queue = VecDeque::from([start]);
            while let Some(d) = queue.pop_front() {
                for next in [self.sigma(d), self.alpha(d)] {
                    if label[next] == usize::MAX {
                        label[next] = order.len();
                        order.push(next);
                        queue.push_back(next);
                    }
                }
            }
            let code: Vec<(usize, usize)> = order
                .iter()
                .map(|&d| (label[self.sigma(d)], label[self.alpha(d)]))
                .collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    pub fn is_isomorphic(&self, other: &CombinatorialMap) -> bool {
        self.num_darts() == other.num_darts()
            && self.num_vertices() == other.num_vertices()
            && self.num_faces() == other.num_faces()
            && self.canonical_form() == other.canonical_form()
    }

    pub fn is_bipartite(&self) -> Option<Vec<bool>> {
        let mut color = vec![None; self.num_vertices()];
        for s in 0..self.num_vertices() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap();
                for &d in self.rotation(v) {
                    let w = self.head(d);
                    match color[w] {
                        None => {
                            color[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }
}
