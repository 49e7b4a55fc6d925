use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::HomologyBasis;

/// Dart index. Each undirected edge owns exactly two darts.
pub type Dart = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Sphere,
    Torus,
}

impl Surface {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Surface::Sphere => 2,
            Surface::Torus => 0,
        }
    }
}

/// Optional flat geometry attached to a map: vertex positions, per-dart
/// displacement vectors (unambiguous even on tiny tori) and the torus periods.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub vertex_pos: Vec<[f64; 2]>,
    pub dart_disp: Vec<[f64; 2]>,
    /// Rectangular periods `(Lx, Ly)` on the torus, `None` on the sphere.
    pub period: Option<[f64; 2]>,
}

/// Half-edge map: `sigma` is the counterclockwise successor of a dart around
/// its origin, `alpha` the reversal involution. Faces are traversed
/// counterclockwise, so each dart belongs to the face on its left.
#[derive(Debug, Clone)]
pub struct CombinatorialMap {
    sigma: Vec<Dart>,
    sigma_inv: Vec<Dart>,
    alpha: Vec<Dart>,
    surface: Surface,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    edge_of: Vec<usize>,
    vertex_darts: Vec<Vec<Dart>>,
    face_darts: Vec<Vec<Dart>>,
    edge_darts: Vec<[Dart; 2]>,
    pub(crate) homology: Option<HomologyBasis>,
    pub(crate) embedding: Option<Embedding>,
    corner_offset: Option<Vec<[f64; 2]>>,
    outer_face: Option<usize>,
}

impl CombinatorialMap {
    /// Builds a map from per-vertex counterclockwise dart lists and the
    /// reversal pairs. Vertex `i` is the `i`-th rotation.
    pub fn from_rotations(
        rotations: &[Vec<Dart>],
        alpha_pairs: &[(Dart, Dart)],
        surface: Surface,
    ) -> Result<Self> {
        let n: usize = rotations.iter().map(Vec::len).sum();
        if n == 0 {
            // a single isolated vertex is the only map without darts
            if rotations.len() != 1 {
                return Err(Error::MalformedRotation("no darts".into()));
            }
            return Self::assemble(vec![Vec::new()], Vec::new(), surface, None, None);
        }
        let mut seen = vec![false; n];
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(Error::MalformedRotation(format!(
                    "vertex {v} has an empty rotation"
                )));
            }
            for &d in rot {
                if d >= n {
                    return Err(Error::MalformedRotation(format!(
                        "dart {d} out of range 0..{n}"
                    )));
                }
                if seen[d] {
                    return Err(Error::MalformedRotation(format!("dart {d} appears twice")));
                }
                seen[d] = true;
            }
        }
        let mut alpha = vec![usize::MAX; n];
        for &(a, b) in alpha_pairs {
            if a >= n || b >= n || a == b || alpha[a] != usize::MAX || alpha[b] != usize::MAX {
                return Err(Error::MalformedRotation(format!(
                    "bad alpha pair ({a}, {b})"
                )));
            }
            alpha[a] = b;
            alpha[b] = a;
        }
        if let Some(d) = alpha.iter().position(|&a| a == usize::MAX) {
            return Err(Error::MalformedRotation(format!("dart {d} has no reverse")));
        }
        Self::assemble(rotations.to_vec(), alpha, surface, None, None)
    }

    /// Builds from validated rotations; vertex `i` is `rotations[i]`.
    pub(crate) fn assemble(
        vertex_darts: Vec<Vec<Dart>>,
        alpha: Vec<Dart>,
        surface: Surface,
        homology: Option<HomologyBasis>,
        embedding: Option<Embedding>,
    ) -> Result<Self> {
        let n = alpha.len();
        let mut sigma = vec![0; n];
        let mut sigma_inv = vec![0; n];
        let mut vertex_of = vec![0; n];
        for (v, rot) in vertex_darts.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                let s = rot[(i + 1) % rot.len()];
                sigma[d] = s;
                sigma_inv[s] = d;
                vertex_of[d] = v;
            }
        }
        // Face successor: reverse, then clockwise around the new origin.
        let mut face_darts = orbits(n, |d| sigma_inv[alpha[d]]);
        if n == 0 {
            face_darts.push(Vec::new());
        }
        let mut face_of = vec![0; n];
        for (f, orbit) in face_darts.iter().enumerate() {
            for &d in orbit {
                face_of[d] = f;
            }
        }
        let mut edge_of = vec![usize::MAX; n];
        let mut edge_darts = Vec::with_capacity(n / 2);
        for d in 0..n {
            if edge_of[d] == usize::MAX {
                edge_of[d] = edge_darts.len();
                edge_of[alpha[d]] = edge_darts.len();
                edge_darts.push([d, alpha[d]]);
            }
        }
        let mut map = CombinatorialMap {
            sigma,
            sigma_inv,
            alpha,
            surface,
            vertex_of,
            face_of,
            edge_of,
            vertex_darts,
            face_darts,
            edge_darts,
            homology,
            embedding: None,
            corner_offset: None,
            outer_face: None,
        };
        if !map.is_connected() {
            return Err(Error::MalformedRotation("map is disconnected".into()));
        }
        let chi = map.euler_characteristic();
        if chi != surface.euler_characteristic() {
            return Err(Error::EulerMismatch {
                computed: chi,
                expected: surface.euler_characteristic(),
            });
        }
        if let Some(emb) = embedding {
            map.attach_embedding(emb)?;
        }
        Ok(map)
    }

    fn is_connected(&self) -> bool {
        let n = self.num_darts();
        if n == 0 {
            return self.vertex_darts.len() == 1;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = queue.pop_front() {
            for next in [self.sigma[d], self.alpha[d]] {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    queue.push_back(next);
                }
            }
        }
        count == n
    }

    pub(crate) fn attach_embedding(&mut self, emb: Embedding) -> Result<()> {
        if emb.vertex_pos.len() != self.num_vertices() || emb.dart_disp.len() != self.num_darts() {
            return Err(Error::MalformedRotation("embedding size mismatch".into()));
        }
        // Face centroids from unwrapped boundary walks.
        let mut offset = vec![[0.0; 2]; self.num_darts()];
        let mut outer = None;
        for (f, boundary) in self.face_darts.iter().enumerate() {
            let mut pts = Vec::with_capacity(boundary.len());
            let mut p = [0.0, 0.0];
            for &d in boundary {
                pts.push(p);
                p = add(p, emb.dart_disp[d]);
            }
            let k = pts.len() as f64;
            let c = pts.iter().fold([0.0, 0.0], |acc, q| add(acc, *q));
            let c = [c[0] / k, c[1] / k];
            let mut area = 0.0;
            for i in 0..pts.len() {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                area += a[0] * b[1] - a[1] * b[0];
            }
            if area < -1e-12 && self.surface == Surface::Sphere {
                outer = Some(f);
            }
            for (i, &d) in boundary.iter().enumerate() {
                offset[d] = sub(c, pts[i]);
            }
        }
        self.outer_face = outer;
        self.corner_offset = Some(offset);
        self.embedding = Some(emb);
        Ok(())
    }

    pub fn num_darts(&self) -> usize {
        self.sigma.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_darts.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edge_darts.len()
    }
    pub fn num_faces(&self) -> usize {
        self.face_darts.len()
    }
    pub fn surface(&self) -> Surface {
        self.surface
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d]
    }
    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d]
    }
    pub fn alpha(&self, d: Dart) -> Dart {
        self.alpha[d]
    }
    /// Next dart along the counterclockwise boundary of the face left of `d`.
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma_inv[self.alpha[d]]
    }
    pub fn phi_inv(&self, d: Dart) -> Dart {
        self.alpha[self.sigma[d]]
    }
    pub fn origin(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }
    pub fn head(&self, d: Dart) -> usize {
        self.vertex_of[self.alpha[d]]
    }
    pub fn left_face(&self, d: Dart) -> usize {
        self.face_of[d]
    }
    pub fn right_face(&self, d: Dart) -> usize {
        self.face_of[self.alpha[d]]
    }
    pub fn edge(&self, d: Dart) -> usize {
        self.edge_of[d]
    }
    /// The two darts of an edge; the first is the edge's reference orientation.
    pub fn edge_darts(&self, e: usize) -> [Dart; 2] {
        self.edge_darts[e]
    }
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let d = self.edge_darts[e][0];
        (self.origin(d), self.head(d))
    }
    /// `+1.0` if `d` is the reference orientation of its edge, `-1.0` otherwise.
    pub fn orientation_sign(&self, d: Dart) -> f64 {
        if self.edge_darts[self.edge_of[d]][0] == d {
            1.0
        } else {
            -1.0
        }
    }
    /// Darts leaving `v` in counterclockwise order.
    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.vertex_darts[v]
    }
    /// Counterclockwise boundary of face `f`.
    pub fn face_boundary(&self, f: usize) -> &[Dart] {
        &self.face_darts[f]
    }
    pub fn degree(&self, v: usize) -> usize {
        self.vertex_darts[v].len()
    }
    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.vertex_darts
    }
    pub fn alpha_pairs(&self) -> Vec<(Dart, Dart)> {
        self.edge_darts.iter().map(|p| (p[0], p[1])).collect()
    }
    pub fn homology(&self) -> Option<&HomologyBasis> {
        self.homology.as_ref()
    }
    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }
    /// Face of a sphere embedding traversed clockwise (the unbounded face).
    pub fn outer_face(&self) -> Option<usize> {
        self.outer_face
    }
    /// Vector from `origin(d)` to the centroid of the face left of `d`.
    pub fn corner_offset(&self, d: Dart) -> Option<[f64; 2]> {
        self.corner_offset.as_ref().map(|o| o[d])
    }
    pub fn dart_disp(&self, d: Dart) -> Option<[f64; 2]> {
        self.embedding.as_ref().map(|e| e.dart_disp[d])
    }
    pub fn vertex_pos(&self, v: usize) -> Option<[f64; 2]> {
        self.embedding.as_ref().map(|e| e.vertex_pos[v])
    }
    /// Centroid of face `f`, unavailable for the outer face.
    pub fn face_pos(&self, f: usize) -> Option<[f64; 2]> {
        if Some(f) == self.outer_face {
            return None;
        }
        let d = self.face_darts[f][0];
        let p = self.vertex_pos(self.origin(d))?;
        Some(add(p, self.corner_offset(d)?))
    }

    /// True if some edge joins a vertex to itself.
    pub fn has_loop(&self) -> bool {
        (0..self.num_darts()).any(|d| self.origin(d) == self.head(d))
    }
    /// True if some edge has the same face on both sides (a loop of the dual).
    pub fn has_bridge(&self) -> bool {
        (0..self.num_darts()).any(|d| self.left_face(d) == self.right_face(d))
    }

    /// Checks that consecutive darts of `path` chain head to origin.
    pub fn check_path(&self, path: &[Dart]) -> Result<()> {
        for d in path {
            if *d >= self.num_darts() {
                return Err(Error::PathInvalid(format!("dart {d} out of range")));
            }
        }
        for w in path.windows(2) {
            if self.head(w[0]) != self.origin(w[1]) {
                return Err(Error::PathInvalid(format!(
                    "darts {} and {} do not chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
    pub fn is_closed_path(&self, path: &[Dart]) -> bool {
        self.check_path(path).is_ok()
            && !path.is_empty()
            && self.head(*path.last().unwrap()) == self.origin(path[0])
    }

    /// Shortest path of darts between two vertices (breadth-first).
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<Dart>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut via = vec![usize::MAX; self.num_vertices()];
        let mut seen = vec![false; self.num_vertices()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &d in self.rotation(v) {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    via[w] = d;
                    if w == to {
                        let mut path = vec![d];
                        let mut cur = v;
                        while cur != from {
                            let e = via[cur];
                            path.push(e);
                            cur = self.origin(e);
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

pub(crate) fn orbits(n: usize, next: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            orbit.push(d);
            d = next(d);
        }
        out.push(orbit);
    }
    out
}

pub(crate) fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}
pub(crate) fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}
