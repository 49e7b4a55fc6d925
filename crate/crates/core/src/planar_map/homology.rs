use crate::error::{Error, Result};

use super::map::{CombinatorialMap, Dart, Surface};

/// Two closed dart sequences generating the first homology of a torus map,
/// oriented so that their algebraic intersection `A·B` is `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyBasis {
    pub cycle_a: Vec<Dart>,
    pub cycle_b: Vec<Dart>,
}

impl CombinatorialMap {
    /// The torus homology basis: the one stored at construction, or one
    /// computed by a tree/cotree decomposition.
    pub fn homology_basis(&self) -> Result<HomologyBasis> {
        if self.surface() != Surface::Torus {
            return Err(Error::NotATorus);
        }
        if let Some(h) = &self.homology {
            return Ok(h.clone());
        }
        self.tree_cotree_basis()
    }

    /// Replaces the stored homology basis after checking that both cycles are
    /// closed paths with intersection `A·B = +1`.
    pub fn with_homology(mut self, basis: HomologyBasis) -> Result<Self> {
        if self.surface() != Surface::Torus {
            return Err(Error::NotATorus);
        }
        for c in [&basis.cycle_a, &basis.cycle_b] {
            self.check_path(c)?;
            if !self.is_closed_path(c) {
                return Err(Error::PathInvalid("homology cycle is not closed".into()));
            }
        }
        let i = self.intersection(&basis.cycle_a, &basis.cycle_b);
        if i != 1 {
            return Err(Error::DegenerateMap(format!(
                "basis cycles intersect {i} times, expected +1"
            )));
        }
        self.homology = Some(basis);
        Ok(self)
    }

    /// Dual closed path running just left of the primal closed path `cycle`.
    /// Dual darts share indices with the primal darts they cross.
    pub fn push_off_left(&self, cycle: &[Dart]) -> Vec<Dart> {
        let k = cycle.len();
        let mut out = Vec::new();
        for i in 0..k {
            let incoming = cycle[i];
            let outgoing = cycle[(i + 1) % k];
            let mut e = self.sigma_inv(self.alpha(incoming));
            while e != outgoing {
                out.push(self.alpha(e));
                e = self.sigma_inv(e);
            }
        }
        out
    }

    /// Algebraic intersection of a primal path with a dual path: `+1` for every
    /// dual dart crossing a path dart from right to left.
    pub fn intersection_with_dual(&self, primal: &[Dart], dual: &[Dart]) -> i64 {
        let mut total = 0;
        for &p in primal {
            for &q in dual {
                if q == p {
                    total += 1;
                } else if q == self.alpha(p) {
                    total -= 1;
                }
            }
        }
        total
    }

    /// Algebraic intersection of two primal closed paths, via a push-off.
    pub fn intersection(&self, a: &[Dart], b: &[Dart]) -> i64 {
        self.intersection_with_dual(a, &self.push_off_left(b))
    }

    /// Periods of a closed path: its intersections with the dual push-offs of
    /// the basis, returned as coordinates `(m, n)` with `path ~ m·A + n·B`.
    pub fn homology_class(&self, path: &[Dart]) -> Result<(i64, i64)> {
        let h = self.homology_basis()?;
        // path·B = m (A·B) = m, and A·path = n (A·B) = n.
        let m = self.intersection(path, &h.cycle_b);
        let n = self.intersection(&h.cycle_a, path);
        Ok((m, n))
    }

    fn tree_cotree_basis(&self) -> Result<HomologyBasis> {
        let nv = self.num_vertices();
        let nf = self.num_faces();
        let ne = self.num_edges();
        // Breadth-first spanning tree of the primal graph.
        let mut in_tree = vec![false; ne];
        let mut parent_dart = vec![usize::MAX; nv];
        let mut seen = vec![false; nv];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &d in self.rotation(v) {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    parent_dart[w] = d;
                    in_tree[self.edge(d)] = true;
                    queue.push_back(w);
                }
            }
        }
        // Spanning tree of the dual avoiding primal tree edges.
        let mut in_cotree = vec![false; ne];
        let mut fseen = vec![false; nf];
        fseen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            for &d in self.face_boundary(f) {
                let e = self.edge(d);
                let g = self.right_face(d);
                if !in_tree[e] && !fseen[g] {
                    fseen[g] = true;
                    in_cotree[e] = true;
                    queue.push_back(g);
                }
            }
        }
        let leftover: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
        if leftover.len() != 2 {
            return Err(Error::DegenerateMap(format!(
                "tree/cotree left {} edges, expected 2",
                leftover.len()
            )));
        }
        let root_path = |v: usize| {
            let mut path = Vec::new();
            let mut cur = v;
            while cur != 0 {
                let d = parent_dart[cur];
                path.push(d);
                cur = self.origin(d);
            }
            path.reverse();
            path
        };
        let cycle_through = |e: usize| {
            let d = self.edge_darts(e)[0];
            let mut cycle = root_path(self.origin(d));
            cycle.push(d);
            let back: Vec<Dart> = root_path(self.head(d))
                .iter()
                .rev()
                .map(|&x| self.alpha(x))
                .collect();
            cycle.extend(back);
            simplify_closed(self, cycle)
        };
        let a = cycle_through(leftover[0]);
        let mut b = cycle_through(leftover[1]);
        match self.intersection(&a, &b) {
            1 => {}
            -1 => b = reverse_path(self, &b),
            other => {
                return Err(Error::DegenerateMap(format!(
                    "basis cycles intersect {other} times"
                )))
            }
        }
        Ok(HomologyBasis {
            cycle_a: a,
            cycle_b: b,
        })
    }
}

/// Reverses a dart path.
pub fn reverse_path(map: &CombinatorialMap, path: &[Dart]) -> Vec<Dart> {
    path.iter().rev().map(|&d| map.alpha(d)).collect()
}

/// Cancels immediate backtracks `d, alpha(d)` in a closed path, cyclically.
fn simplify_closed(map: &CombinatorialMap, path: Vec<Dart>) -> Vec<Dart> {
    let mut stack: Vec<Dart> = Vec::with_capacity(path.len());
    for d in path {
        if stack.last().is_some_and(|&t| map.alpha(t) == d) {
            stack.pop();
        } else {
            stack.push(d);
        }
    }
    while stack.len() >= 2 && map.alpha(stack[0]) == *stack.last().unwrap() {
        stack.remove(0);
        stack.pop();
    }
    stack
}
