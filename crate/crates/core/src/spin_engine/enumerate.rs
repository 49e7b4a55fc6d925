use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on the number of elementary weight evaluations.
pub const DEFAULT_CAP: f64 = 1e8;

/// A sum over `q^n` spin assignments of a product of vertex and edge tables.
#[derive(Debug, Clone)]
pub(crate) struct FactorSum {
    pub q: usize,
    pub vertex: Vec<Vec<Complex64>>,
    /// `(a, b, table)` with `table[s_a * q + s_b]`.
    pub edges: Vec<(usize, usize, Vec<Complex64>)>,
    pub fixed: Vec<Option<usize>>,
}

struct Plan {
    order: Vec<usize>,
    /// edges closed when the vertex at this position is assigned
    closing: Vec<Vec<usize>>,
}

impl FactorSum {
    pub fn new(q: usize, nv: usize) -> Self {
        Self {
            q,
            vertex: vec![vec![Complex64::new(1.0, 0.0); q]; nv],
            edges: Vec::new(),
            fixed: vec![None; nv],
        }
    }

    fn plan(&self) -> Plan {
        let nv = self.vertex.len();
        let mut adj = vec![Vec::new(); nv];
        for (k, &(a, b, _)) in self.edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        // fixed vertices first, then breadth-first so edges close early
        let mut order = Vec::with_capacity(nv);
        let mut seen = vec![false; nv];
        let starts: Vec<usize> = (0..nv)
            .filter(|&v| self.fixed[v].is_some())
            .chain(0..nv)
            .collect();
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &(u, _) in &adj[v] {
                    if !seen[u] && self.fixed[u].is_none() {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        let mut pos = vec![0; nv];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut closing = vec![Vec::new(); nv];
        for (k, &(a, b, _)) in self.edges.iter().enumerate() {
            closing[pos[a].max(pos[b])].push(k);
        }
        Plan { order, closing }
    }

    pub fn work(&self) -> f64 {
        let free = self.fixed.iter().filter(|f| f.is_none()).count();
        (self.q as f64).powi(free as i32) * (self.edges.len() + self.vertex.len()).max(1) as f64
    }

    pub fn sum(&self, cap: f64) -> Result<Complex64> {
        let work = self.work();
        if work > cap {
            return Err(Error::TooLarge {
                required: work,
                cap,
            });
        }
        let plan = self.plan();
        let mut spins = vec![0usize; self.vertex.len()];
        if plan.order.is_empty() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let first = plan.order[0];
        let choices: Vec<usize> = match self.fixed[first] {
            Some(s) => vec![s],
            None => (0..self.q).collect(),
        };
        if work < 1e5 {
            return Ok(choices
                .iter()
                .map(|&s| {
                    spins[first] = s;
                    self.branch(&plan, 0, &mut spins, Complex64::new(1.0, 0.0))
                })
                .sum());
        }
        let parts: Vec<Complex64> = choices
            .par_iter()
            .map(|&s| {
                let mut spins = vec![0usize; self.vertex.len()];
                spins[first] = s;
                self.branch(&plan, 0, &mut spins, Complex64::new(1.0, 0.0))
            })
            .collect();
        Ok(parts.into_iter().sum())
    }

    /// `spins[order[i]]` is already set; multiply its factors and recurse.
    fn branch(&self, plan: &Plan, i: usize, spins: &mut [usize], acc: Complex64) -> Complex64 {
        let v = plan.order[i];
        let mut acc = acc * self.vertex[v][spins[v]];
        for &k in &plan.closing[i] {
            if acc == Complex64::new(0.0, 0.0) {
                break;
            }
            let (a, b, ref t) = self.edges[k];
            acc *= t[spins[a] * self.q + spins[b]];
        }
        if acc == Complex64::new(0.0, 0.0) {
            return acc;
        }
        if i + 1 == plan.order.len() {
            return acc;
        }
        let u = plan.order[i + 1];
        match self.fixed[u] {
            Some(s) => {
                spins[u] = s;
                self.branch(plan, i + 1, spins, acc)
            }
            None => {
                let mut total = Complex64::new(0.0, 0.0);
                for s in 0..self.q {
                    spins[u] = s;
                    total += self.branch(plan, i + 1, spins, acc);
                }
                total
            }
        }
    }
}
