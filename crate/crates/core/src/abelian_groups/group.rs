use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z/q1 × … × Z/qk`. Elements are addressed by a mixed-radix index with the
/// last factor varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FiniteAbelianGroup {
    factors: Vec<usize>,
    #[serde(skip)]
    add: Vec<usize>,
    #[serde(skip)]
    neg: Vec<usize>,
}

/// Residue vector of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement(pub Vec<usize>);

impl TryFrom<Vec<usize>> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(f: Vec<usize>) -> Result<Self> {
        Self::new(&f)
    }
}

impl From<FiniteAbelianGroup> for Vec<usize> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.factors
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&q| q < 2) {
            return Err(Error::DomainError(format!(
                "group factors must be >= 2, got {factors:?}"
            )));
        }
        let n: usize = factors.iter().product();
        let mut g = FiniteAbelianGroup {
            factors: factors.to_vec(),
            add: Vec::new(),
            neg: Vec::new(),
        };
        let elems: Vec<Vec<usize>> = (0..n).map(|i| g.residues(i)).collect();
        g.add = (0..n * n)
            .map(|k| {
                let (a, b) = (&elems[k / n], &elems[k % n]);
                let r: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(j, &q)| (a[j] + b[j]) % q)
                    .collect();
                g.index_of(&r)
            })
            .collect();
        g.neg = elems
            .iter()
            .map(|a| {
                let r: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(j, &q)| (q - a[j]) % q)
                    .collect();
                g.index_of(&r)
            })
            .collect();
        Ok(g)
    }

    pub fn cyclic(q: usize) -> Result<Self> {
        Self::new(&[q])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.neg.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn residues(&self, index: usize) -> Vec<usize> {
        let mut r = vec![0; self.factors.len()];
        let mut x = index;
        for j in (0..self.factors.len()).rev() {
            r[j] = x % self.factors[j];
            x /= self.factors[j];
        }
        r
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement(self.residues(index))
    }

    pub fn index_of(&self, residues: &[usize]) -> usize {
        residues
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&r, &q)| acc * q + r % q)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `χ_k(g) = exp(2πi Σ g_j k_j / q_j)`; the dual group is identified with
    /// the group itself through the index `k`.
    pub fn character(&self, k: usize, g: usize) -> Complex64 {
        let (a, b) = (self.residues(k), self.residues(g));
        let phase: f64 = self
            .factors
            .iter()
            .enumerate()
            .map(|(j, &q)| ((a[j] * b[j]) % q) as f64 / q as f64)
            .sum();
        Complex64::from_polar(1.0, 2.0 * PI * phase)
    }

    /// Full character table, `table[k * n + g] = χ_k(g)`.
    pub fn character_table(&self) -> Vec<Complex64> {
        let n = self.order();
        (0..n * n).map(|i| self.character(i / n, i % n)).collect()
    }

    /// Group automorphisms, as index permutations. Only enumerated for small
    /// groups, by brute force over images of the generators.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let k = self.factors.len();
        let gens: Vec<usize> = (0..k)
            .map(|j| {
                let mut r = vec![0; k];
                r[j] = 1;
                self.index_of(&r)
            })
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            if let Some(p) = self.extend_hom(&gens, &choice) {
                out.push(p);
            }
            let mut j = 0;
            while j < k {
                choice[j] += 1;
                if choice[j] < n {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
        out
    }

    fn extend_hom(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        for (j, (&g, &img)) in gens.iter().zip(images).enumerate() {
            // the image must have order dividing q_j
            let mut x = 0;
            for _ in 0..self.factors[j] {
                x = self.add(x, img);
            }
            if x != 0 {
                return None;
            }
            let _ = g;
        }
        for (i, slot) in map.iter_mut().enumerate() {
            let r = self.residues(i);
            let mut x = 0;
            for (j, &rj) in r.iter().enumerate() {
                for _ in 0..rj {
                    x = self.add(x, images[j]);
                }
            }
            *slot = x;
        }
        let mut seen = vec![false; n];
        for &x in &map {
            if seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(map)
    }
}
