#![allow(dead_code)]

use abelian_lattice::planar_map::{CombinatorialMap, Surface};

/// Cycle on `n` vertices, edge `k` from `k` to `k+1`.
pub fn cycle(n: usize) -> CombinatorialMap {
    let rot: Vec<Vec<usize>> = (0..n)
        .map(|v| vec![2 * v, 2 * ((v + n - 1) % n) + 1])
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n).map(|k| (2 * k, 2 * k + 1)).collect();
    CombinatorialMap::from_rotations(&rot, &pairs, Surface::Sphere).unwrap()
}

/// Path on `n` vertices, edge `k` from `k` to `k+1`.
pub fn path(n: usize) -> CombinatorialMap {
    let rot: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut r = Vec::new();
            if v + 1 < n {
                r.push(2 * v);
            }
            if v > 0 {
                r.push(2 * (v - 1) + 1);
            }
            r
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n - 1).map(|k| (2 * k, 2 * k + 1)).collect();
    CombinatorialMap::from_rotations(&rot, &pairs, Surface::Sphere).unwrap()
}

pub fn triangle() -> CombinatorialMap {
    cycle(3)
}

pub fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Some dart from `u` to `v`.
pub fn dart_between(map: &CombinatorialMap, u: usize, v: usize) -> usize {
    map.rotation(u)
        .iter()
        .copied()
        .find(|&d| map.head(d) == v)
        .expect("adjacent")
}
