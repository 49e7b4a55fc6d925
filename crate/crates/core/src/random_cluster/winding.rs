use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::loops::{primal_clusters, LoopLattice};
use super::model::{FkConfig, FkModel};
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart, Surface};

/// A dart leaving `v` with `f` on its left, i.e. the corner `(v, f)`.
pub fn corner_dart(map: &CombinatorialMap, v: usize, f: usize) -> Result<Dart> {
    map.rotation(v)
        .iter()
        .copied()
        .find(|&d| map.left_face(d) == f)
        .ok_or(Error::NotAdjacent)
}

fn check_dual_path(map: &CombinatorialMap, path: &[Dart], from: usize, to: usize) -> Result<()> {
    if path.iter().any(|&x| x >= map.num_darts()) {
        return Err(Error::PathInvalid("dart out of range".into()));
    }
    let (start, end) = match (path.first(), path.last()) {
        (Some(&a), Some(&b)) => (map.right_face(a), map.left_face(b)),
        _ => (from, from),
    };
    if start != from || end != to {
        return Err(Error::PathInvalid(format!(
            "dual path does not run from face {from} to face {to}"
        )));
    }
    if path
        .windows(2)
        .any(|w| map.left_face(w[0]) != map.right_face(w[1]))
    {
        return Err(Error::PathInvalid("dual darts do not chain".into()));
    }
    Ok(())
}

/// Open-edge dart path from `a` to `b`, if any.
fn cluster_path(
    map: &CombinatorialMap,
    config: &FkConfig,
    a: usize,
    b: usize,
) -> Option<Vec<Dart>> {
    let mut prev: Vec<Option<Dart>> = vec![None; map.num_vertices()];
    let mut seen = vec![false; map.num_vertices()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut path = Vec::new();
            let mut x = b;
            while x != a {
                let d = prev[x].unwrap();
                path.push(d);
                x = map.origin(d);
            }
            path.reverse();
            return Some(path);
        }
        for &d in map.rotation(v) {
            let h = map.head(d);
            if config.open[map.edge(d)] && !seen[h] {
                seen[h] = true;
                prev[h] = Some(d);
                queue.push_back(h);
            }
        }
    }
    None
}

/// `⟨1_{(v1f1) ↔ (v2f2)} exp(2is ∫_γ dh)⟩` in the FK measure, with the
/// corners given as darts and `γ` a dual path from `f1` to `f2`. Along `γ`,
/// `∫ dh = πn` with `n` the signed crossing number of `γ` with any cluster
/// path from `v1` to `v2`.
pub fn winding_observable(
    model: &FkModel,
    corner1: Dart,
    corner2: Dart,
    s: f64,
    gamma: &[Dart],
) -> Result<Complex64> {
    let map = &model.map;
    if map.surface() != Surface::Sphere {
        return Err(Error::NotPlanar);
    }
    if corner1 >= map.num_darts() || corner2 >= map.num_darts() {
        return Err(Error::PathInvalid("corner dart out of range".into()));
    }
    let (v1, f1) = (map.origin(corner1), map.left_face(corner1));
    let (v2, f2) = (map.origin(corner2), map.left_face(corner2));
    check_dual_path(map, gamma, f1, f2)?;
    let lattice = LoopLattice::new(map)?;
    let m1 = lattice.diamond.edge(2 * corner1);
    let m2 = lattice.diamond.edge(2 * corner2);
    let z = model.partition_function()?;
    let num = model.enumerate_sum(Complex64::new(0.0, 0.0), |cfg| {
        let Ok(gas) = lattice.loop_representation(cfg) else {
            return Complex64::new(f64::NAN, 0.0);
        };
        let loop_at = |mv: usize| {
            lattice
                .medial
                .rotation(mv)
                .iter()
                .find_map(|&x| gas.loop_of_edge[lattice.medial.edge(x)])
        };
        if loop_at(m1).is_none() || loop_at(m1) != loop_at(m2) {
            return Complex64::new(0.0, 0.0);
        }
        let mut dsu = primal_clusters(map, cfg);
        debug_assert_eq!(dsu.find(v1), dsu.find(v2));
        let path = cluster_path(map, cfg, v1, v2).unwrap_or_default();
        let n = map.intersection_with_dual(&path, gamma) as f64;
        Complex64::from_polar(model.weight(cfg), 2.0 * s * PI * n)
    })?;
    if num.re.is_nan() {
        return Err(Error::DegenerateMap(
            "loop configuration is not 2-regular".into(),
        ));
    }
    Ok(num / z)
}
