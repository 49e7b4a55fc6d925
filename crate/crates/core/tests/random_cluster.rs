mod common;

use abelian_lattice::planar_map::{grid_patch, grid_torus, CombinatorialMap, PatchBoundary};
use abelian_lattice::random_cluster::*;
use abelian_lattice::spin_engine::{CorrelatorSpec, DefectLine};
use abelian_lattice::Error;
use common::{cycle, triangle};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_configs(ne: usize) -> impl Iterator<Item = FkConfig> {
    (0..1u64 << ne).map(move |m| FkConfig::from_mask(m, ne))
}

/// Component count by depth-first search.
fn dfs_components(map: &CombinatorialMap, cfg: &FkConfig) -> usize {
    let n = map.num_vertices();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &d in map.rotation(v) {
                let h = map.head(d);
                if cfg.open[map.edge(d)] && !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
    }
    count
}

/// Potts partition function by a direct spin sum, independent of the spin engine.
fn potts_direct(map: &CombinatorialMap, q: usize, w: &[f64]) -> f64 {
    let n = map.num_vertices();
    let mut total = 0.0;
    for idx in 0..q.pow(n as u32) {
        let s: Vec<usize> = (0..n).map(|v| idx / q.pow(v as u32) % q).collect();
        total += (0..map.num_edges())
            .map(|e| {
                let (a, b) = map.edge_endpoints(e);
                if s[a] == s[b] {
                    1.0 + w[e]
                } else {
                    1.0
                }
            })
            .product::<f64>();
    }
    total
}

fn single_edge() -> CombinatorialMap {
    common::path(2)
}

#[test]
fn single_edge_partition_by_hand() {
    let m = FkModel::uniform(single_edge(), 2.0, 1.0).unwrap();
    assert!((m.partition_function().unwrap() - 6.0).abs() < 1e-14);
    assert!((m.connectivity(0, 1).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    let (zp, zf, _) = m.potts_fk_identity().unwrap();
    assert!((zp - 6.0).abs() < 1e-12 && (zf - 6.0).abs() < 1e-12);
}

#[test]
fn empty_and_full_configuration_weights() {
    let m = FkModel::new(cycle(4), 2.5, vec![0.5, 1.5, 2.0, 3.0]).unwrap();
    assert!((m.weight(&FkConfig::from_mask(0, 4)) - 2.5f64.powi(4)).abs() < 1e-12);
    assert!((m.weight(&FkConfig::from_mask(15, 4)) - 2.5 * 4.5).abs() < 1e-12);
}

#[test]
fn union_find_matches_dfs() {
    let map = grid_patch(4, 4, PatchBoundary::free()).unwrap();
    let model = FkModel::uniform(map.clone(), 2.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let cfg = FkConfig {
            open: (0..map.num_edges()).map(|_| rng.random_bool(0.5)).collect(),
        };
        assert_eq!(model.cluster_count(&cfg), dfs_components(&map, &cfg));
    }
}

#[test]
fn potts_fk_equivalence_and_connectivity_identities() {
    for map in [triangle(), cycle(4)] {
        for q in [2usize, 3] {
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            let w: Vec<f64> = (0..map.num_edges())
                .map(|_| rng.random_range(0.2..3.0))
                .collect();
            let model = FkModel::new(map.clone(), q as f64, w.clone()).unwrap();
            let (zp, zf, _) = model.potts_fk_identity().unwrap();
            let direct = potts_direct(&map, q, &w);
            assert!((zp - zf).abs() <= 1e-10 * zf);
            assert!((direct - zf).abs() <= 1e-10 * zf);
            for v2 in 0..map.num_vertices() {
                let chk = model.spin_identity_check(0, v2).unwrap();
                assert!(chk.max_error() <= 1e-10, "q {q}, v2 {v2}: {chk:?}");
            }
        }
    }
}

#[test]
fn zero_weights_give_q_to_the_vertices() {
    let m = FkModel::uniform(triangle(), 3.0, 0.0).unwrap();
    let (zp, zf, _) = m.potts_fk_identity().unwrap();
    assert!((zf - 27.0).abs() < 1e-12 && (zp - 27.0).abs() < 1e-12);
}

#[test]
fn non_integer_q_rejected_for_potts() {
    let m = FkModel::uniform(triangle(), 2.5, 1.0).unwrap();
    assert!(matches!(m.potts_fk_identity(), Err(Error::NotInteger(_))));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cfg = FkConfig::from_mask(0, 3);
    assert!(matches!(
        edwards_sokal_sample(&m, &cfg, &mut rng),
        Err(Error::NotInteger(_))
    ));
}

#[test]
fn duality_holds_for_every_configuration() {
    let self_dual = FkModel::uniform(cycle(4), 2.0, 2f64.sqrt()).unwrap();
    let dual = self_dual.dual_model().unwrap();
    assert!(dual.weights.iter().all(|w| (w - 2f64.sqrt()).abs() < 1e-15));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let random = FkModel::new(
        triangle(),
        3.0,
        (0..3).map(|_| rng.random_range(0.2..3.0)).collect(),
    )
    .unwrap();
    for model in [self_dual, random] {
        let ne = model.map.num_edges();
        for cfg in all_configs(ne) {
            let (l, r) = model.duality_weight_check(&cfg).unwrap();
            assert!((l - r).abs() <= 1e-12 * l, "{cfg:?}");
        }
        let z = model.partition_function().unwrap();
        let zd = model.dual_model().unwrap().partition_function().unwrap();
        assert!((z - model.duality_prefactor() * zd).abs() <= 1e-12 * z);
    }
}

#[test]
fn dual_rejects_zero_weight_and_torus() {
    let m = FkModel::new(cycle(3), 2.0, vec![1.0, 0.0, 1.0]).unwrap();
    assert_eq!(m.dual_model().unwrap_err(), Error::ZeroWeightEdge(1));
    let t = FkModel::uniform(grid_torus(2, 2).unwrap(), 2.0, 1.0).unwrap();
    assert_eq!(t.dual_model().unwrap_err(), Error::NotPlanar);
}

#[test]
fn loop_count_identity_on_sphere_maps() {
    for map in [
        cycle(4),
        triangle(),
        grid_patch(3, 3, PatchBoundary::free()).unwrap(),
    ] {
        let lat = LoopLattice::new(&map).unwrap();
        for cfg in all_configs(map.num_edges()) {
            let (loops, c, cd) = lat.loop_count_check(&cfg).unwrap();
            assert_eq!(loops, c + cd - 1);
            let gas = lat.loop_representation(&cfg).unwrap();
            assert_eq!(lat.invert(&gas.included), cfg);
            assert_eq!(
                gas.loops.iter().map(|l| l.darts.len()).sum::<usize>(),
                lat.medial.num_vertices()
            );
        }
        let empty = FkConfig::from_mask(0, map.num_edges());
        assert_eq!(lat.loop_count_check(&empty).unwrap().0, map.num_vertices());
    }
}

/// Total turning of a closed medial loop from the embedded displacements.
fn turning(lat: &LoopLattice, l: &Loop) -> f64 {
    let emb = lat.medial.embedding().unwrap();
    let k = l.darts.len();
    (0..k)
        .map(|i| {
            let a = emb.dart_disp[l.darts[i]];
            let b = emb.dart_disp[l.darts[(i + 1) % k]];
            (Complex64::new(b[0], b[1]) / Complex64::new(a[0], a[1])).arg()
        })
        .sum()
}

#[test]
fn torus_loops_and_windings() {
    let map = grid_torus(2, 2).unwrap();
    let lat = LoopLattice::new(&map).unwrap();
    let full = FkConfig::from_mask(255, 8);
    assert_eq!(lat.loop_count_check(&full).unwrap(), (4, 1, 4));
    let mut violations = 0;
    for cfg in all_configs(8) {
        let gas = lat.loop_representation(&cfg).unwrap();
        let (loops, c, cd) = lat.loop_count_check(&cfg).unwrap();
        let wrapping = gas.num_contractible() < gas.num_loops();
        // Torus bookkeeping: one extra loop whenever some loop wraps.
        assert_eq!(loops, c + cd - 1 + wrapping as usize);
        violations += (loops != c + cd - 1) as usize;
        for l in &gas.loops {
            let t = turning(&lat, l);
            if l.is_contractible() {
                assert!((t.abs() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
            } else {
                assert!(t.abs() < 1e-9);
            }
        }
        assert_eq!(lat.invert(&gas.included), cfg);
    }
    assert!(violations > 0);
}

#[test]
fn loop_weight_is_proportional_to_fk_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let map = cycle(4);
    let w: Vec<f64> = (0..4).map(|_| rng.random_range(0.3..2.0)).collect();
    let model = FkModel::new(map.clone(), 3.0, w.clone()).unwrap();
    let lat = LoopLattice::new(&map).unwrap();
    let expected = w.iter().product::<f64>().sqrt() * 3f64.powf(4.0 / 2.0 - 4.0 / 4.0);
    for cfg in all_configs(4) {
        let gas = lat.loop_representation(&cfg).unwrap();
        let ratio = model.weight(&cfg) / lat.loop_weight(&model, &gas);
        assert!((ratio - expected).abs() < 1e-12 * expected);
    }
}

#[test]
fn edwards_sokal_exact_coupling() {
    for map in [single_edge(), triangle()] {
        for q in [2.0, 3.0] {
            let m = FkModel::uniform(map.clone(), q, 1.3).unwrap();
            let es = es_distribution_check(&m).unwrap();
            assert!(es.max_error() <= 1e-12);
        }
    }
    let m = FkModel::uniform(single_edge(), 2.0, 1.0).unwrap();
    let es = es_distribution_check(&m).unwrap();
    assert_eq!((es.joint.len(), es.joint[0].len()), (2, 4));
    // Potts law: aligned pairs have weight 2, the others 1, total 6.
    assert!((es.potts[0] - 1.0 / 3.0).abs() < 1e-15 && (es.potts[1] - 1.0 / 6.0).abs() < 1e-15);
}

#[test]
fn single_cluster_gets_one_spin() {
    let m = FkModel::uniform(triangle(), 3.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let s = edwards_sokal_sample(&m, &FkConfig::from_mask(7, 3), &mut rng).unwrap();
        assert!(s.iter().all(|&x| x == s[0]));
    }
}

#[test]
fn sampler_frequencies_within_four_sigma() {
    let m = FkModel::uniform(triangle(), 3.0, 0.8).unwrap();
    let es = es_distribution_check(&m).unwrap();
    let sampler = FkExactSampler::new(&m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 100_000;
    let mut counts = vec![0usize; es.potts.len()];
    for _ in 0..n {
        counts[spin_index(&sample_potts(&m, &sampler, &mut rng).unwrap(), 3)] += 1;
    }
    for (c, p) in counts.iter().zip(&es.potts) {
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((*c as f64 - n as f64 * p).abs() <= 4.0 * sigma);
    }
}

#[test]
fn winding_observable_trivial_cases() {
    let map = grid_patch(3, 3, PatchBoundary::free()).unwrap();
    let model = FkModel::uniform(map.clone(), 2.0, 1.0).unwrap();
    let d1 = corner_dart(&map, 0, map.left_face(map.rotation(0)[0])).unwrap();
    let d2 = corner_dart(&map, 8, map.left_face(map.rotation(8)[0])).unwrap();
    let dual = map.dual().unwrap();
    let gamma = dual
        .shortest_path(map.left_face(d1), map.left_face(d2))
        .unwrap();
    let obs = winding_observable(&model, d1, d2, 0.0, &gamma).unwrap();
    assert!(obs.im.abs() < 1e-15 && obs.re > 0.0 && obs.re < 1.0);
    // Zero weights: nothing connects.
    let zero = FkModel::uniform(map.clone(), 2.0, 0.0).unwrap();
    assert_eq!(
        winding_observable(&zero, d1, d2, 0.3, &gamma).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    assert!(matches!(
        winding_observable(&model, d1, d2, 0.0, &gamma[1..]),
        Err(Error::PathInvalid(_))
    ));
}

#[test]
fn winding_observable_matches_parafermion_modulus() {
    let map = grid_patch(3, 4, PatchBoundary::free()).unwrap();
    let dual = map.dual().unwrap();
    let outer = map.outer_face().unwrap();
    for (q, k, l, w) in [
        (2usize, 1usize, 1usize, 1.1),
        (3, 1, 1, 0.9),
        (3, 1, 2, 1.4),
    ] {
        let model = FkModel::uniform(map.clone(), q as f64, w).unwrap();
        let potts = model.potts_model().unwrap();
        let (v1, v2) = (1, 10);
        let d1 = map
            .rotation(v1)
            .iter()
            .copied()
            .find(|&d| map.left_face(d) != outer)
            .unwrap();
        let d2 = map
            .rotation(v2)
            .iter()
            .copied()
            .find(|&d| map.left_face(d) != outer)
            .unwrap();
        let (f1, f2) = (map.left_face(d1), map.left_face(d2));
        let gamma = dual.shortest_path(f1, f2).unwrap();
        let s = (k * l) as f64 / q as f64;
        let fk = winding_observable(&model, d1, d2, s, &gamma).unwrap();
        let spec = CorrelatorSpec {
            orders: vec![(v2, l), (v1, q - l)],
            disorders: vec![(f1, q - k), (f2, k)],
            defect_lines: vec![DefectLine {
                path: gamma.clone(),
                element: k,
            }],
            ..Default::default()
        };
        let spin = potts.disorder_correlator(&spec).unwrap();
        assert!(
            (fk.norm() - spin.norm()).abs() <= 1e-10 * spin.norm().max(1e-300),
            "q {q}: {fk} vs {spin}"
        );
        assert!(spin.norm() > 1e-6);
    }
}
