use std::f64::consts::PI;

use abelian_lattice::planar_map::*;
use abelian_lattice::random_cluster::{FkConfig, LoopLattice};
use abelian_lattice::six_vertex::*;
use abelian_lattice::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ice-rule filter over every orientation.
fn brute_force_configs(map: &CombinatorialMap) -> Vec<SixVertexConfig> {
    let ne = map.num_edges();
    (0..1u64 << ne)
        .map(|m| SixVertexConfig {
            forward: (0..ne).map(|e| m >> e & 1 == 1).collect(),
        })
        .filter(|c| {
            (0..map.num_vertices()).all(|v| {
                map.rotation(v)
                    .iter()
                    .filter(|&&d| c.is_out(map, d))
                    .count()
                    == 2
            })
        })
        .collect()
}

/// Out-pattern on (E, N, W, S) to type, written out independently.
fn local_type(o: [bool; 4]) -> usize {
    const TABLE: [(&str, usize); 6] = [
        ("OOII", 1),
        ("IIOO", 2),
        ("IOOI", 3),
        ("OIIO", 4),
        ("OIOI", 5),
        ("IOIO", 6),
    ];
    let s: String = o.iter().map(|&b| if b { 'O' } else { 'I' }).collect();
    TABLE
        .iter()
        .find(|(p, _)| *p == s)
        .map(|&(_, t)| t)
        .unwrap_or(0)
}

/// `Tr T^n` for the row-to-row transfer matrix of an `m × n` torus. Row
/// states record which vertical edges point up.
fn transfer_matrix_z(m: usize, n: usize, w: [f64; 6]) -> f64 {
    let states = 1usize << m;
    let mut t = DMatrix::<f64>::zeros(states, states);
    for s in 0..states {
        for s2 in 0..states {
            let mut total = 0.0;
            for h in 0..1usize << m {
                let mut prod = 1.0;
                for i in 0..m {
                    let im = (i + m - 1) % m;
                    let o = [
                        h >> i & 1 == 1,
                        s2 >> i & 1 == 1,
                        h >> im & 1 == 0,
                        s >> i & 1 == 0,
                    ];
                    let ty = local_type(o);
                    prod *= if ty == 0 { 0.0 } else { w[ty - 1] };
                }
                total += prod;
            }
            t[(s, s2)] = total;
        }
    }
    let mut p = DMatrix::<f64>::identity(states, states);
    for _ in 0..n {
        p = &p * &t;
    }
    p.trace()
}

#[test]
fn enumeration_matches_ice_filter() {
    for (m, n) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        let map = grid_torus(m, n).unwrap();
        let model = SixVertexModel::symmetric(map.clone(), 1.0, 1.0, 1.0).unwrap();
        let mut got = model.configs().unwrap();
        let mut want = brute_force_configs(&map);
        got.sort_by(|a, b| a.forward.cmp(&b.forward));
        want.sort_by(|a, b| a.forward.cmp(&b.forward));
        assert_eq!(got, want, "{m}x{n}");
    }
}

#[test]
fn partition_function_matches_transfer_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, n) in [(2, 2), (3, 2), (2, 3), (4, 2), (2, 4), (3, 3)] {
        let map = grid_torus(m, n).unwrap();
        for v in 0..map.num_vertices() {
            // transfer-matrix convention: rotation starts east and runs E, N, W, S
            let (i, j) = (v % m, v / m);
            assert_eq!(map.rotation(v)[0], torus_east(m, n, i, j));
            assert_eq!(map.rotation(v)[1], torus_north(m, n, i, j));
        }
        let w: [f64; 6] = std::array::from_fn(|_| rng.random_range(0.3..2.0));
        let model = SixVertexModel::new(map.clone(), vec![w; map.num_vertices()]).unwrap();
        let z = model.partition_function().unwrap();
        let oracle = transfer_matrix_z(m, n, w);
        assert!(
            (z - oracle).abs() < 1e-10 * oracle,
            "{m}x{n}: {z} vs {oracle}"
        );
    }
}

#[test]
fn reversal_pairs_types_and_keeps_weight() {
    let map = grid_torus(3, 2).unwrap();
    let model = SixVertexModel::symmetric(map.clone(), 0.7, 1.3, 1.9).unwrap();
    let partner = [0, 2, 1, 4, 3, 6, 5];
    let mut z = 0.0;
    let mut z_rev = 0.0;
    for c in model.configs().unwrap() {
        let r = c.reversed();
        for v in 0..map.num_vertices() {
            let t = vertex_type(&map, &c, v).unwrap();
            assert_eq!(vertex_type(&map, &r, v).unwrap(), partner[t]);
        }
        let (w, wr) = (model.weight(&c).unwrap(), model.weight(&r).unwrap());
        assert!((w - wr).abs() < 1e-14);
        z += w;
        z_rev += wr;
    }
    assert!((z - z_rev).abs() < 1e-12 * z);
}

/// Checkerboard circulation: black faces counterclockwise, white clockwise.
fn checkerboard_config(map: &CombinatorialMap) -> SixVertexConfig {
    let dual = map.dual().unwrap();
    let color = dual.is_bipartite().unwrap();
    let mut forward = vec![false; map.num_edges()];
    for f in 0..map.num_faces() {
        if !color[f] {
            for &d in map.face_boundary(f) {
                forward[map.edge(d)] = map.orientation_sign(d) > 0.0;
            }
        }
    }
    SixVertexConfig { forward }
}

#[test]
fn face_circulation_is_ice_valid_with_zero_periods() {
    let map = grid_torus(2, 2).unwrap();
    let model = SixVertexModel::symmetric(map.clone(), 1.0, 1.0, 1.0).unwrap();
    let c = checkerboard_config(&map);
    model.check_ice(&c).unwrap();
    let h = height_function(&map, &c).unwrap();
    assert_eq!(h.periods, Some((0.0, 0.0)));
}

#[test]
fn structural_errors() {
    assert!(matches!(grid_torus(1, 1), Err(Error::SizeTooSmall(_))));
    let patch = grid_patch(3, 3, PatchBoundary::free()).unwrap();
    assert!(matches!(
        SixVertexModel::symmetric(patch, 1.0, 1.0, 1.0),
        Err(Error::NotFourRegular)
    ));
    let map = grid_torus(2, 2).unwrap();
    let bad = SixVertexConfig {
        forward: vec![true; map.num_edges()],
    };
    let mut bad2 = bad.clone();
    bad2.forward[0] = false;
    assert!(matches!(
        height_function(&map, &bad2),
        Err(Error::InvalidIce(_))
    ));
    let tiny = SixVertexModel::symmetric(grid_torus(3, 3).unwrap(), 1.0, 1.0, 1.0)
        .unwrap()
        .with_cap(10.0);
    assert!(matches!(
        tiny.partition_function(),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn delta_and_coupling_values() {
    assert!((delta_param(1.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
    for th in [PI / 6.0, PI / 4.0, PI / 3.0] {
        assert!(delta_param(th.cos(), th.sin(), 1.0).unwrap().abs() < 1e-15);
    }
    let c = (2.0 + 2f64.sqrt()).sqrt();
    assert!((delta_param(1.0, 1.0, c).unwrap() + 2f64.sqrt() / 2.0).abs() < 1e-14);
    assert!(matches!(
        delta_param(0.0, 1.0, 1.0),
        Err(Error::DomainError(_))
    ));
    assert!((coupling_constant(2f64.sqrt()).unwrap() - 2.0).abs() < 1e-14);
    assert!((coupling_constant(1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    assert!(coupling_constant(1e-9).unwrap() < 1e-8);
    for c in [0.0, 2.0, -1.0, 3.0] {
        assert!(matches!(coupling_constant(c), Err(Error::DomainError(_))));
    }
}

fn octahedron() -> CombinatorialMap {
    let h = 3f64.sqrt() / 2.0;
    let pos = [
        [0.0, 2.0],
        [-2.0 * h, -1.0],
        [2.0 * h, -1.0],
        [0.0, -0.5],
        [0.5 * h, 0.25],
        [-0.5 * h, 0.25],
    ];
    let edges = [
        (0, 1),
        (1, 2),
        (2, 0),
        (3, 4),
        (4, 5),
        (5, 3),
        (0, 4),
        (0, 5),
        (1, 5),
        (1, 3),
        (2, 3),
        (2, 4),
    ];
    from_plane_drawing(&pos, &edges).unwrap()
}

#[test]
fn height_closure_and_periods() {
    // periods lie in πZ on even tori and in π/2 · (cycle length) + πZ otherwise
    for (map, lengths) in [
        (grid_torus(2, 2).unwrap(), (2.0, 2.0)),
        (grid_torus(4, 2).unwrap(), (4.0, 2.0)),
        (grid_torus(3, 2).unwrap(), (3.0, 2.0)),
        (octahedron(), (0.0, 0.0)),
    ] {
        let model = SixVertexModel::symmetric(map.clone(), 1.0, 1.0, 1.0).unwrap();
        let configs = model.configs().unwrap();
        assert!(!configs.is_empty());
        for c in &configs {
            let h = height_function(&map, c).unwrap();
            for v in 0..map.num_vertices() {
                assert!(h.circulation(&map, v).abs() < 1e-12);
            }
            for d in 0..map.num_darts() {
                let step = h.heights[map.left_face(d)] - h.heights[map.right_face(d)];
                let wrapped = map.surface() == Surface::Torus;
                if !wrapped {
                    assert!((step.abs() - PI / 2.0).abs() < 1e-12);
                }
                assert!((h.current[d].abs() - PI / 2.0).abs() < 1e-12);
            }
            match (map.surface(), h.periods) {
                (Surface::Sphere, None) => {}
                (Surface::Torus, Some((a, b))) => {
                    for (p, len) in [(a, lengths.0), (b, lengths.1)] {
                        let x = (p - len * PI / 2.0) / PI;
                        assert!((x - x.round()).abs() < 1e-12, "period {p}");
                    }
                }
                other => panic!("unexpected periods {other:?}"),
            }
        }
    }
}

#[test]
fn homologous_dual_paths_give_equal_integrals() {
    let (m, n) = (3, 2);
    let map = grid_torus(m, n).unwrap();
    let model = SixVertexModel::symmetric(map.clone(), 1.0, 1.0, 1.0).unwrap();
    let rows: Vec<Vec<Dart>> = (0..n)
        .map(|j| map.push_off_left(&(0..m).map(|i| torus_east(m, n, i, j)).collect::<Vec<_>>()))
        .collect();
    let cols: Vec<Vec<Dart>> = (0..m)
        .map(|i| map.push_off_left(&(0..n).map(|j| torus_north(m, n, i, j)).collect::<Vec<_>>()))
        .collect();
    for c in model.configs().unwrap() {
        let h = height_function(&map, &c).unwrap();
        let (pa, pb) = h.periods.unwrap();
        for r in &rows {
            assert!((h.integrate(r) - pa).abs() < 1e-12);
        }
        for col in &cols {
            assert!((h.integrate(col) - pb).abs() < 1e-12);
        }
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Total signed turning of a closed polygonal path given by its steps.
fn turning(steps: &[[f64; 2]]) -> f64 {
    (0..steps.len())
        .map(|i| {
            let (a, b) = (steps[i], steps[(i + 1) % steps.len()]);
            cross(a, b).atan2(a[0] * b[0] + a[1] * b[1])
        })
        .sum()
}

#[test]
fn quarter_turn_labels_match_geometry() {
    let map = grid_torus(2, 2).unwrap();
    let lat = LoopLattice::new(&map).unwrap();
    let emb = lat.medial.embedding().unwrap();
    let ne = map.num_edges();
    let mut contractible = 0;
    for mask in 0..1u64 << ne {
        let gas = lat
            .loop_representation(&FkConfig::from_mask(mask, ne))
            .unwrap();
        for lp in &gas.loops {
            let steps: Vec<[f64; 2]> = lp.darts.iter().map(|&x| emb.dart_disp[x]).collect();
            let geometric = turning(&steps);
            let (right, left) = lp.darts.iter().fold((0, 0), |(r, l), &x| {
                if BaxterLattice::is_right_turn(x) {
                    (r + 1, l)
                } else {
                    (r, l + 1)
                }
            });
            let combinatorial = PI / 2.0 * (left as f64 - right as f64);
            assert!(
                (geometric - combinatorial).abs() < 1e-9,
                "{geometric} vs {combinatorial}"
            );
            if lp.is_contractible() {
                contractible += 1;
                assert!((geometric.abs() - 2.0 * PI).abs() < 1e-9);
            } else {
                assert!(geometric.abs() < 1e-9);
            }
        }
    }
    assert!(contractible > 0);
}

#[test]
fn baxter_measure_projections() {
    let map = grid_torus(2, 2).unwrap();
    for q in [1.0, 2.0, 3.0] {
        let r = baxter_check(&map, q).unwrap();
        assert!((2.0 * (2.0 * PI * r.s).cos() - q.sqrt()).abs() < 1e-14);
        assert!(r.c_squared_residual < 1e-12);
        assert!(r.loop_sum_error < 1e-10, "q = {q}");
        assert!(r.sixv_error < 1e-10, "q = {q}");
        assert_eq!(
            r.sixv_configs,
            brute_force_configs(&BaxterLattice::new(&map).unwrap().sixv).len()
        );
        // forgetting orientations gives √q per contractible loop and 2 per
        // wrapping loop; the latter is not 1
        assert!(r.fk_error_two_per_wrap < 1e-10, "q = {q}");
        assert!(r.wrapping_configs > 0);
        assert!(r.fk_error > 1.0);
    }
    assert!((baxter_check(&map, 2.0).unwrap().c.powi(2) - (2.0 + 2f64.sqrt())).abs() < 1e-12);
    for q in [0.0, 4.0, 5.0, -1.0] {
        assert!(matches!(baxter_check(&map, q), Err(Error::QOutOfRange(_))));
    }
    assert!(matches!(
        baxter_check(&grid_patch(2, 2, PatchBoundary::free()).unwrap(), 2.0),
        Err(Error::NotATorus)
    ));
}

/// Wrapping-loop class from the cycle space of the open subgraph: the
/// classes of fundamental cycles span a rank-one lattice exactly when the
/// loops wrap, and its primitive generator is their class.
fn skeleton_class(map: &CombinatorialMap, cfg: &FkConfig) -> Option<(i64, i64)> {
    let nv = map.num_vertices();
    let mut parent: Vec<Option<Dart>> = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut tree = vec![false; map.num_edges()];
    for s in 0..nv {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &d in map.rotation(v) {
                let h = map.head(d);
                if cfg.open[map.edge(d)] && !seen[h] {
                    seen[h] = true;
                    parent[h] = Some(d);
                    tree[map.edge(d)] = true;
                    stack.push(h);
                }
            }
        }
    }
    let to_root = |mut v: usize| {
        let mut p = Vec::new();
        while let Some(d) = parent[v] {
            p.push(d);
            v = map.origin(d);
        }
        p.reverse();
        p
    };
    let mut classes = Vec::new();
    for e in (0..map.num_edges()).filter(|&e| cfg.open[e] && !tree[e]) {
        let d = map.edge_darts(e)[0];
        let mut cycle = to_root(map.origin(d));
        cycle.push(d);
        cycle.extend(to_root(map.head(d)).iter().rev().map(|&x| map.alpha(x)));
        classes.push(map.homology_class(&cycle).unwrap());
    }
    let nonzero: Vec<(i64, i64)> = classes.into_iter().filter(|&c| c != (0, 0)).collect();
    let &(a, b) = nonzero.first()?;
    if nonzero.iter().any(|&(c, d)| a * d - b * c != 0) {
        return None;
    }
    let g = gcd(a.abs(), b.abs());
    let (m, n) = (a / g, b / g);
    Some(if m < 0 || (m == 0 && n < 0) {
        (-m, -n)
    } else {
        (m, n)
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn wrapping_classes_match_cluster_skeletons() {
    for (m, n) in [(2, 2), (3, 2)] {
        let map = grid_torus(m, n).unwrap();
        let lat = LoopLattice::new(&map).unwrap();
        let ne = map.num_edges();
        for mask in 0..1u64 << ne {
            let cfg = FkConfig::from_mask(mask, ne);
            let gas = lat.loop_representation(&cfg).unwrap();
            let wraps: Vec<(i64, i64)> = gas
                .loops
                .iter()
                .filter(|l| !l.is_contractible())
                .map(|l| l.class.unwrap())
                .collect();
            let expected = skeleton_class(&map, &cfg);
            match expected {
                None => assert!(wraps.is_empty(), "mask {mask}"),
                Some(c) => {
                    assert!(!wraps.is_empty() && wraps.len() % 2 == 0, "mask {mask}");
                    for (a, b) in wraps {
                        assert!((a, b) == c || (-a, -b) == c, "mask {mask}");
                    }
                }
            }
        }
    }
}

/// Right-hand side by summing `ω` over the displacement of every arrow.
fn displacement_rhs(lat: &BaxterLattice, s: f64, alpha: f64, beta: f64) -> num_complex::Complex64 {
    let model = lat.sixv_model(s).unwrap();
    let emb = lat.sixv.embedding().unwrap();
    let [lx, ly] = emb.period.unwrap();
    let (mut num, mut z) = (num_complex::Complex64::new(0.0, 0.0), 0.0);
    for c in model.configs().unwrap() {
        let w = model.weight(&c).unwrap();
        let phase: f64 = c
            .darts(&lat.sixv)
            .iter()
            .map(|&d| alpha * emb.dart_disp[d][0] / lx + beta * emb.dart_disp[d][1] / ly)
            .sum();
        num += w * num_complex::Complex64::from_polar(1.0, phase);
        z += w;
    }
    num / z
}

#[test]
fn topological_observable_identity() {
    let map = grid_torus(2, 2).unwrap();
    let lat = BaxterLattice::new(&map).unwrap();
    for q in [2.0, 3.0, 1.0] {
        let s = baxter_s(q).unwrap();
        let zero = topological_observable(&map, q, 0.0, 0.0, 1.0).unwrap();
        assert!((zero.lhs - 1.0).norm() < 1e-12 && (zero.rhs - 1.0).norm() < 1e-12);
        for i in 0..5 {
            for j in 0..5 {
                let (a, b) = (-1.3 + 0.6 * i as f64, -1.1 + 0.55 * j as f64);
                let t = topological_observable(&map, q, a, b, 1.0).unwrap();
                assert!(
                    (t.lhs - t.rhs).norm() < 1e-8 * t.lhs.norm(),
                    "q={q} ({a},{b}): {t:?}"
                );
                assert!((t.rhs - displacement_rhs(&lat, s, a, b)).norm() < 1e-10);
                let neg = topological_observable(&map, q, -a, -b, 1.0).unwrap();
                assert!((neg.f - t.f).abs() < 1e-12);
            }
        }
    }
    let t = topological_observable(&map, 2.0, PI / 3.0, 0.0, 1.0).unwrap();
    assert!((t.lhs - t.rhs).norm() < 1e-8);
}

#[test]
fn free_fermion_bridge() {
    for (m, n) in [(2, 2), (2, 4)] {
        let map = grid_torus(m, n).unwrap();
        for th in [PI / 6.0, PI / 4.0, PI / 3.0] {
            let r = sixv_dimer_partition_check(th, &map).unwrap();
            assert!(r.rel_error() < 1e-10, "{m}x{n} θ={th}: {r:?}");
            assert!(r.fiber_error < 1e-10);
        }
    }
    let th = PI / 4.0;
    assert!((th.cos() - 2f64.sqrt() / 2.0).abs() < 1e-15);
    assert!(delta_param(th.cos(), th.sin(), 1.0).unwrap().abs() < 1e-15);
}

/// Weighted matching sum over every edge subset.
fn subset_matching_sum(map: &CombinatorialMap, weights: &[f64]) -> (usize, f64) {
    let ne = map.num_edges();
    let (mut count, mut total) = (0, 0.0);
    for mask in 0..1u64 << ne {
        if mask.count_ones() as usize * 2 != map.num_vertices() {
            continue;
        }
        let mut cover = vec![0; map.num_vertices()];
        let mut w = 1.0;
        for e in (0..ne).filter(|&e| mask >> e & 1 == 1) {
            let (a, b) = map.edge_endpoints(e);
            cover[a] += 1;
            cover[b] += 1;
            w *= weights[e];
        }
        if cover.iter().all(|&c| c == 1) {
            count += 1;
            total += w;
        }
    }
    (count, total)
}

#[test]
fn matchings_match_subset_enumeration() {
    let map = grid_torus(2, 2).unwrap();
    let dg = DimerGraph::new(&map).unwrap();
    let w = dg.weights(0.4);
    let (count, total) = subset_matching_sum(&dg.graph, &w);
    assert_eq!(enumerate_matchings(&dg.graph, &[]).unwrap().len(), count);
    assert!((matching_sum(&dg.graph, &w).unwrap() - total).abs() < 1e-12 * total);
    let partial = DimerMatching { edges: vec![0] };
    assert!(matches!(
        dg.dimer_to_6v(&partial),
        Err(Error::NotPerfectMatching)
    ));
}

#[test]
fn kasteleyn_matches_enumeration_on_bundled_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let graphs = bundled_graphs().unwrap();
    for (name, map) in &graphs {
        assert!(
            map.num_vertices() <= 12 && map.surface() == Surface::Sphere,
            "{name}"
        );
        for _ in 0..3 {
            let w: Vec<f64> = (0..map.num_edges())
                .map(|_| rng.random_range(0.2..3.0))
                .collect();
            let det = kasteleyn_partition(map, &w).unwrap();
            let (_, brute) = subset_matching_sum(map, &w);
            assert!(
                (det - brute).abs() <= 1e-10 * brute.max(1.0),
                "{name}: {det} vs {brute}"
            );
        }
    }
    let unit = |m: &CombinatorialMap| vec![1.0; m.num_edges()];
    let c4 = bundled_graph("cycle4").unwrap();
    assert!((kasteleyn_partition(&c4, &unit(&c4)).unwrap() - 2.0).abs() < 1e-12);
    let g23 = bundled_graph("grid2x3").unwrap();
    assert!((kasteleyn_partition(&g23, &unit(&g23)).unwrap() - 3.0).abs() < 1e-12);
    // diagonal 4-cycle, cos θ on SW–NE edges and sin θ on the others
    let th: f64 = 0.7;
    let sq = from_plane_drawing(
        &[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
    )
    .unwrap();
    let w: Vec<f64> = [(-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (1.0, 1.0)]
        .iter()
        .map(|&(dx, dy): &(f64, f64)| if dx * dy > 0.0 { th.cos() } else { th.sin() })
        .collect();
    assert!((kasteleyn_partition(&sq, &w).unwrap() - 1.0).abs() < 1e-12);
    let torus = grid_torus(2, 2).unwrap();
    assert!(matches!(
        kasteleyn_partition(&torus, &unit(&torus)),
        Err(Error::NotPlanar)
    ));
    let tri = from_plane_drawing(
        &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        &[(0, 1), (1, 2), (2, 0)],
    )
    .unwrap();
    assert!(matches!(
        kasteleyn_partition(&tri, &unit(&tri)),
        Err(Error::NotBipartite)
    ));
}

#[test]
fn monomer_defects_match_split_edges() {
    for (m, n) in [(2, 2), (2, 4)] {
        let map = grid_torus(m, n).unwrap();
        let dg = DimerGraph::new(&map).unwrap();
        for th in [0.3, PI / 4.0] {
            let mut nonzero = 0;
            for b in (0..dg.black.len()).filter(|&e| dg.black[e]) {
                for w in (0..dg.black.len()).filter(|&e| !dg.black[e]) {
                    let r = monomer_defect_check(&map, th, b, w).unwrap();
                    assert!(
                        (r.z_dimer - r.z_6v).abs() < 1e-10 * r.z_dimer.max(1.0),
                        "{m}x{n} ({b},{w}): {r:?}"
                    );
                    nonzero += usize::from(r.z_dimer > 0.0);
                }
            }
            assert!(nonzero > 0);
        }
    }
    let map = grid_torus(2, 2).unwrap();
    let dg = DimerGraph::new(&map).unwrap();
    let b = dg.black.iter().position(|&x| x).unwrap();
    assert!(matches!(
        monomer_defect_check(&map, 0.3, b, b),
        Err(Error::SpecInvalid(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_fermion_any_angle(th in 0.05f64..1.5) {
        let r = sixv_dimer_partition_check(th, &grid_torus(2, 2).unwrap()).unwrap();
        prop_assert!(r.rel_error() < 1e-10);
    }

    #[test]
    fn topological_identity_any_angles(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let t = topological_observable(&grid_torus(2, 2).unwrap(), 2.0, a, b, 1.0).unwrap();
        prop_assert!((t.lhs - t.rhs).norm() < 1e-8 * t.lhs.norm().max(1e-3));
    }

    #[test]
    fn kasteleyn_any_weights(seed in any::<u64>(), k in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = bundled_graph(BUNDLED_NAMES[k]).unwrap();
        let w: Vec<f64> = (0..map.num_edges()).map(|_| rng.random_range(0.1..5.0)).collect();
        let det = kasteleyn_partition(&map, &w).unwrap();
        let brute = matching_sum(&map, &w).unwrap();
        prop_assert!((det - brute).abs() <= 1e-10 * brute.max(1.0));
    }

    #[test]
    fn symmetric_weights_are_reversal_invariant(a in 0.1f64..3.0, b in 0.1f64..3.0, c in 0.1f64..3.0) {
        let model = SixVertexModel::symmetric(grid_torus(2, 2).unwrap(), a, b, c).unwrap();
        for cfg in model.configs().unwrap() {
            prop_assert!((model.weight(&cfg).unwrap() - model.weight(&cfg.reversed()).unwrap()).abs() < 1e-12);
        }
    }
}
