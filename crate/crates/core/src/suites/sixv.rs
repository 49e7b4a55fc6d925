use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Check;
use crate::error::Result;
use crate::planar_map::{bundled_graphs, grid_torus, torus_east, torus_north, Dart};
use crate::six_vertex::*;

pub(super) fn baxter() -> Result<Vec<Check>> {
    let r = baxter_check(&grid_torus(2, 2)?, 2.0)?;
    Ok(vec![
        Check::exact(
            "orientation sum = FK side (sqrt q contractible, 1 wrapping)",
            r.fk_error,
            1e-10,
        ),
        Check::exact(
            "orientation sum = FK side (sqrt q contractible, 2 wrapping)",
            r.fk_error_two_per_wrap,
            1e-10,
        ),
        Check::exact(
            "orientation sum = 6V weight, c = 2cos(pi s)",
            r.sixv_error,
            1e-10,
        ),
        Check::exact("c^2 = 2 + sqrt q", r.c_squared_residual, 1e-12),
    ])
}

pub(super) fn topological() -> Result<Vec<Check>> {
    let map = grid_torus(2, 2)?;
    let angles = [0.0, PI / 3.0, PI / 2.0];
    let mut out = Vec::new();
    for a in angles {
        for b in angles {
            let t = topological_observable(&map, 2.0, a, b, 1.0)?;
            let residual = (t.lhs - t.rhs).norm() / t.lhs.norm();
            out.push(Check::exact(
                format!("f/f0 = E_6V at ({a:.6}, {b:.6})"),
                residual,
                1e-8,
            ));
        }
    }
    Ok(out)
}

pub(super) fn heights() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (m, n) in [(2, 2), (2, 4)] {
        let map = grid_torus(m, n)?;
        let model = SixVertexModel::symmetric(map.clone(), 1.0, 1.0, 1.0)?;
        let rows: Vec<Vec<Dart>> = (0..n)
            .map(|j| map.push_off_left(&(0..m).map(|i| torus_east(m, n, i, j)).collect::<Vec<_>>()))
            .collect();
        let cols: Vec<Vec<Dart>> = (0..m)
            .map(|i| {
                map.push_off_left(&(0..n).map(|j| torus_north(m, n, i, j)).collect::<Vec<_>>())
            })
            .collect();
        let (mut closure, mut lattice, mut independence) = (0.0f64, 0.0f64, 0.0f64);
        let mut err = None;
        model.for_each_config(|c| match height_function(&map, c) {
            Ok(h) => {
                for v in 0..map.num_vertices() {
                    closure = closure.max(h.circulation(&map, v).abs());
                }
                let (pa, pb) = h.periods.unwrap_or((f64::NAN, f64::NAN));
                for p in [pa, pb] {
                    let x = p / PI;
                    lattice = lattice.max((x - x.round()).abs());
                }
                for r in &rows {
                    independence = independence.max((h.integrate(r) - pa).abs());
                }
                for col in &cols {
                    independence = independence.max((h.integrate(col) - pb).abs());
                }
            }
            Err(e) => err = Some(e),
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        out.push(Check::exact(
            format!("dJ = 0 at every vertex, {m}x{n} torus"),
            closure,
            1e-12,
        ));
        out.push(Check::exact(
            format!("periods in pi Z, {m}x{n} torus"),
            lattice,
            1e-12,
        ));
        out.push(Check::exact(
            format!("homologous dual cycles agree, {m}x{n} torus"),
            independence,
            1e-12,
        ));
    }
    Ok(out)
}

pub(super) fn free_fermion(seed: u64) -> Result<Vec<Check>> {
    let map = grid_torus(2, 2)?;
    let mut out = Vec::new();
    for (label, th) in [("pi/6", PI / 6.0), ("pi/4", PI / 4.0), ("pi/3", PI / 3.0)] {
        let r = sixv_dimer_partition_check(th, &map)?;
        out.push(Check::exact(
            format!("Z_dimer = Z_6V(cos, sin, 1), theta = {label}"),
            r.rel_error(),
            1e-10,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, g) in bundled_graphs()? {
        let unit = vec![1.0; g.num_edges()];
        let random: Vec<f64> = (0..g.num_edges())
            .map(|_| rng.random_range(0.2..3.0))
            .collect();
        let mut worst = 0.0f64;
        for w in [unit, random] {
            let det = kasteleyn_partition(&g, &w)?;
            let brute = matching_sum(&g, &w)?;
            worst = worst.max((det - brute).abs() / brute.max(1.0));
        }
        out.push(Check::exact(
            format!("|det K| = matching sum on {name}"),
            worst,
            1e-10,
        ));
    }
    Ok(out)
}
