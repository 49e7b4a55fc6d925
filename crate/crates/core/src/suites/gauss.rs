use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{path, Check, Provenance};
use crate::dgff::*;
use crate::error::Result;
use crate::planar_map::{grid_patch, grid_torus, PatchBoundary};

fn conductances(ne: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..ne).map(|_| rng.random_range(0.3..3.0)).collect()
}

fn torus_net(m: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<ConductanceNetwork> {
    let map = grid_torus(m, n)?;
    let c = conductances(map.num_edges(), rng);
    ConductanceNetwork::new(map, c, vec![])
}

fn random_form(ne: usize, rng: &mut ChaCha8Rng) -> Form1 {
    Form1 {
        values: (0..ne).map(|_| rng.random_range(-1.0..1.0)).collect(),
    }
}

pub(super) fn dgff(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let map = grid_patch(4, 4, PatchBoundary::free())?;
    let boundary = (0..map.num_vertices())
        .filter(|&v| map.degree(v) < 4)
        .collect();
    let c = conductances(map.num_edges(), &mut rng);
    let net = ConductanceNetwork::new(map, c, boundary)?;
    let g = net.green_kernel()?;
    let l = net.laplacian();
    let interior: Vec<usize> = (0..net.map.num_vertices())
        .filter(|&v| !net.is_boundary(v))
        .collect();
    let mut worst = 0.0f64;
    for &v in &interior {
        for &w in &interior {
            let lg: f64 = interior.iter().map(|&u| l[(v, u)] * g.get(u, w)).sum();
            worst = worst.max((lg - if v == w { 1.0 } else { 0.0 }).abs());
        }
    }
    out.push(Check::exact(
        "Laplacian times Green kernel = Id",
        worst,
        1e-12,
    ));

    let net = ConductanceNetwork::unit(path(3)?, vec![0, 2])?;
    let bv = [(0, 0.4), (2, -1.0)];
    let charges = [(1, 1.3)];
    let exact = net.characteristic_function(&bv, &charges)?;
    let n = 1_000_000;
    let (mc, se_re, se_im) = net.characteristic_function_mc(&bv, &charges, n, seed)?;
    let z = ((mc.re - exact.re) / se_re)
        .abs()
        .max(((mc.im - exact.im) / se_im).abs());
    out.push(Check::new(
        "characteristic function vs Monte Carlo on the 3-path (sigmas)",
        z,
        3.0,
        Provenance::Sampled {
            n,
            stderr: se_re.max(se_im),
        },
    ));

    let mut star = 0.0f64;
    for (m, n) in [(2, 2), (3, 4)] {
        let net = torus_net(m, n, &mut rng)?;
        let w = random_form(net.map.num_edges(), &mut rng);
        star = star.max(net.star_from_dual(&net.star(&w)).add(&w).max_abs());
    }
    out.push(Check::exact("star squared = -Id", star, 1e-10));

    let mut orth = 0.0f64;
    for net in [torus_net(3, 3, &mut rng)?, {
        let map = grid_patch(4, 3, PatchBoundary::free())?;
        let boundary = (0..map.num_vertices())
            .filter(|&v| map.degree(v) < 4)
            .collect();
        let c = conductances(map.num_edges(), &mut rng);
        ConductanceNetwork::new(map, c, boundary)?
    }] {
        let w = random_form(net.map.num_edges(), &mut rng);
        let h = net.hodge_decompose(&w)?;
        let parts = [&h.exact, &h.coexact, &h.harmonic];
        for i in 0..3 {
            for j in i + 1..3 {
                orth = orth.max(net.inner(parts[i], parts[j]).abs());
            }
        }
        orth = orth.max(h.exact.add(&h.coexact).add(&h.harmonic).sub(&w).max_abs());
    }
    out.push(Check::exact(
        "Hodge pieces orthogonal and complete",
        orth,
        1e-10,
    ));

    let mut bilinear = 0.0f64;
    for m in 2..=4 {
        for n in 2..=4 {
            let net = torus_net(m, n, &mut rng)?;
            let dual = net.dual()?;
            let hb = net.harmonic_basis()?;
            let hd = dual.harmonic_basis()?;
            for _ in 0..3 {
                let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
                let lhs = net.inner(
                    &hb.with_periods(a, b),
                    &net.star_dual(&hd.with_periods(c, d)),
                );
                bilinear = bilinear.max((lhs - (a * d - b * c)).abs());
            }
        }
    }
    out.push(Check::exact(
        "bilinear relation on tori up to 4x4",
        bilinear,
        1e-10,
    ));
    Ok(out)
}

pub(super) fn poisson_t_duality(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truncated = Provenance::Truncated { tail_bound: 1e-17 };
    let mut out = Vec::new();
    for (name, gram) in [("Z", 1.0), ("2Z", 4.0)] {
        let mut worst = 0.0f64;
        for t in [0.3, 1.0, 2.5] {
            let (l, r) = poisson_check(&DMatrix::from_element(1, 1, gram), t)?;
            worst = worst.max((l - r).abs() / l);
        }
        out.push(Check::new(
            format!("Poisson summation on {name}"),
            worst,
            1e-10,
            truncated,
        ));
    }
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let (a, b, s): (f64, f64, f64) = (
            rng.random_range(0.3..3.0),
            rng.random_range(0.3..3.0),
            rng.random_range(-0.9..0.9),
        );
        let off = s * (a * b).sqrt();
        let gram = Matrix2::new(a, off, off, b);
        let (l, r) = poisson_check(
            &DMatrix::from_column_slice(2, 2, gram.as_slice()),
            rng.random_range(0.2..3.0),
        )?;
        worst = worst.max((l - r).abs() / l);
    }
    out.push(Check::new(
        "Poisson summation on random 2x2 Gram lattices",
        worst,
        1e-10,
        truncated,
    ));
    let net = torus_net(2, 2, &mut rng)?;
    for r in [0.5, 1.0, 2.0] {
        let t = t_duality_check(&net, r, 1.0 / (2.0 * PI))?;
        out.push(Check::new(
            format!("Z_inst(r)/Z_inst_dual(1/r) = factor, r = {r}"),
            t.rel_error(),
            1e-10,
            truncated,
        ));
    }
    Ok(out)
}
