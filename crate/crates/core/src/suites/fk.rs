use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cycle, path, Check, Provenance};
use crate::error::Result;
use crate::planar_map::grid_torus;
use crate::random_cluster::*;

pub(super) fn potts_fk(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, map) in [("triangle", cycle(3)?), ("4-cycle", cycle(4)?)] {
        for q in [2.0, 3.0] {
            let w: Vec<f64> = (0..map.num_edges())
                .map(|_| rng.random_range(0.2..3.0))
                .collect();
            let model = FkModel::new(map.clone(), q, w)?;
            let (zp, zf, _) = model.potts_fk_identity()?;
            out.push(Check::exact(
                format!("Z_Potts = Z_FK on {name}, q = {q}"),
                (zp - zf).abs() / zf,
                1e-10,
            ));
            let mut worst = 0.0f64;
            for v2 in 0..map.num_vertices() {
                worst = worst.max(model.spin_identity_check(0, v2)?.max_error());
            }
            out.push(Check::exact(
                format!("two-point and covariance identities on {name}, q = {q}"),
                worst,
                1e-10,
            ));
        }
    }
    Ok(out)
}

pub(super) fn fk_duality(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let models = [
        (
            "4-cycle, q = 2, w = sqrt 2",
            FkModel::uniform(cycle(4)?, 2.0, 2f64.sqrt())?,
        ),
        (
            "triangle, q = 3, random w",
            FkModel::new(
                cycle(3)?,
                3.0,
                (0..3).map(|_| rng.random_range(0.2..3.0)).collect(),
            )?,
        ),
    ];
    let mut out = Vec::new();
    for (name, model) in models {
        let ne = model.map.num_edges();
        let mut worst = 0.0f64;
        for mask in 0..1u64 << ne {
            let (l, r) = model.duality_weight_check(&FkConfig::from_mask(mask, ne))?;
            worst = worst.max((l - r).abs() / l);
        }
        out.push(Check::exact(
            format!("every configuration, {name}"),
            worst,
            1e-12,
        ));
    }
    Ok(out)
}

pub(super) fn loop_count() -> Result<Vec<Check>> {
    let map = grid_torus(2, 2)?;
    let lat = LoopLattice::new(&map)?;
    let ne = map.num_edges();
    let (mut literal, mut corrected) = (0usize, 0usize);
    for mask in 0..1u64 << ne {
        let cfg = FkConfig::from_mask(mask, ne);
        let (loops, c, cd) = lat.loop_count_check(&cfg)?;
        let gas = lat.loop_representation(&cfg)?;
        let wraps = usize::from(gas.num_loops() > gas.num_contractible());
        literal += usize::from(loops + 1 != c + cd);
        corrected += usize::from(loops + 1 != c + cd + wraps);
    }
    Ok(vec![
        Check::exact("configs violating L = C + C_dual - 1", literal as f64, 0.0),
        Check::exact(
            "configs violating L = C + C_dual - 1 + [wrapping loop]",
            corrected as f64,
            0.0,
        ),
    ])
}

pub(super) fn edwards_sokal(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, map) in [("single edge", path(2)?), ("triangle", cycle(3)?)] {
        for q in [2.0, 3.0] {
            let es = es_distribution_check(&FkModel::uniform(map.clone(), q, 1.3)?)?;
            out.push(Check::exact(
                format!("exact marginals on {name}, q = {q}"),
                es.max_error(),
                1e-12,
            ));
        }
    }
    let m = FkModel::uniform(cycle(3)?, 3.0, 0.8)?;
    let es = es_distribution_check(&m)?;
    let sampler = FkExactSampler::new(&m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 100_000;
    let mut counts = vec![0usize; es.potts.len()];
    for _ in 0..n {
        counts[spin_index(&sample_potts(&m, &sampler, &mut rng)?, 3)] += 1;
    }
    let (mut worst, mut worst_se) = (0.0f64, 0.0f64);
    for (c, p) in counts.iter().zip(&es.potts) {
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let z = (*c as f64 - n as f64 * p).abs() / sigma;
        if z >= worst {
            worst = z;
            worst_se = sigma / n as f64;
        }
    }
    out.push(Check::new(
        "sampler frequencies on the triangle, q = 3 (sigmas)",
        worst,
        4.0,
        Provenance::Sampled {
            n,
            stderr: worst_se,
        },
    ));
    Ok(out)
}
