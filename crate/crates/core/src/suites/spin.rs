use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cycle, dart_between, rel, Check};
use crate::abelian_groups::{
    check_self_dual, fz_weight, self_dual_potts_weight, FiniteAbelianGroup, WeightFunction,
};
use crate::error::Result;
use crate::planar_map::{grid_patch, grid_torus, PatchBoundary};
use crate::spin_engine::*;

pub(super) fn kramers_wannier(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maps = [
        ("4-cycle", cycle(4)?),
        ("triangle", cycle(3)?),
        ("3x3 free patch", grid_patch(3, 3, PatchBoundary::free())?),
    ];
    let mut out = Vec::new();
    for (name, map) in maps {
        let k: Vec<f64> = (0..map.num_edges())
            .map(|_| rng.random_range(0.05..1.5))
            .collect();
        let model = SpinModel::ising(map, &k)?;
        let z = model.partition_function()?;
        out.push(Check::exact(
            format!("Z = KW dual side on {name}"),
            rel(z, ising_kw_rhs(&model)?),
            1e-10,
        ));
    }
    Ok(out)
}

fn random_symmetric_positive(
    g: &FiniteAbelianGroup,
    rng: &mut ChaCha8Rng,
) -> Result<WeightFunction> {
    let mut v = vec![0.0; g.order()];
    for x in 0..g.order() {
        let y = g.neg(x);
        if y >= x {
            let r = rng.random_range(0.2..2.0);
            v[x] = r;
            v[y] = r;
        }
    }
    WeightFunction::from_real(g.clone(), &v)
}

pub(super) fn abelian_prefactor(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stated = 0.0f64;
    let mut derived = 0.0f64;
    for factors in [vec![2], vec![3], vec![4], vec![2, 2]] {
        let g = FiniteAbelianGroup::new(&factors)?;
        for map in [
            cycle(3)?,
            cycle(4)?,
            grid_patch(2, 3, PatchBoundary::free())?,
        ] {
            let ws = (0..map.num_edges())
                .map(|_| random_symmetric_positive(&g, &mut rng))
                .collect::<Result<_>>()?;
            let model = SpinModel::new(map, g.clone(), ws)?;
            let dual = kw_dual_model(&model)?;
            let (z, zd) = (model.partition_function()?, dual.partition_function()?);
            stated = stated.max(rel(
                z,
                zd * kw_prefactor(&model, kw_prefactor_exponent(&model)),
            ));
            derived = derived.max(rel(
                z,
                zd * kw_prefactor(&model, kw_prefactor_exponent_derived(&model)),
            ));
        }
    }
    Ok(vec![
        Check::exact("Z = |G|^(|V|-|E|/2+1) Z_dual", stated, 1e-10),
        Check::exact("Z = |G|^(|V|-|E|/2-1) Z_dual", derived, 1e-10),
    ])
}

pub(super) fn dft_fixed_points() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for q in 2..=6 {
        out.push(Check::exact(
            format!("Potts a = sqrt(q), q = {q}"),
            check_self_dual(&self_dual_potts_weight(q)?),
            1e-12,
        ));
    }
    for r in 2..=7 {
        out.push(Check::exact(
            format!("FZ theta = pi/4, r' = {r}"),
            check_self_dual(&fz_weight(r, PI / 4.0)?),
            1e-12,
        ));
    }
    let w = fz_weight(2, PI / 4.0)?;
    out.push(Check::exact(
        "FZ r' = 2 value sqrt(2) - 1",
        (w.values[1].re - (2f64.sqrt() - 1.0)).abs(),
        1e-14,
    ));
    Ok(out)
}

pub(super) fn order_disorder() -> Result<Vec<Check>> {
    let map = grid_torus(2, 2)?;
    let ne = map.num_edges();
    let model = SpinModel::ising(map.clone(), &vec![0.45; ne])?;
    let dual_model = kw_dual_model(&model)?;
    let face_of_vertex = |v: usize| dual_model.map.left_face(map.rotation(v)[0]);
    let (v1, v2, f1, f2) = (0, 3, 0, 2);
    let primal = CorrelatorSpec {
        orders: vec![(v1, 1), (v2, 1)],
        disorders: vec![(f1, 1), (f2, 1)],
        ..Default::default()
    };
    let dual = CorrelatorSpec {
        orders: vec![(f1, 1), (f2, 1)],
        disorders: vec![(face_of_vertex(v1), 1), (face_of_vertex(v2), 1)],
        sectors: Sectors::AllPeriods,
        ..Default::default()
    };
    let a = model.disorder_correlator(&primal)?;
    let b = dual_model.disorder_correlator(&dual)?;
    Ok(vec![Check::exact(
        "|<s s m m>| primal vs dual",
        (a.norm() - b.norm()).abs(),
        1e-10,
    )])
}

pub(super) fn parafermionic() -> Result<Vec<Check>> {
    let map = grid_patch(3, 4, PatchBoundary::free())?;
    let mut out = Vec::new();
    for r in [2, 3] {
        let model = SpinModel::uniform(map.clone(), fz_weight(r, PI / 4.0)?)?;
        let g = &model.group;
        let d = dart_between(&map, 4, 7)?;
        let fp = map.left_face(d);
        let spectator_face = map.left_face(dart_between(&map, 0, 1)?);
        let gamma = map
            .dual()?
            .shortest_path(spectator_face, fp)
            .ok_or_else(|| crate::Error::SpecInvalid("dual map disconnected".into()))?;
        let spectators = CorrelatorSpec {
            orders: vec![(11, g.neg(1))],
            disorders: vec![(spectator_face, g.neg(1))],
            ..Default::default()
        };
        let k = ParafermionCoeffs::fateev_zamolodchikov(r, PI / 4.0);
        let vals = parafermion_quadruple(&model, d, (1, 1), &spectators, &gamma)?;
        let residual = if vals.f_vf.norm() > 1e-8 {
            vals.residual(&k)
        } else {
            f64::INFINITY
        };
        out.push(Check::exact(
            format!("four-point relation, FZ r' = {r}"),
            residual,
            1e-8,
        ));
    }
    Ok(out)
}
