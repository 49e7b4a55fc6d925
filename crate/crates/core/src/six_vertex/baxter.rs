use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::height::{geometric_periods, height_function};
use super::model::{SixVertexConfig, SixVertexModel};
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart, Surface};
use crate::random_cluster::{FkConfig, LoopGasConfig, LoopLattice};

/// `s ∈ (0, 1/4)` with `2cos(2πs) = √q`, for `0 < q < 4`.
pub fn baxter_s(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 4.0) {
        return Err(Error::QOutOfRange(q));
    }
    Ok((q.sqrt() / 2.0).acos() / (2.0 * PI))
}

/// Loop lattice of a torus map together with the six-vertex lattice
/// `dual(◊)` on which oriented loops project.
#[derive(Debug, Clone)]
pub struct BaxterLattice {
    pub loops: LoopLattice,
    /// Six-vertex lattice: one vertex per quadrilateral of ◊, one edge per
    /// diamond edge.
    pub sixv: CombinatorialMap,
    /// Its dual, carrying the height function.
    pub sixv_dual: CombinatorialMap,
}

/// A loop gas with one orientation per loop; `true` keeps the traced
/// direction.
#[derive(Debug, Clone)]
pub struct OrientedLoopConfig<'a> {
    pub gas: &'a LoopGasConfig,
    pub orientation: Vec<bool>,
}

impl BaxterLattice {
    pub fn new(map: &CombinatorialMap) -> Result<Self> {
        if map.surface() != Surface::Torus {
            return Err(Error::NotATorus);
        }
        let loops = LoopLattice::new(map)?;
        let sixv = loops.diamond.dual()?;
        let sixv_dual = sixv.dual()?;
        Ok(Self {
            loops,
            sixv,
            sixv_dual,
        })
    }

    /// Medial dart `2δ` turns right around the corner `head(δ)` of its
    /// quadrilateral; `2δ + 1` turns left.
    pub fn is_right_turn(medial_dart: Dart) -> bool {
        medial_dart % 2 == 0
    }

    /// Diamond edge whose midpoint ends medial dart `x`, and the six-vertex
    /// dart the loop crosses it along.
    fn crossing(&self, x: Dart) -> Dart {
        let dia = &self.loops.diamond;
        let delta = x / 2;
        // the segment runs inside the face left of δ, between δ and φ(δ)
        let end = if x % 2 == 0 { dia.phi(delta) } else { delta };
        // leaving the quadrilateral on the left of `end` across `end`
        dia.alpha(end)
    }

    /// `exp(isπ/2 (R − L))` times `exp(i∫ω)` over every oriented quarter turn,
    /// with `ω` constant of periods `(α, β)` along the torus sides.
    pub fn oriented_weight(
        &self,
        config: &OrientedLoopConfig,
        s: f64,
        alpha: f64,
        beta: f64,
    ) -> Complex64 {
        let emb = self.loops.medial.embedding();
        let period = emb.and_then(|e| e.period).unwrap_or([1.0, 1.0]);
        let mut phase = 0.0;
        for (l, lp) in config.gas.loops.iter().enumerate() {
            for &x in &lp.darts {
                let y = if config.orientation[l] { x } else { x ^ 1 };
                let turn = if Self::is_right_turn(y) { 1.0 } else { -1.0 };
                phase += s * PI / 2.0 * turn;
                if let Some(e) = emb {
                    let d = e.dart_disp[y];
                    phase += alpha * d[0] / period[0] + beta * d[1] / period[1];
                }
            }
        }
        Complex64::from_polar(1.0, phase)
    }

    /// Six-vertex configuration on `sixv` carried by an oriented loop gas.
    pub fn project_to_6v(&self, config: &OrientedLoopConfig) -> SixVertexConfig {
        let mut forward = vec![false; self.sixv.num_edges()];
        for (l, lp) in config.gas.loops.iter().enumerate() {
            for &x in &lp.darts {
                let y = if config.orientation[l] { x } else { x ^ 1 };
                let d = self.crossing(y);
                forward[self.sixv.edge(d)] = self.sixv.orientation_sign(d) > 0.0;
            }
        }
        SixVertexConfig { forward }
    }

    /// Six-vertex model on `sixv` with `a = b = 1`, `c = 2cos(πs)`.
    pub fn sixv_model(&self, s: f64) -> Result<SixVertexModel> {
        SixVertexModel::symmetric(self.sixv.clone(), 1.0, 1.0, 2.0 * (PI * s).cos())
    }
}

/// Calls `f` on every orientation of `gas`.
fn for_each_orientation(gas: &LoopGasConfig, mut f: impl FnMut(&OrientedLoopConfig)) {
    let l = gas.num_loops();
    for mask in 0..1u64 << l {
        let orientation = (0..l).map(|i| mask >> i & 1 == 0).collect();
        f(&OrientedLoopConfig { gas, orientation });
    }
}

/// Config-by-config comparison of the Baxter measure with its projections.
#[derive(Debug, Clone)]
pub struct BaxterReport {
    pub q: f64,
    pub s: f64,
    pub c: f64,
    /// Largest relative deviation from the FK-side weight with `√q` per
    /// contractible loop and `1` per non-contractible loop.
    pub fk_error: f64,
    /// The same with `2` per non-contractible loop.
    pub fk_error_two_per_wrap: f64,
    /// Largest deviation, over six-vertex configurations, of the summed
    /// oriented weights from the six-vertex weight.
    pub sixv_error: f64,
    /// `|c² − (2 + √q)|`.
    pub c_squared_residual: f64,
    pub fk_configs: usize,
    pub wrapping_configs: usize,
    pub sixv_configs: usize,
    /// Largest deviation of a contractible loop's orientation sum from `√q`.
    pub loop_sum_error: f64,
}

pub fn baxter_check(map: &CombinatorialMap, q: f64) -> Result<BaxterReport> {
    let s = baxter_s(q)?;
    let lat = BaxterLattice::new(map)?;
    let model = lat.sixv_model(s)?;
    let c = 2.0 * (PI * s).cos();
    let sq = q.sqrt();
    let ne = map.num_edges();
    if ne > 24 {
        return Err(Error::TooLarge {
            required: 2f64.powi(ne as i32),
            cap: 2f64.powi(24),
        });
    }
    let mut by_6v: BTreeMap<SixVertexConfig, Complex64> = BTreeMap::new();
    let (mut fk_error, mut fk_error2, mut loop_sum_error) = (0.0f64, 0.0f64, 0.0f64);
    let mut wrapping = 0;
    for mask in 0..1u64 << ne {
        let gas = lat
            .loops
            .loop_representation(&FkConfig::from_mask(mask, ne))?;
        let mut total = Complex64::new(0.0, 0.0);
        for_each_orientation(&gas, |oc| {
            let w = lat.oriented_weight(oc, s, 0.0, 0.0);
            total += w;
            *by_6v.entry(lat.project_to_6v(oc)).or_default() += w;
        });
        for lp in gas.loops.iter().filter(|l| l.is_contractible()) {
            let single = LoopGasConfig {
                included: gas.included.clone(),
                loops: vec![lp.clone()],
                loop_of_edge: vec![],
            };
            let mut sum = Complex64::new(0.0, 0.0);
            for_each_orientation(&single, |oc| sum += lat.oriented_weight(oc, s, 0.0, 0.0));
            loop_sum_error = loop_sum_error.max((sum - sq).norm());
        }
        let nc = gas.num_loops() - gas.num_contractible();
        wrapping += usize::from(nc > 0);
        let fk_side = sq.powi(gas.num_contractible() as i32);
        fk_error = fk_error.max((total - fk_side).norm() / fk_side);
        let fk_side2 = fk_side * 2f64.powi(nc as i32);
        fk_error2 = fk_error2.max((total - fk_side2).norm() / fk_side2);
    }
    let mut sixv_error = 0.0f64;
    let mut sixv_configs = 0;
    let mut seen = 0;
    let mut err = None;
    model.for_each_config(|cfg| {
        sixv_configs += 1;
        let w = match model.weight(cfg) {
            Ok(w) => w,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        let got = by_6v.get(cfg).copied().unwrap_or_default();
        seen += usize::from(by_6v.contains_key(cfg));
        sixv_error = sixv_error.max((got - w).norm() / w.abs().max(1.0));
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    if seen != by_6v.len() {
        // an oriented loop configuration projected outside the ice rule
        sixv_error = f64::INFINITY;
    }
    Ok(BaxterReport {
        q,
        s,
        c,
        fk_error,
        fk_error_two_per_wrap: fk_error2,
        sixv_error,
        c_squared_residual: (c * c - (2.0 + sq)).abs(),
        fk_configs: 1 << ne,
        wrapping_configs: wrapping,
        sixv_configs,
        loop_sum_error,
    })
}

/// Both sides of the topological-observable identity on a torus map with
/// self-dual FK weights. The random-cluster measure is taken in its loop
/// form `√q^{#loops}`, and `ω` has periods `(α, β)` along the torus sides.
#[derive(Debug, Clone, Copy)]
pub struct TopologicalObservable {
    /// `f(α, β) / f(0, 0)`.
    pub lhs: Complex64,
    /// `E_6V[exp(2iα/π ∫_B J − 2iβ Imτ/π ∫_A J)]`.
    pub rhs: Complex64,
    /// `f(α, β)` itself.
    pub f: f64,
    pub f0: f64,
}

/// `p_0` and `p_{k,m,n}` (class up to sign, `k` = half the number of
/// wrapping loops) under the loop-form random-cluster measure.
pub fn wrapping_probabilities(
    lat: &LoopLattice,
    q: f64,
) -> Result<(f64, BTreeMap<(usize, i64, i64), f64>)> {
    let ne = lat.primal.num_edges();
    let sq = q.sqrt();
    let mut z = 0.0;
    let mut p0 = 0.0;
    let mut p: BTreeMap<(usize, i64, i64), f64> = BTreeMap::new();
    for mask in 0..1u64 << ne {
        let gas = lat.loop_representation(&FkConfig::from_mask(mask, ne))?;
        let w = sq.powi(gas.num_loops() as i32);
        z += w;
        let wraps: Vec<(i64, i64)> = gas
            .loops
            .iter()
            .filter(|l| !l.is_contractible())
            .map(|l| l.class.unwrap())
            .collect();
        if wraps.is_empty() {
            p0 += w;
            continue;
        }
        if wraps.len() % 2 == 1 {
            return Err(Error::DegenerateMap("odd number of wrapping loops".into()));
        }
        let (m, n) = canonical(wraps[0]);
        if wraps.iter().any(|&c| canonical(c) != (m, n)) {
            return Err(Error::DegenerateMap(
                "wrapping loops in different classes".into(),
            ));
        }
        *p.entry((wraps.len() / 2, m, n)).or_default() += w;
    }
    p.values_mut().for_each(|v| *v /= z);
    Ok((p0 / z, p))
}

fn canonical((m, n): (i64, i64)) -> (i64, i64) {
    if m < 0 || (m == 0 && n < 0) {
        (-m, -n)
    } else {
        (m, n)
    }
}

/// `f(α,β) = p0 + ½ Σ_k Σ_{±(m,n)} p_{k,m,n} (2cos(mα+nβ)/√q)^{2k}`.
pub fn f_alpha_beta(
    p0: f64,
    p: &BTreeMap<(usize, i64, i64), f64>,
    q: f64,
    alpha: f64,
    beta: f64,
) -> f64 {
    let mut f = p0;
    for (&(k, m, n), &prob) in p {
        for sign in [1.0, -1.0] {
            let x = 2.0 * (sign * (m as f64 * alpha + n as f64 * beta)).cos() / q.sqrt();
            f += 0.5 * prob * x.powi(2 * k as i32);
        }
    }
    f
}

/// `im_tau` is the aspect ratio of the torus; 1 for a square torus.
pub fn topological_observable(
    map: &CombinatorialMap,
    q: f64,
    alpha: f64,
    beta: f64,
    im_tau: f64,
) -> Result<TopologicalObservable> {
    let s = baxter_s(q)?;
    let lat = BaxterLattice::new(map)?;
    let (p0, p) = wrapping_probabilities(&lat.loops, q)?;
    let f = f_alpha_beta(p0, &p, q, alpha, beta);
    let f0 = f_alpha_beta(p0, &p, q, 0.0, 0.0);
    let model = lat.sixv_model(s)?;
    let (mut num, mut z) = (Complex64::new(0.0, 0.0), 0.0);
    let mut err = None;
    model.for_each_config(|cfg| {
        let run = || -> Result<(f64, f64, f64)> {
            let w = model.weight(cfg)?;
            let field = height_function(&lat.sixv, cfg)?;
            let (ja, jb) = geometric_periods(&lat.sixv, &lat.sixv_dual, &field)?;
            Ok((w, ja, jb))
        };
        match run() {
            Ok((w, ja, jb)) => {
                z += w;
                num += w * Complex64::from_polar(
                    1.0,
                    2.0 * alpha / PI * jb - 2.0 * beta * im_tau / PI * ja,
                );
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(TopologicalObservable {
        lhs: Complex64::new(f / f0, 0.0),
        rhs: num / z,
        f,
        f0,
    })
}
