use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CorrelatorSpec, DefectLine, SpinModel};
use crate::abelian_groups::WeightFunction;
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart};

/// Coefficients of the local shift equation
/// `(a − bχ0(g)) w(g + g0) − (c − dχ0(g)) w(g) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParafermionCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl ParafermionCoeffs {
    /// `(uλ⁻¹, u⁻¹λ, u⁻¹λ⁻¹, uλ)`.
    pub fn from_u_lambda(u: Complex64, lambda: Complex64) -> Self {
        Self {
            a: u / lambda,
            b: lambda / u,
            c: 1.0 / (u * lambda),
            d: u * lambda,
        }
    }

    /// The member of the family matching the Fateev-Zamolodchikov weight of
    /// anisotropy `theta` on `Z/r'` with `g0 = 1` and `χ0` of index 1:
    /// `λ = e^{iπ/2r'}`, `u = e^{i(θ − π/2)/r'}`.
    pub fn fateev_zamolodchikov(rprime: usize, theta: f64) -> Self {
        let r = rprime as f64;
        Self::from_u_lambda(
            Complex64::from_polar(1.0, (theta - PI / 2.0) / r),
            Complex64::from_polar(1.0, PI / (2.0 * r)),
        )
    }
}

/// `max_g |(a − bχ0(g)) w(g + g0) − (c − dχ0(g)) w(g)|`.
pub fn diff_equation_residual(
    w: &WeightFunction,
    g0: usize,
    chi0: usize,
    k: &ParafermionCoeffs,
) -> f64 {
    let grp = &w.group;
    (0..grp.order())
        .map(|g| {
            let x = grp.character(chi0, g);
            ((k.a - k.b * x) * w.values[grp.add(g, g0)] - (k.c - k.d * x) * w.values[g]).norm()
        })
        .fold(0.0, f64::max)
}

/// The four-point local configuration around the edge of dart `d = v → v'`:
/// `f` right of `d`, `f'` left of `d`.
#[derive(Debug, Clone)]
pub struct ParafermionValues {
    pub f_vf: Complex64,
    pub f_vpf: Complex64,
    pub f_vfp: Complex64,
    pub f_vpfp: Complex64,
}

impl ParafermionValues {
    /// `|−aF(v,f) + bF(v',f) + cF(v,f') − dF(v',f')|`, divided by the largest
    /// term.
    pub fn residual(&self, k: &ParafermionCoeffs) -> f64 {
        let terms = [
            -k.a * self.f_vf,
            k.b * self.f_vpf,
            k.c * self.f_vfp,
            -k.d * self.f_vpfp,
        ];
        let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sum: Complex64 = terms.iter().sum();
        if scale == 0.0 {
            0.0
        } else {
            sum.norm() / scale
        }
    }
}

/// `⟨χ0(σ_v) μ_{g0}(f) · spectators⟩` with the defect line `line` ending at
/// `f`. `spec` carries the spectator insertions (its own defect lines are
/// replaced by `line`).
pub fn parafermion_correlator(
    model: &SpinModel,
    v: usize,
    f: usize,
    spinor: (usize, usize),
    spec: &CorrelatorSpec,
    line: &DefectLine,
) -> Result<Complex64> {
    let map = &model.map;
    if !map.rotation(v).iter().any(|&d| map.left_face(d) == f) {
        return Err(Error::NotAdjacent);
    }
    let (chi0, g0) = spinor;
    let mut full = spec.clone();
    full.orders.push((v, chi0));
    full.disorders.push((f, g0));
    full.defect_lines = vec![line.clone()];
    model.disorder_sum(&full)
}

/// The four correlators around dart `d = v → v'` whose local defect line is
/// `γ'` (ending at `f' = left(d)`) extended through `e†` to `f = right(d)`.
/// `gamma_prime` runs from the spectator disorder face to `f'`.
pub fn parafermion_quadruple(
    model: &SpinModel,
    d: Dart,
    spinor: (usize, usize),
    spectators: &CorrelatorSpec,
    gamma_prime: &[Dart],
) -> Result<ParafermionValues> {
    let map = &model.map;
    let (v, vp) = (map.origin(d), map.head(d));
    let (f, fp) = (map.right_face(d), map.left_face(d));
    if let Some(&last) = gamma_prime.last() {
        if map.left_face(last) != fp {
            return Err(Error::PathInvalid(
                "γ' must end at the face left of the edge".into(),
            ));
        }
    }
    let g0 = spinor.1;
    let short = DefectLine {
        path: gamma_prime.to_vec(),
        element: g0,
    };
    let mut ext = gamma_prime.to_vec();
    ext.push(map.alpha(d));
    let long = DefectLine {
        path: ext,
        element: g0,
    };
    Ok(ParafermionValues {
        f_vf: parafermion_correlator(model, v, f, spinor, spectators, &long)?,
        f_vpf: parafermion_correlator(model, vp, f, spinor, spectators, &long)?,
        f_vfp: parafermion_correlator(model, v, fp, spinor, spectators, &short)?,
        f_vpfp: parafermion_correlator(model, vp, fp, spinor, spectators, &short)?,
    })
}

/// Relative residual of the local parafermionic equation at dart `d`.
pub fn parafermionic_residual(
    model: &SpinModel,
    d: Dart,
    spinor: (usize, usize),
    coeffs: &ParafermionCoeffs,
    spectators: &CorrelatorSpec,
    gamma_prime: &[Dart],
) -> Result<f64> {
    Ok(parafermion_quadruple(model, d, spinor, spectators, gamma_prime)?.residual(coeffs))
}

/// Phase picked up along a path of corners (darts; corner `d` pairs
/// `origin(d)` with `left_face(d)`). Consecutive corners must share a face
/// (`φ^{±1}`) or a vertex (`σ^{±1}`). Each step contributes
/// `exp(is·arg(z'/z))` with `z = f − v`, principal argument.
pub fn transport_phase(map: &CombinatorialMap, corners: &[Dart], s: f64) -> Result<Complex64> {
    let mut phase = Complex64::new(1.0, 0.0);
    for w in corners.windows(2) {
        let (d, e) = (w[0], w[1]);
        let adjacent =
            e == map.phi(d) || e == map.phi_inv(d) || e == map.sigma(d) || e == map.sigma_inv(d);
        if !adjacent {
            return Err(Error::PathInvalid(format!(
                "corners {d} and {e} are not adjacent"
            )));
        }
        if [d, e]
            .iter()
            .any(|&x| Some(map.left_face(x)) == map.outer_face())
        {
            return Err(Error::PathInvalid("the outer face has no position".into()));
        }
        let z0 = map
            .corner_offset(d)
            .ok_or_else(|| Error::PathInvalid("corner without position".into()))?;
        let z1 = map
            .corner_offset(e)
            .ok_or_else(|| Error::PathInvalid("corner without position".into()))?;
        let ratio = Complex64::new(z1[0], z1[1]) / Complex64::new(z0[0], z0[1]);
        phase *= Complex64::from_polar(1.0, s * ratio.arg());
    }
    Ok(phase)
}
