use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FiniteAbelianGroup;
use crate::error::{Error, Result};

/// Complex function on a finite abelian group, indexed like the group.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    pub group: FiniteAbelianGroup,
    pub values: Vec<Complex64>,
}

impl WeightFunction {
    pub fn new(group: FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::WrongGroup(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        Ok(Self { group, values })
    }

    pub fn from_real(group: FiniteAbelianGroup, values: &[f64]) -> Result<Self> {
        Self::new(
            group,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn constant(group: &FiniteAbelianGroup, c: f64) -> Self {
        Self {
            group: group.clone(),
            values: vec![Complex64::new(c, 0.0); group.order()],
        }
    }

    pub fn delta(group: &FiniteAbelianGroup) -> Self {
        let mut w = Self::constant(group, 0.0);
        w.values[0] = Complex64::new(1.0, 0.0);
        w
    }

    pub fn get(&self, g: usize) -> Complex64 {
        self.values[g]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.values.len())
            .all(|g| (self.values[g] - self.values[self.group.neg(g)]).norm() <= tol)
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|z| z.re > 0.0 && z.im == 0.0)
    }

    pub fn max_diff(&self, other: &WeightFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            group: self.group.clone(),
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// `(Rw)(g) = w(g + g0)`.
    pub fn shift(&self, g0: usize) -> Self {
        let values = (0..self.values.len())
            .map(|g| self.values[self.group.add(g, g0)])
            .collect();
        Self {
            group: self.group.clone(),
            values,
        }
    }

    /// Pointwise product with the character of index `k`.
    pub fn modulate(&self, k: usize) -> Self {
        let values = (0..self.values.len())
            .map(|g| self.values[g] * self.group.character(k, g))
            .collect();
        Self {
            group: self.group.clone(),
            values,
        }
    }

    /// `w ∘ φ` for an index permutation `φ`.
    pub fn compose(&self, phi: &[usize]) -> Self {
        Self {
            group: self.group.clone(),
            values: phi.iter().map(|&i| self.values[i]).collect(),
        }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `ŵ(χ) = |G|^{-1/2} Σ_g w(g) conj χ(g)`.
pub fn fourier_transform(w: &WeightFunction) -> WeightFunction {
    let g = &w.group;
    let n = g.order();
    let norm = 1.0 / (n as f64).sqrt();
    let values = (0..n)
        .map(|k| {
            (0..n)
                .map(|x| w.values[x] * g.character(k, x).conj())
                .sum::<Complex64>()
                * norm
        })
        .collect();
    WeightFunction {
        group: g.clone(),
        values,
    }
}

/// `1 + √q δ0` on `Z/q`.
pub fn self_dual_potts_weight(q: usize) -> Result<WeightFunction> {
    let g = FiniteAbelianGroup::cyclic(q)?;
    let mut w = WeightFunction::constant(&g, 1.0);
    w.values[0] += (q as f64).sqrt();
    Ok(w)
}

/// Fateev-Zamolodchikov weights on `Z/r'`:
/// `w(k) = ∏_{j<k} sin(πj/r' + θ/r') / sin(π(j+1)/r' − θ/r')`.
pub fn fz_weight(rprime: usize, theta: f64) -> Result<WeightFunction> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::DomainError(format!(
            "theta = {theta} outside (0, π/2)"
        )));
    }
    let g = FiniteAbelianGroup::cyclic(rprime)?;
    let r = rprime as f64;
    let mut values = Vec::with_capacity(rprime);
    let mut acc = 1.0;
    for k in 0..rprime {
        values.push(Complex64::new(acc, 0.0));
        let j = k as f64;
        acc *= (PI * j / r + theta / r).sin() / (PI * (j + 1.0) / r - theta / r).sin();
    }
    WeightFunction::new(g, values)
}

/// Dual Ising coupling `x ↦ (1 − x)/(1 + x)`.
pub fn ising_dual_weight(x: f64) -> f64 {
    (1.0 - x) / (1.0 + x)
}

/// `‖ℱw − w‖∞`.
pub fn check_self_dual(w: &WeightFunction) -> f64 {
    fourier_transform(w).max_diff(w)
}

/// Returns `ŵ` and `max_g |ℱℱw(g) − w(−g)|`.
pub fn duality_pair(w: &WeightFunction) -> (WeightFunction, f64) {
    let hat = fourier_transform(w);
    let hathat = fourier_transform(&hat);
    let res = (0..w.values.len())
        .map(|g| (hathat.values[g] - w.values[w.group.neg(g)]).norm())
        .fold(0.0, f64::max);
    (hat, res)
}

/// Result of the Ashkin-Teller self-duality test.
#[derive(Debug, Clone, PartialEq)]
pub struct AshkinTellerCheck {
    pub sum_condition: bool,
    /// Fixed point of `ℱ` up to an automorphism `φ`: `ℱw = w ∘ φ`.
    pub fourier_fixed: bool,
    /// Fixed point with the componentwise identification of `Ĝ` with `G`.
    pub fourier_fixed_standard: bool,
}

impl AshkinTellerCheck {
    pub fn holds(&self) -> bool {
        self.sum_condition && self.fourier_fixed
    }
}

/// Self-duality of a weight on `Z/2 × Z/2`. The element `(a, b)` corresponds
/// to the spin pair `((−1)^a, (−1)^b)`.
pub fn ashkin_teller_check(w: &WeightFunction) -> Result<AshkinTellerCheck> {
    if w.group.factors() != [2, 2] {
        return Err(Error::WrongGroup("Ashkin-Teller needs Z/2 x Z/2".into()));
    }
    let tol = 1e-12 * w.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let v = &w.values;
    let sum_condition = (v[0] - v[1] - v[2] - v[3]).norm() <= tol;
    let hat = fourier_transform(w);
    let fourier_fixed_standard = hat.max_diff(w) <= tol;
    let fourier_fixed = w
        .group
        .automorphisms()
        .iter()
        .any(|phi| hat.max_diff(&w.compose(phi)) <= tol);
    Ok(AshkinTellerCheck {
        sum_condition,
        fourier_fixed,
        fourier_fixed_standard,
    })
}

/// Unitary DFT matrix on `C^q`, `F[j][i] = q^{-1/2} ξ0^{-ij}`.
pub fn dft_matrix(q: usize) -> DMatrix<Complex64> {
    let s = 1.0 / (q as f64).sqrt();
    DMatrix::from_fn(q, q, |j, i| {
        Complex64::from_polar(s, -2.0 * PI * ((i * j) % q) as f64 / q as f64)
    })
}

/// Multiplicities of the eigenvalues `1, i, −1, −i` of the DFT on `C^q`,
/// read off as traces of the spectral projectors `¼ Σ_k λ^{-k} F^k`.
pub fn dft_eigen_multiplicities(q: usize) -> [f64; 4] {
    let f = dft_matrix(q);
    let id = DMatrix::<Complex64>::identity(q, q);
    let powers = [id.clone(), f.clone(), &f * &f, &f * &f * &f];
    let lambdas = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut out = [0.0; 4];
    for (m, lam) in lambdas.iter().enumerate() {
        let mut tr = Complex64::new(0.0, 0.0);
        for (k, p) in powers.iter().enumerate() {
            tr += lam.powi(-(k as i32)) * p.trace();
        }
        out[m] = tr.re / 4.0;
    }
    out
}
