use num_complex::Complex64;

use super::SpinModel;
use crate::abelian_groups::{fourier_transform, WeightFunction};
use crate::error::{Error, Result};

/// Model on the dual map whose edge `e†` carries `ℱ(w_e)`. Characters of the
/// dual group are identified with group elements by index.
pub fn kw_dual_model(model: &SpinModel) -> Result<SpinModel> {
    if model.map.has_bridge() {
        return Err(Error::DegenerateDual(
            "a bridge of Γ is a loop of Γ†".into(),
        ));
    }
    if !model.fixed.is_empty() {
        return Err(Error::SpecInvalid(
            "duality is stated for free boundary; use wired arcs".into(),
        ));
    }
    let dual = model.map.dual()?;
    let weights = model.weights.iter().map(fourier_transform).collect();
    let mut out = SpinModel::new(dual, model.group.clone(), weights)?;
    out.cap = model.cap;
    Ok(out)
}

/// Exponent `|V| − |E|/2 + 1` of the duality prefactor, as stated for the
/// general abelian model.
pub fn kw_prefactor_exponent(model: &SpinModel) -> f64 {
    model.map.num_vertices() as f64 - model.map.num_edges() as f64 / 2.0 + 1.0
}

/// Exponent obtained by carrying out the character sum: the dual spins
/// determine the dual 1-form up to a global shift, which costs `|G|^{-1}`
/// instead of contributing `|G|`.
pub fn kw_prefactor_exponent_derived(model: &SpinModel) -> f64 {
    kw_prefactor_exponent(model) - 2.0
}

/// `|G|^{exponent}` as a real number.
pub fn kw_prefactor(model: &SpinModel, exponent: f64) -> f64 {
    (model.group.order() as f64).powf(exponent)
}

/// Dual Ising couplings: `e^{−2βJ†} = tanh(βJ)`.
pub fn ising_dual_couplings(beta_j: &[f64]) -> Result<Vec<f64>> {
    beta_j
        .iter()
        .map(|&k| {
            if k <= 0.0 {
                Err(Error::DomainError(format!(
                    "dual coupling needs βJ > 0, got {k}"
                )))
            } else {
                Ok(-0.5 * k.tanh().ln())
            }
        })
        .collect()
}

/// Partition function normalized as a polygon sum: configurations modulo a
/// global shift, each edge weight divided by its value at the identity.
/// For Ising this is `Σ_P ∏_{e∈P} e^{−2βJ_e}` over admissible polygons.
pub fn reduced_partition_function(model: &SpinModel) -> Result<Complex64> {
    let z = model.partition_function()?;
    let norm: Complex64 = model.weights.iter().map(|w| w.values[0]).product();
    let shift = if model.fixed.is_empty() {
        model.group.order() as f64
    } else {
        1.0
    };
    Ok(z / norm / shift)
}

/// Right-hand side of the Ising duality `2^{|V|} ∏cosh(βJ_e) Z(Γ†, J†)`,
/// with `Z(Γ†, J†)` the polygon-normalized dual partition function.
pub fn ising_kw_rhs(model: &SpinModel) -> Result<Complex64> {
    let k = model.ising_couplings()?;
    let kd = ising_dual_couplings(&k)?;
    let dual = SpinModel::ising(model.map.dual()?, &kd)?.with_cap(model.cap);
    let pre: f64 =
        k.iter().map(|x| x.cosh()).product::<f64>() * 2f64.powi(model.map.num_vertices() as i32);
    Ok(reduced_partition_function(&dual)? * pre)
}

/// Ising weight table `(e^{k}, e^{−k})`.
pub fn ising_weight(k: f64) -> WeightFunction {
    let g = crate::abelian_groups::FiniteAbelianGroup::cyclic(2).expect("Z/2");
    WeightFunction::from_real(g, &[k.exp(), (-k).exp()]).expect("two values")
}
