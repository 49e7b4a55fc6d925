use std::path::Path;

use abelian_lattice::abelian_groups::{fz_weight, FiniteAbelianGroup, WeightFunction};
use abelian_lattice::dgff::ConductanceNetwork;
use abelian_lattice::planar_map::{
    bundled_graph, grid_patch, grid_torus, CombinatorialMap, PatchBoundary,
};
use abelian_lattice::random_cluster::FkModel;
use abelian_lattice::six_vertex::SixVertexModel;
use abelian_lattice::spin_engine::SpinModel;
use abelian_lattice::{Error, Result};

use crate::task::{read_graph_file, EdgeValues, GraphRef, ModelKind, ModelSpec};

/// A model instance ready for a task.
pub enum Model {
    Spin(SpinModel),
    /// Potts models keep their FK representation for sampling.
    Potts(SpinModel, FkModel),
    Fk(FkModel),
    /// Symmetric six-vertex model with its `(a, b, c)`.
    SixVertex(SixVertexModel, [f64; 3]),
    Dimer {
        map: CombinatorialMap,
        weights: Vec<f64>,
    },
    Gaussian(ConductanceNetwork),
}

pub fn build_map(graph: &GraphRef, dir: &Path) -> Result<CombinatorialMap> {
    match graph {
        GraphRef::Bundled(name) => bundled_graph(name),
        GraphRef::Torus { torus: [m, n] } => grid_torus(*m, *n),
        GraphRef::Patch { patch: [m, n] } => grid_patch(*m, *n, PatchBoundary::free()),
        GraphRef::File { file } => read_graph_file(&dir.join(file)),
    }
}

fn need<'a, T>(x: &'a Option<T>, field: &str, kind: ModelKind) -> Result<&'a T> {
    x.as_ref()
        .ok_or_else(|| Error::SpecInvalid(format!("{kind:?} model needs `{field}`")))
}

pub fn build_model(spec: &ModelSpec, dir: &Path) -> Result<Model> {
    let map = build_map(&spec.graph, dir)?;
    let ne = map.num_edges();
    let kind = spec.kind;
    Ok(match kind {
        ModelKind::Ising => {
            let k = need(&spec.beta_j, "beta_j", kind)?.expand(ne, "beta_j")?;
            Model::Spin(SpinModel::ising(map, &k)?)
        }
        ModelKind::Potts => {
            let k = need(&spec.beta_j, "beta_j", kind)?.expand(ne, "beta_j")?;
            let fk = FkModel::from_potts_couplings(map, *need(&spec.q, "q", kind)?, &k)?;
            Model::Potts(fk.potts_model()?, fk)
        }
        ModelKind::Abelian => {
            let factors = need(&spec.factors, "factors", kind)?;
            let w = match (&spec.weight, spec.theta) {
                (Some(v), None) => WeightFunction::from_real(FiniteAbelianGroup::new(factors)?, v)?,
                (None, Some(theta)) => match factors.as_slice() {
                    [r] if *r >= 2 => fz_weight(*r, theta)?,
                    _ => {
                        return Err(Error::WrongGroup(
                            "Fateev-Zamolodchikov weights need a single cyclic factor".into(),
                        ))
                    }
                },
                _ => {
                    return Err(Error::SpecInvalid(
                        "abelian model needs exactly one of `weight` and `theta`".into(),
                    ))
                }
            };
            Model::Spin(SpinModel::uniform(map, w)?)
        }
        ModelKind::Fk => {
            let w = need(&spec.weights, "weights", kind)?.expand(ne, "weights")?;
            Model::Fk(FkModel::new(map, *need(&spec.q, "q", kind)?, w)?)
        }
        ModelKind::SixVertex => {
            let [a, b, c] = *need(&spec.abc, "abc", kind)?;
            Model::SixVertex(SixVertexModel::symmetric(map, a, b, c)?, [a, b, c])
        }
        ModelKind::Dimer => {
            let weights = spec
                .weights
                .clone()
                .unwrap_or(EdgeValues::Uniform(1.0))
                .expand(ne, "weights")?;
            Model::Dimer { map, weights }
        }
        ModelKind::Gaussian => {
            let c = spec
                .conductances
                .clone()
                .unwrap_or(EdgeValues::Uniform(1.0))
                .expand(ne, "conductances")?;
            let boundary = spec.boundary.clone().unwrap_or_default();
            Model::Gaussian(ConductanceNetwork::new(map, c, boundary)?)
        }
    })
}
