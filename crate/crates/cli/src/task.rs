use std::path::{Path, PathBuf};

use abelian_lattice::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Partition,
    Correlator,
    DualityCheck,
    Sample,
    Observable,
    InvariantSuite,
}

/// Either a path to a model file (relative to the task file) or the model
/// table itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelRef {
    File(PathBuf),
    Inline(ModelSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub kind: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub params: toml::Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Ising,
    Potts,
    Abelian,
    Fk,
    SixVertex,
    Dimer,
    Gaussian,
}

/// Where the underlying map comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    /// One of the bundled planar graphs.
    Bundled(String),
    Torus {
        torus: [usize; 2],
    },
    /// Free-boundary grid patch.
    Patch {
        patch: [usize; 2],
    },
    /// Graph file, relative to the file that references it.
    File {
        file: PathBuf,
    },
}

/// A scalar applied to every edge, or one value per edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeValues {
    Uniform(f64),
    PerEdge(Vec<f64>),
}

impl EdgeValues {
    pub fn expand(&self, num_edges: usize, what: &str) -> Result<Vec<f64>> {
        match self {
            EdgeValues::Uniform(x) => Ok(vec![*x; num_edges]),
            EdgeValues::PerEdge(v) if v.len() == num_edges => Ok(v.clone()),
            EdgeValues::PerEdge(v) => Err(Error::SpecInvalid(format!(
                "{what}: {} values for {num_edges} edges",
                v.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub graph: GraphRef,
    /// Spin couplings βJ (ising, potts).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_j: Option<EdgeValues>,
    /// Cluster weight (potts, fk).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Edge weights (fk, dimer).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<EdgeValues>,
    /// Cyclic orders of the spin group (abelian).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
    /// Weight table indexed by group element, shared by all edges (abelian).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<f64>>,
    /// Fateev-Zamolodchikov angle, used instead of `weight` (abelian, cyclic).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Symmetric vertex weights (six-vertex).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abc: Option<[f64; 3]>,
    /// Edge conductances (gaussian).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductances: Option<EdgeValues>,
    /// Dirichlet boundary vertices (gaussian).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<usize>>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

/// A task with its model reference resolved to an inline spec and every
/// path made relative to the working directory.
#[derive(Debug, Clone)]
pub struct LoadedTask {
    pub spec: TaskSpec,
    pub model: Option<ModelSpec>,
    /// Directory against which graph files are resolved.
    pub model_dir: PathBuf,
    pub dir: PathBuf,
}

pub fn load_task(path: &Path) -> Result<LoadedTask> {
    let spec: TaskSpec = parse(&read(path)?, path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let (model, model_dir) = match &spec.model {
        None => (None, dir.clone()),
        Some(ModelRef::Inline(m)) => (Some(m.clone()), dir.clone()),
        Some(ModelRef::File(f)) => {
            let p = dir.join(f);
            let m: ModelSpec = parse(&read(&p)?, &p)?;
            (
                Some(m),
                p.parent().map(Path::to_path_buf).unwrap_or_default(),
            )
        }
    };
    Ok(LoadedTask {
        spec,
        model,
        model_dir,
        dir,
    })
}

pub fn read_graph_file(path: &Path) -> Result<abelian_lattice::planar_map::CombinatorialMap> {
    abelian_lattice::planar_map::parse_graph(&read(path)?)
}
