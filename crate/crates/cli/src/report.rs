use abelian_lattice::suites::{Check, CriterionReport, Provenance};
use num_complex::Complex64;
use serde::Serialize;

use crate::task::{ModelSpec, TaskSpec};

/// A named number. Complex values carry their imaginary part separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imag: Option<f64>,
    pub provenance: Provenance,
}

impl Quantity {
    pub fn real(name: impl Into<String>, value: f64, provenance: Provenance) -> Self {
        Self {
            name: name.into(),
            value,
            imag: None,
            provenance,
        }
    }

    pub fn complex(name: impl Into<String>, z: Complex64, provenance: Provenance) -> Self {
        Self {
            name: name.into(),
            value: z.re,
            imag: Some(z.im),
            provenance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Outcome {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub results: Vec<Quantity>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<CriterionReport>,
    /// Edge-to-loop-id tables of sampled loop ensembles.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub loop_tables: Vec<Vec<i64>>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.criteria.iter().all(|c| c.passed())
    }
}

/// Echo of what was run, with the model reference resolved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskEcho {
    #[serde(flatten)]
    pub spec: TaskSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolved_model: Option<ModelSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub status: Status,
    pub task: TaskEcho,
    #[serde(flatten)]
    pub outcome: Outcome,
}

impl Report {
    pub fn new(task: TaskEcho, seed: u64, outcome: Outcome) -> Self {
        let status = if outcome.passed() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            status,
            task,
            outcome,
        }
    }

    /// Canonical text form: field order is fixed by the struct definitions
    /// and contains nothing run-dependent.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("reports contain only serializable values")
    }
}
