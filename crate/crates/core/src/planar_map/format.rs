use serde::{Deserialize, Serialize};

use super::homology::HomologyBasis;
use super::map::{CombinatorialMap, Dart, Surface};
use crate::error::{Error, Result};

/// Structured-text form of a map: rotations, reversal pairs and an optional
/// torus homology basis. Coordinates are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub surface: Surface,
    pub darts: usize,
    pub alpha: Vec<[Dart; 2]>,
    pub sigma: Vec<Vec<Dart>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<[Vec<Dart>; 2]>,
}

impl GraphFile {
    pub fn from_map(map: &CombinatorialMap) -> Self {
        let homology = map
            .homology()
            .map(|h| [h.cycle_a.clone(), h.cycle_b.clone()]);
        Self {
            surface: map.surface(),
            darts: map.num_darts(),
            alpha: map.alpha_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            sigma: map.rotations().to_vec(),
            homology,
        }
    }

    pub fn to_map(&self) -> Result<CombinatorialMap> {
        let listed: usize = self.sigma.iter().map(Vec::len).sum();
        if listed != self.darts {
            return Err(Error::ParseError(format!(
                "{listed} darts in sigma, {} declared",
                self.darts
            )));
        }
        let pairs: Vec<(Dart, Dart)> = self.alpha.iter().map(|&[a, b]| (a, b)).collect();
        let map = CombinatorialMap::from_rotations(&self.sigma, &pairs, self.surface)?;
        match &self.homology {
            None => Ok(map),
            Some([a, b]) => map.with_homology(HomologyBasis {
                cycle_a: a.clone(),
                cycle_b: b.clone(),
            }),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<CombinatorialMap> {
    let file: GraphFile = toml::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    file.to_map()
}

pub fn write_graph(map: &CombinatorialMap) -> String {
    toml::to_string(&GraphFile::from_map(map)).expect("graph files always serialize")
}
