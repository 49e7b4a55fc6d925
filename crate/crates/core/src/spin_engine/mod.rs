//! Abelian spin models on maps: exact partition functions and correlators,
//! graphical expansions, Kramers-Wannier duality, disorder variables and
//! parafermions.

mod disorder;
mod duality;
mod enumerate;
mod expansions;
mod model;
mod parafermion;

pub use disorder::{vertex_loop, CorrelatorSpec, DefectLine, Sectors};
pub use duality::*;
pub use enumerate::DEFAULT_CAP;
pub use expansions::{even_subgraphs, high_temp_z, low_temp_polygon, Polygon};
pub use model::{SpinConfig, SpinModel};
pub use parafermion::*;
