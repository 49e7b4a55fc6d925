//! Half-edge maps on the sphere and torus, with their duals, diamond and
//! medial graphs, homology bases and canonical forms.

mod bundled;
mod derived;
mod format;
mod grid;
mod homology;
mod map;

pub use bundled::{bundled_graph, bundled_graphs, from_plane_drawing, BUNDLED_NAMES};
pub use derived::DerivedGraphs;
pub use format::{parse_graph, write_graph, GraphFile};
pub use grid::{
    grid_patch, grid_patch_sites, grid_torus, torus_east, torus_north, torus_vertex, PatchBoundary,
    Side,
};
pub use homology::{reverse_path, HomologyBasis};
pub use map::{CombinatorialMap, Dart, Embedding, Surface};
