use super::grid::{grid_patch, PatchBoundary};
use super::map::{CombinatorialMap, Dart, Surface};
use crate::error::{Error, Result};

/// Sphere map of a straight-line plane drawing: edge `k` gets darts `2k`
/// (first endpoint to second) and `2k + 1`, rotations sorted by angle.
pub fn from_plane_drawing(
    positions: &[[f64; 2]],
    edges: &[(usize, usize)],
) -> Result<CombinatorialMap> {
    let mut around: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); positions.len()];
    for (k, &(a, b)) in edges.iter().enumerate() {
        if a >= positions.len() || b >= positions.len() || a == b {
            return Err(Error::MalformedRotation(format!("bad edge ({a}, {b})")));
        }
        let angle = |from: usize, to: usize| {
            let (p, q) = (positions[from], positions[to]);
            (q[1] - p[1]).atan2(q[0] - p[0])
        };
        around[a].push((angle(a, b), 2 * k));
        around[b].push((angle(b, a), 2 * k + 1));
    }
    let rotations: Vec<Vec<Dart>> = around
        .into_iter()
        .map(|mut r| {
            r.sort_by(|x, y| x.0.total_cmp(&y.0));
            r.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    let pairs: Vec<(Dart, Dart)> = (0..edges.len()).map(|k| (2 * k, 2 * k + 1)).collect();
    CombinatorialMap::from_rotations(&rotations, &pairs, Surface::Sphere)
}

fn cycle(n: usize) -> Result<CombinatorialMap> {
    let pos: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    from_plane_drawing(&pos, &edges)
}

fn cube() -> Result<CombinatorialMap> {
    let pos = [
        [0.0, 0.0],
        [3.0, 0.0],
        [3.0, 3.0],
        [0.0, 3.0],
        [1.0, 1.0],
        [2.0, 1.0],
        [2.0, 2.0],
        [1.0, 2.0],
    ];
    let mut edges = Vec::new();
    for i in 0..4 {
        edges.push((i, (i + 1) % 4));
        edges.push((4 + i, 4 + (i + 1) % 4));
        edges.push((i, i + 4));
    }
    from_plane_drawing(&pos, &edges)
}

/// Two hexagons sharing an edge.
fn hexagon_pair() -> Result<CombinatorialMap> {
    let h = 3f64.sqrt() / 2.0;
    let pos = [
        [0.0, -0.5],
        [0.0, 0.5],
        [h, 1.0],
        [2.0 * h, 0.5],
        [2.0 * h, -0.5],
        [h, -1.0],
        [-h, 1.0],
        [-2.0 * h, 0.5],
        [-2.0 * h, -0.5],
        [-h, -1.0],
    ];
    let edges = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 0),
        (1, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 0),
    ];
    from_plane_drawing(&pos, &edges)
}

/// `K_{2,3}`, which has no perfect matching.
fn k23() -> Result<CombinatorialMap> {
    let pos = [[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 0.0], [0.0, 1.0]];
    let edges = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)];
    from_plane_drawing(&pos, &edges)
}

pub const BUNDLED_NAMES: [&str; 12] = [
    "cycle4",
    "cycle6",
    "cycle8",
    "grid2x3",
    "grid2x4",
    "grid2x5",
    "grid2x6",
    "grid3x3",
    "grid3x4",
    "cube",
    "hexagon_pair",
    "k23",
];

/// Bundled bipartite sphere graphs with at most 12 vertices.
pub fn bundled_graph(name: &str) -> Result<CombinatorialMap> {
    let grid = |m, n| grid_patch(m, n, PatchBoundary::free());
    match name {
        "cycle4" => cycle(4),
        "cycle6" => cycle(6),
        "cycle8" => cycle(8),
        "grid2x3" => grid(3, 2),
        "grid2x4" => grid(4, 2),
        "grid2x5" => grid(5, 2),
        "grid2x6" => grid(6, 2),
        "grid3x3" => grid(3, 3),
        "grid3x4" => grid(4, 3),
        "cube" => cube(),
        "hexagon_pair" => hexagon_pair(),
        "k23" => k23(),
        _ => Err(Error::SpecInvalid(format!("unknown bundled graph {name}"))),
    }
}

pub fn bundled_graphs() -> Result<Vec<(&'static str, CombinatorialMap)>> {
    BUNDLED_NAMES
        .iter()
        .map(|&n| Ok((n, bundled_graph(n)?)))
        .collect()
}
