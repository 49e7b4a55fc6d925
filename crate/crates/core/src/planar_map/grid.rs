use crate::error::{Error, Result};

use super::map::{CombinatorialMap, Dart, Embedding, Surface};
use super::HomologyBasis;

/// Boundary condition of one side of a rectangular patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Free,
    Wired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct PatchBoundary {
    #[serde(default)]
    pub bottom: Side,
    #[serde(default)]
    pub right: Side,
    #[serde(default)]
    pub top: Side,
    #[serde(default)]
    pub left: Side,
}

impl PatchBoundary {
    pub fn free() -> Self {
        Self::default()
    }
}

/// Vertex index of site `(i, j)` on an `m × n` grid torus.
pub fn torus_vertex(m: usize, i: usize, j: usize) -> usize {
    j * m + i
}

/// Dart of the eastward horizontal edge leaving site `(i, j)` on a grid torus.
pub fn torus_east(m: usize, n: usize, i: usize, j: usize) -> Dart {
    2 * ((j % n) * m + (i % m))
}

/// Dart of the northward vertical edge leaving site `(i, j)` on a grid torus.
pub fn torus_north(m: usize, n: usize, i: usize, j: usize) -> Dart {
    2 * (m * n + (j % n) * m + (i % m))
}

/// Square-lattice torus with `m` columns and `n` rows. Carries an embedding
/// with unit spacing and the basis `A` = row 0 eastward, `B` = column 0
/// northward.
pub fn grid_torus(m: usize, n: usize) -> Result<CombinatorialMap> {
    if m < 2 || n < 2 {
        return Err(Error::SizeTooSmall(format!(
            "grid torus needs m, n >= 2, got {m}x{n}"
        )));
    }
    let east = |i: usize, j: usize| torus_east(m, n, i, j);
    let north = |i: usize, j: usize| torus_north(m, n, i, j);
    let mut rotations = Vec::with_capacity(m * n);
    let mut vertex_pos = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            rotations.push(vec![
                east(i, j),
                north(i, j),
                east(i + m - 1, j) + 1,
                north(i, j + n - 1) + 1,
            ]);
            vertex_pos.push([i as f64, j as f64]);
        }
    }
    let ndarts = 4 * m * n;
    let alpha = (0..ndarts).map(|d| d ^ 1).collect();
    let dart_disp = (0..ndarts)
        .map(|d| {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            if d < 2 * m * n {
                [sign, 0.0]
            } else {
                [0.0, sign]
            }
        })
        .collect();
    let homology = HomologyBasis {
        cycle_a: (0..m).map(|i| east(i, 0)).collect(),
        cycle_b: (0..n).map(|j| north(0, j)).collect(),
    };
    let embedding = Embedding {
        vertex_pos,
        dart_disp,
        period: Some([m as f64, n as f64]),
    };
    CombinatorialMap::assemble(
        rotations,
        alpha,
        Surface::Torus,
        Some(homology),
        Some(embedding),
    )
}

/// Rectangular `m × n` patch of the square lattice on the sphere. Wired sides
/// are collapsed into a single extended vertex.
pub fn grid_patch(m: usize, n: usize, boundary: PatchBoundary) -> Result<CombinatorialMap> {
    grid_patch_sites(m, n, boundary).map(|(map, _)| map)
}

/// As [`grid_patch`], also returning the map vertex of every site `j*m + i`.
pub fn grid_patch_sites(
    m: usize,
    n: usize,
    boundary: PatchBoundary,
) -> Result<(CombinatorialMap, Vec<usize>)> {
    if m < 2 || n < 2 {
        return Err(Error::SizeTooSmall(format!(
            "grid patch needs m, n >= 2, got {m}x{n}"
        )));
    }
    let site = |i: usize, j: usize| j * m + i;
    let h_edge = |i: usize, j: usize| j * (m - 1) + i;
    let nh = (m - 1) * n;
    let v_edge = |i: usize, j: usize| nh + j * m + i;
    let ne = nh + m * (n - 1);
    let mut rotations = Vec::with_capacity(m * n);
    let mut vertex_pos = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            let mut rot = Vec::with_capacity(4);
            if i + 1 < m {
                rot.push(2 * h_edge(i, j));
            }
            if j + 1 < n {
                rot.push(2 * v_edge(i, j));
            }
            if i > 0 {
                rot.push(2 * h_edge(i - 1, j) + 1);
            }
            if j > 0 {
                rot.push(2 * v_edge(i, j - 1) + 1);
            }
            rotations.push(rot);
            vertex_pos.push([i as f64, j as f64]);
        }
    }
    let alpha: Vec<Dart> = (0..2 * ne).map(|d| d ^ 1).collect();
    let mut wired_edges = Vec::new();
    if boundary.bottom == Side::Wired {
        wired_edges.extend((0..m - 1).map(|i| h_edge(i, 0)));
    }
    if boundary.top == Side::Wired {
        wired_edges.extend((0..m - 1).map(|i| h_edge(i, n - 1)));
    }
    if boundary.left == Side::Wired {
        wired_edges.extend((0..n - 1).map(|j| v_edge(0, j)));
    }
    if boundary.right == Side::Wired {
        wired_edges.extend((0..n - 1).map(|j| v_edge(m - 1, j)));
    }
    if wired_edges.is_empty() {
        let dart_disp = (0..2 * ne)
            .map(|d| {
                let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                if d / 2 < nh {
                    [sign, 0.0]
                } else {
                    [0.0, sign]
                }
            })
            .collect();
        let embedding = Embedding {
            vertex_pos,
            dart_disp,
            period: None,
        };
        let map =
            CombinatorialMap::assemble(rotations, alpha, Surface::Sphere, None, Some(embedding))?;
        let sites = (0..m * n).collect();
        return Ok((map, sites));
    }
    let (rotations, alpha, sites) = collapse_edges(rotations, alpha, &wired_edges, m * n);
    let _ = site;
    let map = CombinatorialMap::assemble(rotations, alpha, Surface::Sphere, None, None)?;
    Ok((map, sites))
}

/// Contracts the listed edges (deleting any that would close a loop) and
/// compacts dart and vertex indices. Returns new rotations, reversal map and
/// the new vertex of every old vertex.
fn collapse_edges(
    mut rotations: Vec<Vec<Dart>>,
    alpha: Vec<Dart>,
    edges: &[usize],
    nv: usize,
) -> (Vec<Vec<Dart>>, Vec<Dart>, Vec<usize>) {
    let mut owner: Vec<usize> = (0..nv).collect();
    let mut vertex_of = vec![0; alpha.len()];
    for (v, rot) in rotations.iter().enumerate() {
        for &d in rot {
            vertex_of[d] = v;
        }
    }
    let mut removed = vec![false; alpha.len()];
    for &e in edges {
        let d = 2 * e;
        let r = alpha[d];
        let (u, v) = (vertex_of[d], vertex_of[r]);
        if u == v {
            rotations[u].retain(|&x| x != d && x != r);
        } else {
            let (keep, gone, kd, gd) = if u < v { (u, v, d, r) } else { (v, u, r, d) };
            let pos_k = rotations[keep].iter().position(|&x| x == kd).unwrap();
            let pos_g = rotations[gone].iter().position(|&x| x == gd).unwrap();
            let rk = &rotations[keep];
            let rg = &rotations[gone];
            let mut merged: Vec<Dart> = (1..rk.len()).map(|s| rk[(pos_k + s) % rk.len()]).collect();
            merged.extend((1..rg.len()).map(|s| rg[(pos_g + s) % rg.len()]));
            for &x in &merged {
                vertex_of[x] = keep;
            }
            rotations[keep] = merged;
            rotations[gone].clear();
            for o in owner.iter_mut() {
                if *o == gone {
                    *o = keep;
                }
            }
        }
        removed[d] = true;
        removed[r] = true;
    }
    let mut new_dart = vec![usize::MAX; alpha.len()];
    let mut next = 0;
    for d in 0..alpha.len() {
        if !removed[d] {
            new_dart[d] = next;
            next += 1;
        }
    }
    let mut new_alpha = vec![0; next];
    for d in 0..alpha.len() {
        if !removed[d] {
            new_alpha[new_dart[d]] = new_dart[alpha[d]];
        }
    }
    let mut new_vertex = vec![usize::MAX; nv];
    let mut out = Vec::new();
    for (v, rot) in rotations.iter().enumerate() {
        if !rot.is_empty() {
            new_vertex[v] = out.len();
            out.push(rot.iter().map(|&d| new_dart[d]).collect());
        }
    }
    let sites = owner.iter().map(|&o| new_vertex[o]).collect();
    (out, new_alpha, sites)
}
