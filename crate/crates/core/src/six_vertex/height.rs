use std::collections::VecDeque;
use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix2;

use super::model::SixVertexConfig;
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart, Surface};

/// Height function of a six-vertex configuration on the faces of its map.
#[derive(Debug, Clone)]
pub struct HeightField {
    /// `J` on each dual dart `x` (running from the face right of `x` to the
    /// face left of `x`): `+π/2` when the arrow runs along `x`, else `−π/2`.
    pub current: Vec<f64>,
    /// Heights on faces, lifted along a spanning tree of the dual from face 0.
    pub heights: Vec<f64>,
    /// `(∫_{A†} J, ∫_{B†} J)` along the pushed-off homology basis on a torus.
    pub periods: Option<(f64, f64)>,
}

impl HeightField {
    pub fn integrate(&self, dual_path: &[Dart]) -> f64 {
        dual_path.iter().map(|&x| self.current[x]).sum()
    }

    /// `dJ(v)`, the counterclockwise sum around primal vertex `v`.
    pub fn circulation(&self, map: &CombinatorialMap, v: usize) -> f64 {
        self.integrate(map.rotation(v))
    }
}

pub fn height_function(map: &CombinatorialMap, config: &SixVertexConfig) -> Result<HeightField> {
    for v in 0..map.num_vertices() {
        let outs = map
            .rotation(v)
            .iter()
            .filter(|&&d| config.is_out(map, d))
            .count();
        if 2 * outs != map.degree(v) {
            return Err(Error::InvalidIce(v));
        }
    }
    let current: Vec<f64> = (0..map.num_darts())
        .map(|x| {
            if config.is_out(map, x) {
                FRAC_PI_2
            } else {
                -FRAC_PI_2
            }
        })
        .collect();
    let nf = map.num_faces();
    let mut heights = vec![f64::NAN; nf];
    heights[0] = 0.0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        // dual darts leaving f are the alphas of its boundary darts
        for &b in map.face_boundary(f) {
            let x = map.alpha(b);
            let g = map.left_face(x);
            if heights[g].is_nan() {
                heights[g] = heights[f] + current[x];
                queue.push_back(g);
            }
        }
    }
    let field = HeightField {
        current,
        heights,
        periods: None,
    };
    let periods = match map.surface() {
        Surface::Torus => {
            let h = map.homology_basis()?;
            Some((
                field.integrate(&map.push_off_left(&h.cycle_a)),
                field.integrate(&map.push_off_left(&h.cycle_b)),
            ))
        }
        Surface::Sphere => None,
    };
    Ok(HeightField { periods, ..field })
}

/// Geometric class `(m, n)` of a closed dual path, in units of the torus
/// periods, from the embedding of the dual map.
pub fn dual_cycle_class(dual: &CombinatorialMap, dual_path: &[Dart]) -> Result<(i64, i64)> {
    let emb = dual
        .embedding()
        .ok_or_else(|| Error::PathInvalid("map carries no embedding".into()))?;
    let period = emb.period.ok_or(Error::NotATorus)?;
    let (mut x, mut y) = (0.0, 0.0);
    for &d in dual_path {
        x += emb.dart_disp[d][0];
        y += emb.dart_disp[d][1];
    }
    Ok((
        (x / period[0]).round() as i64,
        (y / period[1]).round() as i64,
    ))
}

/// Periods of `J` along dual cycles of geometric class `(1, 0)` and `(0, 1)`.
pub fn geometric_periods(
    map: &CombinatorialMap,
    dual: &CombinatorialMap,
    field: &HeightField,
) -> Result<(f64, f64)> {
    let h = map.homology_basis()?;
    let (pa, pb) = (map.push_off_left(&h.cycle_a), map.push_off_left(&h.cycle_b));
    let ca = dual_cycle_class(dual, &pa)?;
    let cb = dual_cycle_class(dual, &pb)?;
    // columns: classes of the basis cycles; J is linear on homology
    let k = Matrix2::new(ca.0 as f64, cb.0 as f64, ca.1 as f64, cb.1 as f64);
    let inv = k
        .try_inverse()
        .ok_or_else(|| Error::SingularSystem("dual cycles do not span homology".into()))?;
    let (ja, jb) = (field.integrate(&pa), field.integrate(&pb));
    // period along class e_i is Σ_j inv[j][i] J_j
    Ok((
        inv[(0, 0)] * ja + inv[(1, 0)] * jb,
        inv[(0, 1)] * ja + inv[(1, 1)] * jb,
    ))
}
