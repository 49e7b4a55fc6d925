use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpinModel;
use crate::error::{Error, Result};
use crate::planar_map::{CombinatorialMap, Dart};

/// A path of dual darts carrying a group element. Following the twisting
/// rule, a line from face `a` to face `b` carrying `g` inserts
/// `μ_{g⁻¹}(a) μ_g(b)`; a closed line inserts nothing but shifts the period
/// sector on a torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectLine {
    pub path: Vec<Dart>,
    pub element: usize,
}

/// Which 1-forms enter the state space on a torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sectors {
    /// Only the sector of the defect lines themselves (spins on vertices).
    #[default]
    Exact,
    /// Sum over every period class, i.e. over extra closed defect lines
    /// along both homology cycles.
    AllPeriods,
}

/// Order insertions `(vertex, character index)`, disorder insertions
/// `(face, element)`, their defect lines and, optionally, primal paths
/// pairing the order insertions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatorSpec {
    #[serde(default)]
    pub orders: Vec<(usize, usize)>,
    #[serde(default)]
    pub disorders: Vec<(usize, usize)>,
    #[serde(default)]
    pub defect_lines: Vec<DefectLine>,
    #[serde(default)]
    pub order_paths: Vec<Vec<Dart>>,
    #[serde(default)]
    pub sectors: Sectors,
}

/// Closed dual path winding counterclockwise around primal vertex `v`.
pub fn vertex_loop(map: &CombinatorialMap, v: usize) -> Vec<Dart> {
    map.rotation(v).to_vec()
}

fn check_dual_path(map: &CombinatorialMap, path: &[Dart]) -> Result<()> {
    for &x in path {
        if x >= map.num_darts() {
            return Err(Error::PathInvalid(format!("dart {x} out of range")));
        }
    }
    for w in path.windows(2) {
        if map.left_face(w[0]) != map.right_face(w[1]) {
            return Err(Error::PathInvalid(format!(
                "dual darts {} and {} do not chain",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Per-edge additive twist `t_e` in the reference orientation: the state is
/// `ω = dσ + t`.
pub(crate) fn twist_from_lines(model: &SpinModel, lines: &[DefectLine]) -> Result<Vec<usize>> {
    let g = &model.group;
    let mut t = vec![0; model.map.num_edges()];
    for line in lines {
        check_dual_path(&model.map, &line.path)?;
        if line.element >= g.order() {
            return Err(Error::SpecInvalid(format!(
                "element {} out of range",
                line.element
            )));
        }
        for &x in &line.path {
            let e = model.map.edge(x);
            let r = model.map.edge_darts(e)[0];
            // the crossed edge is oriented from the right to the left of the line
            t[e] = if model.map.alpha(x) == r {
                g.add(t[e], line.element)
            } else {
                g.sub(t[e], line.element)
            };
        }
    }
    Ok(t)
}

/// Disorder insertions produced by a set of lines, summed per face.
fn line_charges(model: &SpinModel, lines: &[DefectLine]) -> Vec<usize> {
    let g = &model.group;
    let mut net = vec![0; model.map.num_faces()];
    for line in lines {
        if let (Some(&first), Some(&last)) = (line.path.first(), line.path.last()) {
            let a = model.map.right_face(first);
            let b = model.map.left_face(last);
            net[a] = g.sub(net[a], line.element);
            net[b] = g.add(net[b], line.element);
        }
    }
    net
}

fn auto_route(model: &SpinModel, disorders: &[(usize, usize)]) -> Result<Vec<DefectLine>> {
    let g = &model.group;
    let dual = model.map.dual()?;
    let mut lines = Vec::new();
    // chain f0 → f1 → … ; the line into f_j carries s_j with s_1 = g_0 … so
    // that each face receives its own element
    let mut carried = 0;
    for w in disorders.windows(2) {
        carried = g.sub(carried, w[0].1);
        let path = dual
            .shortest_path(w[0].0, w[1].0)
            .ok_or_else(|| Error::SpecInvalid("dual map disconnected".into()))?;
        lines.push(DefectLine {
            path,
            element: g.neg(carried),
        });
    }
    Ok(lines)
}

impl SpinModel {
    fn resolved_lines(&self, spec: &CorrelatorSpec) -> Result<Option<Vec<DefectLine>>> {
        let g = &self.group;
        for &(f, x) in &spec.disorders {
            if f >= self.map.num_faces() || x >= g.order() {
                return Err(Error::SpecInvalid(format!(
                    "disorder ({f}, {x}) out of range"
                )));
            }
        }
        for &(v, k) in &spec.orders {
            if v >= self.map.num_vertices() || k >= g.order() {
                return Err(Error::SpecInvalid(format!("order ({v}, {k}) out of range")));
            }
        }
        let total = spec.disorders.iter().fold(0, |acc, &(_, x)| g.add(acc, x));
        if total != 0 {
            return Ok(None);
        }
        let lines = if spec.defect_lines.is_empty() && !spec.disorders.is_empty() {
            auto_route(self, &spec.disorders)?
        } else {
            spec.defect_lines.clone()
        };
        let mut want = vec![0; self.map.num_faces()];
        for &(f, x) in &spec.disorders {
            want[f] = g.add(want[f], x);
        }
        if line_charges(self, &lines) != want {
            return Err(Error::SpecInvalid(
                "defect lines do not end on the disorder insertions".into(),
            ));
        }
        for path in &spec.order_paths {
            self.map.check_path(path)?;
            let crossed: std::collections::HashSet<usize> = lines
                .iter()
                .flat_map(|l| l.path.iter().map(|&x| self.map.edge(x)))
                .collect();
            if path.iter().any(|&d| crossed.contains(&self.map.edge(d))) {
                return Err(Error::SpecInvalid(
                    "defect line crosses an order path".into(),
                ));
            }
        }
        Ok(Some(lines))
    }

    /// Unnormalized sum with order insertions and an explicit twist.
    pub(crate) fn twisted_sum(
        &self,
        orders: &[(usize, usize)],
        twist: &[usize],
    ) -> Result<Complex64> {
        let mut fs = self.factor_sum();
        let g = &self.group;
        let q = g.order();
        for (e, edge) in fs.edges.iter_mut().enumerate() {
            if twist[e] != 0 {
                let w = &self.weights[e];
                edge.2 = (0..q * q)
                    .map(|k| w.values[g.add(g.sub(k % q, k / q), twist[e])])
                    .collect();
            }
        }
        for &(v, k) in orders {
            for s in 0..q {
                fs.vertex[v][s] *= g.character(k, s);
            }
        }
        fs.sum(self.cap)
    }

    fn sector_twists(&self, base: &[usize], sectors: Sectors) -> Result<Vec<Vec<usize>>> {
        if sectors == Sectors::Exact || self.map.surface().euler_characteristic() == 2 {
            return Ok(vec![base.to_vec()]);
        }
        let h = self.map.homology_basis()?;
        let pa = self.map.push_off_left(&h.cycle_a);
        let pb = self.map.push_off_left(&h.cycle_b);
        let g = &self.group;
        let mut out = Vec::new();
        for p in 0..g.order() {
            for r in 0..g.order() {
                let extra = twist_from_lines(
                    self,
                    &[
                        DefectLine {
                            path: pa.clone(),
                            element: p,
                        },
                        DefectLine {
                            path: pb.clone(),
                            element: r,
                        },
                    ],
                )?;
                out.push(
                    base.iter()
                        .zip(&extra)
                        .map(|(&a, &b)| g.add(a, b))
                        .collect(),
                );
            }
        }
        Ok(out)
    }

    /// Unnormalized `Z⟨∏χ_i(σ(v_i)) ∏μ_{g_j}(f_j)⟩`, zero when the disorder
    /// elements do not multiply to the identity.
    pub fn disorder_sum(&self, spec: &CorrelatorSpec) -> Result<Complex64> {
        let Some(lines) = self.resolved_lines(spec)? else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let base = twist_from_lines(self, &lines)?;
        self.sector_twists(&base, spec.sectors)?
            .iter()
            .map(|t| self.twisted_sum(&spec.orders, t))
            .sum()
    }

    /// Normalized mixed order-disorder correlator.
    pub fn disorder_correlator(&self, spec: &CorrelatorSpec) -> Result<Complex64> {
        let num = self.disorder_sum(spec)?;
        let empty = CorrelatorSpec {
            sectors: spec.sectors,
            ..Default::default()
        };
        Ok(num / self.disorder_sum(&empty)?)
    }

    /// The same unnormalized sum computed over `G`-valued 1-forms `ω` with
    /// prescribed `dω`, order insertions read along `order_paths`. Without
    /// sectors this equals `disorder_sum / |G|` on the sphere.
    pub fn disorder_sum_forms(&self, spec: &CorrelatorSpec) -> Result<Complex64> {
        let Some(lines) = self.resolved_lines(spec)? else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        if !self.fixed.is_empty() {
            return Err(Error::SpecInvalid(
                "1-form enumeration needs free boundary".into(),
            ));
        }
        let g = &self.group;
        let q = g.order();
        let map = &self.map;
        let ne = map.num_edges();
        let work = (q as f64).powi(ne as i32) * ne as f64;
        if work > self.cap {
            return Err(Error::TooLarge {
                required: work,
                cap: self.cap,
            });
        }
        let t = twist_from_lines(self, &lines)?;
        let eval = |form: &[usize], d: Dart| {
            let e = map.edge(d);
            if d == map.edge_darts(e)[0] {
                form[e]
            } else {
                g.neg(form[e])
            }
        };
        let d_of = |form: &[usize]| -> Vec<usize> {
            (0..map.num_faces())
                .map(|f| {
                    map.face_boundary(f)
                        .iter()
                        .fold(0, |acc, &d| g.add(acc, eval(form, d)))
                })
                .collect()
        };
        let target = d_of(&t);
        // each order path runs from the vertex paired with the next insertion
        let mut path_chars: Vec<(Vec<Dart>, usize)> = Vec::new();
        if !spec.orders.is_empty() {
            if spec.order_paths.len() + 1 != spec.orders.len() {
                return Err(Error::SpecInvalid(
                    "need one order path between consecutive order insertions".into(),
                ));
            }
            let mut acc = 0;
            for (i, path) in spec.order_paths.iter().enumerate() {
                acc = g.add(acc, spec.orders[i].1);
                if map.origin(path[0]) != spec.orders[i].0
                    || map.head(*path.last().unwrap()) != spec.orders[i + 1].0
                {
                    return Err(Error::SpecInvalid(
                        "order path endpoints do not match insertions".into(),
                    ));
                }
                path_chars.push((path.clone(), g.neg(acc)));
            }
        }
        let mut form = vec![0usize; ne];
        let mut total = Complex64::new(0.0, 0.0);
        loop {
            if d_of(&form) == target {
                let mut w: Complex64 = (0..ne).map(|e| self.weights[e].values[form[e]]).product();
                for (path, k) in &path_chars {
                    for &d in path {
                        w *= g.character(*k, eval(&form, d));
                    }
                }
                total += w;
            }
            let mut k = 0;
            while k < ne {
                form[k] += 1;
                if form[k] < q {
                    break;
                }
                form[k] = 0;
                k += 1;
            }
            if k == ne {
                break;
            }
        }
        Ok(total)
    }
}
