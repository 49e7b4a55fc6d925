//! Named acceptance checks, shared by the command-line front end and the
//! acceptance test target. Every check carries its residual, tolerance and
//! provenance.

mod fk;
mod gauss;
mod sixv;
mod spin;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar_map::{from_plane_drawing, CombinatorialMap, Dart};

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    /// Lattice sum cut off once the certified tail falls below this
    /// fraction of the partial sum.
    Truncated {
        tail_bound: f64,
    },
    Sampled {
        n: usize,
        stderr: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub provenance: Provenance,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        // NaN residuals fail
        let passed = residual <= tolerance;
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed,
            provenance,
        }
    }

    pub fn exact(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(name, residual, tolerance, Provenance::Exact)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    /// Wall-time budget in seconds.
    pub budget_seconds: f64,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Largest residual-to-tolerance ratio over the checks.
    pub fn worst(&self) -> Option<&Check> {
        self.checks
            .iter()
            .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
    }
}

fn ratio(c: &Check) -> f64 {
    if c.tolerance > 0.0 {
        c.residual / c.tolerance
    } else if c.residual > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

pub const CRITERIA: std::ops::RangeInclusive<u32> = 1..=15;

pub const SUITES: [(&str, &[u32]); 7] = [
    ("kw", &[1, 4]),
    ("abelian", &[2, 3, 5]),
    ("fk", &[6, 7, 9]),
    ("loop", &[8]),
    ("baxter", &[10, 11, 12]),
    ("dgff", &[14, 15]),
    ("dimer", &[13]),
];

pub fn suite_criteria(name: &str) -> Result<&'static [u32]> {
    SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, ids)| ids)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// Runs one criterion. `seed` drives every random weight and sample.
pub fn run_criterion(id: u32, seed: u64) -> Result<CriterionReport> {
    let (title, budget, checks) = match id {
        1 => (
            "Ising Kramers-Wannier duality",
            1.0,
            spin::kramers_wannier(seed)?,
        ),
        2 => (
            "Abelian duality prefactor",
            10.0,
            spin::abelian_prefactor(seed)?,
        ),
        3 => ("Fourier fixed points", 1.0, spin::dft_fixed_points()?),
        4 => (
            "Order-disorder duality on the torus",
            30.0,
            spin::order_disorder()?,
        ),
        5 => ("Parafermionic equation", 60.0, spin::parafermionic()?),
        6 => (
            "Potts-FK equivalence and connectivity",
            5.0,
            fk::potts_fk(seed)?,
        ),
        7 => (
            "FK planar duality per configuration",
            5.0,
            fk::fk_duality(seed)?,
        ),
        8 => ("Loop count on the 2x2 torus", 5.0, fk::loop_count()?),
        9 => ("Edwards-Sokal coupling", 30.0, fk::edwards_sokal(seed)?),
        10 => ("Baxter oriented-loop measure", 60.0, sixv::baxter()?),
        11 => (
            "Topological observable identity",
            120.0,
            sixv::topological()?,
        ),
        12 => ("Six-vertex heights", 30.0, sixv::heights()?),
        13 => (
            "Free-fermion bridge and Kasteleyn",
            60.0,
            sixv::free_fermion(seed)?,
        ),
        14 => ("Discrete Gaussian free field", 60.0, gauss::dgff(seed)?),
        15 => (
            "Poisson summation and T-duality",
            30.0,
            gauss::poisson_t_duality(seed)?,
        ),
        _ => return Err(Error::SpecInvalid(format!("no acceptance criterion {id}"))),
    };
    Ok(CriterionReport {
        id,
        title: title.to_string(),
        budget_seconds: budget,
        checks,
    })
}

pub(crate) fn cycle(n: usize) -> Result<CombinatorialMap> {
    let pos: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    from_plane_drawing(&pos, &edges)
}

pub(crate) fn path(n: usize) -> Result<CombinatorialMap> {
    let pos: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, 0.0]).collect();
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    from_plane_drawing(&pos, &edges)
}

pub(crate) fn dart_between(map: &CombinatorialMap, u: usize, v: usize) -> Result<Dart> {
    map.rotation(u)
        .iter()
        .copied()
        .find(|&d| map.head(d) == v)
        .ok_or(Error::NotAdjacent)
}

pub(crate) fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}
