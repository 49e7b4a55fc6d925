use abelian_lattice::dgff::{t_duality_check, ConductanceNetwork};
use abelian_lattice::random_cluster::{FkExactSampler, FkModel, LoopLattice};
use abelian_lattice::six_vertex::{
    kasteleyn_partition, matching_sum, sixv_dimer_partition_check, topological_observable,
};
use abelian_lattice::spin_engine::{
    ising_kw_rhs, kw_dual_model, kw_prefactor, kw_prefactor_exponent_derived, CorrelatorSpec,
    SpinModel,
};
use abelian_lattice::suites::{run_criterion, suite_criteria, Check, Provenance};
use abelian_lattice::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::model::Model;
use crate::report::{Outcome, Quantity};
use crate::task::TaskKind;

const EXACT: Provenance = Provenance::Exact;
/// Relative tail bound used by every truncated lattice sum.
const LATTICE_TAIL: f64 = 1e-17;

fn params<T: DeserializeOwned>(table: &toml::Table) -> Result<T> {
    toml::Value::Table(table.clone())
        .try_into()
        .map_err(|e| Error::ParseError(format!("params: {e}")))
}

fn unsupported(task: TaskKind, model: &Model) -> Error {
    Error::SpecInvalid(format!(
        "{task:?} is not defined for {} models",
        model.name()
    ))
}

fn vertex(v: usize, nv: usize) -> Result<usize> {
    if v < nv {
        Ok(v)
    } else {
        Err(Error::SpecInvalid(format!("vertex {v} out of range")))
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

impl Model {
    fn name(&self) -> &'static str {
        match self {
            Model::Spin(_) => "spin",
            Model::Potts(..) => "potts",
            Model::Fk(_) => "fk",
            Model::SixVertex(..) => "six-vertex",
            Model::Dimer { .. } => "dimer",
            Model::Gaussian(_) => "gaussian",
        }
    }
}

/// Runs a model task. All randomness is drawn from one generator seeded
/// with `seed`.
pub fn run_task(kind: TaskKind, model: &Model, table: &toml::Table, seed: u64) -> Result<Outcome> {
    match kind {
        TaskKind::Partition => partition(model, table),
        TaskKind::Correlator => correlator(model, table),
        TaskKind::DualityCheck => duality(model, table),
        TaskKind::Sample => sample(model, table, seed),
        TaskKind::Observable => observable(model, table, seed),
        TaskKind::InvariantSuite => Err(Error::SpecInvalid(
            "invariant-suite tasks take no model".into(),
        )),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstantonParams {
    r: f64,
    kappa: f64,
    #[serde(default)]
    tolerance: Option<f64>,
}

fn no_params(table: &toml::Table) -> Result<()> {
    match table.keys().next() {
        Some(k) => Err(Error::ParseError(format!("params: unknown field `{k}`"))),
        None => Ok(()),
    }
}

fn partition(model: &Model, table: &toml::Table) -> Result<Outcome> {
    let mut out = Outcome::default();
    if !matches!(model, Model::Gaussian(_)) {
        no_params(table)?;
    }
    match model {
        Model::Spin(m) | Model::Potts(m, _) => {
            out.results
                .push(Quantity::complex("Z", m.partition_function()?, EXACT))
        }
        Model::Fk(m) => out
            .results
            .push(Quantity::real("Z", m.partition_function()?, EXACT)),
        Model::SixVertex(m, _) => {
            out.results
                .push(Quantity::real("Z", m.partition_function()?, EXACT))
        }
        Model::Dimer { map, weights } => {
            out.results
                .push(Quantity::real("Z", matching_sum(map, weights)?, EXACT))
        }
        Model::Gaussian(net) => {
            let p: InstantonParams = params(table)?;
            let z = net.instanton_partition(p.r, p.kappa)?;
            out.results.push(Quantity::real(
                "Z_inst",
                z,
                Provenance::Truncated {
                    tail_bound: LATTICE_TAIL,
                },
            ));
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairParams {
    v1: usize,
    v2: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChargeParams {
    charges: Vec<(usize, f64)>,
    #[serde(default)]
    boundary_values: Vec<(usize, f64)>,
    #[serde(default)]
    samples: Option<usize>,
}

impl ChargeParams {
    fn validate(&self, net: &ConductanceNetwork) -> Result<()> {
        let nv = net.map.num_vertices();
        for &(v, _) in self.charges.iter().chain(&self.boundary_values) {
            vertex(v, nv)?;
        }
        Ok(())
    }
}

fn correlator(model: &Model, table: &toml::Table) -> Result<Outcome> {
    let mut out = Outcome::default();
    match model {
        Model::Spin(m) | Model::Potts(m, _) => {
            let spec: CorrelatorSpec = params(table)?;
            out.results.push(Quantity::complex(
                "correlator",
                m.disorder_correlator(&spec)?,
                EXACT,
            ));
        }
        Model::Fk(m) => {
            let p: PairParams = params(table)?;
            let nv = m.map.num_vertices();
            let p_conn = m.connectivity(vertex(p.v1, nv)?, vertex(p.v2, nv)?)?;
            out.results
                .push(Quantity::real("P(v1 <-> v2)", p_conn, EXACT));
        }
        Model::Gaussian(net) => {
            let p: ChargeParams = params(table)?;
            if p.samples.is_some() {
                return Err(Error::SpecInvalid("use a sample task for estimates".into()));
            }
            p.validate(net)?;
            let z = net.characteristic_function(&p.boundary_values, &p.charges)?;
            out.results
                .push(Quantity::complex("E exp(i sum a phi)", z, EXACT));
        }
        _ => return Err(unsupported(TaskKind::Correlator, model)),
    }
    Ok(out)
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ToleranceParams {
    #[serde(default)]
    tolerance: Option<f64>,
}

fn duality(model: &Model, table: &toml::Table) -> Result<Outcome> {
    let (lhs, rhs, tol) = match model {
        Model::Gaussian(net) => {
            let p: InstantonParams = params(table)?;
            let t = t_duality_check(net, p.r, p.kappa)?;
            let mut out = Outcome::default();
            let prov = Provenance::Truncated {
                tail_bound: LATTICE_TAIL,
            };
            out.results.push(Quantity::real("lhs", t.ratio(), prov));
            out.results.push(Quantity::real("rhs", t.factor, prov));
            out.results
                .push(Quantity::real("ratio", t.ratio() / t.factor, prov));
            out.results
                .push(Quantity::real("dual_radius", t.dual_radius, EXACT));
            out.checks.push(Check::new(
                "Z_inst(r) / Z_inst_dual(r_dual) = 1 / (2 pi kappa r^2 sqrt det Q)",
                t.rel_error(),
                p.tolerance.unwrap_or(1e-10),
                prov,
            ));
            return Ok(out);
        }
        _ => {
            let p: ToleranceParams = params(table)?;
            let (l, r) = duality_sides(model)?;
            (l, r, p.tolerance.unwrap_or(1e-10))
        }
    };
    let mut out = Outcome::default();
    out.results.push(Quantity::complex("lhs", lhs, EXACT));
    out.results.push(Quantity::complex("rhs", rhs, EXACT));
    out.results
        .push(Quantity::complex("ratio", lhs / rhs, EXACT));
    out.checks
        .push(Check::exact(duality_name(model), rel(lhs, rhs), tol));
    Ok(out)
}

fn duality_name(model: &Model) -> &'static str {
    match model {
        Model::Spin(m) if m.is_ising() => "Z = 2^|V| prod cosh(K) Z_dual(K_dual)",
        Model::Spin(_) | Model::Potts(..) => "Z = |G|^(|V|-|E|/2-1) Z_dual",
        Model::Fk(_) => "Z = q^(|V|-|E|-1) prod w Z_dual",
        Model::SixVertex(..) => "Z_6V = Z_dimer",
        Model::Dimer { .. } => "|det K| = Z",
        Model::Gaussian(_) => unreachable!("handled by the caller"),
    }
}

fn duality_sides(model: &Model) -> Result<(Complex64, Complex64)> {
    let re = |x: f64| Complex64::new(x, 0.0);
    Ok(match model {
        Model::Spin(m) if m.is_ising() => (m.partition_function()?, ising_kw_rhs(m)?),
        Model::Spin(m) | Model::Potts(m, _) => abelian_sides(m)?,
        Model::Fk(m) => {
            let z = m.partition_function()?;
            (
                re(z),
                re(m.duality_prefactor() * m.dual_model()?.partition_function()?),
            )
        }
        Model::SixVertex(m, [a, b, c]) => {
            let (a, b, c) = (*a, *b, *c);
            if ((a * a + b * b) / (c * c) - 1.0).abs() > 1e-12 {
                return Err(Error::DomainError(
                    "dimer correspondence needs a^2 + b^2 = c^2".into(),
                ));
            }
            let ff = sixv_dimer_partition_check(b.atan2(a), &m.map)?;
            let scale = c.powi(m.map.num_vertices() as i32);
            (re(ff.z_6v * scale), re(ff.z_dimer * scale))
        }
        Model::Dimer { map, weights } => (
            re(matching_sum(map, weights)?),
            re(kasteleyn_partition(map, weights)?),
        ),
        Model::Gaussian(_) => unreachable!("handled by the caller"),
    })
}

fn abelian_sides(m: &SpinModel) -> Result<(Complex64, Complex64)> {
    let dual = kw_dual_model(m)?;
    let pre = kw_prefactor(m, kw_prefactor_exponent_derived(m));
    Ok((m.partition_function()?, dual.partition_function()? * pre))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleParams {
    samples: usize,
    #[serde(default)]
    v1: Option<usize>,
    #[serde(default)]
    v2: Option<usize>,
    #[serde(default)]
    charges: Vec<(usize, f64)>,
    #[serde(default)]
    boundary_values: Vec<(usize, f64)>,
}

/// Mean and standard error of indicator draws.
fn bernoulli(hits: usize, n: usize) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    let se = if n > 1 {
        (p * (1.0 - p) / (n as f64 - 1.0)).sqrt()
    } else {
        f64::INFINITY
    };
    (p, se)
}

fn sample(model: &Model, table: &toml::Table, seed: u64) -> Result<Outcome> {
    let p: SampleParams = params(table)?;
    if p.samples == 0 {
        return Err(Error::SpecInvalid("samples must be positive".into()));
    }
    let n = p.samples;
    let mut out = Outcome::default();
    match model {
        Model::Fk(fk) | Model::Potts(_, fk) => {
            let nv = fk.map.num_vertices();
            let (v1, v2) = match (p.v1, p.v2) {
                (Some(a), Some(b)) => (vertex(a, nv)?, vertex(b, nv)?),
                _ => return Err(Error::SpecInvalid("sampling needs v1 and v2".into())),
            };
            if !p.charges.is_empty() || !p.boundary_values.is_empty() {
                return Err(Error::SpecInvalid(
                    "charges apply to gaussian models".into(),
                ));
            }
            let spins = matches!(model, Model::Potts(..));
            let sampler = FkExactSampler::new(fk)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut conn, mut same) = (0, 0);
            for _ in 0..n {
                let config = sampler.sample(&mut rng);
                let mut dsu = fk.clusters(&config);
                conn += usize::from(dsu.find(v1) == dsu.find(v2));
                if spins {
                    let s = abelian_lattice::random_cluster::edwards_sokal_sample(
                        fk, &config, &mut rng,
                    )?;
                    same += usize::from(s[v1] == s[v2]);
                }
            }
            let exact = fk.connectivity(v1, v2)?;
            let (est, se) = bernoulli(conn, n);
            let prov = Provenance::Sampled { n, stderr: se };
            out.results.push(Quantity::real("P(v1 <-> v2)", est, prov));
            out.results
                .push(Quantity::real("P(v1 <-> v2) exact", exact, EXACT));
            out.checks.push(Check::new(
                "estimate within 5 stderr",
                (est - exact).abs(),
                5.0 * se,
                prov,
            ));
            if spins {
                let (est, se) = bernoulli(same, n);
                out.results.push(Quantity::real(
                    "P(s(v1) = s(v2))",
                    est,
                    Provenance::Sampled { n, stderr: se },
                ));
            }
        }
        Model::Gaussian(net) => {
            let cp = ChargeParams {
                charges: p.charges,
                boundary_values: p.boundary_values,
                samples: Some(n),
            };
            cp.validate(net)?;
            let (est, se_re, se_im) =
                net.characteristic_function_mc(&cp.boundary_values, &cp.charges, n, seed)?;
            let exact = net.characteristic_function(&cp.boundary_values, &cp.charges)?;
            let se = se_re.hypot(se_im);
            let prov = Provenance::Sampled { n, stderr: se };
            out.results
                .push(Quantity::complex("E exp(i sum a phi)", est, prov));
            out.results
                .push(Quantity::complex("E exp(i sum a phi) exact", exact, EXACT));
            out.checks.push(Check::new(
                "estimate within 5 stderr",
                (est - exact).norm(),
                5.0 * se,
                prov,
            ));
        }
        _ => return Err(unsupported(TaskKind::Sample, model)),
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableParams {
    /// Number of sampled loop ensembles to export.
    #[serde(default)]
    loops: usize,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default)]
    im_tau: Option<f64>,
    #[serde(default)]
    tolerance: Option<f64>,
}

fn observable(model: &Model, table: &toml::Table, seed: u64) -> Result<Outcome> {
    let Model::Fk(fk) = model else {
        return Err(unsupported(TaskKind::Observable, model));
    };
    let p: ObservableParams = params(table)?;
    let mut out = Outcome::default();
    if p.loops > 0 {
        out.loop_tables = loop_tables(fk, p.loops, seed)?;
    }
    match (p.alpha, p.beta, p.im_tau) {
        (Some(alpha), Some(beta), Some(im_tau)) => {
            let t = topological_observable(&fk.map, fk.q, alpha, beta, im_tau)?;
            out.results.push(Quantity::complex("lhs", t.lhs, EXACT));
            out.results.push(Quantity::complex("rhs", t.rhs, EXACT));
            out.results.push(Quantity::real("f", t.f, EXACT));
            out.results.push(Quantity::real("f0", t.f0, EXACT));
            out.checks.push(Check::exact(
                "f(alpha, beta) / f(0, 0) = E_6V[exp(i(2 alpha/pi J_B - 2 beta Im tau/pi J_A))]",
                rel(t.lhs, t.rhs),
                p.tolerance.unwrap_or(1e-10),
            ));
        }
        (None, None, None) if p.loops > 0 => {}
        (None, None, None) => {
            return Err(Error::SpecInvalid(
                "observable needs `loops` or all of alpha, beta, im_tau".into(),
            ))
        }
        _ => {
            return Err(Error::SpecInvalid(
                "alpha, beta and im_tau go together".into(),
            ))
        }
    }
    Ok(out)
}

/// Loop id of every medial edge for `count` exact FK draws; `-1` marks
/// edges not on any loop.
fn loop_tables(fk: &FkModel, count: usize, seed: u64) -> Result<Vec<Vec<i64>>> {
    let lattice = LoopLattice::new(&fk.map)?;
    let sampler = FkExactSampler::new(fk)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let gas = lattice.loop_representation(&sampler.sample(&mut rng))?;
            Ok(gas
                .loop_of_edge
                .iter()
                .map(|l| l.map_or(-1, |i| i as i64))
                .collect())
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteParams {
    suite: String,
}

pub fn run_suite_task(table: &toml::Table, seed: u64) -> Result<Outcome> {
    let p: SuiteParams = params(table)?;
    run_suite(&p.suite, seed)
}

pub fn run_suite(name: &str, seed: u64) -> Result<Outcome> {
    let criteria = suite_criteria(name)?
        .iter()
        .map(|&id| run_criterion(id, seed))
        .collect::<Result<_>>()?;
    Ok(Outcome {
        criteria,
        ..Default::default()
    })
}
