use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use abelian_lattice::planar_map::{grid_torus, write_graph};

fn alat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tasks_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tasks")
}

fn report(out: &Output) -> toml::Table {
    toml::from_str(std::str::from_utf8(&out.stdout).unwrap()).expect("report is TOML")
}

fn result(report: &toml::Table, name: &str) -> f64 {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"].as_str() == Some(name))
        .unwrap_or_else(|| panic!("no result {name}"))["value"]
        .as_float()
        .unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Ising partition function on a cycle by summing over all spin states.
fn ising_cycle_z(k: &[f64]) -> f64 {
    let n = k.len();
    (0..1u32 << n)
        .map(|s| {
            let spin = |i: usize| if s >> (i % n) & 1 == 0 { 1.0 } else { -1.0 };
            (0..n)
                .map(|i| (k[i] * spin(i) * spin(i + 1)).exp())
                .product::<f64>()
        })
        .sum()
}

#[test]
fn ising_cycle4_duality_report() {
    let task = tasks_dir().join("ising_cycle4_duality.toml");
    let out = alat(&["--task", task.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["status"].as_str(), Some("pass"));
    assert_eq!(r["seed"].as_integer(), Some(1));
    let z = ising_cycle_z(&[0.3, 0.5, 0.7, 0.9]);
    let (lhs, rhs, ratio) = (result(&r, "lhs"), result(&r, "rhs"), result(&r, "ratio"));
    assert!((lhs - z).abs() < 1e-12 * z);
    assert!((rhs - z).abs() < 1e-10 * z);
    assert!((ratio - 1.0).abs() < 1e-10);
    let check = &r["checks"].as_array().unwrap()[0];
    assert_eq!(check["passed"].as_bool(), Some(true));
    assert_eq!(check["provenance"]["kind"].as_str(), Some("exact"));
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "ising_cycle4_duality.toml",
        "potts_connectivity_sample.toml",
        "fk_torus_topological.toml",
    ] {
        let task = tasks_dir().join(name);
        let mut reports = Vec::new();
        for run in 0..2 {
            let dest = dir.path().join(format!("{name}.{run}"));
            let out = alat(&[
                "--task",
                task.to_str().unwrap(),
                "--out",
                dest.to_str().unwrap(),
            ]);
            assert!(out.status.success(), "{name}: {}", stderr(&out));
            assert!(out.stdout.is_empty());
            reports.push(fs::read(&dest).unwrap());
        }
        assert_eq!(reports[0], reports[1], "{name}");
    }
}

#[test]
fn seed_flag_overrides_task_and_changes_samples() {
    let task = tasks_dir().join("potts_connectivity_sample.toml");
    let a = alat(&["--task", task.to_str().unwrap()]);
    let b = alat(&["--task", task.to_str().unwrap(), "--seed", "43"]);
    assert!(a.status.success() && b.status.success());
    let (ra, rb) = (report(&a), report(&b));
    assert_eq!(rb["seed"].as_integer(), Some(43));
    assert_eq!(rb["task"]["seed"].as_integer(), Some(43));
    let name = "P(v1 <-> v2)";
    assert_ne!(result(&ra, name), result(&rb, name));
    assert_eq!(
        result(&ra, "P(v1 <-> v2) exact"),
        result(&rb, "P(v1 <-> v2) exact")
    );
    let prov = &ra["results"].as_array().unwrap()[0]["provenance"];
    assert_eq!(prov["kind"].as_str(), Some("sampled"));
    assert_eq!(prov["n"].as_integer(), Some(20000));
    assert!(prov["stderr"].as_float().unwrap() > 0.0);
}

#[test]
fn threads_do_not_change_the_report() {
    let task = tasks_dir().join("fk_torus_topological.toml");
    let one = alat(&["--task", task.to_str().unwrap(), "--threads", "1"]);
    let four = alat(&["--task", task.to_str().unwrap(), "--threads", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn malformed_task_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("syntax.toml", "kind = \"partition\"\nseed = \n"),
        ("kind.toml", "kind = \"integrate\"\nseed = 1\n"),
        ("field.toml", "kind = \"partition\"\nseed = 1\ncolour = 3\n"),
        (
            "params.toml",
            "kind = \"partition\"\nseed = 1\n[model]\nkind = \"ising\"\ngraph = \"cycle4\"\nbeta_j = 0.2\n[params]\nx = 1\n",
        ),
        ("noseed.toml", "kind = \"partition\"\n[model]\nkind = \"ising\"\ngraph = \"cycle4\"\nbeta_j = 0.2\n"),
    ] {
        let p = write(dir.path(), name, text);
        let out = alat(&["--task", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(stderr(&out).contains("error: ParseError"), "{name}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
    let out = alat(&["--task", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("ParseError"));
}

#[test]
fn model_errors_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "graph.toml",
            "graph = \"dodecahedron\"\nbeta_j = 0.2\nkind = \"ising\"",
            "SpecInvalid",
        ),
        (
            "ice.toml",
            "graph = \"cycle4\"\nabc = [1.0, 1.0, 1.0]\nkind = \"six-vertex\"",
            "NotFourRegular",
        ),
        (
            "q.toml",
            "graph = \"cycle4\"\nq = 2.5\nbeta_j = 0.2\nkind = \"potts\"",
            "NotInteger",
        ),
    ];
    for (name, model, err) in cases {
        let text = format!("kind = \"partition\"\nseed = 1\n[model]\n{model}\n");
        let p = write(dir.path(), name, &text);
        let out = alat(&["--task", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(
            stderr(&out).contains(&format!("error: {err}:")),
            "{name}: {}",
            stderr(&out)
        );
    }
}

#[test]
fn resource_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = "kind = \"partition\"\nseed = 0\n[model]\nkind = \"fk\"\ngraph = { torus = [6, 6] }\nq = 2.0\nweights = 1.0\n";
    let p = write(dir.path(), "big.toml", text);
    let out = alat(&["--task", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("error: TooLarge"));
}

#[test]
fn unknown_suite() {
    let out = alat(&["--suite", "unknown"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error: UnknownSuite"));
    assert!(out.stdout.is_empty());
}

fn suite_checks(r: &toml::Table) -> Vec<toml::Table> {
    r["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["checks"].as_array().unwrap().iter())
        .map(|c| c.as_table().unwrap().clone())
        .collect()
}

#[test]
fn suite_kw_passes() {
    let out = alat(&["--suite", "kw"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["status"].as_str(), Some("pass"));
    let ids: Vec<i64> = r["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_integer().unwrap())
        .collect();
    assert_eq!(ids, [1, 4]);
    assert!(suite_checks(&r)
        .iter()
        .all(|c| c["passed"].as_bool() == Some(true)));
}

#[test]
fn suite_dgff_passes_with_small_residuals() {
    let out = alat(&["--suite", "dgff"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let checks = suite_checks(&report(&out));
    let exact: Vec<_> = checks
        .iter()
        .filter(|c| {
            c["name"].as_str().unwrap().starts_with("Poisson")
                || c["name"].as_str().unwrap().starts_with("Z_inst")
        })
        .collect();
    assert_eq!(exact.len(), 6);
    for c in exact {
        assert!(c["residual"].as_float().unwrap() <= 1e-10, "{c:?}");
    }
}

#[test]
fn suite_task_matches_suite_flag() {
    let task = tasks_dir().join("suite_kw.toml");
    let a = alat(&["--task", task.to_str().unwrap()]);
    let b = alat(&["--suite", "kw"]);
    assert!(a.status.success());
    assert_eq!(report(&a)["criteria"], report(&b)["criteria"]);
}

#[test]
fn failing_check_exits_1() {
    // the loop suite carries a literal statement that does not hold on the torus
    let out = alat(&["--suite", "loop"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"].as_str(), Some("fail"));
}

#[test]
fn model_and_graph_files_resolve_relative_to_their_file() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("models");
    fs::create_dir(&sub).unwrap();
    write(
        &sub,
        "torus.graph.toml",
        &write_graph(&grid_torus(2, 2).unwrap()),
    );
    write(
        &sub,
        "fk.toml",
        "kind = \"fk\"\ngraph = { file = \"torus.graph.toml\" }\nq = 3.0\nweights = 0.7\n",
    );
    let from_file = write(
        dir.path(),
        "a.toml",
        "kind = \"partition\"\nseed = 5\nmodel = \"models/fk.toml\"\nout = \"a.report.toml\"\n",
    );
    let inline = write(
        dir.path(),
        "b.toml",
        "kind = \"partition\"\nseed = 5\n[model]\nkind = \"fk\"\ngraph = { torus = [2, 2] }\nq = 3.0\nweights = 0.7\n",
    );
    let out = alat(&["--task", from_file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let written: toml::Table =
        toml::from_str(&fs::read_to_string(dir.path().join("a.report.toml")).unwrap()).unwrap();
    assert_eq!(
        written["task"]["resolved_model"]["kind"].as_str(),
        Some("fk")
    );
    let b = report(&alat(&["--task", inline.to_str().unwrap()]));
    assert_eq!(result(&written, "Z"), result(&b, "Z"));
}

#[test]
fn other_example_tasks_pass() {
    for name in [
        "dgff_t_duality.toml",
        "dimer_kasteleyn.toml",
        "fk_torus_topological.toml",
    ] {
        let out = alat(&["--task", tasks_dir().join(name).to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", stderr(&out));
    }
}

#[test]
fn ising_correlator_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let text = "kind = \"correlator\"\nseed = 0\n[model]\nkind = \"ising\"\ngraph = \"cycle4\"\nbeta_j = [0.4, 0.2, 0.9, 0.6]\n[params]\norders = [[0, 1], [2, 1]]\n";
    let p = write(dir.path(), "corr.toml", text);
    let out = alat(&["--task", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    // bundled cycle4 numbers its vertices around the cycle, edge i joining i and i+1
    let k: [f64; 4] = [0.4, 0.2, 0.9, 0.6];
    let (mut num, mut z) = (0.0, 0.0);
    for s in 0..16u32 {
        let spin = |i: usize| if s >> (i % 4) & 1 == 0 { 1.0 } else { -1.0 };
        let w: f64 = (0..4)
            .map(|i| (k[i] * spin(i) * spin(i + 1)).exp())
            .product();
        z += w;
        num += w * spin(0) * spin(2);
    }
    let got = result(&report(&out), "correlator");
    assert!((got - num / z).abs() < 1e-12, "{got} vs {}", num / z);
}
