use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrg"))
        .args(args)
        .env_remove("NR_WORKERS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("run.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn weights_example() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("w.csv");
    let o = nrg(&[
        "weights",
        "--tau",
        "3.5",
        "--c-f",
        "critical",
        "--n",
        "4",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(text.lines().next(), Some("index,weight"));
    assert_eq!(rows.len(), 4);
    let w1: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    let expect = (4.0 * 3f64.powf(-2.5)).powf(0.4);
    assert!((w1 - expect).abs() < 1e-12 * expect, "{w1} vs {expect}");
    assert!(d.path().join("w.csv.manifest.json").exists());

    let again = d.path().join("w2.csv");
    nrg(&["weights", "--tau", "3.5", "--n", "4", "--out", s(&again)]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn weights_rejects_single_vertex() {
    let d = tempfile::tempdir().unwrap();
    let o = nrg(&[
        "weights",
        "--tau",
        "3.5",
        "--n",
        "1",
        "--out",
        s(&d.path().join("w.csv")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(!d.path().join("w.csv").exists());
}

#[test]
fn bundled_desk_config_passes() {
    let d = tempfile::tempdir().unwrap();
    let cfg = workspace_root().join("configs/thm1-desk.json");
    let o = nrg(&["verify", s(&cfg), "--output-dir", s(d.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["reports"].as_object().unwrap().len(), 6);
    for (_, entry) in manifest["reports"].as_object().unwrap() {
        assert_eq!(entry["verdict"], "bound_holds");
        assert!(d.path().join(entry["file"].as_str().unwrap()).exists());
    }
}

#[test]
fn malformed_config_reports_line() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "{\n  \"experiments\": {\n    \"a\": {,\n");
    let o = nrg(&["verify", s(&cfg)]);
    assert_eq!(code(&o), 2);
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("line 3"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn unknown_key_rejected_before_compute() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        r#"{
  "experiments": {
    "a": {
      "spec": {"kind": "pareto_tail", "tau": 5},
      "n": 100,
      "replicates": 200,
      "quantity": {"type": "walk_positivity", "k": 3},
      "colour": "red"
    }
  },
  "output_dir": "out"
}"#,
    );
    let o = nrg(&["verify", s(&cfg), "--output-dir", s(&d.path().join("out"))]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("colour") && err.contains("line 8"), "{err}");
    assert!(!d.path().join("out").exists());
}

#[test]
fn invalid_experiment_is_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        r#"{"experiments": {"few": {"spec": {"kind": "pareto_tail", "tau": 5}, "n": 100, "replicates": 10,
            "quantity": {"type": "walk_positivity", "k": 3}}}, "output_dir": "out"}"#,
    );
    let o = nrg(&["verify", s(&cfg)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("experiments.few"));
}

#[test]
fn huge_n_refused() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        r#"{"experiments": {"big": {"spec": {"kind": "pareto_tail", "tau": 5}, "n": 1000000000, "replicates": 100,
            "quantity": {"type": "cmax_tail", "omega": 2}}}, "output_dir": "out"}"#,
    );
    let o = nrg(&["verify", s(&cfg)]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn vacuous_bound_exits_one() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        r#"{"experiments": {"tight": {"spec": {"kind": "pareto_tail", "tau": 5}, "n": 1000, "replicates": 200,
            "quantity": {"type": "gamma_mean", "cfg": {"h": 3, "h_prime": 3, "k": 1}}}}, "output_dir": "out"}"#,
    );
    let out = d.path().join("out");
    let o = nrg(&["verify", s(&cfg), "--output-dir", s(&out)]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("tight.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "vacuous");
}

#[test]
fn reports_identical_across_workers() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        r#"{"experiments": {
              "cluster": {"spec": {"kind": "pareto_tail", "tau": 3.5}, "n": 500, "replicates": 300,
                          "quantity": {"type": "cluster_tail", "k": 5}},
              "gamma": {"spec": {"kind": "pareto_tail", "tau": 5}, "n": 1000, "replicates": 1000,
                        "quantity": {"type": "gamma_mean", "cfg": {"h": 4, "h_prime": 1600, "k": 1}}}},
            "output_dir": "out", "format": "csv"}"#,
    );
    let hashes = |workers: &str| {
        let out = d.path().join(format!("out{workers}"));
        let o = Command::new(env!("CARGO_BIN_EXE_nrg"))
            .args(["verify", s(&cfg), "--output-dir", s(&out)])
            .env("NR_WORKERS", workers)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let m: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m["workers"], workers.parse::<u64>().unwrap());
        assert!(out.join("reports.csv").exists());
        m["reports"]
            .as_object()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v["canonical_sha256"].as_str().unwrap().to_string()))
            .collect::<Vec<_>>()
    };
    assert_eq!(hashes("1"), hashes("8"));
}

#[test]
fn sample_then_components() {
    let d = tempfile::tempdir().unwrap();
    let edges = d.path().join("g.csv");
    let bin = d.path().join("g.bin");
    let o = nrg(&["sample", "--tau", "3.5", "--n", "2000", "--out", s(&edges)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    nrg(&[
        "sample",
        "--tau",
        "3.5",
        "--n",
        "2000",
        "--format",
        "binary",
        "--out",
        s(&bin),
    ]);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("g.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 42);

    let sum_csv = d.path().join("c1.csv");
    let sum_bin = d.path().join("c2.csv");
    let trace = d.path().join("trace.csv");
    let o = nrg(&[
        "components",
        "--graph",
        s(&edges),
        "--n",
        "2000",
        "--out",
        s(&sum_csv),
        "--trace-vertex",
        "0",
        "--trace-out",
        s(&trace),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        code(&nrg(&[
            "components",
            "--graph",
            s(&bin),
            "--format",
            "binary",
            "--out",
            s(&sum_bin)
        ])),
        0
    );
    let a = std::fs::read_to_string(&sum_csv).unwrap();
    assert_eq!(a, std::fs::read_to_string(&sum_bin).unwrap());
    let total: usize = a
        .lines()
        .skip(1)
        .map(|l| {
            let (s, c) = l.split_once(',').unwrap();
            s.parse::<usize>().unwrap() * c.parse::<usize>().unwrap()
        })
        .sum();
    assert_eq!(total, 2000);
    assert!(trace.exists());

    let o = nrg(&["components", "--graph", s(&edges), "--out", s(&sum_csv)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn naive_sampler_guard() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("g.csv");
    let o = nrg(&[
        "sample",
        "--tau",
        "3.5",
        "--n",
        "20000",
        "--method",
        "naive",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn oracle_two_vertices() {
    let d = tempfile::tempdir().unwrap();
    let w = d.path().join("w.csv");
    std::fs::write(&w, "index,weight\n0,1\n1,1\n").unwrap();
    let cmax = d.path().join("cmax.csv");
    let cluster = d.path().join("cluster.csv");
    let o = nrg(&[
        "oracle",
        "--weights-file",
        s(&w),
        "--cmax-out",
        s(&cmax),
        "--cluster-out",
        s(&cluster),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&cmax).unwrap();
    let p2: f64 = text.lines().nth(2).unwrap().split_once(',').unwrap().1.parse().unwrap();
    assert!((p2 - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
    let o = nrg(&[
        "oracle",
        "--tau",
        "5",
        "--n",
        "7",
        "--cmax-out",
        s(&cmax),
        "--cluster-out",
        s(&cluster),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bounds_table() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("b.csv");
    let o = nrg(&["bounds", "--tau", "5", "--n", "1000,10000", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("n,tau,omega,H,Hprime,k,bound,source"));
    // 2 sizes × 3 ω × 3 rows.
    assert_eq!(text.lines().count(), 1 + 18);
    assert!(text.contains(",200,") && text.contains("largest_component_leading"));
}

#[test]
fn bp_and_walk_tables() {
    let d = tempfile::tempdir().unwrap();
    let bp = d.path().join("bp.csv");
    let o = nrg(&[
        "bp",
        "--tau",
        "3.5",
        "--n",
        "100",
        "--replicates",
        "50",
        "--out",
        s(&bp),
        "--trace-out",
        s(&d.path().join("t.csv")),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&bp).unwrap().lines().count(), 51);

    let walk = d.path().join("walk.csv");
    let path = d.path().join("path.csv");
    let o = nrg(&[
        "walk",
        "--tau",
        "5",
        "--n",
        "100",
        "--h",
        "3",
        "--h-prime",
        "900",
        "--k",
        "4",
        "--replicates",
        "20",
        "--out",
        s(&walk),
        "--path-out",
        s(&path),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&walk).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("replicate,gamma,s_gamma,positive_through_k,martingale_residual")
    );
    assert_eq!(text.lines().count(), 21);
    assert!(path.exists());

    let o = nrg(&[
        "walk",
        "--tau",
        "5",
        "--n",
        "100",
        "--h",
        "3",
        "--h-prime",
        "2",
        "--k",
        "4",
        "--out",
        s(&walk),
    ]);
    assert_eq!(code(&o), 2);
}
