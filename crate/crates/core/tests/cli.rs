use std::path::Path;
use std::process::{Command, Output};

fn bipmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_verify_and_trace_diff() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let out = bipmatch(&[
        "gen", "--model", "dd", "--n", "7", "--s", "7", "--density", "0.8", "--rnorm", "0.5",
        "--weights", "ulh", "--plow", "0.3", "--seed", "5", "--out", path(&g),
    ]);
    assert!(out.status.success(), "{out:?}");

    let mut weights = Vec::new();
    for algo in ["auction", "gk", "hungarian"] {
        let out = bipmatch(&["solve", "--algo", algo, "--in", path(&g)]);
        assert!(out.status.success(), "{out:?}");
        let text = stdout(&out);
        let last = text.lines().last().unwrap().to_string();
        assert!(last.starts_with("weight "));
        assert_eq!(text.lines().count(), 8);
        weights.push(last);

        let out = bipmatch(&["verify", "--in", path(&g), "--against", algo]);
        assert!(out.status.success(), "{out:?}");
        assert!(stdout(&out).starts_with("ok"));
    }
    assert!(weights.windows(2).all(|w| w[0] == w[1]));

    let (ta, tb) = (dir.path().join("a.tr"), dir.path().join("b.tr"));
    for (algo, t) in [("auction", &ta), ("gk", &tb)] {
        let out = bipmatch(&["solve", "--algo", algo, "--alpha", "3", "--in", path(&g), "--trace", path(t)]);
        assert!(out.status.success(), "{out:?}");
    }
    let out = bipmatch(&["trace-diff", path(&ta), path(&tb)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "identical");
}

#[test]
fn trace_diff_reports_first_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    std::fs::write(&a, "0\t0\t0\t1\t2\t5\t3\t-7\t-1\n0\t1\t1\t0\t1\t4\t3\t-4\t-1\n").unwrap();
    std::fs::write(&b, "0\t0\t0\t1\t2\t5\t3\t-7\t-1\n0\t1\t1\t1\t1\t4\t3\t-4\t0\n").unwrap();
    let out = bipmatch(&["trace-diff", path(&a), path(&b)]);
    assert!(!out.status.success());
    assert!(stdout(&out).contains('1'));
}

#[test]
fn unbalanced_solve_with_both_reductions() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(&g, "3 2 4\n0 0 4\n1 0 1\n1 1 5\n2 1 2\n").unwrap();
    for red in ["double", "pad"] {
        let out = bipmatch(&["solve", "--algo", "auction", "--reduction", red, "--in", path(&g)]);
        assert!(out.status.success(), "{out:?}");
        assert_eq!(stdout(&out), "1 0\n2 1\nweight 3\n");
    }
}

#[test]
fn infeasible_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(&g, "2 2 2\n0 0 1\n1 0 1\n").unwrap();
    let out = bipmatch(&["solve", "--algo", "gk", "--in", path(&g)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
    let out = bipmatch(&["verify", "--in", path(&g), "--against", "hungarian"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "ok: infeasible");
}

#[test]
fn bench_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.toml");
    std::fs::write(
        &cfg,
        r#"
version = 1
edge_models = ["erdos_renyi"]
cost_models = ["uniform", "low_or_high"]
n_values = [16]
s_rules = ["sqrt_n", "n"]
densities = [0.6]
p_lows = [0.5]
repetitions = 2
algorithms = ["auction", "hungarian"]
seed_base = 3
time_limit_secs = 30.0
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bipmatch(&["bench", "--config", path(&cfg), "--out", path(&out_dir)]);
    assert!(out.status.success(), "{out:?}");
    let results = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let mut lines = results.lines();
    assert_eq!(
        lines.next().unwrap(),
        "edge_model,cost_model,n,s_rule,s,density,r_norm,p_low,repetition,algorithm,weight,millis,status"
    );
    assert_eq!(lines.count(), 2 * 2 * 2 * 2);
    for f in ["cells.csv", "slices.csv", "slices.dat"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
}
