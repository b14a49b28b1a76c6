use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsor-bench"))
}

#[test]
fn solve_prints_a_row_and_sets_exit_code() {
    let out =
        bin().args(["solve", "--example", "4", "--m", "16", "--method", "gsor", "--alpha", "0.862"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("example,m,method,alpha,iterations,converged,final_residual,wall_time_s\n4,16,GSOR,0.862,")
    );

    let out = bin()
        .args(["solve", "--example", "1", "--m", "8", "--method", "gsor", "--alpha", "1.9", "--maxit", "20"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_numerical_errors() {
    assert_eq!(
        bin().args(["solve", "--example", "9", "--m", "8", "--method", "gsor"]).status().unwrap().code(),
        Some(1)
    );
    assert_eq!(bin().args(["frobnicate"]).status().unwrap().code(), Some(1));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "examples = [1]\nm = [8]\nmethods = [\"gsor\"]\ntol = -1.0\n").unwrap();
    assert_eq!(bin().args(["bench", "--config"]).arg(&cfg).status().unwrap().code(), Some(1));
    let out = bin().args(["solve", "--example", "2", "--m", "8", "--method", "mhss", "--alpha=-5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha > 0"));
}

#[test]
fn bench_writes_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.toml");
    std::fs::write(
        &cfg,
        "examples = [2]\nm = [8, 16]\nmethods = [\"gsor\", \"gsor-gmres\"]\nalpha_source = \"computed\"\n",
    )
    .unwrap();
    let out = dir.path().join("report.md");
    let status =
        bin().args(["bench", "--format", "markdown", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let md = std::fs::read_to_string(out).unwrap();
    assert!(md.contains("| GSOR_GMRES | α |"));
}

#[test]
fn alpha_and_export_subcommands() {
    let out = bin().args(["alpha", "--example", "2", "--m", "16"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("alpha 0.45"));
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["export", "--example", "1", "--m", "4", "--out-dir"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    assert!(dir.path().join("W.mtx").exists() && dir.path().join("b.txt").exists());
    let spec = dir.path().join("spec.csv");
    assert!(bin().args(["spectrum", "--example", "1", "--m", "4", "--out"]).arg(&spec).status().unwrap().success());
    assert!(std::fs::read_to_string(spec).unwrap().contains("set,re,im"));
}
