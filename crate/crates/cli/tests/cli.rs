use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn out_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("branched-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn run(name: &str, args: &[&str]) -> (Output, PathBuf) {
    let dir = out_dir(name);
    let output = Command::new(env!("CARGO_BIN_EXE_branched"))
        .arg("--out")
        .arg(&dir)
        .args(args)
        .output()
        .expect("binary runs");
    (output, dir)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_five_lists_nine_trees() {
    let (o, dir) = run("enum", &["enumerate", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 9);
    assert!(lines.contains(&"[[[[*]]]]".to_string()));
    assert!(lines.contains(&"[*.*.*.*]".to_string()));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("enumerate.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["data"]["count"], 9);
}

#[test]
fn labelled_enumeration() {
    // Two labels on two vertices: root label × child label.
    let (o, _) = run("enum-labels", &["enumerate", "--n", "2", "--labels", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn coproduct_of_cherry() {
    let (o, _) = run("coproduct", &["coproduct", "[*.*]"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("* ⊗ [*] ×2"), "{text}");
}

#[test]
fn counterexample_csv_diverges_above_lower_bound() {
    let (o, dir) = run(
        "counterexample",
        &["counterexample", "--gamma", "0.5", "--beta", "2", "--a", "0.5", "--b", "1", "--n-max", "200"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,exact_sum,lower_bound"));
    let rows: Vec<(usize, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|&(_, exact, lower)| exact >= lower));
    assert!(rows.iter().any(|&(_, exact, _)| exact > 1e3));
    // Monotone from some point on.
    assert!(rows[100..].windows(2).all(|w| w[1].1 > w[0].1));
    assert!(dir.join("counterexample.csv").exists());
}

#[test]
fn lemmas_default_run_passes() {
    let (o, dir) = run("lemmas", &["lemmas", "--gamma", "0.5", "--max-tree", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let summary = fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert!(summary.starts_with("lemma,grid,checked,violations,worst_slack,max_ratio"));
    for lemma in ["coassociativity", "forest-factorisation", "star-bound", "concavity", "adjacent-intervals", "main-lemma"] {
        assert!(summary.contains(lemma), "{lemma} missing");
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let args = ["--seed", "7", "lemmas", "--gamma", "0.5", "--max-tree", "4"];
    let (a, da) = run("det-a", &args);
    let (b, db) = run("det-b", &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(fs::read(da.join("lemmas.json")).unwrap(), fs::read(db.join("lemmas.json")).unwrap());
}

#[test]
fn bad_config_exits_four() {
    assert_eq!(run("bad-gamma", &["lemmas", "--gamma", "1.5"]).0.status.code(), Some(4));
    assert_eq!(run("bad-flag", &["enumerate", "--bogus"]).0.status.code(), Some(4));
    assert_eq!(run("bad-tree", &["coproduct", "[*"]).0.status.code(), Some(4));
    assert_eq!(run("bad-poly", &["lift", "--poly", "0,x"]).0.status.code(), Some(4));
    assert_eq!(run("no-source", &["lift"]).0.status.code(), Some(4));
    let missing = run("missing-csv", &["lift", "--csv", "/nonexistent/path.csv"]);
    assert_eq!(missing.0.status.code(), Some(4));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run("help", &["--help"]).0.status.code(), Some(0));
}

#[test]
fn non_convergence_exits_three() {
    let (o, _) = run(
        "nonconv",
        &["lift", "--preset", "plane", "--compare", "--samples", "16", "--tol", "1e-15", "--max-level", "1"],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn violations_exit_two() {
    // An absurd agreement tolerance turns discretisation error into violations.
    let (o, dir) = run(
        "violations",
        &["lift", "--preset", "plane", "--compare", "--samples", "256", "--tol", "1e-6", "--agree-tol", "1e-300"],
    );
    assert_eq!(o.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("lift.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], false);
}

#[test]
fn exact_lift_of_plane_curve() {
    let (o, _) = run("lift-exact", &["lift", "--preset", "plane", "--degree", "2", "--s", "0", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // ∫₀¹ t d(t²) = 2/3.
    assert!(text.contains("[*1]2 = 2/3"), "{text}");
}

#[test]
fn csv_path_lift_runs() {
    let dir = out_dir("csv-input");
    fs::create_dir_all(&dir).unwrap();
    let file = dir.join("path.csv");
    let mut body = String::from("t,x1,x2\n");
    for i in 0..=64 {
        let t = i as f64 / 64.0;
        body.push_str(&format!("{t},{t},{}\n", t * t));
    }
    fs::write(&file, body).unwrap();
    let (o, _) = run("csv-lift", &["lift", "--csv", file.to_str().unwrap(), "--degree", "3", "--tol", "1e-5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn identity_extension_agrees() {
    let (o, dir) = run("extend", &["extend", "--preset", "identity", "--truncation", "1", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("extend.json")).unwrap()).unwrap();
    assert!(!json["data"]["records"].as_array().unwrap().is_empty());
}

#[test]
fn decay_with_crossover() {
    let (o, dir) = run(
        "decay",
        &["verify-decay", "--preset", "plane", "--gamma", "0.75", "--degree", "4", "--level", "3", "--crossover"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("verify-decay.json")).unwrap()).unwrap();
    assert!(json["data"]["crossover"]["ln_n0"].as_f64().unwrap() > 0.0);
}
