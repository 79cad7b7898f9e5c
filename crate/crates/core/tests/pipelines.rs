use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gmo_survival::experiment::{replication_rng, run_judges, run_uefa, Metadata};
use gmo_survival::{GmoModel, ShockDistribution};
use rand::Rng;

fn gmo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmo")).args(args).env_remove("GMO_OUTPUT_DIR").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn sidecar(path: &Path) -> Metadata {
    let meta = path.with_file_name(format!("{}.meta.json", path.file_name().unwrap().to_string_lossy()));
    serde_json::from_str(&fs::read_to_string(meta).unwrap()).unwrap()
}

fn write_pairs(path: &Path, n: usize) {
    let exp = |r| ShockDistribution::exponential(r).unwrap();
    let m = GmoModel::new(exp(0.007), exp(0.017), exp(0.017)).unwrap();
    let mut rng = replication_rng(3, n, 0);
    let mut body = String::from("kick_goal,home_goal\n");
    for _ in 0..n {
        let [x1, x2, x3] = m.draw_shocks(&mut rng);
        body += &format!("{},{}\n", x1.min(x3).ceil(), x2.min(x3).ceil());
    }
    fs::write(path, body).unwrap();
}

fn write_status(path: &Path, n: usize) {
    let mut rng = replication_rng(4, n, 0);
    let w = |k, l| ShockDistribution::weibull(k, l).unwrap();
    let m = GmoModel::new(w(1.4, 30.0), w(1.4, 20.0), w(1.4, 25.0)).unwrap();
    let mut body = String::from("name,tenure,event\n");
    for i in 0..n {
        let [x1, x2, x3] = m.draw_shocks(&mut rng);
        let (t, status) = if x3 < x1.min(x2) {
            (x3, 0)
        } else if x1 < x2 {
            (x1, 1)
        } else {
            (x2, 2)
        };
        let jitter: f64 = rng.random_range(0.0..1e-6);
        body += &format!("judge{i},{:.6},{status}\n", t + jitter);
    }
    fs::write(path, body).unwrap();
}

#[test]
fn simulate_writes_reproducible_outputs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bodies = Vec::new();
    for d in &dirs {
        let out = d.path().to_str().unwrap();
        let o = gmo(&["simulate", "--model", "b", "--n", "30,60", "--reps", "4", "--seed", "9", "--grid", "16", "--eval", "0.2,0.3", "--out", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("n,reps,ise_mean"));
        let mut files: Vec<_> = fs::read_dir(d.path()).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        let data: Vec<_> = files.iter().filter(|p| !p.to_string_lossy().ends_with(".meta.json")).collect();
        assert!(data.iter().any(|p| p.extension().unwrap() == "svg"));
        for p in &data {
            let meta = sidecar(p);
            assert_eq!(meta.seed, Some(9));
            assert_eq!(meta.file, p.file_name().unwrap().to_string_lossy());
        }
        bodies.push(
            data.iter()
                .map(|p| (p.file_name().unwrap().to_owned(), fs::read(p).unwrap(), sidecar(p).config_hash))
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn output_dir_from_environment_and_json_format() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gmo"))
        .args(["simulate", "--n", "25", "--reps", "2", "--grid", "16", "--format", "json"])
        .env("GMO_OUTPUT_DIR", d.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let docs: Vec<serde_json::Value> =
        serde_json::Deserializer::from_str(&text).into_iter().collect::<Result<_, _>>().unwrap();
    assert_eq!(docs.len(), 2);
    assert_eq!(docs[0][0]["n"], 25);
    assert_eq!(docs[1][0]["reps"], 2);
    assert!(d.path().join("joint_accuracy.json").exists());
}

#[test]
fn tau_and_copula_commands() {
    let o = gmo(&["tau", "--model", "a", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v[0]["tau"].as_f64().unwrap() - 0.5).abs() < 1e-6);

    let o = gmo(&["tau", "--model", "exp(1);exp(1);never", "--n", "20", "--reps", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("model,tau,p_simultaneous\nexp(1);exp(1);never,0.0,0.0"));

    let o = gmo(&["copula-eval", "--model", "a", "--eval", "0.5,0.5", "--eval", "1,0.3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    let value = |l: &str| l.rsplit(',').next().unwrap().parse::<f64>().unwrap();
    let expect = 0.25 * (0.5f64.powf(-0.75)).min(0.5f64.powf(-0.6));
    assert!((value(lines[0]) - expect).abs() < 1e-9);
    assert!((value(lines[1]) - 0.3).abs() < 1e-15);
    let o = gmo(&["copula-eval", "--grid", "16"]);
    assert_eq!(stdout(&o).lines().count(), 257);
    assert_eq!(code(&gmo(&["copula-eval", "--grid", "4"])), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&gmo(&["tau", "--model", "gamma(2)"])), 2);
    assert_eq!(code(&gmo(&["simulate", "--reps", "0", "--out", "/tmp/gmo-never-written"])), 2);
    assert_eq!(code(&gmo(&["copula-eval", "--eval", "1.5,0.2"])), 2);
    assert_eq!(code(&gmo(&["copula-eval"])), 2);
    assert_eq!(code(&gmo(&["fetch-data", "--dataset", "uefa", "--out", "/tmp/gmo-never-written"])), 2);

    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    let out = out.to_str().unwrap();
    let missing = d.path().join("missing.csv");
    assert_eq!(code(&gmo(&["uefa", "--input", missing.to_str().unwrap(), "--out", out])), 3);
    let bad = d.path().join("bad.csv");
    fs::write(&bad, "kick,home\n12,x\n").unwrap();
    assert_eq!(code(&gmo(&["uefa", "--input", bad.to_str().unwrap(), "--out", out])), 3);
    fs::write(&bad, "time,status\n3,7\n").unwrap();
    assert_eq!(code(&gmo(&["judges", "--input", bad.to_str().unwrap(), "--out", out])), 3);
}

#[test]
fn uefa_pipeline_on_synthetic_pairs() {
    let d = tempfile::tempdir().unwrap();
    let input = d.path().join("uefa.csv");
    write_pairs(&input, 400);
    let report = run_uefa(&input, 50).unwrap();
    assert_eq!(report.n, 400);
    for (got, want) in [(report.mle.lambda1, 0.007), (report.mle.lambda2, 0.017), (report.mle.lambda3, 0.017)] {
        assert!((got / want - 1.0).abs() < 0.25, "{got} vs {want}");
    }
    assert!(report.ise_gmo >= 0.0 && report.ise_ml >= 0.0);
    assert!(report.tau_n > 0.2 && report.tau_n < 0.6);

    let out = d.path().join("out");
    let o = gmo(&["uefa", "--input", input.to_str().unwrap(), "--grid", "50", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["uefa_summary.json", "uefa_curves.csv", "uefa_survival.svg", "uefa_alpha.svg"] {
        assert!(out.join(f).exists(), "{f}");
        assert!(sidecar(&out.join(f)).seed.is_none());
    }
}

#[test]
fn judges_pipeline_on_synthetic_status_data() {
    let d = tempfile::tempdir().unwrap();
    let input = d.path().join("justices.csv");
    write_status(&input, 113);
    let report = run_judges(&input).unwrap();
    assert_eq!(report.n, 113);
    assert!(report.tau_n > 0.0 && report.tau_n < 1.0);
    assert!(report.alpha1_central_range.is_finite() && report.alpha2_central_range.is_finite());

    let out = d.path().join("out");
    let o = gmo(&["judges", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["n"], 113);
    assert!(out.join("judges_curves.json").exists());
}
