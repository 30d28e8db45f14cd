use std::path::Path;
use std::process::{Command, Output};

fn atomsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomsel")).args(args).output().unwrap()
}

const CONFIG: &str = r#"
N = 60
K = 3
alpha_list = [0.2, 0.25]
smnr_db_list = ["clean", 15]
S = 3
T = 2
master_seed = 11

[[algorithms]]
name = "omp"

[[algorithms]]
name = "pomp"
L = 2

[[algorithms]]
name = "sols"
L = 3
gamma = 0.4
"#;

fn write_config(dir: &Path) -> String {
    let path = dir.join("cfg.toml");
    std::fs::write(&path, CONFIG).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_csv_and_json_then_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    let dat = dir.path().join("p.dat");

    let out = atomsel(&["sweep", "--config", &cfg, "--out", csv.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algorithm,alpha,M,smnr_db,srnr_db,asce,mf_ops,proj_ops,mean_seconds,trials");
    assert_eq!(lines.len(), 1 + 2 * 2 * 3);
    assert!(lines[1].starts_with("omp,0.20000000000000001,12,clean,"));
    assert!(lines[1].ends_with(",na,6"));

    let out = atomsel(&["sweep", "--config", &cfg, "--out", json.to_str().unwrap(), "--format", "json", "--seed", "11"]);
    assert!(out.status.success());
    let out = atomsel(&["plot-data", "--in", json.to_str().unwrap(), "--measure", "asce", "--out", dat.to_str().unwrap()]);
    assert!(out.status.success());
    let plot = std::fs::read_to_string(&dat).unwrap();
    let rows: Vec<Vec<&str>> = plot
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 4));
    assert!(plot.contains("# alpha omp pomp_L2 sols_L3_g0.4"));
    for r in &rows {
        for v in &r[1..] {
            let v: f64 = v.parse().unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn seed_flag_and_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let run = |name: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let mut args = vec!["sweep", "--config", cfg.as_str(), "--out", path.to_str().unwrap(), "--format", "csv"];
        args.extend_from_slice(extra);
        assert!(atomsel(&args).status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", &["--workers", "1"]);
    let b = run("b.csv", &["--workers", "4"]);
    let c = run("c.csv", &["--seed", "12"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn failures_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, CONFIG.replace("0.25", "0.255")).unwrap();
    let out_path = dir.path().join("never.csv");
    let cases: Vec<Vec<String>> = vec![
        vec!["sweep".into(), "--config".into(), bad.to_str().unwrap().into(), "--out".into(), out_path.to_str().unwrap().into()],
        vec!["sweep".into(), "--config".into(), "/no/such/file.toml".into(), "--out".into(), out_path.to_str().unwrap().into()],
        vec!["plot-data".into(), "--in".into(), "/no/such.json".into(), "--measure".into(), "srnr".into(), "--out".into(), out_path.to_str().unwrap().into()],
        vec!["sweep".into(), "--config".into(), bad.to_str().unwrap().into(), "--out".into(), "x".into(), "--format".into(), "xml".into()],
        vec!["time".into(), "--config".into(), bad.to_str().unwrap().into(), "--out".into(), out_path.to_str().unwrap().into(), "--reps".into(), "0".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = atomsel(&args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    }
    assert!(!out_path.exists());
}

#[test]
fn time_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t.toml");
    std::fs::write(&cfg, CONFIG.replace("master_seed = 11", "master_seed = 11\ntiming_pairs = [[60, 3], [80, 4]]")).unwrap();
    let out = dir.path().join("t.csv");
    let res = atomsel(&["time", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--reps", "2"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("omp,60,3,13,"));
    assert!(lines[1].ends_with(",3,3,0,12"));
}
