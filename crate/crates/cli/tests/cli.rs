use std::path::Path;
use std::process::{Command, Output};

fn quench(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quench"));
    cmd.args(args).env_remove("THREADS");
    if let Some(t) = threads {
        cmd.env("THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn small_config(out: &Path, extra: &str) -> String {
    format!(
        r#"{{"n_sites": 24, "omega_initial": 3, "omega_final": 20, "coupling": 2,
            "quench_period": 4, "num_quenches": 3, "t_max": 16, "dt": 0.1,
            "output_path": {:?}{extra}}}"#,
        out.to_str().unwrap()
    )
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let cfg = write_config(dir.path(), "c.json", &small_config(&out, ""));
    let o = quench(&["simulate", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.split('\n');
    assert_eq!(lines.next(), Some("t,gamma_r,gamma_minus_beta,Z,entropy,n0,otoc,abs_ratio"));
    assert!(text.ends_with('\n') && !text.contains('\r'));
    // 0, 0.1, ..., 16 with the boundaries 4, 8 snapped onto the grid
    assert_eq!(text.lines().count(), 1 + 161);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 8);
    for cell in &row {
        let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{cell}");
    }
}

#[test]
fn disabled_observables_leave_empty_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("otoc.csv");
    let cfg = write_config(dir.path(), "c.json", &small_config(&out, r#", "observables": ["otoc"]"#));
    assert_eq!(quench(&["simulate", "--config", &cfg], None).status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = text.lines().nth(5).unwrap().split(',').collect();
    assert!(row[1..6].iter().all(|c| c.is_empty()));
    assert!(!row[6].is_empty() && row[7].is_empty());
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let ca = write_config(dir.path(), "a.json", &small_config(&a, r#", "threads": 1"#));
    let cb = write_config(dir.path(), "b.json", &small_config(&b, ""));
    assert_eq!(quench(&["simulate", "--config", &ca], None).status.code(), Some(0));
    assert_eq!(quench(&["simulate", "--config", &cb], Some("8")).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let unknown = write_config(dir.path(), "u.json", &small_config(&out, r#", "colour": "red""#));
    let bad_site = write_config(dir.path(), "s.json", &small_config(&out, r#", "otoc_sites": [1, 25]"#));
    let not_json = write_config(dir.path(), "n.json", "n_sites = 4");
    for cfg in [&unknown, &bad_site, &not_json] {
        let o = quench(&["simulate", "--config", cfg], None);
        assert_eq!(o.status.code(), Some(2), "{cfg}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(quench(&["simulate", "--config", missing.to_str().unwrap()], None).status.code(), Some(2));
    let ok = write_config(dir.path(), "ok.json", &small_config(&out, ""));
    assert_eq!(quench(&["simulate", "--config", &ok], Some("lots")).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn numerical_failure_exits_3_with_time() {
    // extreme squeezing drives beta_r up to gamma_r in double precision
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let body = format!(
        r#"{{"n_sites": 40, "omega_initial": 0.001, "omega_final": 1000, "coupling": 1,
            "quench_period": 0.37, "num_quenches": 9, "t_max": 10, "dt": 0.01,
            "output_path": {:?}}}"#,
        out.to_str().unwrap()
    );
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = quench(&["simulate", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("t = ") && err.contains("beta_r"), "{err}");
}

#[test]
fn short_run_warns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let cfg = write_config(dir.path(), "c.json", &small_config(&out, "").replace("\"t_max\": 16", "\"t_max\": 6"));
    let o = quench(&["simulate", "--config", &cfg], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn figure_preset_writes_each_series() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("fig.csv");
    // coarse dt keeps the N = 500 preset quick
    let cfg = write_config(dir.path(), "c.json", &small_config(&stem, "").replace("\"dt\": 0.1", "\"dt\": 2"));
    let o = quench(&["figures", "--config", &cfg, "--figure", "3"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for q in [1, 3, 5] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig_fig3_q{q}.csv"))).unwrap();
        assert!(text.starts_with("# figure 3 preset"));
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert!(header.starts_with("t,gamma_r"));
    }
    assert_eq!(quench(&["figures", "--config", &cfg, "--figure", "7"], None).status.code(), Some(2));
}

#[test]
fn validate_passes() {
    let o = quench(&["validate"], None);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS trace_out_n6"));
    assert!(!stdout.contains("FAIL"));
}
