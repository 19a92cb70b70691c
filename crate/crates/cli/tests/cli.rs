use std::fs;
use std::process::{Command, Output};

fn ltfsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltfsm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SIM: [&str; 9] = ["simulate", "--alpha", "1.2", "--hurst", "0.3", "--epsilon", "0.5", "--seed", "7"];

#[test]
fn simulate_writes_grid_rows_starting_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("path.csv");
    let mut args = SIM.to_vec();
    args.extend(["--grid", "50", "--out", out.to_str().unwrap()]);
    let o = ltfsm(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,value");
    assert_eq!(lines[1], "0,0");
    assert_eq!(lines.len(), 52);
    for l in &lines[1..] {
        let cells: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 2);
    }
    let manifest = fs::read_to_string(dir.path().join("path.csv.manifest")).unwrap();
    assert!(manifest.starts_with("command = simulate\n"));
    assert!(manifest.contains("seed = 7\n"));
    assert!(manifest.contains("grid = 50\n"));
}

#[test]
fn simulate_is_deterministic() {
    let a = ltfsm(&SIM);
    let b = ltfsm(&SIM);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1002);
}

#[test]
fn infeasible_delta_is_a_config_error() {
    let o = ltfsm(&["simulate", "--alpha", "1.9", "--hurst", "0.99", "--epsilon", "0.5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("delta < 1/(2H) - 1/2"), "{}", stderr(&o));
}

#[test]
fn bounds_report() {
    let o = ltfsm(&["bounds", "--alpha", "1", "--q", "2", "--N", "5", "--Mq", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "truncation_bound = 0.72"), "{}", stdout(&o));
    assert!(stdout(&o).lines().any(|l| l == "B_q = 1"));

    let o = ltfsm(&["bounds", "--alpha", "1", "--q", "1.5", "--N", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q >= 2"));

    let o = ltfsm(&["bounds", "--alpha", "1", "--q", "2", "--N", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N > q/alpha - 1"));
}

#[test]
fn bounds_with_approximation_terms() {
    let o = ltfsm(&["bounds", "--alpha", "1", "--q", "2.5", "--N", "5", "--P", "20", "--beta", "0.1", "--p", "1", "--volK", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for key in ["A_prime_q", "approximation_bound", "truncation_bound_lp", "approximation_bound_lp"] {
        assert!(stdout(&o).contains(&format!("{key} = ")), "{key}");
    }
    let o = ltfsm(&["bounds", "--alpha", "1", "--q", "2", "--N", "5", "--p", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_cf_refusals() {
    let o = ltfsm(&["validate-cf", "--alpha", "1.2", "--hurst", "0.5", "--paths", "10", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("alpha = 1"));
    let o = ltfsm(&["validate-cf", "--alpha", "1", "--hurst", "0.5", "--paths", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least 2"));
}

#[test]
fn validate_cf_reports_and_enforces_threshold() {
    let base = ["validate-cf", "--alpha", "1", "--hurst", "0.5", "--paths", "300", "--seed", "3", "--max-points", "32"];
    let o = ltfsm(&base);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("t,log_abs_cf,stderr\n"));
    assert_eq!(text.lines().filter(|l| l.contains(',')).count(), 21);
    assert!(text.contains("r2 = ") && text.contains("status = pass"));

    let mut strict = base.to_vec();
    strict.extend(["--threshold", "1.01"]);
    let o = ltfsm(&strict);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("status = fail"));

    let mut rwrr = base.to_vec();
    rwrr.extend(["--method", "rwrr", "--steps", "2000"]);
    let o = ltfsm(&rwrr);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("method = rwrr"));
}

#[test]
fn stable_check_behaviour() {
    let o = ltfsm(&["stable-check", "--alpha", "2", "--terms", "10", "--samples", "10", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let args = ["stable-check", "--alpha", "1.2", "--terms", "2000", "--samples", "2000", "--seed", "4", "--threshold", "0.05"];
    let a = ltfsm(&args);
    let b = ltfsm(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("ks = "));
    assert!(stdout(&a).contains("fitted_scale = "));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# paper figure\nalpha = 1.2\nhurst = 0.3\nepsilon = 0.5\nseed = 7\ngrid = 10\n").unwrap();
    let from_file = ltfsm(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file).lines().count(), 12);
    let flags = ltfsm(&[&SIM[..], &["--grid", "10"]].concat());
    assert_eq!(from_file.stdout, flags.stdout);
    let overridden = ltfsm(&["simulate", "--config", cfg.to_str().unwrap(), "--seed", "8"]);
    assert_ne!(overridden.stdout, from_file.stdout);

    fs::write(&cfg, "alpha = 1.2\nbogus = 1\n").unwrap();
    let o = ltfsm(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn replay_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.txt");
    let o = ltfsm(&["bounds", "--alpha", "1.2", "--q", "2.5", "--N", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let first = fs::read(&out).unwrap();
    fs::remove_file(&out).unwrap();
    let manifest = dir.path().join("b.txt.manifest");
    let r = ltfsm(&["replay", manifest.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    assert_eq!(fs::read(&out).unwrap(), first);
    assert_eq!(r.stdout, o.stdout);
}

#[test]
fn thread_count_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_ltfsm"))
        .args(["bounds", "--alpha", "1", "--q", "2", "--N", "5"])
        .env("LTFSM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
