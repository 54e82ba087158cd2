use std::path::Path;
use std::process::{Command, Output};

fn mstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mstar")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = r#"
[suite]
id = "small"
kind = "trend"
samples = 20
seed = 3
output_dir = "unused"

[schedule]
stages = [0, 1]
growth = "table"
values = [32, 64]
cap = 64

[[assertion]]
name = "bottom"
kind = "approaches"
sequences = ["constant:_|_"]
target = TARGET
window = 1
"#;

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&mstar(&[])), 2);
    assert_eq!(code(&mstar(&["frobnicate"])), 2);
    assert_eq!(code(&mstar(&["run", "/no/such/config.toml"])), 2);
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "bad.toml", &SMALL.replace("TARGET", "0.0").replace("[0, 1]", "[1, 0]"));
    let out = mstar(&["run", &bad]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly increasing"));
    let trend = write_config(tmp.path(), "trend.toml", &SMALL.replace("TARGET", "0.0"));
    assert_eq!(code(&mstar(&["crosscheck", &trend])), 2, "wrong suite kind");
}

#[test]
fn assertion_results_set_the_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let pass = write_config(tmp.path(), "pass.toml", &SMALL.replace("TARGET", "0.0"));
    let fail = write_config(tmp.path(), "fail.toml", &SMALL.replace("TARGET", "0.9"));
    let out_dir = tmp.path().join("pass_out");
    let out = mstar(&["run", &pass, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS bottom"));
    assert!(out_dir.join("trajectories.csv").exists() && out_dir.join("plots/bottom.svg").exists());
    let fail_dir = tmp.path().join("fail_out");
    let out = mstar(&["run", &fail, "--out", fail_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(std::fs::read_to_string(fail_dir.join("report.txt")).unwrap().contains("FAIL bottom"));
}

fn crosscheck_config(dir: &Path, name: &str, sentence: &str) -> String {
    let body = SMALL.replace("kind = \"trend\"", "kind = \"crosscheck\"").replace("TARGET", "0.0")
        + &format!(
            "\n[crosscheck]\nsentences = [\"{sentence}\"]\natom_window = 1\nrounds = 16\nmachine_budget = 16\npstar_samples = 50\npstar_seed = 2\n"
        );
    write_config(dir, name, &body)
}

#[test]
fn crosscheck_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("bottom");
    let out = mstar(&["crosscheck", &crosscheck_config(tmp.path(), "b.toml", "_|_"), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let pstar = std::fs::read_to_string(out_dir.join("pstar.csv")).unwrap();
    assert!(pstar.starts_with("sentence,value,ci,samples,seed,undecided\n"));
    // 64 machines rarely emit !_|_, so M* stays far below P* = 1 at this size.
    let out_dir = tmp.path().join("top");
    let out = mstar(&["crosscheck", &crosscheck_config(tmp.path(), "t.toml", "!_|_"), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL crosscheck !_|_"));
}

#[test]
fn list_and_demo() {
    let out = mstar(&["list-sequences"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for id in ["atom_chain", "tautology_chain", "mutex_family", "partition4.merged"] {
        assert!(text.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
    let tmp = tempfile::tempdir().unwrap();
    let out = mstar(&["demo", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(tmp.path().join("trajectories.jsonl").exists());
}
