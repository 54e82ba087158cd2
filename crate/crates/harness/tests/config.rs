use mstar_harness::{ConfigError, ExperimentConfig, TrendKind};

const BASE: &str = r#"
[suite]
id = "t"
kind = "trend"
samples = 10
seed = 1
output_dir = "out"

[schedule]
stages = [0, 1, 2]
growth = "linear"
slope = 8
offset = 8
cap = 64

[[assertion]]
name = "b"
kind = "approaches"
sequences = ["constant:_|_"]
"#;

fn invalid(text: &str) -> String {
    match ExperimentConfig::parse(text) {
        Err(ConfigError::Invalid(msg)) => msg,
        Err(other) => panic!("expected an invalid-config error, got {other}"),
        Ok(_) => panic!("config accepted:\n{text}"),
    }
}

#[test]
fn defaults_fill_in() {
    let cfg = ExperimentConfig::parse(BASE).unwrap();
    assert_eq!((cfg.tolerances.tol, cfg.tolerances.window), (0.15, 3));
    let a = &cfg.trend_assertions().unwrap()[0];
    assert_eq!(a.kind, TrendKind::ApproachesValue { target: 0.0, tol: 0.15 });
    let stages = cfg.stages().unwrap();
    assert_eq!(stages.iter().map(|s| s.machines()).collect::<Vec<_>>(), vec![8, 16, 24]);
    assert_eq!(cfg.con_params().proof_budget.max_steps, 16);
}

#[test]
fn rejects_bad_schedules_and_tolerances() {
    assert!(invalid(&BASE.replace("[0, 1, 2]", "[0, 2, 1]")).contains("strictly increasing"));
    assert!(invalid(&BASE.replace("[0, 1, 2]", "[]")).contains("empty"));
    assert!(invalid(&BASE.replace("growth = \"linear\"", "growth = \"table\"\nvalues = [4, 2, 1]")).contains("nondecreasing"));
    assert!(invalid(&format!("{BASE}tol = 1.5\n")).contains("not in (0, 1)"));
    assert!(invalid(&BASE.replace("samples = 10", "samples = 0")).contains("samples"));
    assert!(invalid(&BASE.replace("growth = \"linear\"", "growth = \"cubic\"")).contains("unknown growth"));
}

#[test]
fn rejects_bad_assertions() {
    assert!(invalid(&BASE.replace("\"approaches\"", "\"wobbles\"")).contains("unknown kind"));
    assert!(invalid(&BASE.replace("[\"constant:_|_\"]", "[\"no_such_family\"]")).contains("no_such_family"));
    assert!(invalid(&BASE.replace("\"approaches\"", "\"sum_approaches\"")).contains("at least two"));
    assert!(invalid(&BASE.replace("\"approaches\"", "\"difference_approaches\"")).contains("takes 2"));
    let no_assertions = BASE.split("[[assertion]]").next().unwrap();
    assert!(invalid(no_assertions).contains("at least one"));
}

#[test]
fn rejects_unknown_keys_as_parse_errors() {
    let text = BASE.replace("seed = 1", "seed = 1\ncolour = \"red\"");
    assert!(matches!(ExperimentConfig::parse(&text), Err(ConfigError::Parse(_))));
}

#[test]
fn crosscheck_sections() {
    let cross = BASE.replace("kind = \"trend\"", "kind = \"crosscheck\"");
    assert!(invalid(&cross).contains("[crosscheck]"));
    let section = "\n[crosscheck]\nsentences = [\"a0\", \"!a1\"]\natom_window = 2\nrounds = 8\nmachine_budget = 8\npstar_samples = 10\npstar_seed = 1\n";
    let ok = ExperimentConfig::parse(&format!("{cross}{section}")).unwrap();
    assert_eq!(ok.crosscheck.unwrap().tol, 0.10);
    assert!(invalid(&format!("{cross}{}", section.replace("atom_window = 2", "atom_window = 5"))).contains("exceeds 4"));
    assert!(
        invalid(&format!("{cross}{}", section.replace("atom_window = 2", "atom_window = 1"))).contains("leaves the atom window")
    );
}
