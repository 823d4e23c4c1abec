//! The `qeq` binary end to end: exit codes and `RESULT:` lines.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn qeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeq")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn result_line(out: &Output) -> String {
    let text = stdout(out);
    let last = text.lines().last().unwrap_or_default().to_string();
    assert!(last.starts_with("RESULT: "), "no RESULT line in\n{text}");
    last
}

#[test]
fn beta_instance_files_are_equal() {
    let out = qeq(&["equiv", &data("beta_let_lhs.qeq"), &data("beta_let_rhs.qeq")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(result_line(&out), "RESULT: equal");
}

#[test]
fn duplication_is_a_type_error() {
    let out = qeq(&["typecheck", &data("duplicate.qeq")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("DuplicateUse"), "{}", stdout(&out));
    assert_eq!(result_line(&out), "RESULT: error");
}

#[test]
fn measuring_differs_from_doing_nothing() {
    let out = qeq(&["equiv", &data("identity.qeq"), &data("measure.qeq")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("counterexample"), "{text}");
    assert!(text.contains("input E_01") || text.contains("input E_10"), "{text}");
    assert_eq!(result_line(&out), "RESULT: different");
}

#[test]
fn eval_checks_its_input_and_applies_the_term() {
    let out = qeq(&["eval", &data("measure.qeq"), &data("plus.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    let json = text.lines().find_map(|l| l.strip_prefix("output: ")).expect("output line");
    let v: serde_json::Value = serde_json::from_str(json).expect("output is JSON");
    let entries = v["entries"].as_array().expect("entries");
    // measuring |+> leaves the maximally mixed state
    let re: Vec<f64> = entries.iter().map(|e| e[0].as_f64().unwrap()).collect();
    for (got, want) in re.iter().zip([0.5, 0.0, 0.0, 0.5]) {
        assert!((got - want).abs() < 1e-9, "{re:?}");
    }

    let not_density = qeq(&["eval", &data("measure.qeq"), &data("beta_let_lhs.qeq")]);
    assert_eq!(not_density.status.code(), Some(2));
}

#[test]
fn closed_terms_evaluate_without_input() {
    let out = qeq(&["eval", &data("bell.qeq")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(result_line(&out), "RESULT: ok trace 1.000000000");
}

#[test]
fn prove_prints_numbered_steps() {
    let out = qeq(&["prove", &data("swap_twice.qeq"), &data("pair_var.qeq"), "--depth", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("  0. ") && text.contains("  1. "), "{text}");
    assert!(result_line(&out).starts_with("RESULT: proved"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let out = qeq(&["typecheck", &data("unclosed.qeq")]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("unclosed.qeq:"), "{text}");
}

#[test]
fn translation_round_trips_through_files() {
    let out = qeq(&["translate", "--to-qexp", &data("hadamard_step.alg")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let expr = stdout(&out).lines().take_while(|l| !l.starts_with("RESULT")).collect::<Vec<_>>().join("\n");

    let dir = std::env::temp_dir().join(format!("qeq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("expr.qeq");
    std::fs::write(&file, &expr).unwrap();
    let back = qeq(&["translate", "--to-alg", file.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0), "{}", stdout(&back));
    assert!(stdout(&back).contains("(cont k (lower bool))"));

    let check = qeq(&["equiv", file.to_str().unwrap(), &data("hadamard.qeq")]);
    assert_eq!(result_line(&check), "RESULT: equal");
    let mismatch = qeq(&["equiv", file.to_str().unwrap(), &data("beta_let_rhs.qeq")]);
    assert_eq!(mismatch.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn open_types() {
    let out = qeq(&["normalize-type", "(tensor (tvar X) (oplus (lower bool) (tvar Y)))"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("bijection at every variable"));

    let yes = qeq(&["decide-equiv", "(oplus (tvar X) (tvar Y))", "(oplus (tvar Y) (tvar X))"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(result_line(&yes), "RESULT: equivalent");
    let no = qeq(&["decide-equiv", "(oplus (tvar X) (tvar X))", "(tensor (tvar X) (tvar X))"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn algebraic_suite_from_the_command_line() {
    let out = qeq(&["axioms-check", "staton", "--seed", "7", "--count", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(result_line(&out).starts_with("RESULT: pass"));
}

#[test]
fn verdicts_are_reproducible() {
    let a = qeq(&["axioms-check", "fig3-cc", "--seed", "11", "--count", "5"]);
    let b = qeq(&["axioms-check", "fig3-cc", "--seed", "11", "--count", "5"]);
    assert_eq!(a.stdout, b.stdout);
}
