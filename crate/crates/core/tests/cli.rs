use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cdsclear::instances::{
    acyclic_cds_chain, irrational_cycle, multiple_equilibria, weakly_switched_cycle,
};
use cdsclear::io::{read_instance, write_instance};
use cdsclear::numeric::rat;
use cdsclear::FinancialSystem;
use tempfile::TempDir;

fn cdsclear(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdsclear"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn instance_file(dir: &TempDir, name: &str, sys: &FinancialSystem) -> PathBuf {
    let path = dir.path().join(name);
    write_instance(&path, sys).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_acyclic_chain_exactly() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "chain.json", &acyclic_cds_chain());
    let out = cdsclear(&["solve", s(&path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("solver: acyclic"), "{text}");
    assert!(
        text.contains("solution 1: (2/3, 1, 2/3, 1, 1, 1)"),
        "{text}"
    );
    assert!(text.contains("residual: 0"), "{text}");
}

#[test]
fn solve_irrational_cycle_by_iteration() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "fig.json", &irrational_cycle());
    let out = cdsclear(&[
        "solve",
        s(&path),
        "--solver",
        "iterate",
        "--eps",
        "1e-9",
        "--mode",
        "float",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.trim_start().starts_with("2 = "))
        .expect("rate of bank 2");
    let r2: f64 = line.trim_start()[4..].parse().unwrap();
    assert!(
        (r2 - (1.0 - std::f64::consts::SQRT_2 / 2.0)).abs() < 1e-8,
        "{r2}"
    );
    assert!(text.contains("converged: yes"));
}

#[test]
fn scc_solver_refuses_weakly_switched_cycle() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "weak.json", &weakly_switched_cycle());
    let out = cdsclear(&["solve", s(&path), "--solver", "scc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("weakly switched cycle present"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn auto_solver_falls_back_to_iteration() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "weak.json", &weakly_switched_cycle());
    let out = cdsclear(&["solve", s(&path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("note: scc solver not applicable"), "{text}");
    assert!(text.contains("solver: iterate"), "{text}");
}

#[test]
fn iteration_cap_gives_its_own_exit_code() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "fig.json", &irrational_cycle());
    let out = cdsclear(&["solve", s(&path), "--solver", "iterate", "--max-iter", "3"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stdout(&out).contains("converged: no"));
}

#[test]
fn branch_cap_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "eq.json", &multiple_equilibria(&rat(1, 100)));
    let capped = Command::new(env!("CARGO_BIN_EXE_cdsclear"))
        .args(["solve", s(&path), "--solver", "dedicated"])
        .env("CDSCLEAR_MAX_BRANCHES", "1")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2), "{}", stderr(&capped));
    let free = cdsclear(&["solve", s(&path), "--solver", "dedicated"]);
    assert_eq!(free.status.code(), Some(0), "{}", stderr(&free));
    let text = stdout(&free);
    assert!(text.contains("(1, 1, 1, 1, 0, 1)"), "{text}");
    assert!(text.contains("(1, 48/49, 1, 1, 25/49, 1)"), "{text}");
}

#[test]
fn analyze_reports_the_strongly_switched_cycle() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "fig.json", &irrational_cycle());
    let out = cdsclear(&["analyze", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("strongly switched cycle: 2→3→7→6"), "{text}");
    assert!(text.contains("non-degenerate: yes"));
    assert!(text.contains("acyclic: no"));
    assert!(text.contains("  2 on"));
}

#[test]
fn verify_exact_fixed_point() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "eq.json", &multiple_equilibria(&rat(1, 100)));
    let vector = dir.path().join("r.json");
    std::fs::write(
        &vector,
        r#"{"1": "1", "2": "1", "3": "1", "4": "1", "5": "0", "6": "1"}"#,
    )
    .unwrap();
    let out = cdsclear(&["verify", s(&path), s(&vector)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("residual: 0\n"), "{text}");
    assert!(text.contains("clearing: yes"), "{text}");
}

#[test]
fn verify_weak_approximation_with_rational_tolerance() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "eq.json", &multiple_equilibria(&rat(1, 100)));
    let vector = dir.path().join("r.json");
    std::fs::write(
        &vector,
        r#"{"1": "1", "2": "49/50", "3": "1", "4": "1", "5": "51/100", "6": "1"}"#,
    )
    .unwrap();
    let out = cdsclear(&["verify", s(&path), s(&vector), "--eps", "1/100"]);
    let text = stdout(&out);
    assert!(text.contains("residual: 1/100\n"), "{text}");
    assert!(text.contains("clearing: no"), "{text}");
    // The weak test is strict: a residual equal to the tolerance does not pass.
    assert!(text.contains("weak 1/100-approximate: no"), "{text}");
    let out = cdsclear(&["verify", s(&path), s(&vector), "--eps", "101/10000"]);
    assert!(
        stdout(&out).contains("weak 101/10000-approximate: yes"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn export_dot_writes_a_digraph() {
    let dir = TempDir::new().unwrap();
    let path = instance_file(&dir, "chain.json", &acyclic_cds_chain());
    let out = cdsclear(&["export-dot", s(&path)]);
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("color=orange") && text.contains("style=dashed"));
}

#[test]
fn compile_constant_circuit() {
    let dir = TempDir::new().unwrap();
    let circuit = dir.path().join("half.json");
    std::fs::write(
        &circuit,
        r#"{"inputs": ["x"], "outputs": ["h"], "gates": [
            {"id": "x", "kind": "input", "operands": []},
            {"id": "h", "kind": "const", "operands": [], "constant": "1/2"}
        ]}"#,
    )
    .unwrap();
    let out = cdsclear(&["compile", s(&circuit)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let instance = dir.path().join("half.instance.json");
    let portmap: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("half.portmap.json")).unwrap(),
    )
    .unwrap();
    let input = portmap["inputs"][0].as_str().unwrap().to_string();
    // The output does not depend on the input, so the compiled instance is acyclic.
    let sys = read_instance(&instance).unwrap();
    assert!(sys.index_of(&input).is_ok());
    let solved = cdsclear(&["solve", s(&instance)]);
    assert_eq!(solved.status.code(), Some(0), "{}", stderr(&solved));
    let line = format!("  {input} = 1/2");
    assert!(
        stdout(&solved).lines().any(|l| l == line),
        "{}",
        stdout(&solved)
    );
}

#[test]
fn fragment_closed_form_and_rewriting() {
    let out = cdsclear(&["fragment", "g1a.g1a", "--solve"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        stdout(&out).trim(),
        "(3 - 1*sqrt(5))/2 ≈ 0.381966011250105151795413165634"
    );
    let out = cdsclear(&["fragment", "g1a.g2b.d1.d2", "--rewrite"]);
    assert_eq!(stdout(&out).trim(), "g1a.g1a.g1a");
}

#[test]
fn fragment_emission_and_precondition_errors() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cycle.json");
    let out = cdsclear(&["fragment", "g1a.g2b", "--emit", s(&path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(read_instance(&path).unwrap().index_of("v0").is_ok());
    let bad = cdsclear(&["fragment", "g3a.d1", "--solve"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("g3"), "{}", stderr(&bad));
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"banks\": [\n    {\"id\": \"a\"}\n  ]\n}").unwrap();
    let out = cdsclear(&["solve", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
    assert_eq!(
        cdsclear(&["solve", "/nonexistent/file.json"]).status.code(),
        Some(1)
    );
    assert_eq!(cdsclear(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn shipped_data_files_parse() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for name in [
        "acyclic_cds_chain",
        "irrational_cycle",
        "multiple_equilibria",
        "weakly_switched_cycle",
    ] {
        let out = cdsclear(&["analyze", s(&data.join(format!("{name}.json")))]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
    }
}
