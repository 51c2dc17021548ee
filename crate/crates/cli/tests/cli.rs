use std::path::PathBuf;
use std::process::{Command, Output};

const ED: &str = "constraint U1 1\n1 3\nconstraint U3 1\n2 1\nvars 3\napply EQ 1 2\napply XOR 2 3\napply U1 1\napply U3 3\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxprod"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("maxprod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn key(out: &str, k: &str) -> String {
    let prefix = format!("{k}: ");
    out.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{k}` in:\n{out}"))
        .to_string()
}

#[test]
fn classify_categories() {
    let cases = [
        ("use EQ XOR\n", "PO_ED"),
        ("use EQ IMPLIES\n", "INTERMEDIATE_IMOPT"),
        ("use IMPLIES NAND\n", "IS_HARD"),
        ("constraint CUT 2\n1 2 2 1\n", "IS_HARD"),
    ];
    for (i, (body, want)) in cases.iter().enumerate() {
        let p = scratch(&format!("set{i}.txt"), body);
        let o = run(&["classify", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(&format!("category: {want}")), "{}", stdout(&o));
        let o = run(&["--machine", "classify", p.to_str().unwrap()]);
        assert_eq!(key(&stdout(&o), "category"), *want);
    }
}

#[test]
fn bad_input_exits_2() {
    let empty = scratch("empty.txt", "");
    assert_eq!(run(&["classify", empty.to_str().unwrap()]).status.code(), Some(2));
    let bad = scratch("bad.txt", "constraint F 2\n1 2 3\n");
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent/file.csp"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn solve_ed_example() {
    let p = scratch("ed.csp", ED);
    for method in ["auto", "brute", "tractable"] {
        let o = run(&["--machine", "solve", p.to_str().unwrap(), "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert_eq!(key(&out, "optimum"), "6");
        assert_eq!(key(&out, "argmax"), "110");
    }
    let o = run(&["solve", p.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("optimum 6 (6)"), "{out}");
    assert!(out.contains("method parity_components"), "{out}");
}

#[test]
fn unsatisfiable_reports_zero() {
    let p = scratch("unsat.csp", "vars 1\napply D0 1\napply D1 1\n");
    let o = run(&["--machine", "solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(key(&out, "optimum"), "0");
    assert_eq!(key(&out, "optimum_zero"), "true");
}

#[test]
fn gen_is_deterministic() {
    for kind in ["is", "bis", "flow", "cut", "csp", "ed", "imopt"] {
        let args = ["--seed", "11", "gen", "--kind", kind, "--n", "6"];
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
    }
}

#[test]
fn bis_reduction_preserves_optimum() {
    for seed in ["1", "2", "3"] {
        let g = stdout(&run(&["--seed", seed, "gen", "--kind", "bis", "--n", "7"]));
        let gp = scratch(&format!("bis{seed}.g"), &g);
        let csp = stdout(&run(&["reduce", "bis2csp", gp.to_str().unwrap()]));
        let cp = scratch(&format!("bis{seed}.csp"), &csp);
        let o = run(&["--machine", "solve", cp.to_str().unwrap(), "--method", "brute"]);
        let via = key(&stdout(&o), "optimum");
        let direct = key(&stdout(&run(&["--machine", "solve", gp.to_str().unwrap()])), "optimum");
        assert_eq!(via, direct, "seed {seed}");
    }
}

#[test]
fn eval_measures_assignment() {
    let p = scratch("eval.csp", ED);
    let o = run(&["--machine", "eval", p.to_str().unwrap(), "110"]);
    assert_eq!(key(&stdout(&o), "value"), "6");
    let o = run(&["--machine", "eval", p.to_str().unwrap(), "010"]);
    assert_eq!(key(&stdout(&o), "value"), "0");
    assert_eq!(run(&["eval", p.to_str().unwrap(), "01"]).status.code(), Some(2));
}

#[test]
fn check_suites_pass() {
    let o = run(&["check", "--suite", "all", "--cases", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
