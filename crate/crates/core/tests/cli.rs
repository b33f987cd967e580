use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_hstar");
const NEAR_RIDGE: &str = "1,1,1,1,1,1,1,1,1,1,1,1,1,1,12,0,0,0,0,0,0,0,0,0,0,0,0";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["product", "1,1", "1,2"]).status.code(), Some(0));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(
        run(&["gridsearch", "--k-max", "13", "--m-max", "20"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["counterexample", "--a", "0,0,2", "--b", "0,0,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["realize", "--q", "1", "--k", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["count-oracle", "--q", "1", "--k", "4"]).status.code(),
        Some(1)
    );
}

#[test]
fn parse_errors_name_the_token() {
    let o = run(&["product", "1,x,3", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"x\""));
}

#[test]
fn transform_both_directions() {
    let o = run(&["transform", "--ehrhart", "1,3/2,1/2"]);
    assert_eq!(text(&o).lines().last().unwrap().trim(), "h*: 1,0,0");
    let o = run(&["transform", "1,4,1,0"]);
    assert!(text(&o).contains("1,3,3,1"), "{}", text(&o));
}

#[test]
fn realize_prints_the_closed_form() {
    let o = run(&["realize", "--q", "11", "--r", "1", "--k", "14"]);
    let want = format!("1,{}12{}", "1,".repeat(13), ",0".repeat(13));
    assert_eq!(text(&o).lines().next().unwrap(), want);
}

#[test]
fn evolve_output_round_trips_through_check_and_expand() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("s.jsonl");
    let trace = dir.path().join("t.csv");
    let o = run(&[
        "evolve",
        "--seed",
        "3",
        "--t-max",
        "10",
        "--initial",
        NEAR_RIDGE,
        "--solutions",
        path(&sol),
        "--trace",
        path(&trace),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let n = std::fs::read_to_string(&sol).unwrap().lines().count();
    assert!(n > 0);

    let o = run(&["check", "--solutions", path(&sol)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains(&format!("{n} verified, 0 failed")));

    let header = std::fs::read_to_string(&trace).unwrap();
    assert!(header.starts_with(
        "generation,best_fitness_numerator,best_fitness_denominator,best_fitness,mean_fitness,population_size"
    ));

    let expanded = dir.path().join("e.jsonl");
    let o = run(&[
        "expand",
        "--input",
        path(&sol),
        "--limit",
        "40",
        "--output",
        path(&expanded),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&expanded).unwrap().lines().count(),
        40
    );
    let o = run(&["check", "--solutions", path(&expanded)]);
    assert!(text(&o).contains("40 verified, 0 failed"));
}

#[test]
fn check_flags_tampered_records() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("s.jsonl");
    run(&[
        "evolve",
        "--seed",
        "3",
        "--t-max",
        "5",
        "--initial",
        NEAR_RIDGE,
        "--solutions",
        path(&sol),
    ]);
    let first = std::fs::read_to_string(&sol)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let tampered = first.replacen("\"in_search_space\":true", "\"in_search_space\":false", 1);
    assert_ne!(first, tampered);
    std::fs::write(&sol, format!("{first}\n{tampered}\n")).unwrap();
    let o = run(&["check", "--solutions", path(&sol)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("line 2"));
}

#[test]
fn gridsearch_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.jsonl");
    let o = run(&[
        "gridsearch",
        "--k-max",
        "15",
        "--m-max",
        "20",
        "--output",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("3 solutions"));
    let o = run(&["check", "--solutions", path(&out)]);
    assert!(text(&o).contains("3 verified, 0 failed"));
}

#[test]
fn config_file_mirrors_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 4\nt-max = 3\np-mu = 1.0\n").unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    run(&["evolve", "--config", path(&cfg), "--trace", path(&a)]);
    run(&[
        "evolve",
        "--seed",
        "4",
        "--t-max",
        "3",
        "--p-mu",
        "1.0",
        "--trace",
        path(&b),
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read_to_string(&a).unwrap().lines().count(), 5);

    run(&[
        "evolve",
        "--config",
        path(&cfg),
        "--t-max",
        "1",
        "--trace",
        path(&a),
    ]);
    assert_eq!(std::fs::read_to_string(&a).unwrap().lines().count(), 3);

    std::fs::write(&cfg, "seed = 4\nbogus = 1\n").unwrap();
    assert_eq!(
        run(&["evolve", "--config", path(&cfg)]).status.code(),
        Some(1)
    );
}

#[test]
fn unseeded_evolve_reports_its_seed() {
    let o = run(&["evolve", "--t-max", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("seed: "));
}

#[test]
fn variant_b_writes_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("p.jsonl");
    let initial = format!("{NEAR_RIDGE};{NEAR_RIDGE}");
    let o = run(&[
        "evolve",
        "--variant",
        "B",
        "--seed",
        "2",
        "--t-max",
        "5",
        "--initial",
        &initial,
        "--solutions",
        path(&sol),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let line = std::fs::read_to_string(&sol).unwrap();
    let rec: serde_json::Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert!(rec["pair"].is_array());
    assert_eq!(
        run(&["check", "--solutions", path(&sol)]).status.code(),
        Some(0)
    );
}
