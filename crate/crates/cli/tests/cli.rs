use std::path::PathBuf;
use std::process::{Command, Output};

use gridgame::strategy::exact_best_response;
use gridgame::testkit::fixtures;
use gridgame::{double_oracle, solve_full_enumeration, DoubleOracleConfig, GridGame, GridNetwork, OracleKind, Side};
use gridgame_cli::{decode, OutputFormat, ResultRecord};

struct Grids {
    _dir: tempfile::TempDir,
    path: PathBuf,
}

impl Grids {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().to_path_buf();
        for (name, g) in [("p3", fixtures::p3()), ("v2", fixtures::v2()), ("k22", fixtures::k22())] {
            std::fs::write(path.join(format!("{name}.grid")), g.to_grid_file()).unwrap();
        }
        std::fs::write(path.join("single.grid"), "node 0 SL\n").unwrap();
        Grids { _dir: dir, path }
    }

    fn file(&self, name: &str) -> String {
        self.path.join(format!("{name}.grid")).display().to_string()
    }
}

fn gridgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridgame"))
        .args(args)
        .output()
        .unwrap()
}

fn rows(args: &[&str]) -> Vec<ResultRecord> {
    let out = gridgame(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    decode(&out.stdout, OutputFormat::Csv).unwrap()
}

fn kind<'a>(rows: &'a [ResultRecord], kind: &str) -> Vec<&'a ResultRecord> {
    rows.iter().filter(|r| r.kind == kind).collect()
}

#[test]
fn simulate_v2() {
    let g = Grids::new();
    let v2 = g.file("v2");
    let hit = rows(&["simulate", "--grid", &v2, "--alpha", "0.5", "--attack", "0"]);
    assert_eq!(hit[0].value, 1.0);
    assert_eq!(hit[0].iterations, Some(1));
    assert_eq!(kind(&hit, "round").len(), 1);
    assert_eq!(kind(&hit, "round")[0].subject, "1-2");

    let held = rows(&[
        "simulate", "--grid", &v2, "--alpha", "0.5", "--attack", "0", "--defend", "0",
    ]);
    assert_eq!((held[0].value, held[0].iterations), (0.0, Some(0)));
    assert!(kind(&held, "round").is_empty());
}

#[test]
fn input_errors_exit_2() {
    let g = Grids::new();
    let p3 = g.file("p3");
    assert_eq!(
        gridgame(&["simulate", "--grid", &p3, "--attack", "9"]).status.code(),
        Some(2)
    );
    assert_eq!(gridgame(&["simulate", "--grid", &p3]).status.code(), Some(2));
    assert_eq!(
        gridgame(&["solve", "--grid", "/nonexistent.grid"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gridgame(&["solve", "--grid", &p3, "--alpha", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gridgame(&["solve", "--grid", &p3, "--synthetic", "5,5,0.2,0.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gridgame(&["teleport"]).status.code(), Some(2));
}

#[test]
fn enumeration_limit_exits_3() {
    let out = gridgame(&["solve", "--synthetic", "40,50,0.3,0.3", "--ka", "4", "--kd", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("greedy"));
}

#[test]
fn loads_p3_and_k22() {
    let g = Grids::new();
    let p3 = rows(&["loads", "--grid", &g.file("p3"), "--alpha", "0"]);
    let nodes: Vec<(f64, Option<f64>)> = kind(&p3, "node").iter().map(|r| (r.value, r.secondary)).collect();
    assert_eq!(nodes, vec![(0.0, Some(1.0)), (1.0, Some(1.0)), (0.0, Some(1.0))]);
    assert!(kind(&p3, "edge").iter().all(|r| r.value == 1.0));

    let k22 = rows(&["loads", "--grid", &g.file("k22"), "--alpha", "3"]);
    for r in kind(&k22, "node") {
        let is_load = r.subject == "2" || r.subject == "3";
        assert_eq!((r.value, r.secondary), (0.0, Some(if is_load { 1.0 } else { 0.0 })));
    }
    assert!(kind(&k22, "edge")
        .iter()
        .all(|r| r.value == 0.5 && r.secondary == Some(2.0)));

    let single = gridgame(&["loads", "--grid", &g.file("single")]);
    assert!(single.status.success());
    assert_eq!(
        String::from_utf8(single.stdout).unwrap(),
        gridgame_cli::HEADER.join(",") + "\n"
    );
}

#[test]
fn solve_k22() {
    let g = Grids::new();
    let k22 = g.file("k22");
    let out = rows(&["solve", "--grid", &k22, "--alpha", "3", "--ka", "1", "--kd", "1"]);
    let value = kind(&out, "value")[0];
    assert!((value.value - 0.5).abs() < 1e-12);
    assert_eq!(value.converged, Some(true));
    let mass: f64 = kind(&out, "defender_mix").iter().map(|r| r.value).sum();
    assert!((mass - 1.0).abs() < 1e-9);

    let capped = rows(&["solve", "--grid", &k22, "--alpha", "3", "--max-iters", "1"]);
    assert_eq!(kind(&capped, "value")[0].converged, Some(false));
}

#[test]
fn solve_synthetic_greedy_brackets_value() {
    let out = rows(&[
        "solve",
        "--synthetic",
        "10,12,0.3,0.3",
        "--seed",
        "4",
        "--oracle",
        "greedy",
        "--ka",
        "2",
        "--kd",
        "1",
    ]);
    assert!(!kind(&out, "iteration").is_empty());
    let g = gridgame::grid::generate_synthetic(10, 12, 0.3, 0.3, 4).unwrap();
    let game = GridGame::new(g, 0.5).unwrap();
    let config = DoubleOracleConfig {
        oracle: OracleKind::Greedy,
        ..Default::default()
    };
    let sol = double_oracle(&game, 2, 1, &config).unwrap();
    assert_eq!(kind(&out, "value")[0].value, sol.value);

    // whatever the greedy loop settles on, its mixes are real strategies
    let truth = solve_full_enumeration(&game, 2, 1).unwrap().value;
    let atk = exact_best_response(&game, &sol.defender_mix, 2, Side::Attacker)
        .unwrap()
        .value;
    let def = exact_best_response(&game, &sol.attacker_mix, 1, Side::Defender)
        .unwrap()
        .value;
    assert!(def <= truth + 1e-9 && truth <= atk + 1e-9, "{def} {truth} {atk}");
}

#[test]
fn sweep_k22_budgets() {
    let g = Grids::new();
    let out = rows(&["sweep", "--grid", &g.file("k22"), "--alpha", "3", "--budgets", "1,2"]);
    let values = kind(&out, "minimax_value");
    assert_eq!(values.len(), 2);
    let game = GridGame::new(fixtures::k22(), 3.0).unwrap();
    for (r, k) in values.iter().zip([1, 2]) {
        assert_eq!((r.ka, r.kd), (k, k));
        let truth = solve_full_enumeration(&game, k, k).unwrap().value;
        assert!((r.value - truth).abs() < 1e-9, "k={k}: {} vs {truth}", r.value);
    }
    for r in kind(&out, "dlb_vs_best_response") {
        assert!(r.value >= r.secondary.unwrap() - 1e-9);
    }
    for r in kind(&out, "uniform_baseline") {
        assert!(r.value >= r.lower.unwrap() - 1e-9);
    }
}

#[test]
fn respond_both_sides() {
    let g = Grids::new();
    let k22 = g.file("k22");
    let atk = rows(&[
        "respond", "--grid", &k22, "--alpha", "3", "--side", "attacker", "--defend", "2",
    ]);
    assert_eq!((atk[0].subject.as_str(), atk[0].value), ("{3}", 1.0));
    let def = rows(&[
        "respond", "--grid", &k22, "--alpha", "3", "--side", "defender", "--ka", "1",
    ]);
    assert_eq!(def[0].value, 0.5);
}

#[test]
fn gen_output_loads_back() {
    let out = gridgame(&["gen", "--synthetic", "12,15,0.3,0.4", "--seed", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let g: GridNetwork = text.parse().unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (12, 15));
}

#[test]
fn config_file_and_output_path() {
    let g = Grids::new();
    let config = g.path.join("exp.toml");
    let out_path = g.path.join("out.jsonl");
    std::fs::write(
        &config,
        format!("grid = {:?}\nalpha = 3.0\nka = 2\nformat = \"json\"\n", g.file("k22")),
    )
    .unwrap();
    let out = gridgame(&[
        "solve",
        "--config",
        config.to_str().unwrap(),
        "--ka",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let rows = decode(&std::fs::read(&out_path).unwrap(), OutputFormat::Json).unwrap();
    assert_eq!((rows[0].alpha, rows[0].ka, rows[0].value), (3.0, 1, 0.5));

    std::fs::write(&config, "alpha = 3.0\nbogus = 1\n").unwrap();
    let out = gridgame(&["solve", "--config", config.to_str().unwrap(), "--grid", &g.file("k22")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_rows_round_trip() {
    let g = Grids::new();
    let out = gridgame(&["sweep", "--grid", &g.file("k22"), "--alphas", "0,3", "--budgets", "1,2"]);
    let parsed = decode(&out.stdout, OutputFormat::Csv).unwrap();
    assert_eq!(gridgame_cli::encode(&parsed, OutputFormat::Csv).unwrap(), out.stdout);
}
