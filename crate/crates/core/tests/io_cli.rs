mod common;

use std::path::PathBuf;
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{always, memory_game, switching};
use spsynth::cpgame::build_cp;
use spsynth::io::*;
use spsynth::random::{random_parity_game, random_reach_game};
use spsynth::strategy::prover_choices;
use spsynth::zerosum::{solve, ZeroSumGame};
use spsynth::{solve_sps, Antichain, Payoff};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spsynth")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn fixture_is_the_memory_game() {
    let text = read("memory.game.json");
    let game = parse_game(&text).unwrap();
    assert_eq!(game, memory_game());
    let canonical = serialize_game(&game);
    assert_eq!(parse_game(&canonical).unwrap(), game);
    assert_eq!(serialize_game(&parse_game(&canonical).unwrap()), canonical);
}

#[test]
fn strategy_fixtures() {
    let game = memory_game();
    for (name, want) in [
        ("always-v5.strat.json", always(&game, 5)),
        ("always-v7.strat.json", always(&game, 7)),
        ("switching.strat.json", switching(&game)),
    ] {
        let got = parse_strategy(&read(name), game.arena()).unwrap();
        assert_eq!(got, want, "{name}");
        let text = serialize_strategy(&got, game.arena());
        assert_eq!(parse_strategy(&text, game.arena()).unwrap(), got);
    }
    let bad = read("always-v5.strat.json").replace("[0,\"v3\",\"v5\"]", "[0,\"v3\",\"v4\"]");
    assert!(matches!(parse_strategy(&bad, game.arena()), Err(IoError::Strategy(_))));
}

#[test]
fn random_documents_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let game = if i % 2 == 0 {
            random_reach_game(&mut rng, 2 + i % 6, 1 + i % 3, 3, 0.3)
        } else {
            random_parity_game(&mut rng, 2 + i % 6, 1 + i % 3, 3, 4)
        };
        let text = serialize_game(&game);
        let back = parse_game(&text).unwrap();
        assert_eq!(back.objectives(), game.objectives());
        assert_eq!(back.arena().adjacency(), game.arena().adjacency());
        assert_eq!(serialize_game(&back), text);
        if let Ok(sol) = solve_sps(&game) {
            if let Some(s) = sol.strategy {
                let doc = serialize_strategy(&s, game.arena());
                assert_eq!(parse_strategy(&doc, game.arena()).unwrap(), s);
            }
        }
    }
}

#[test]
fn semantic_errors_name_the_problem() {
    let text = read("memory.game.json");
    let cases = [
        (text.replace("[\"v4\",\"v4\"]", "[\"v4\",\"v9\"]"), "undeclared vertex \"v9\""),
        (text.replace("{\"id\":\"v7\",\"owner\":0}", "{\"id\":\"v6\",\"owner\":0}"), "declared twice"),
        (text.replace("\"kind\": \"reach\"", "\"kind\": \"buchi\""), "unknown kind"),
    ];
    for (doc, needle) in cases {
        let err = parse_game(&doc).unwrap_err().to_string();
        assert!(err.contains(needle), "{err}");
    }
    // a vertex without successors
    let dead = text.replace("    [\"v7\",\"v7\"]\n", "").replace("[\"v6\",\"v6\"],", "[\"v6\",\"v6\"]");
    assert!(matches!(parse_game(&dead), Err(IoError::Game(_))));
}

#[test]
fn game_dot_shapes() {
    let game = memory_game();
    let dot = export_game_dot(&game, &[]);
    assert!(dot.contains("\"v0\" [shape=box"));
    assert!(dot.contains("\"v1\" [shape=ellipse"));
    assert!(!dot.contains("bold"));
    let dot = export_game_dot(&game, &[(3, 5)]);
    assert!(dot.contains("\"v3\" -> \"v5\" [style=bold]"));
}

#[test]
fn cp_dot_follows_the_prover() {
    let game = memory_game();
    let p = |b: [bool; 3]| Payoff::from_slice(&b);
    let pareto = Antichain::new(vec![p([true, true, false]), p([false, true, true])]).unwrap();
    let cp = build_cp(&game, &pareto).unwrap();
    let res = solve(&ZeroSumGame {
        arena: cp.arena.clone(),
        objective: cp.objective.clone(),
    })
    .unwrap();
    assert!(res.wins(cp.start()));
    let dot = export_cp_dot(&cp, &game, Some(&res));
    let choices = prover_choices(&cp, &res);
    let bold = dot.lines().filter(|l| l.contains("style=bold")).count();
    assert_eq!(bold, choices.iter().flatten().count());
    // from the start, the chosen moves form a path in the drawing
    let mut at = cp.start();
    for _ in 0..cp.len() {
        match choices[at] {
            Some(next) => {
                assert!(dot.contains(&format!("n{at} -> n{next} [style=bold]")));
                at = next;
            }
            None => break,
        }
    }
    assert!(dot.contains("buchi=true"));
    let empty = export_cp_dot(&cp, &game, None);
    assert!(!empty.contains("bold") && !empty.contains("winning"));
}

#[test]
fn cli_solve_and_verify() {
    let game = fixture("memory.game.json");
    let game = game.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let strat = dir.path().join("s.json");
    let dot = dir.path().join("g.dot");
    let (code, out) = cli(&["solve", game, "--emit-strategy", strat.to_str().unwrap(), "--emit-dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("solvable\npareto {(1,1,0),(0,1,1)}\n"), "{out}");
    assert!(std::fs::read_to_string(&dot).unwrap().contains("style=bold"));
    let (code, out) = cli(&["verify", game, strat.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("solution\n"));

    let (code, out) = cli(&["verify", game, fixture("always-v5.strat.json").to_str().unwrap()]);
    assert_eq!(code, 11);
    assert_eq!(out, "pareto {(1,0,0),(0,1,1)}\ncounterexample (1,0,0) v0 v2 (v4)^w\n");
    let (code, out) = cli(&["verify", game, fixture("always-v7.strat.json").to_str().unwrap()]);
    assert_eq!(code, 11);
    assert_eq!(out, "pareto {(1,1,0),(0,0,1)}\ncounterexample (0,0,1) v0 (v1)^w\n");
    let (code, out) = cli(&["verify", game, fixture("switching.strat.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "pareto {(1,1,0),(0,1,1)}\nwitness (1,1,0) v0 v2 v3 v5 v3 (v7)^w\nwitness (0,1,1) v0 v2 v3 v5 (v6)^w\nsolution\n"
    );
}

#[test]
fn cli_other_commands() {
    let game = fixture("memory.game.json");
    let game = game.to_str().unwrap();
    assert_eq!(cli(&["feasible", game]), (0, "(1,0,0)\n(0,1,0)\n(1,1,0)\n(0,0,1)\n(0,1,1)\n".into()));
    assert_eq!(cli(&["brute", game, "--memory", "1"]), (10, "no solution with memory 1\n".into()));
    assert_eq!(cli(&["brute", game, "--memory", "2"]), (0, "solvable\nmemory 2\n".into()));
    assert_eq!(cli(&["tree-solve", game]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    assert_eq!(cli(&["gadget", "qk", "11", "-o", q.to_str().unwrap()]), (0, "vertices 16\n".into()));
    assert_eq!(cli(&["gadget", "count", q.to_str().unwrap()]), (0, "11\n".into()));

    let sc = dir.path().join("i.sc");
    std::fs::write(&sc, "elements 2\nbudget 1\nset 1\nset 1 2\n").unwrap();
    let g = dir.path().join("sc.json");
    assert_eq!(cli(&["reduce", "sc2sps", sc.to_str().unwrap(), "-o", g.to_str().unwrap()]).0, 0);
    assert_eq!(cli(&["tree-solve", g.to_str().unwrap()]).0, 0);

    let sds = dir.path().join("i.cnf");
    std::fs::write(&sds, "p sds 1 1 1\n1 2 0\n").unwrap();
    let ssc = dir.path().join("o.cnf");
    assert_eq!(cli(&["reduce", "sds2ssc", sds.to_str().unwrap(), "-o", ssc.to_str().unwrap()]).0, 0);
    assert_eq!(std::fs::read_to_string(&ssc).unwrap(), "p ssc 1 1 1 0 1\n1 2 0\n");
    for kind in ["ssc2reach", "ssc2parity"] {
        let out = dir.path().join(format!("{kind}.json"));
        assert_eq!(cli(&["reduce", kind, ssc.to_str().unwrap(), "-o", out.to_str().unwrap()]).0, 0);
        assert!(parse_game(&std::fs::read_to_string(&out).unwrap()).is_ok());
    }

    assert_eq!(cli(&["solve", "/nonexistent.json"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["solve", game, "--bogus"]).0, 2);
}
