use std::path::PathBuf;
use std::process::Command;

use rubin_cli::{run, FALSE, OK, USAGE};
use rubin_core::game::Transcript;
use rubin_core::RubinPoset;

fn rubin(args: &[&str]) -> rubin_cli::Output {
    run(std::iter::once("rubin").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("rubin-cli-{}-{name}", std::process::id()))
}

#[test]
fn s4_pair_through_the_binary() {
    let out = Command::new(env!("CARGO_BIN_EXE_rubin"))
        .args([
            "disjoint",
            "--group",
            "S4",
            "--g",
            "(0 1)",
            "--f",
            "(0 1)(2 3)",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(OK));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "true\n");

    let out = Command::new(env!("CARGO_BIN_EXE_rubin"))
        .args([
            "disjoint",
            "--group",
            "S4",
            "--g",
            "(0 1)(2 3)",
            "--f",
            "(0 1)",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(FALSE));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "false\n");
}

#[test]
fn perm_spec_groups_work_too() {
    let o = rubin(&[
        "disjoint",
        "--group",
        "perm: (0 1), (0 1 2 3)",
        "--g",
        "(0 1)",
        "--f",
        "(0 1)(2 3)",
        "--json",
    ]);
    assert_eq!(o.code, OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["disjoint"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rubin(&["nope"]).code, USAGE);
    assert_eq!(rubin(&["lemma34", "--bogus"]).code, USAGE);
    let o = rubin(&[
        "disjoint",
        "--group",
        "perm: (0 1",
        "--g",
        "()",
        "--f",
        "()",
    ]);
    assert_eq!(o.code, USAGE);
    assert!(o.stderr.contains("column 11"), "{}", o.stderr);
    // An element outside the group cannot be evaluated.
    let o = rubin(&["disjoint", "--group", "A4", "--g", "(0 1)", "--f", "()"]);
    assert_eq!(o.code, USAGE);
    let o = rubin(&["game-run", "--identity-name", "2"]);
    assert_eq!(o.code, USAGE);
}

#[test]
fn help_is_not_an_error() {
    let o = rubin(&["--help"]);
    assert_eq!(o.code, OK);
    assert!(o.stdout.contains("game-run"));
}

#[test]
fn lemma_commands() {
    let o = rubin(&["lemma34", "--m", "2"]);
    assert_eq!((o.code, o.stdout.as_str()), (OK, "verified\n"));
    let o = rubin(&["lemma31", "--group", "free(h)", "--g", "h^2", "--h", "h"]);
    assert_eq!(o.code, OK, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("PASS in Gamma: [[a, [b, h]], g] = 1"));
    let o = rubin(&[
        "lemma32",
        "--group",
        "free(g, gamma)",
        "--g",
        "g",
        "--gamma",
        "gamma",
        "--ball",
        "4",
    ]);
    assert_eq!(o.code, OK, "{}{}", o.stdout, o.stderr);
    // g = h is outside the lemma's hypotheses.
    let o = rubin(&["lemma31", "--group", "free(h)", "--g", "h", "--h", "h"]);
    assert_eq!(o.code, USAGE);
    let o = rubin(&[
        "lemma33-search",
        "--n",
        "2",
        "--l",
        "2",
        "--m",
        "2",
        "--json",
    ]);
    assert_eq!(o.code, OK);
    assert!(o.stderr.contains("searching"));
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn finite_group_commands() {
    let o = rubin(&["sf", "--group", "S3", "--f", "(0 1)"]);
    assert_eq!(o.code, OK);
    assert!(o.stdout.starts_with("S_f = "));
    let o = rubin(&["matrix", "--group", "C12"]);
    assert_eq!(o.code, OK);
    assert!(!o.stdout.lines().skip(13).any(|l| l.contains('0')));
    let o = rubin(&["product-check", "--left", "S3", "--right", "S3"]);
    assert_eq!(o.code, OK);
    assert!(o.stdout.starts_with("25 cross pairs"));
}

#[test]
fn poset_dot_and_json() {
    let dot = scratch("c5.dot");
    let o = rubin(&["poset", "--group", "C5xC5", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.code, OK);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("[label=").count(), 1);
    std::fs::remove_file(dot).unwrap();

    let o = rubin(&["poset", "--group", "S4", "--json"]);
    let p = RubinPoset::from_json(&o.stdout).unwrap();
    assert_eq!(RubinPoset::from_json(&p.to_json()).unwrap(), p);
    assert!(p.is_intersection_closed());
}

#[test]
fn game_run_then_audit() {
    let path = scratch("game.json");
    let o = rubin(&[
        "game-run",
        "--rounds",
        "12",
        "--b-strategy",
        "conjugacy",
        "--audit",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, OK, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("audit passed"));
    let text = std::fs::read_to_string(&path).unwrap();
    let t = Transcript::from_json(&text).unwrap();
    assert_eq!(t.moves.len(), 24);
    assert_eq!(t.to_json(), text);

    let o = rubin(&["game-audit", "--transcript", path.to_str().unwrap()]);
    assert_eq!(o.code, OK, "{}", o.stdout);

    // A tampered transcript fails the audit.
    let mut t = t;
    t.moves[1]
        .conditions
        .push(rubin_core::game::Condition::inequation(vec![(0, 1)]));
    std::fs::write(&path, t.to_json()).unwrap();
    let o = rubin(&["game-audit", "--transcript", path.to_str().unwrap()]);
    assert_eq!(o.code, FALSE);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn config_file_supplies_flags() {
    let cfg = scratch("game.conf");
    std::fs::write(
        &cfg,
        "# game settings\nrounds = 6\nseed = 5\nb_strategy = random\naudit = true\n",
    )
    .unwrap();
    let a = rubin(&["game-run", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(a.code, OK, "{}", a.stderr);
    let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["transcript"]["config"]["rounds"], 6);
    assert_eq!(v["transcript"]["config"]["strategy"], "random_consistent");
    // Command-line flags take precedence.
    let b = rubin(&[
        "game-run",
        "--config",
        cfg.to_str().unwrap(),
        "--rounds",
        "3",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&b.stdout).unwrap();
    assert_eq!(v["transcript"]["config"]["rounds"], 3);
    std::fs::write(&cfg, "no-such-flag = 1\n").unwrap();
    assert_eq!(
        rubin(&["game-run", "--config", cfg.to_str().unwrap()]).code,
        USAGE
    );
    std::fs::remove_file(cfg).unwrap();
}

#[test]
fn identical_runs_print_identical_transcripts() {
    let args = [
        "game-run",
        "--rounds",
        "10",
        "--seed",
        "9",
        "--b-strategy",
        "random",
        "--json",
    ];
    assert_eq!(rubin(&args).stdout, rubin(&args).stdout);
}
