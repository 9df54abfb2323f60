//! End-to-end acceptance run: one line per criterion, non-zero exit on failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::{fingerprint, preset, small_groups, test_groups, Fingerprint, Table, GROUP_COUNTS};
use rubin_core::game::{run_game, BStrategy, Case, GameConfig, Player};
use rubin_core::symbolic::{
    build_lemma31, build_lemma32, lemma32_ball_check, lemma33_bounded_search, lemma34_control,
    verify_lemma34,
};
use rubin_core::{
    centralizer_of_set, compute_s, is_algebraically_disjoint, product_disjointness_check,
    rubin_poset, DisjointnessMatrix, GroupExpr, Perm, SymWord,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cyc(n: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(n, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn s4_asymmetry() -> Outcome {
    let g = preset("S4");
    let t = cyc(4, &[&[0, 1]]);
    let dt = cyc(4, &[&[0, 1], &[2, 3]]);
    let fwd = is_algebraically_disjoint(&g, &t, &dt).map_err(|e| e.to_string())?;
    let back = is_algebraically_disjoint(&g, &dt, &t).map_err(|e| e.to_string())?;
    ensure(fwd && !back, || format!("forward {fwd}, reverse {back}"))
}

fn disjoint_implies_commute() -> Outcome {
    for name in ["S3", "S4", "A4", "D4", "C5xC5"] {
        let g = preset(name);
        let m = DisjointnessMatrix::compute(&g);
        for (i, a) in g.elements().iter().enumerate() {
            for (j, b) in g.elements().iter().enumerate() {
                if m.get(i, j) && !rubin_core::commutator(a, b).unwrap().is_identity() {
                    return Err(format!(
                        "{name}: {a} disjoint from {b} but they do not commute"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn abelian_all_true() -> Outcome {
    for name in ["C5xC5", "C12"] {
        let m = DisjointnessMatrix::compute(&preset(name));
        ensure(m.all_true(), || format!("{name} has a false entry"))?;
    }
    Ok(())
}

fn f_in_centralizer() -> Outcome {
    for (name, g) in test_groups() {
        for f in g.elements() {
            let s: Vec<Perm> = compute_s(&g, f)
                .unwrap()
                .into_iter()
                .map(|i| g.element(i).clone())
                .collect();
            let c = centralizer_of_set(&g, &s).unwrap();
            let fi = g.index_of(f).unwrap();
            ensure(c.contains(&fi), || format!("{name}: {f} not in C(S_f)"))?;
        }
    }
    Ok(())
}

fn poset_well_formed() -> Outcome {
    for (name, g) in test_groups() {
        let p = rubin_poset(&g).map_err(|e| e.to_string())?;
        ensure(p.is_intersection_closed(), || format!("{name}: not closed"))?;
        // Independent recomputation of the node family from the naive relation.
        let t = Table::new(&g);
        let mut family: BTreeSet<BTreeSet<usize>> =
            (0..t.n).map(|f| t.centralizer(&t.naive_s(f))).collect();
        loop {
            let snapshot: Vec<_> = family.iter().cloned().collect();
            let before = family.len();
            for a in &snapshot {
                for b in &snapshot {
                    family.insert(a.intersection(b).copied().collect());
                }
            }
            if family.len() == before {
                break;
            }
        }
        let nodes: BTreeSet<BTreeSet<usize>> = p
            .nodes
            .iter()
            .map(|n| n.elements.iter().copied().collect())
            .collect();
        ensure(nodes == family, || format!("{name}: node sets differ"))?;
        for i in 0..p.nodes.len() {
            for j in 0..p.nodes.len() {
                let a: BTreeSet<usize> = p.nodes[i].elements.iter().copied().collect();
                let b: BTreeSet<usize> = p.nodes[j].elements.iter().copied().collect();
                ensure(p.leq(i, j) == a.is_subset(&b), || {
                    format!("{name}: order differs at ({i}, {j})")
                })?;
            }
        }
        for &(lo, hi) in &p.hasse {
            let between =
                (0..p.nodes.len()).any(|k| k != lo && k != hi && p.leq(lo, k) && p.leq(k, hi));
            ensure(lo != hi && p.leq(lo, hi) && !between, || {
                format!("{name}: ({lo}, {hi}) is not a cover")
            })?;
        }
        if g.is_abelian() {
            ensure(p.nodes.len() == 1, || {
                format!("{name}: abelian but {} nodes", p.nodes.len())
            })?;
        }
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let groups = small_groups();
    let mut by_order: BTreeMap<usize, Vec<Fingerprint>> = BTreeMap::new();
    for (_, g) in &groups {
        by_order.entry(g.order()).or_default().push(fingerprint(g));
    }
    for (n, &want) in GROUP_COUNTS.iter().enumerate().skip(1) {
        let fps = by_order.get(&n).cloned().unwrap_or_default();
        let distinct: BTreeSet<_> = fps.iter().collect();
        ensure(fps.len() == want && distinct.len() == want, || {
            format!(
                "order {n}: {} groups, {} distinct, want {want}",
                fps.len(),
                distinct.len()
            )
        })?;
    }
    for (name, g) in &groups {
        let t = Table::new(g);
        let m = DisjointnessMatrix::compute(g);
        for i in 0..t.n {
            for j in 0..t.n {
                let naive = t.naive_disjoint(i, j);
                let single = is_algebraically_disjoint(g, g.element(i), g.element(j)).unwrap();
                ensure(m.get(i, j) == naive && single == naive, || {
                    format!("{name}: disagreement at ({i}, {j}), naive {naive}")
                })?;
            }
        }
    }
    Ok(())
}

fn lemma34() -> Outcome {
    let m2 = verify_lemma34(2).map_err(|e| e.to_string())?;
    let m3 = verify_lemma34(3).map_err(|e| e.to_string())?;
    let control_trivial = lemma34_control().map_err(|e| e.to_string())?;
    ensure(m2 && m3 && !control_trivial, || {
        format!("m=2 {m2}, m=3 {m3}, control trivial {control_trivial}")
    })
}

fn lemma32() -> Outcome {
    let k = GroupExpr::free(&["g", "gamma"]).map_err(|e| e.to_string())?;
    let l =
        build_lemma32(&k, &SymWord::gen("g"), &SymWord::gen("gamma")).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = l
        .report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.description.as_str())
        .collect();
    ensure(l.report.checks.len() >= 3 && failed.is_empty(), || {
        format!("failed checks {failed:?}")
    })?;
    let ball = lemma32_ball_check(6).map_err(|e| e.to_string())?;
    ensure(ball.kernel_with_gamma_exponent == 0, || {
        format!(
            "{} kernel words with gamma exponent",
            ball.kernel_with_gamma_exponent
        )
    })
}

fn lemma31_cyclic() -> Outcome {
    let g_grp = GroupExpr::free(&["h"]).map_err(|e| e.to_string())?;
    let h = SymWord::gen("h");
    let r = build_lemma31(&g_grp, &h.pow(2), &h).map_err(|e| e.to_string())?;
    let passed = |d: &str| r.checks.iter().any(|c| c.description == d && c.passed);
    ensure(r.case == "cyclic", || format!("case {}", r.case))?;
    ensure(
        passed("[a, [b, h]] != 1") && passed("[[a, [b, h]], g] = 1") && r.all_passed(),
        || format!("{:?}", r.checks),
    )
}

fn lemma33() -> Outcome {
    let r = lemma33_bounded_search(3, 4, 3).map_err(|e| e.to_string())?;
    ensure(r.complete && !r.refuted(), || {
        format!(
            "complete {}, {} counterexamples, {} larger powers",
            r.complete,
            r.counterexamples.len(),
            r.larger_powers.len()
        )
    })
}

fn game_fidelity() -> Outcome {
    for strategy in [BStrategy::Passive, BStrategy::ConjugacyForcer] {
        let cfg = GameConfig {
            rounds: 50,
            strategy,
            ..GameConfig::default()
        };
        let rep = run_game(cfg).map_err(|e| format!("{strategy:?}: {e}"))?;
        let moves = &rep.transcript.moves;
        ensure(moves.len() == 100, || {
            format!("{strategy:?}: {} moves", moves.len())
        })?;
        let audit = &rep.audit;
        let failing: Vec<String> = audit
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        ensure(audit.passed, || format!("{strategy:?}: {failing:?}"))?;
        for name in ["admissibility", "witness pairs", "monotone nesting"] {
            ensure(
                audit.checks.iter().any(|c| c.name == name && c.passed),
                || format!("{strategy:?}: check {name} missing or failed"),
            )?;
        }
        let quads = moves
            .iter()
            .filter(|m| m.player == Player::A && m.note.case == Some(Case::C12))
            .count();
        ensure(quads == audit.quadruples_verified, || {
            format!(
                "{strategy:?}: {quads} witness pairs, {} verified",
                audit.quadruples_verified
            )
        })?;
        ensure(moves.windows(2).all(|w| w[0].round <= w[1].round), || {
            format!("{strategy:?}: rounds out of order")
        })?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    for strategy in [
        BStrategy::Passive,
        BStrategy::ConjugacyForcer,
        BStrategy::RandomConsistent,
    ] {
        let cfg = GameConfig {
            rounds: 20,
            seed: 2024,
            strategy,
            ..GameConfig::default()
        };
        let a = run_game(cfg.clone()).map_err(|e| e.to_string())?;
        let b = run_game(cfg).map_err(|e| e.to_string())?;
        ensure(a.transcript.to_json() == b.transcript.to_json(), || {
            format!("{strategy:?}: transcripts differ")
        })?;
    }
    Ok(())
}

fn product_harness() -> Outcome {
    let s3 = preset("S3");
    let r = product_disjointness_check(&s3, &s3).map_err(|e| e.to_string())?;
    ensure(r.pairs_checked == 25 && r.holds(), || {
        format!(
            "{} pairs, counterexamples {:?}",
            r.pairs_checked, r.counterexamples
        )
    })?;
    // Same pairs through the naive relation.
    let (prod, emb) = s3.direct_product(&s3).unwrap();
    let t = Table::new(&prod);
    let id = prod.identity();
    for &x in emb.left.iter().filter(|&&x| x != id) {
        for &y in emb.right.iter().filter(|&&y| y != id) {
            ensure(t.naive_disjoint(x, y) && t.naive_disjoint(y, x), || {
                format!("naive relation fails for ({x}, {y})")
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("S4 asymmetry", 1, s4_asymmetry),
        (
            "disjointness implies commuting",
            30,
            disjoint_implies_commute,
        ),
        ("abelian matrices all true", 30, abelian_all_true),
        ("f lies in C(S_f)", 60, f_in_centralizer),
        ("Rubin poset well-formed", 60, poset_well_formed),
        (
            "naive oracle agreement, order <= 24",
            300,
            oracle_equivalence,
        ),
        ("commuting conjugate, m = 2, 3", 1, lemma34),
        ("centralising commutator over F(g, gamma)", 60, lemma32),
        ("cyclic amalgam with Z^3", 1, lemma31_cyclic),
        ("bounded normal-closure search N=3 L=4 M=3", 600, lemma33),
        ("50-round game fidelity", 120, game_fidelity),
        ("transcript determinism", 60, determinism),
        ("S3 x S3 cross pairs", 300, product_harness),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(limit), || {
                format!("over the {limit} s limit")
            })
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {e}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
