mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rubin_core::game::{
    new_game, player_a_move, player_b_move, run_game, BStrategy, ForcingStatus, GameConfig,
    Transcript,
};
use rubin_core::symbolic::{Membership, Sym};
use rubin_core::{
    centralizer_of_set, compute_s, support, DisjointnessMatrix, FiniteGroup, GroupExpr, Perm,
    SymWord,
};

fn perm(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    (1usize..=5)
        .prop_flat_map(|d| prop::collection::vec(perm(d), 1..=3).prop_map(move |g| (d, g)))
        .prop_map(|(d, gens)| FiniteGroup::generate(d, &gens).unwrap())
}

fn exprs() -> Vec<GroupExpr> {
    let free = |n: &[&str]| GroupExpr::free(n).unwrap();
    let ab = |n: &[&str]| GroupExpr::free_abelian(n).unwrap();
    let bs = GroupExpr::affine_bs(2, "g", "h").unwrap();
    vec![
        free(&["a", "b"]),
        ab(&["a", "b", "c"]),
        GroupExpr::direct_product(free(&["a", "b"]), ab(&["c"])).unwrap(),
        GroupExpr::free_product(ab(&["a", "b"]), free(&["c"])).unwrap(),
        GroupExpr::amalgam_cyclic(
            free(&["a", "b"]),
            free(&["c", "d"]),
            SymWord::parse_simple("a b"),
            SymWord::parse_simple("c d^2"),
        )
        .unwrap(),
        GroupExpr::semidirect_involution(ab(&["a", "b"]), &[("a", "b")], "s").unwrap(),
        bs.clone(),
        GroupExpr::amalgam_cyclic(
            bs.with_suffix("_1"),
            bs.with_suffix("_2"),
            SymWord::gen("g_1"),
            SymWord::gen("g_2"),
        )
        .unwrap(),
    ]
}

/// An expression index with a random word over its generators.
fn expr_word(max_len: usize) -> impl Strategy<Value = (usize, SymWord)> {
    let n = exprs().len();
    (0..n).prop_flat_map(move |i| {
        let gens: Vec<Sym> = exprs()[i].generators().to_vec();
        let k = gens.len();
        prop::collection::vec((0..k, prop_oneof![Just(1i64), Just(-1i64)]), 0..=max_len).prop_map(
            move |ls| {
                (
                    i,
                    SymWord::from_pairs(ls.into_iter().map(|(j, e)| (gens[j], e))),
                )
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_groups_are_closed(g in small_group()) {
        prop_assert!(g.is_closed());
        prop_assert!(g.elements().iter().any(|p| p.is_identity()));
    }

    #[test]
    fn generation_is_deterministic(d in 1usize..=5, seed in any::<u64>()) {
        let mut rng = seed;
        let gens: Vec<Perm> = (0..2).map(|_| {
            let mut v: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                v.swap(i, (rng >> 33) as usize % (i + 1));
            }
            Perm::from_images(v).unwrap()
        }).collect();
        let a = FiniteGroup::generate(d, &gens).unwrap();
        let b = FiniteGroup::generate(d, &gens).unwrap();
        prop_assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn centralizer_is_a_subgroup_containing_g(g in small_group(), pick in any::<prop::sample::Index>()) {
        let x = g.element(pick.index(g.order())).clone();
        let c: BTreeSet<usize> = g.centralizer(&x).unwrap().into_iter().collect();
        prop_assert!(c.contains(&g.index_of(&x).unwrap()));
        prop_assert!(c.contains(&g.identity()));
        for &a in &c {
            for &b in &c {
                prop_assert!(c.contains(&g.mul(a, b)));
            }
        }
    }

    #[test]
    fn commutator_moves_only_supported_points(a in perm(7), b in perm(7)) {
        let c = rubin_core::commutator(&a, &b).unwrap();
        let allowed: BTreeSet<usize> = support(&a).union(&support(&b)).copied().collect();
        prop_assert!(support(&c).is_subset(&allowed));
    }

    #[test]
    fn disjointness_facts(g in small_group()) {
        let m = DisjointnessMatrix::compute(&g);
        let abelian = g.is_abelian();
        for gi in 0..g.order() {
            for fi in 0..g.order() {
                if m.get(gi, fi) {
                    prop_assert!(g.commute(gi, fi));
                }
            }
        }
        if abelian {
            prop_assert!(m.all_true());
        }
        for f in g.elements() {
            let s = compute_s(&g, f).unwrap();
            let fi = g.index_of(f).unwrap();
            for &x in &s {
                prop_assert!(g.commute(x, fi));
            }
            let sp: Vec<Perm> = s.iter().map(|&i| g.element(i).clone()).collect();
            prop_assert!(centralizer_of_set(&g, &sp).unwrap().contains(&fi));
        }
    }

    #[test]
    fn optimized_matches_naive(g in small_group()) {
        prop_assume!(g.order() <= 24);
        let t = common::Table::new(&g);
        let m = DisjointnessMatrix::compute(&g);
        for a in 0..t.n {
            for b in 0..t.n {
                prop_assert_eq!(m.get(a, b), t.naive_disjoint(a, b));
            }
        }
    }

    #[test]
    fn word_times_inverse_is_trivial((i, w) in expr_word(12)) {
        let e = &exprs()[i];
        prop_assert!(e.is_identity(&w.mul(&w.inverse())).unwrap());
    }

    #[test]
    fn identity_survives_reassociation((i, w) in expr_word(10), (j, u) in expr_word(6), cut in 0usize..12) {
        // Insert u u^-1 at a cut point and conjugate by the prefix; triviality is unchanged.
        prop_assume!(i == j);
        let e = &exprs()[i];
        let pairs = w.pairs();
        let cut = cut.min(pairs.len());
        let mut v = SymWord::from_pairs(pairs[..cut].iter().copied());
        v.append(&u);
        v.append(&u.inverse());
        v.append(&SymWord::from_pairs(pairs[cut..].iter().copied()));
        let conj = v.conjugate_by(&u);
        let base = e.is_identity(&w).unwrap();
        prop_assert_eq!(e.is_identity(&v).unwrap(), base);
        prop_assert_eq!(e.is_identity(&conj).unwrap(), base);
    }

    #[test]
    fn powers_are_cyclic_members((i, c) in expr_word(5), k in -10i64..=10) {
        let e = &exprs()[i];
        prop_assume!(!e.is_identity(&c).unwrap());
        prop_assert_eq!(e.cyclic_membership(&c.pow(k), &c).unwrap(), Membership::Member(k));
    }

    #[test]
    fn no_torsion((i, w) in expr_word(8), k in 2i64..=6) {
        let e = &exprs()[i];
        prop_assume!(!e.is_identity(&w).unwrap());
        prop_assert!(!e.is_identity(&w.pow(k)).unwrap());
    }

    #[test]
    fn witness_tracks_every_round(seed in 0u64..1000, rounds in 1u32..12, k in 2i64..=6) {
        let cfg = GameConfig { rounds, seed, strategy: BStrategy::RandomConsistent, ..GameConfig::default() };
        let mut st = new_game(cfg).unwrap();
        let mut seen = st.conditions().to_vec();
        for round in 1..=rounds {
            if round > 1 {
                player_a_move(&mut st).unwrap();
            }
            player_b_move(&mut st).unwrap();
            let now = st.conditions();
            // Nested: the earlier condition list is a prefix of the current one.
            prop_assert!(now.starts_with(&seen));
            seen = now.to_vec();
            for c in now {
                prop_assert!(st.witness().satisfies(c), "round {}: {}", round, c);
            }
        }
        let w = st.witness();
        for (c, status) in st.final_report().forced_queries {
            match status {
                ForcingStatus::ForcedTrue => prop_assert!(w.satisfies(&c), "{}", c),
                ForcingStatus::ForcedFalse => prop_assert!(!w.satisfies(&c), "{}", c),
                ForcingStatus::Open => {}
            }
        }
        let e = w.expr();
        for (n, img) in w.assignment() {
            if !e.is_identity(&img).unwrap() {
                prop_assert!(!e.is_identity(&img.pow(k)).unwrap(), "x{}^{}", n, k);
            }
        }
    }

    #[test]
    fn transcripts_round_trip_and_repeat(seed in 0u64..1000, rounds in 0u32..10) {
        let cfg = GameConfig { rounds, seed, strategy: BStrategy::RandomConsistent, ..GameConfig::default() };
        let a = run_game(cfg.clone()).unwrap().transcript;
        let b = run_game(cfg).unwrap().transcript;
        let json = a.to_json();
        prop_assert_eq!(&json, &b.to_json());
        prop_assert_eq!(Transcript::from_json(&json).unwrap(), a);
    }
}

#[test]
fn relations_of_each_node_hold() {
    let e = &exprs()[4];
    assert!(e
        .is_identity(&SymWord::parse_simple("a b d^-2 c^-1"))
        .unwrap());
    let sd = &exprs()[5];
    // Conjugating twice by the stable letter is the identity on the base.
    for x in ["a", "b"] {
        let w = SymWord::gen(x)
            .conjugate_by(&SymWord::gen("s"))
            .conjugate_by(&SymWord::gen("s"));
        assert!(sd.equal(&w, &SymWord::gen(x)).unwrap());
    }
    assert!(sd
        .equal(
            &SymWord::gen("a").conjugate_by(&SymWord::gen("s")),
            &SymWord::gen("b")
        )
        .unwrap());
    let bs = &exprs()[6];
    assert!(bs
        .is_identity(&SymWord::parse_simple("h g h^-1 g^-2"))
        .unwrap());
    for r in exprs()
        .iter()
        .flat_map(|e| e.relators().into_iter().map(move |r| (e.clone(), r)))
    {
        assert!(r.0.is_identity(&r.1).unwrap(), "{} in {}", r.1, r.0);
    }
}
