//! Bounded search for products of conjugates of `g` that equal a power of
//! `γ = h₂⁻¹h₁` in `H = F(g, h₁) *_{g = g'} F(g', h₂)`.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expr::{GroupExpr, SymError};
use super::lemmas::ball;
use super::word::{Sym, SymWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// The product as a word in `g` and `gamma`.
    pub product: String,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: u32,
    pub l: u32,
    pub m: u32,
    /// Distinct conjugates `u g^±1 u⁻¹`.
    pub conjugates: usize,
    pub candidates_examined: u64,
    pub counterexamples: Vec<Counterexample>,
    /// Products equal to `γ^k` with `|k| > n`; also refute the claim.
    pub larger_powers: Vec<Counterexample>,
    pub complete: bool,
    pub budget_note: Option<String>,
    pub elapsed_ms: u128,
}

impl SearchReport {
    pub fn refuted(&self) -> bool {
        !self.counterexamples.is_empty() || !self.larger_powers.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// The amalgam `H` over free factors.
pub fn lemma33_group() -> Result<GroupExpr, SymError> {
    GroupExpr::amalgam_cyclic(
        GroupExpr::free(&["g", "h1"])?,
        GroupExpr::free(&["g'", "h2"])?,
        SymWord::gen("g"),
        SymWord::gen("g'"),
    )
}

pub fn lemma33_bounded_search(n: u32, l: u32, m: u32) -> Result<SearchReport, SymError> {
    lemma33_bounded_search_with_budget(n, l, m, None)
}

/// As [`lemma33_bounded_search`], stopping after `budget` candidates.
pub fn lemma33_bounded_search_with_budget(
    n: u32,
    l: u32,
    m: u32,
    budget: Option<u64>,
) -> Result<SearchReport, SymError> {
    let start = Instant::now();
    let h = lemma33_group()?;
    let (g, gamma) = (Sym::new("g"), Sym::new("gamma"));
    let gamma_h = SymWord::parse_simple("h2^-1 h1");
    let to_h = |w: &SymWord| {
        w.substitute(&|s| {
            if s == g {
                SymWord::gen(g)
            } else {
                gamma_h.clone()
            }
        })
    };

    // Conjugates as abstract words over {g, gamma}, deduplicated.
    let mut seen: HashSet<SymWord> = HashSet::new();
    let mut conj: Vec<(SymWord, SymWord)> = Vec::new();
    for u in ball(&[g, gamma], l as usize) {
        for e in [1, -1] {
            let c = SymWord::power(g, e).conjugate_by(&u.inverse());
            if seen.insert(c.clone()) {
                let ch = to_h(&c);
                conj.push((c, ch));
            }
        }
    }

    let examined = AtomicU64::new(0);
    let over_budget = |k: u64| budget.is_some_and(|b| k > b);
    let depth = m as usize;
    // Each top-level conjugate seeds an independent depth-first enumeration.
    let describe = |path: &[usize]| {
        let mut w = SymWord::empty();
        for &i in path {
            w.append(&conj[i].0);
        }
        w.to_string()
    };
    // γ = h2⁻¹ h1 is cyclically reduced of syllable length 2, so γ^k has
    // syllable length 2|k| and a product is a non-trivial power of γ only
    // when its reduced length is even and the matching power cancels it.
    let gamma_syl = h.normal_syllables(&gamma_h);
    assert!(gamma_syl.len() == 2 && gamma_syl[0].0 != gamma_syl[1].0);
    let power_of_gamma = |word: &SymWord, syl_len: usize| -> Option<i64> {
        if syl_len == 0 || !syl_len.is_multiple_of(2) {
            return None;
        }
        let k = (syl_len / 2) as i64;
        [k, -k]
            .into_iter()
            .find(|&k| h.trivial(&word.mul(&gamma_h.pow(-k))))
    };
    let results: Vec<(Vec<Counterexample>, Vec<Counterexample>)> = (0..conj.len())
        .into_par_iter()
        .map(|first| {
            let mut small = Vec::new();
            let mut large = Vec::new();
            type Node = (Vec<usize>, SymWord, Vec<(usize, SymWord)>);
            let root: Node = (
                vec![first],
                conj[first].1.clone(),
                h.normal_syllables(&conj[first].1),
            );
            let mut stack: Vec<Node> = vec![root];
            while let Some((path, word, syl)) = stack.pop() {
                let k = examined.fetch_add(1, Ordering::Relaxed) + 1;
                if over_budget(k) {
                    break;
                }
                if let Some(e) = power_of_gamma(&word, syl.len()) {
                    let ce = Counterexample {
                        product: describe(&path),
                        exponent: e,
                    };
                    if e.unsigned_abs() <= n as u64 {
                        small.push(ce);
                    } else {
                        large.push(ce);
                    }
                }
                if path.len() < depth {
                    for (i, (_, ch)) in conj.iter().enumerate() {
                        let mut p = path.clone();
                        p.push(i);
                        let mut s2 = syl.clone();
                        h.normal_extend(&mut s2, ch);
                        stack.push((p, word.mul(ch), s2));
                    }
                    // Children are examined in index order.
                    let len = stack.len();
                    stack[len - conj.len()..].reverse();
                }
            }
            (small, large)
        })
        .collect();

    let total = examined.load(Ordering::Relaxed);
    let complete = !over_budget(total);
    let (mut counterexamples, mut larger_powers) = (Vec::new(), Vec::new());
    for (s, lg) in results {
        counterexamples.extend(s);
        larger_powers.extend(lg);
    }
    counterexamples.sort_by(|a, b| a.product.cmp(&b.product));
    larger_powers.sort_by(|a, b| a.product.cmp(&b.product));
    Ok(SearchReport {
        n,
        l,
        m,
        conjugates: conj.len(),
        candidates_examined: total.min(budget.unwrap_or(u64::MAX)),
        counterexamples,
        larger_powers,
        complete,
        budget_note: (!complete).then(|| format!("stopped after {} candidates", budget.unwrap())),
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_case() {
        let r = lemma33_bounded_search(1, 0, 1).unwrap();
        assert_eq!(r.conjugates, 2);
        assert_eq!(r.candidates_examined, 2);
        assert!(!r.refuted());
        assert!(r.complete);
    }

    #[test]
    fn medium_case() {
        let r = lemma33_bounded_search(2, 2, 2).unwrap();
        assert!(!r.refuted());
        assert_eq!(
            r.candidates_examined,
            (r.conjugates + r.conjugates.pow(2)) as u64
        );
    }

    #[test]
    fn budget_is_reported() {
        let r = lemma33_bounded_search_with_budget(2, 2, 2, Some(10)).unwrap();
        assert!(!r.complete);
        assert!(r.budget_note.is_some());
    }

    #[test]
    fn detects_a_planted_power() {
        // gamma itself is a power of gamma; the oracle must see it.
        let h = lemma33_group().unwrap();
        let gamma = SymWord::parse_simple("h2^-1 h1");
        assert_eq!(h.member(&gamma.pow(3), &gamma), Some(3));
        let conj = SymWord::gen("g").conjugate_by(&gamma);
        assert_eq!(h.member(&conj, &gamma), None);
    }
}
