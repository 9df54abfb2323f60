//! Sound, bounded detection of forced conditions by shortlex Knuth–Bendix
//! completion over the played names.
//!
//! `w = 1` is reported forced when `w` rewrites to the empty word. `w ≠ 1`
//! is reported forced when adding `w` as a relator rewrites a played
//! inequation `u`, or one of its powers `u^k` with `2 ≤ k ≤ 6`, to the empty
//! word. Rules are consequences of the relators, so both answers are sound;
//! anything else is `Open`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Condition, Name, NameWord, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForcingStatus {
    ForcedTrue,
    ForcedFalse,
    Open,
}

#[derive(Debug, Clone, Copy)]
pub struct ForcingBounds {
    /// Longest derived rule kept.
    pub max_rule_len: usize,
    pub max_rules: usize,
    pub max_passes: usize,
}

impl Default for ForcingBounds {
    fn default() -> Self {
        ForcingBounds {
            max_rule_len: 16,
            max_rules: 600,
            max_passes: 4,
        }
    }
}

type Letters = Vec<u32>;

fn letter(n: Name, e: i32) -> u32 {
    n * 2 + u32::from(e < 0)
}

fn encode(w: &NameWord) -> Letters {
    w.iter().map(|&(n, e)| letter(n, e)).collect()
}

fn shortlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn free_reduce(w: &mut Letters) {
    let mut out: Letters = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

#[derive(Debug, Clone)]
struct Rewriter {
    rules: Vec<(Letters, Letters)>,
    by_first: HashMap<u32, Vec<usize>>,
    bounds: ForcingBounds,
}

impl Rewriter {
    fn new(bounds: ForcingBounds) -> Self {
        Rewriter {
            rules: Vec::new(),
            by_first: HashMap::new(),
            bounds,
        }
    }

    fn reindex(&mut self) {
        self.by_first.clear();
        for (i, (l, _)) in self.rules.iter().enumerate() {
            self.by_first.entry(l[0]).or_default().push(i);
        }
    }

    /// Rewrites with the rules, cancelling `x x⁻¹` only where no rule applies.
    fn reduce(&self, w: &[u32]) -> Letters {
        self.reduce_skipping(w, usize::MAX)
    }

    fn reduce_skipping(&self, w: &[u32], skip: usize) -> Letters {
        let mut w = w.to_vec();
        'outer: loop {
            for i in 0..w.len() {
                if let Some(ids) = self.by_first.get(&w[i]) {
                    for &r in ids.iter().filter(|&&r| r != skip) {
                        let (l, rhs) = &self.rules[r];
                        if w[i..].starts_with(l) {
                            let mut next = w[..i].to_vec();
                            next.extend_from_slice(rhs);
                            next.extend_from_slice(&w[i + l.len()..]);
                            w = next;
                            continue 'outer;
                        }
                    }
                }
            }
            if let Some(i) = (1..w.len()).find(|&i| w[i] == w[i - 1] ^ 1) {
                w.drain(i - 1..=i);
                continue;
            }
            return w;
        }
    }

    fn push_rule(&mut self, l: Letters, r: Letters) {
        self.rules.push((l, r));
        self.reindex();
    }

    fn add_inverse_rules(&mut self, n: Name) {
        for e in [1, -1] {
            let l = vec![letter(n, e), letter(n, -e)];
            if !self.rules.iter().any(|(x, _)| *x == l) {
                self.push_rule(l, vec![]);
            }
        }
    }

    /// Adds `a = b` oriented by shortlex; returns whether a rule was added.
    fn add_equality(&mut self, a: Letters, b: Letters, forced: bool) -> bool {
        let (a, b) = (self.reduce(&a), self.reduce(&b));
        let (l, r) = match shortlex(&a, &b) {
            Ordering::Equal => return false,
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
        };
        if !forced
            && (l.len() > self.bounds.max_rule_len || self.rules.len() >= self.bounds.max_rules)
        {
            return false;
        }
        self.rules.push((l, r));
        self.reindex();
        true
    }

    fn critical_pairs(&self, i: usize, j: usize) -> Vec<(Letters, Letters)> {
        let (l1, r1) = &self.rules[i];
        let (l2, r2) = &self.rules[j];
        let mut out = Vec::new();
        // Suffix of l1 overlapping a prefix of l2.
        for k in 1..l1.len().min(l2.len()) {
            if l1[l1.len() - k..] == l2[..k] {
                let mut a = r1.clone();
                a.extend_from_slice(&l2[k..]);
                let mut b = l1[..l1.len() - k].to_vec();
                b.extend_from_slice(r2);
                out.push((a, b));
            }
        }
        // l2 inside l1.
        if i != j && l2.len() <= l1.len() {
            for s in 0..=l1.len() - l2.len() {
                if l1[s..s + l2.len()] == l2[..] {
                    let mut b = l1[..s].to_vec();
                    b.extend_from_slice(r2);
                    b.extend_from_slice(&l1[s + l2.len()..]);
                    out.push((r1.clone(), b));
                    break;
                }
            }
        }
        out
    }

    fn interreduce(&mut self) {
        let mut i = 0;
        while i < self.rules.len() {
            let (l, r) = &self.rules[i];
            let inverse_pair = r.is_empty() && l.len() == 2 && l[0] == l[1] ^ 1;
            if !inverse_pair && self.reduce_skipping(l, i) != *l {
                let (l, r) = self.rules.remove(i);
                self.reindex();
                self.add_equality(l, r, true);
                i = 0;
                continue;
            }
            i += 1;
        }
        for i in 0..self.rules.len() {
            let r = self.rules[i].1.clone();
            let rr = self.reduce(&r);
            self.rules[i].1 = rr;
        }
    }

    fn complete(&mut self) {
        for _ in 0..self.bounds.max_passes {
            let n = self.rules.len();
            let mut added = false;
            for i in 0..n {
                for j in 0..n {
                    if i >= self.rules.len() || j >= self.rules.len() {
                        continue;
                    }
                    for (a, b) in self.critical_pairs(i, j) {
                        added |= self.add_equality(a, b, false);
                    }
                }
            }
            if !added {
                break;
            }
            self.interreduce();
        }
    }
}

/// Forced-condition oracle for a fixed set of played conditions.
#[derive(Debug, Clone)]
pub struct ForcedState {
    base: Rewriter,
    inequations: Vec<Letters>,
    names: BTreeSet<Name>,
}

impl ForcedState {
    pub fn new(identity: Name, conditions: &[Condition], bounds: ForcingBounds) -> Self {
        let mut rw = Rewriter::new(bounds);
        let mut names = BTreeSet::from([identity]);
        for c in conditions {
            names.extend(c.word.iter().map(|(n, _)| *n));
        }
        rw.push_rule(vec![letter(identity, 1)], vec![]);
        rw.push_rule(vec![letter(identity, -1)], vec![]);
        let eq_names: BTreeSet<Name> = conditions
            .iter()
            .filter(|c| c.polarity == Polarity::Equation)
            .flat_map(|c| c.word.iter().map(|(n, _)| *n))
            .collect();
        for &n in &eq_names {
            if n != identity {
                rw.add_inverse_rules(n);
            }
        }
        for c in conditions
            .iter()
            .filter(|c| c.polarity == Polarity::Equation)
        {
            rw.add_equality(encode(&c.word), vec![], true);
        }
        rw.complete();
        let inequations = conditions
            .iter()
            .filter(|c| c.polarity == Polarity::Inequation)
            .map(|c| encode(&c.word))
            .collect();
        ForcedState {
            base: rw,
            inequations,
            names,
        }
    }

    pub fn knows(&self, n: Name) -> bool {
        self.names.contains(&n)
    }

    /// Whether `w = 1` follows within the bounds.
    pub fn equation_forced(&self, w: &NameWord) -> bool {
        self.base.reduce(&encode(w)).is_empty()
    }

    /// Whether `w ≠ 1` follows within the bounds.
    pub fn inequation_forced(&self, w: &NameWord) -> bool {
        let enc = encode(w);
        let mut red = enc.clone();
        free_reduce(&mut red);
        if self.inequations.iter().any(|u| {
            let mut u = u.clone();
            free_reduce(&mut u);
            u == red
        }) {
            return true;
        }
        let mut rw = self.base.clone();
        for &(n, _) in w {
            if !rw.rules.iter().any(|(l, _)| l.len() == 1 && l[0] >> 1 == n) {
                rw.add_inverse_rules(n);
            }
        }
        rw.add_equality(enc, vec![], true);
        rw.complete();
        self.inequations.iter().any(|u| {
            (1..=6).any(|k| {
                let p: Letters = std::iter::repeat_n(u.iter().copied(), k)
                    .flatten()
                    .collect();
                rw.reduce(&p).is_empty()
            })
        })
    }

    pub fn status(&self, c: &Condition) -> ForcingStatus {
        let (yes, no) = (
            self.equation_forced(&c.word),
            self.inequation_forced(&c.word),
        );
        match (c.polarity, yes, no) {
            (Polarity::Equation, true, _) | (Polarity::Inequation, _, true) => {
                ForcingStatus::ForcedTrue
            }
            (Polarity::Equation, _, true) | (Polarity::Inequation, true, _) => {
                ForcingStatus::ForcedFalse
            }
            _ => ForcingStatus::Open,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{commutator, gen};
    use super::*;

    fn eq(w: NameWord) -> Condition {
        Condition::equation(w)
    }

    #[test]
    fn played_and_symmetric_commutators() {
        let c = vec![eq(commutator(&gen(1), &gen(2)))];
        let s = ForcedState::new(0, &c, ForcingBounds::default());
        assert_eq!(s.status(&c[0]), ForcingStatus::ForcedTrue);
        assert_eq!(
            s.status(&eq(commutator(&gen(2), &gen(1)))),
            ForcingStatus::ForcedTrue
        );
        assert_eq!(
            s.status(&eq(commutator(&gen(1), &gen(3)))),
            ForcingStatus::Open
        );
    }

    #[test]
    fn identity_commutes() {
        let s = ForcedState::new(0, &[], ForcingBounds::default());
        assert!(s.equation_forced(&commutator(&gen(4), &gen(0))));
        assert!(!s.equation_forced(&commutator(&gen(4), &gen(5))));
    }

    #[test]
    fn inequations_and_their_negations() {
        let ne = Condition::inequation(commutator(&gen(1), &gen(2)));
        let s = ForcedState::new(0, std::slice::from_ref(&ne), ForcingBounds::default());
        assert_eq!(
            s.status(&eq(commutator(&gen(1), &gen(2)))),
            ForcingStatus::ForcedFalse
        );
        assert_eq!(
            s.status(&eq(commutator(&gen(2), &gen(1)))),
            ForcingStatus::ForcedFalse
        );
        assert_eq!(s.status(&ne), ForcingStatus::ForcedTrue);
    }

    #[test]
    fn torsion_contradiction() {
        // With x ≠ 1 played, x³ = 1 would make x torsion.
        let c = vec![Condition::inequation(gen(1))];
        let s = ForcedState::new(0, &c, ForcingBounds::default());
        let cube = vec![(1, 1), (1, 1), (1, 1)];
        assert!(s.inequation_forced(&cube));
    }
}
