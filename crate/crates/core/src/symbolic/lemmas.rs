//! Overgroup constructions that produce centralising commutators, each
//! returned with the checks that were evaluated in the constructed groups.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::expr::{GroupExpr, Membership, SymError};
use super::word::{Sym, SymWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub description: String,
    /// Label of the group in which it was evaluated.
    pub group: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub construction: String,
    pub case: String,
    /// Label → expression.
    pub groups: BTreeMap<String, String>,
    /// Named elements, as words in the group they live in.
    pub elements: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ConstructionReport {
    fn new(construction: &str, case: &str) -> Self {
        ConstructionReport {
            construction: construction.to_string(),
            case: case.to_string(),
            groups: BTreeMap::new(),
            elements: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    fn group(&mut self, label: &str, e: &GroupExpr) {
        self.groups.insert(label.to_string(), e.to_string());
    }

    fn element(&mut self, name: &str, w: &SymWord) {
        self.elements.insert(name.to_string(), w.to_string());
    }

    /// Records whether `w` is (or is not) the identity of `e`.
    fn check(
        &mut self,
        label: &str,
        e: &GroupExpr,
        description: &str,
        w: &SymWord,
        want_identity: bool,
    ) -> Result<(), SymError> {
        let passed = e.is_identity(w)? == want_identity;
        self.checks.push(Check {
            description: description.to_string(),
            group: label.to_string(),
            passed,
        });
        Ok(())
    }
}

/// A generator name based on `base` that `e` does not use.
pub fn fresh_name(base: &str, e: &GroupExpr) -> Sym {
    let mut k = 0;
    loop {
        let name = if k == 0 {
            base.to_string()
        } else {
            format!("{base}{k}")
        };
        let s = Sym::new(&name);
        if !e.has_generator(s) {
            return s;
        }
        k += 1;
    }
}

fn comm(a: &SymWord, b: &SymWord) -> SymWord {
    SymWord::commutator(a, b)
}

/// Result of the `K₁ × (K₂ * ⟨a⟩)` construction.
#[derive(Debug, Clone)]
pub struct Lemma32 {
    pub gamma_group: GroupExpr,
    pub a: Sym,
    pub g_image: SymWord,
    pub gamma_image: SymWord,
    pub report: ConstructionReport,
}

impl Lemma32 {
    /// Image of a word in the letters `g`, `γ` under `g ↦ g₁`, `γ ↦ γ₁γ₂`.
    pub fn embed(&self, w: &SymWord, g: Sym, gamma: Sym) -> SymWord {
        w.substitute(&|s| {
            if s == g {
                self.g_image.clone()
            } else if s == gamma {
                self.gamma_image.clone()
            } else {
                panic!("letter {s} is neither g nor gamma")
            }
        })
    }
}

/// Builds `Γ = K₁ × (K₂ * ⟨a⟩)` with `g ↦ g₁` and `γ ↦ γ₁γ₂`.
pub fn build_lemma32(k: &GroupExpr, g: &SymWord, gamma: &SymWord) -> Result<Lemma32, SymError> {
    k.check_word(g)?;
    k.check_word(gamma)?;
    let k1 = k.with_suffix("_1");
    let k2 = k.with_suffix("_2");
    let probe = GroupExpr::direct_product(k1.clone(), k2.clone())?;
    let a = fresh_name("a", &probe);
    let big = GroupExpr::direct_product(
        k1,
        GroupExpr::free_product(k2, GroupExpr::free(&[a.name().as_ref()])?)?,
    )?;
    let suffixed = |w: &SymWord, sfx: &str| w.map_names(&|s| Sym::new(&format!("{s}{sfx}")));
    let g_image = suffixed(g, "_1");
    let gamma_image = suffixed(gamma, "_1").mul(&suffixed(gamma, "_2"));
    let aw = SymWord::gen(a);

    let mut report = ConstructionReport::new("K1 x (K2 * <a>)", "direct");
    report.group("K", k);
    report.group("Gamma", &big);
    report.element("a", &aw);
    report.element("g", &g_image);
    report.element("gamma", &gamma_image);
    report.check(
        "Gamma",
        &big,
        "[a, gamma] != 1",
        &comm(&aw, &gamma_image),
        false,
    )?;
    report.check("Gamma", &big, "[a, g] = 1", &comm(&aw, &g_image), true)?;
    report.check(
        "Gamma",
        &big,
        "[[a, gamma], g] = 1",
        &comm(&comm(&aw, &gamma_image), &g_image),
        true,
    )?;
    Ok(Lemma32 {
        gamma_group: big,
        a,
        g_image,
        gamma_image,
        report,
    })
}

/// Reduced words of length at most `max_len` over the given letters and their inverses.
pub fn ball(letters: &[Sym], max_len: usize) -> Vec<SymWord> {
    let mut out = vec![SymWord::empty()];
    let mut frontier = vec![SymWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in letters {
                for e in [1, -1] {
                    let last = w.pairs().last().copied();
                    if last.is_some_and(|(t, f)| t == s && f.signum() != e) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(s, e);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCheck {
    pub radius: usize,
    pub words_checked: usize,
    /// Non-trivial words of `K` whose image is trivial.
    pub kernel_elements: Vec<String>,
    /// Kernel elements whose `γ`-exponent sum is non-zero.
    pub kernel_with_gamma_exponent: usize,
}

/// Injectivity check of `K = F(g, γ) → Γ` on the ball of the given radius.
pub fn lemma32_ball_check(radius: usize) -> Result<BallCheck, SymError> {
    let k = GroupExpr::free(&["g", "gamma"])?;
    let (g, gamma) = (Sym::new("g"), Sym::new("gamma"));
    let l = build_lemma32(&k, &SymWord::gen(g), &SymWord::gen(gamma))?;
    let words = ball(&[g, gamma], radius);
    let mut kernel = Vec::new();
    let mut with_gamma = 0;
    for w in &words {
        let trivial_in_k = k.is_identity(w)?;
        let trivial_image = l.gamma_group.is_identity(&l.embed(w, g, gamma))?;
        if trivial_image && !trivial_in_k {
            if w.exponent_sum(gamma) != 0 {
                with_gamma += 1;
            }
            kernel.push(w.to_string());
        }
    }
    Ok(BallCheck {
        radius,
        words_checked: words.len(),
        kernel_elements: kernel,
        kernel_with_gamma_exponent: with_gamma,
    })
}

/// Finds `a, b` centralising `g` with `1 ≠ [a,[b,h]]` centralising `g`,
/// in an overgroup of `G`.
pub fn build_lemma31(
    group: &GroupExpr,
    g: &SymWord,
    h: &SymWord,
) -> Result<ConstructionReport, SymError> {
    if group.is_identity(g)? {
        return Err(SymError::HypothesisViolation("g is trivial".into()));
    }
    if group.is_identity(h)? {
        return Err(SymError::HypothesisViolation("h is trivial".into()));
    }
    let g_in_h = group.cyclic_membership(g, h)?;
    let h_in_g = group.cyclic_membership(h, g)?;
    match (g_in_h, h_in_g) {
        (Membership::Member(n), _) if n.abs() > 1 => lemma31_cyclic(group, g, h, n),
        (Membership::Member(n), _) => Err(SymError::HypothesisViolation(format!(
            "<g,h> is cyclic with g = h^{n}; need |n| > 1"
        ))),
        (_, Membership::Member(k)) => Err(SymError::HypothesisViolation(format!(
            "<g,h> is cyclic with h = g^{k}, so g is not a proper power of h"
        ))),
        _ => lemma31_noncyclic(group, g, h),
    }
}

fn lemma31_cyclic(
    group: &GroupExpr,
    g: &SymWord,
    h: &SymWord,
    n: i64,
) -> Result<ConstructionReport, SymError> {
    let a = fresh_name("a", group);
    let b = fresh_name("b", group);
    let c = fresh_name("c", group);
    let z3 = GroupExpr::free_abelian(&[a.name(), b.name(), c.name()])?;
    let gamma = GroupExpr::amalgam_cyclic(z3, group.clone(), SymWord::gen(c), g.clone())?;
    let (aw, bw) = (SymWord::gen(a), SymWord::gen(b));
    let x = comm(&aw, &comm(&bw, h));

    let mut r = ConstructionReport::new("Z^3 amalgamated along c = g", "cyclic");
    r.notes.push(format!("g = h^{n} in G"));
    r.group("G", group);
    r.group("Gamma", &gamma);
    r.element("a", &aw);
    r.element("b", &bw);
    r.element("g", g);
    r.element("h", h);
    r.check("Gamma", &gamma, "[a, g] = 1", &comm(&aw, g), true)?;
    r.check("Gamma", &gamma, "[b, g] = 1", &comm(&bw, g), true)?;
    r.check("Gamma", &gamma, "a != b", &aw.mul(&bw.inverse()), false)?;
    r.check("Gamma", &gamma, "[a, [b, h]] != 1", &x, false)?;
    r.check("Gamma", &gamma, "[[a, [b, h]], g] = 1", &comm(&x, g), true)?;
    Ok(r)
}

fn lemma31_noncyclic(
    group: &GroupExpr,
    g: &SymWord,
    h: &SymWord,
) -> Result<ConstructionReport, SymError> {
    let sfx = |w: &SymWord, s: &str| w.map_names(&|x| Sym::new(&format!("{x}{s}")));
    let (g1, g2, h1, h2) = (sfx(g, "_1"), sfx(g, "_2"), sfx(h, "_1"), sfx(h, "_2"));
    let q = GroupExpr::amalgam_cyclic(
        group.with_suffix("_1"),
        group.with_suffix("_2"),
        g1.clone(),
        g2.clone(),
    )?;
    let pairs: Vec<(String, String)> = group
        .generators()
        .iter()
        .map(|s| (format!("{s}_1"), format!("{s}_2")))
        .collect();
    let b = fresh_name("b", &q);
    let gamma0 = GroupExpr::semidirect_involution(q.clone(), &pairs, &b.name())?;
    let bw = SymWord::gen(b);
    let gamma_elt = comm(&bw, &h1);
    let gamma_word = h2.inverse().mul(&h1);

    let mut r = ConstructionReport::new(
        "copies of G swapped by b, then K1 x (K2 * <a>)",
        "non-cyclic",
    );
    r.group("G", group);
    r.group("Q", &q);
    r.group("Gamma0", &gamma0);
    r.element("b", &bw);
    r.element("g", &g1);
    r.element("gamma", &gamma_word);
    r.check("Gamma0", &gamma0, "[b, g] = 1", &comm(&bw, &g1), true)?;
    r.check("Gamma0", &gamma0, "b != 1", &bw, false)?;
    r.check(
        "Gamma0",
        &gamma0,
        "[b, h] = h_2^-1 h_1",
        &gamma_elt.mul(&gamma_word.inverse()),
        true,
    )?;
    r.check("Gamma0", &gamma0, "gamma = [b, h] != 1", &gamma_elt, false)?;

    let l32 = build_lemma32(&gamma0, &g1, &gamma_word)?;
    r.group("Gamma~", &l32.gamma_group);
    r.element("a", &SymWord::gen(l32.a));
    for c in &l32.report.checks {
        r.checks.push(Check {
            description: c.description.clone(),
            group: "Gamma~".into(),
            passed: c.passed,
        });
    }
    r.notes.push(
        "K = <g, gamma> is represented by the ambient Gamma0; the a-conclusions are checked in Gamma~, the b-conclusions in Gamma0".into(),
    );
    r.notes.push(
        "the final amalgam of Gamma0 and Gamma~ along K is not computed; its existence follows from the amalgam embedding theorem".into(),
    );
    Ok(r)
}

/// `G = ⟨g,h | h g h⁻¹ = g^m⟩`, `H = G₁ *_{g₁=g₂} G₂`; whether `[g, h₂⁻¹h₁] = 1` in `H`.
pub fn verify_lemma34(m: i64) -> Result<bool, SymError> {
    let h = lemma34_group(GroupExpr::affine_bs(m, "g", "h")?)?;
    h.is_identity(&lemma34_commutator("g_1"))
}

fn lemma34_group(g: GroupExpr) -> Result<GroupExpr, SymError> {
    GroupExpr::amalgam_cyclic(
        g.with_suffix("_1"),
        g.with_suffix("_2"),
        SymWord::gen("g_1"),
        SymWord::gen("g_2"),
    )
}

fn lemma34_commutator(first: &str) -> SymWord {
    let gamma = SymWord::parse_simple("h_2^-1 h_1");
    comm(&SymWord::gen(first), &gamma)
}

/// `[h₁, h₂⁻¹h₁]` in the same amalgam built from free factors; expected non-trivial.
pub fn lemma34_control() -> Result<bool, SymError> {
    let h = lemma34_group(GroupExpr::free(&["g", "h"])?)?;
    h.is_identity(&lemma34_commutator("h_1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma34_holds() {
        assert!(verify_lemma34(2).unwrap());
        assert!(verify_lemma34(3).unwrap());
        assert!(!lemma34_control().unwrap());
    }

    #[test]
    fn lemma34_fails_over_free_factors() {
        let h = lemma34_group(GroupExpr::free(&["g", "h"]).unwrap()).unwrap();
        assert!(!h.is_identity(&lemma34_commutator("g_1")).unwrap());
    }

    #[test]
    fn lemma32_free() {
        let k = GroupExpr::free(&["g", "gamma"]).unwrap();
        let l = build_lemma32(&k, &SymWord::gen("g"), &SymWord::gen("gamma")).unwrap();
        assert!(l.report.all_passed(), "{:#?}", l.report);
    }

    #[test]
    fn lemma31_cyclic_case() {
        let g = GroupExpr::free_abelian(&["h"]).unwrap();
        let r = build_lemma31(&g, &SymWord::power("h", 2), &SymWord::gen("h")).unwrap();
        assert_eq!(r.case, "cyclic");
        assert!(r.all_passed(), "{r:#?}");
    }

    #[test]
    fn lemma31_noncyclic_case() {
        let g = GroupExpr::free(&["g", "h"]).unwrap();
        let r = build_lemma31(&g, &SymWord::gen("g"), &SymWord::gen("h")).unwrap();
        assert_eq!(r.case, "non-cyclic");
        assert!(r.all_passed(), "{r:#?}");
    }

    #[test]
    fn lemma31_hypotheses() {
        let g = GroupExpr::free_abelian(&["h"]).unwrap();
        let h = SymWord::gen("h");
        assert!(build_lemma31(&g, &h, &h).is_err());
        assert!(build_lemma31(&g, &SymWord::empty(), &h).is_err());
        assert!(build_lemma31(&g, &h, &SymWord::power("h", 3)).is_err());
    }

    #[test]
    fn ball_sizes() {
        let s = [Sym::new("x"), Sym::new("y")];
        // 1 + 4 + 12 + 36
        assert_eq!(ball(&s, 3).len(), 53);
    }
}
