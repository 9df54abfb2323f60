//! Finitely presented groups built from a small set of constructors, each
//! with an exact word problem and an exact cyclic-membership test.
//!
//! Every constructor yields a torsion-free group, so a non-trivial amalgamating
//! element always generates an infinite cyclic subgroup.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::affine::AffineMap;
use super::word::{Sym, SymWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator name `{0}` used twice")]
    NameCollision(String),
    #[error("amalgamating word `{0}` is trivial")]
    TrivialEdge(String),
    #[error("cyclic generator is trivial")]
    TrivialCyclicGenerator,
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Member(i64),
    NotMember,
}

impl Membership {
    pub fn exponent(self) -> Option<i64> {
        match self {
            Membership::Member(k) => Some(k),
            Membership::NotMember => None,
        }
    }
}

#[derive(Clone)]
enum Kind {
    Free,
    Abelian,
    Direct(Arc<GroupExpr>, Arc<GroupExpr>),
    /// Amalgam of two factors; `edge` is `None` for the free product.
    Amalgam {
        sides: [Arc<GroupExpr>; 2],
        edge: Option<[SymWord; 2]>,
    },
    Semidirect {
        base: Arc<GroupExpr>,
        pairs: Vec<(Sym, Sym)>,
        twist: HashMap<Sym, Sym>,
        stable: Sym,
    },
    AffineBs {
        m: i64,
        g: Sym,
        h: Sym,
    },
}

#[derive(Clone)]
pub struct GroupExpr {
    kind: Kind,
    gens: Vec<Sym>,
    genset: HashSet<Sym>,
}

fn check_distinct(names: &[Sym]) -> Result<HashSet<Sym>, SymError> {
    let mut set = HashSet::new();
    for s in names {
        if !set.insert(*s) {
            return Err(SymError::NameCollision(s.to_string()));
        }
    }
    Ok(set)
}

impl GroupExpr {
    fn build(kind: Kind, gens: Vec<Sym>) -> Result<Self, SymError> {
        let genset = check_distinct(&gens)?;
        Ok(GroupExpr { kind, gens, genset })
    }

    pub fn free<S: AsRef<str>>(names: &[S]) -> Result<Self, SymError> {
        Self::build(
            Kind::Free,
            names.iter().map(|s| Sym::new(s.as_ref())).collect(),
        )
    }

    pub fn free_abelian<S: AsRef<str>>(names: &[S]) -> Result<Self, SymError> {
        Self::build(
            Kind::Abelian,
            names.iter().map(|s| Sym::new(s.as_ref())).collect(),
        )
    }

    pub fn direct_product(left: GroupExpr, right: GroupExpr) -> Result<Self, SymError> {
        let gens = [left.gens.clone(), right.gens.clone()].concat();
        Self::build(Kind::Direct(Arc::new(left), Arc::new(right)), gens)
    }

    pub fn free_product(left: GroupExpr, right: GroupExpr) -> Result<Self, SymError> {
        let gens = [left.gens.clone(), right.gens.clone()].concat();
        Self::build(
            Kind::Amalgam {
                sides: [Arc::new(left), Arc::new(right)],
                edge: None,
            },
            gens,
        )
    }

    /// `left *_{left_word = right_word} right`.
    pub fn amalgam_cyclic(
        left: GroupExpr,
        right: GroupExpr,
        left_word: SymWord,
        right_word: SymWord,
    ) -> Result<Self, SymError> {
        for (side, w) in [(&left, &left_word), (&right, &right_word)] {
            side.check_word(w)?;
            if side.trivial(w) {
                return Err(SymError::TrivialEdge(w.to_string()));
            }
        }
        let gens = [left.gens.clone(), right.gens.clone()].concat();
        Self::build(
            Kind::Amalgam {
                sides: [Arc::new(left), Arc::new(right)],
                edge: Some([left_word, right_word]),
            },
            gens,
        )
    }

    /// `base ⋊ ⟨stable⟩` where conjugation by `stable` swaps each listed pair.
    pub fn semidirect_involution<S: AsRef<str>>(
        base: GroupExpr,
        pairs: &[(S, S)],
        stable: &str,
    ) -> Result<Self, SymError> {
        let stable = Sym::new(stable);
        let pairs: Vec<(Sym, Sym)> = pairs
            .iter()
            .map(|(a, b)| (Sym::new(a.as_ref()), Sym::new(b.as_ref())))
            .collect();
        let mut twist: HashMap<Sym, Sym> = HashMap::new();
        for &(a, b) in &pairs {
            for s in [a, b] {
                if !base.genset.contains(&s) {
                    return Err(SymError::UnknownGenerator(s.to_string()));
                }
            }
            if a == b || twist.contains_key(&a) || twist.contains_key(&b) {
                return Err(SymError::InvalidConstruction(format!(
                    "swap pair ({a}, {b}) is not part of an involution"
                )));
            }
            twist.insert(a, b);
            twist.insert(b, a);
        }
        let tw = |s: Sym| SymWord::gen(*twist.get(&s).unwrap_or(&s));
        for r in base.relators() {
            if !base.trivial(&r.substitute(&tw)) {
                return Err(SymError::InvalidConstruction(format!(
                    "swap does not preserve relator {r}"
                )));
            }
        }
        let mut gens = base.gens.clone();
        gens.push(stable);
        Self::build(
            Kind::Semidirect {
                base: Arc::new(base),
                pairs,
                twist,
                stable,
            },
            gens,
        )
    }

    /// `⟨g, h | h g h⁻¹ = g^m⟩`, modelled by affine maps.
    pub fn affine_bs(m: i64, g: &str, h: &str) -> Result<Self, SymError> {
        if m < 2 {
            return Err(SymError::InvalidConstruction(format!(
                "need m >= 2, got {m}"
            )));
        }
        let (g, h) = (Sym::new(g), Sym::new(h));
        Self::build(Kind::AffineBs { m, g, h }, vec![g, h])
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, Kind::Free)
    }

    pub fn is_free_abelian(&self) -> bool {
        matches!(self.kind, Kind::Abelian)
    }

    pub fn generators(&self) -> &[Sym] {
        &self.gens
    }

    pub fn has_generator(&self, s: Sym) -> bool {
        self.genset.contains(&s)
    }

    pub fn check_word(&self, w: &SymWord) -> Result<(), SymError> {
        match w.generators().find(|s| !self.genset.contains(s)) {
            Some(s) => Err(SymError::UnknownGenerator(s.to_string())),
            None => Ok(()),
        }
    }

    pub fn is_identity(&self, w: &SymWord) -> Result<bool, SymError> {
        self.check_word(w)?;
        Ok(self.trivial(w))
    }

    pub fn equal(&self, u: &SymWord, v: &SymWord) -> Result<bool, SymError> {
        self.is_identity(&u.mul(&v.inverse()))
    }

    pub fn commute(&self, u: &SymWord, v: &SymWord) -> Result<bool, SymError> {
        self.is_identity(&SymWord::commutator(u, v))
    }

    /// Decides whether `x ∈ ⟨c⟩`; a `Member(k)` answer satisfies `x = c^k`.
    pub fn cyclic_membership(&self, x: &SymWord, c: &SymWord) -> Result<Membership, SymError> {
        self.check_word(x)?;
        self.check_word(c)?;
        if self.trivial(c) {
            return Err(SymError::TrivialCyclicGenerator);
        }
        Ok(match self.member(x, c) {
            Some(k) => {
                debug_assert!(self.trivial(&x.mul(&c.pow(-k))));
                Membership::Member(k)
            }
            None => Membership::NotMember,
        })
    }

    pub(crate) fn trivial(&self, w: &SymWord) -> bool {
        if w.is_empty() {
            return true;
        }
        match &self.kind {
            Kind::Free => false,
            Kind::Abelian => self.gens.iter().all(|&s| w.exponent_sum(s) == 0),
            Kind::Direct(l, r) => {
                l.trivial(&w.project(|s| l.genset.contains(&s)))
                    && r.trivial(&w.project(|s| r.genset.contains(&s)))
            }
            Kind::Amalgam { .. } => self.normal_syllables(w).is_empty(),
            Kind::Semidirect { base, .. } => {
                let (q, e) = self.semidirect_normal(w);
                e == 0 && base.trivial(&q)
            }
            Kind::AffineBs { .. } => self.affine(w).is_identity(),
        }
    }

    /// Exponent `k` with `x = c^k`; `c` must be non-trivial.
    pub(crate) fn member(&self, x: &SymWord, c: &SymWord) -> Option<i64> {
        match &self.kind {
            Kind::Free => {
                if let [(s, a)] = c.pairs() {
                    return match x.pairs() {
                        [] => Some(0),
                        [(t, b)] if t == s && b % a == 0 => Some(b / a),
                        _ => None,
                    };
                }
                let (u, core) = c.cyclic_reduction();
                let y = x.conjugate_by(&u);
                if y.is_empty() {
                    return Some(0);
                }
                let (ly, lc) = (y.len(), core.len());
                if ly % lc != 0 {
                    return None;
                }
                let k = (ly / lc) as i64;
                [k, -k].into_iter().find(|&k| core.pow(k) == y)
            }
            Kind::Abelian => {
                let mut k: Option<i64> = None;
                for &s in &self.gens {
                    let (xs, cs) = (x.exponent_sum(s), c.exponent_sum(s));
                    if cs == 0 {
                        if xs != 0 {
                            return None;
                        }
                        continue;
                    }
                    if xs % cs != 0 {
                        return None;
                    }
                    match k {
                        Some(k0) if k0 != xs / cs => return None,
                        _ => k = Some(xs / cs),
                    }
                }
                k
            }
            Kind::Direct(l, r) => {
                let pl = |w: &SymWord| w.project(|s| l.genset.contains(&s));
                let pr = |w: &SymWord| w.project(|s| r.genset.contains(&s));
                let (xl, xr, cl, cr) = (pl(x), pr(x), pl(c), pr(c));
                if l.trivial(&cl) {
                    return if l.trivial(&xl) {
                        r.member(&xr, &cr)
                    } else {
                        None
                    };
                }
                let k = l.member(&xl, &cl)?;
                r.trivial(&xr.mul(&cr.pow(-k))).then_some(k)
            }
            Kind::Amalgam { sides, edge } => self.amalgam_member(sides, edge.as_ref(), x, c),
            Kind::Semidirect { base, .. } => {
                let (qx, ex) = self.semidirect_normal(x);
                let (qc, ec) = self.semidirect_normal(c);
                if ec == 0 {
                    return if ex == 0 { base.member(&qx, &qc) } else { None };
                }
                if ex % ec != 0 {
                    return None;
                }
                let k = ex / ec;
                self.trivial(&x.mul(&c.pow(-k))).then_some(k)
            }
            Kind::AffineBs { m, .. } => self.affine(x).cyclic_exponent(&self.affine(c), *m),
        }
    }

    fn affine(&self, w: &SymWord) -> AffineMap {
        let Kind::AffineBs { m, g, .. } = &self.kind else {
            unreachable!()
        };
        w.pairs()
            .iter()
            .fold(AffineMap::identity(), |acc, &(s, e)| {
                let step = if s == *g {
                    AffineMap::translation(e)
                } else {
                    AffineMap::scaling(e)
                };
                acc.compose(&step, *m)
            })
    }

    /// `(q, e)` with `w = q · stable^e` and `q` in the base.
    fn semidirect_normal(&self, w: &SymWord) -> (SymWord, i64) {
        let Kind::Semidirect { twist, stable, .. } = &self.kind else {
            unreachable!()
        };
        let mut q = SymWord::empty();
        let mut e = 0i64;
        for &(s, k) in w.pairs() {
            if s == *stable {
                e += k;
            } else if e % 2 != 0 {
                q.push(*twist.get(&s).unwrap_or(&s), k);
            } else {
                q.push(s, k);
            }
        }
        (q, e)
    }

    fn side_of(&self, s: Sym) -> usize {
        let Kind::Amalgam { sides, .. } = &self.kind else {
            unreachable!()
        };
        usize::from(!sides[0].genset.contains(&s))
    }

    /// Reduced alternating syllable sequence. Empty iff `w` is trivial; of
    /// length one iff `w` lies in a factor.
    pub(crate) fn normal_syllables(&self, w: &SymWord) -> Vec<(usize, SymWord)> {
        let mut st = Vec::new();
        self.normal_extend(&mut st, w);
        st
    }

    /// Multiplies a reduced syllable sequence on the right by `w`.
    pub(crate) fn normal_extend(&self, st: &mut Vec<(usize, SymWord)>, w: &SymWord) {
        let Kind::Amalgam { sides, edge } = &self.kind else {
            unreachable!()
        };
        let edge_exp = |side: usize, w: &SymWord| -> Option<i64> {
            edge.as_ref().and_then(|e| sides[side].member(w, &e[side]))
        };
        let mut i = 0;
        let pairs = w.pairs();
        while i < pairs.len() {
            let side = self.side_of(pairs[i].0);
            let mut j = i;
            while j < pairs.len() && self.side_of(pairs[j].0) == side {
                j += 1;
            }
            let chunk = SymWord::from_pairs(pairs[i..j].iter().copied());
            i = j;
            // Push, keeping the stack reduced.
            let top_side = st.last().map(|t| t.0);
            if top_side == Some(side) {
                st.last_mut().unwrap().1.append(&chunk);
            } else if st.len() == 1 {
                match edge_exp(st[0].0, &st[0].1) {
                    Some(k) => {
                        let e = &edge.as_ref().unwrap()[side];
                        st[0] = (side, e.pow(k).mul(&chunk));
                    }
                    None => st.push((side, chunk)),
                }
            } else {
                st.push((side, chunk));
            }
            loop {
                let Some((s, top)) = st.last() else { break };
                let s = *s;
                if sides[s].trivial(top) {
                    st.pop();
                    break;
                }
                let k = if st.len() >= 2 {
                    edge_exp(s, top)
                } else {
                    None
                };
                let Some(k) = k else { break };
                st.pop();
                let e = &edge.as_ref().unwrap()[1 - s];
                st.last_mut().unwrap().1.append(&e.pow(k));
            }
        }
    }

    fn syllables_word(syl: &[(usize, SymWord)]) -> SymWord {
        let mut w = SymWord::empty();
        for (_, s) in syl {
            w.append(s);
        }
        w
    }

    fn amalgam_member(
        &self,
        sides: &[Arc<GroupExpr>; 2],
        edge: Option<&[SymWord; 2]>,
        x: &SymWord,
        c: &SymWord,
    ) -> Option<i64> {
        // c = u · core · u⁻¹ with core cyclically reduced.
        let mut core = self.normal_syllables(c);
        let mut u = SymWord::empty();
        while core.len() >= 2 && core[0].0 == core[core.len() - 1].0 {
            let (_, last) = core.pop().unwrap();
            let mut w = last.clone();
            w.append(&Self::syllables_word(&core));
            u.append(&last.inverse());
            core = self.normal_syllables(&w);
        }
        let y_word = x.conjugate_by(&u);
        let y = self.normal_syllables(&y_word);
        if y.is_empty() {
            return Some(0);
        }
        let core_word = Self::syllables_word(&core);
        if core.len() >= 2 {
            if !y.len().is_multiple_of(core.len()) {
                return None;
            }
            let k = (y.len() / core.len()) as i64;
            return [k, -k]
                .into_iter()
                .find(|&k| self.trivial(&y_word.mul(&core_word.pow(-k))));
        }
        let (s, cw) = &core[0];
        if y.len() > 1 {
            return None;
        }
        let (t, yw) = &y[0];
        if t == s {
            return sides[*s].member(yw, cw);
        }
        let e = edge?;
        let k0 = sides[*t].member(yw, &e[*t])?;
        sides[*s].member(&e[*s].pow(k0), cw)
    }

    /// A finite set of defining relators over `generators()`.
    pub fn relators(&self) -> Vec<SymWord> {
        let comm = |a: Sym, b: Sym| SymWord::commutator(&SymWord::gen(a), &SymWord::gen(b));
        match &self.kind {
            Kind::Free => vec![],
            Kind::Abelian => {
                let mut out = vec![];
                for (i, &a) in self.gens.iter().enumerate() {
                    for &b in &self.gens[i + 1..] {
                        out.push(comm(a, b));
                    }
                }
                out
            }
            Kind::Direct(l, r) => {
                let mut out = l.relators();
                out.extend(r.relators());
                for &a in &l.gens {
                    for &b in &r.gens {
                        out.push(comm(a, b));
                    }
                }
                out
            }
            Kind::Amalgam { sides, edge } => {
                let mut out = sides[0].relators();
                out.extend(sides[1].relators());
                if let Some([a, b]) = edge {
                    out.push(a.mul(&b.inverse()));
                }
                out
            }
            Kind::Semidirect {
                base,
                twist,
                stable,
                ..
            } => {
                let mut out = base.relators();
                let b = SymWord::gen(*stable);
                for &x in &base.gens {
                    let bx = SymWord::gen(*twist.get(&x).unwrap_or(&x));
                    out.push(SymWord::gen(x).conjugate_by(&b).mul(&bx.inverse()));
                }
                out
            }
            Kind::AffineBs { m, g, h } => {
                let (g, h) = (SymWord::gen(*g), SymWord::gen(*h));
                vec![h.mul(&g).mul(&h.inverse()).mul(&g.pow(-*m))]
            }
        }
    }

    /// Same group with every generator renamed.
    pub fn renamed(&self, f: &impl Fn(Sym) -> Sym) -> GroupExpr {
        let kind = match &self.kind {
            Kind::Free => Kind::Free,
            Kind::Abelian => Kind::Abelian,
            Kind::Direct(l, r) => Kind::Direct(Arc::new(l.renamed(f)), Arc::new(r.renamed(f))),
            Kind::Amalgam { sides, edge } => Kind::Amalgam {
                sides: [Arc::new(sides[0].renamed(f)), Arc::new(sides[1].renamed(f))],
                edge: edge.as_ref().map(|[a, b]| [a.map_names(f), b.map_names(f)]),
            },
            Kind::Semidirect {
                base,
                pairs,
                twist,
                stable,
            } => Kind::Semidirect {
                base: Arc::new(base.renamed(f)),
                pairs: pairs.iter().map(|&(a, b)| (f(a), f(b))).collect(),
                twist: twist.iter().map(|(&a, &b)| (f(a), f(b))).collect(),
                stable: f(*stable),
            },
            Kind::AffineBs { m, g, h } => Kind::AffineBs {
                m: *m,
                g: f(*g),
                h: f(*h),
            },
        };
        let gens: Vec<Sym> = self.gens.iter().map(|&s| f(s)).collect();
        GroupExpr {
            kind,
            genset: gens.iter().copied().collect(),
            gens,
        }
    }

    /// Appends `suffix` to every generator name.
    pub fn with_suffix(&self, suffix: &str) -> GroupExpr {
        self.renamed(&|s: Sym| Sym::new(&format!("{s}{suffix}")))
    }
}

fn join(names: &[Sym]) -> String {
    names
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Free => write!(f, "free({})", join(&self.gens)),
            Kind::Abelian => write!(f, "abelian({})", join(&self.gens)),
            Kind::Direct(l, r) => write!(f, "prod({l}, {r})"),
            Kind::Amalgam { sides, edge: None } => write!(f, "fprod({}, {})", sides[0], sides[1]),
            Kind::Amalgam {
                sides,
                edge: Some([a, b]),
            } => write!(f, "amalgam({}, {}; {a} ~ {b})", sides[0], sides[1]),
            Kind::Semidirect {
                base,
                pairs,
                stable,
                ..
            } => {
                let p: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} {b}")).collect();
                write!(f, "semidir({base}; swap({}); {stable})", p.join(", "))
            }
            Kind::AffineBs { m, g, h } => write!(f, "bs({m}; {g}, {h})"),
        }
    }
}

impl fmt::Debug for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GroupExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::parse::parse_group_expr(&s).map_err(serde::de::Error::custom)
    }
}
