//! Concrete witness: a direct product of components. Each component is a
//! symbolic group together with an image for the played names (names that
//! are absent map to 1) satisfying every played equation. Each inequation
//! is non-trivial in at least one component, so it is non-trivial in the
//! product.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{commutator, format_word, gen, Condition, Name, NameWord, Polarity};
use crate::symbolic::{GroupExpr, Sym, SymWord};

#[derive(Clone)]
pub struct Component {
    pub id: u32,
    pub expr: GroupExpr,
    pub map: BTreeMap<Name, SymWord>,
    pub origin: String,
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Component {} [{}] {}", self.id, self.origin, self.expr)
    }
}

impl Component {
    pub fn image(&self, n: Name) -> SymWord {
        self.map.get(&n).cloned().unwrap_or_else(SymWord::empty)
    }

    pub fn eval(&self, w: &[(Name, i32)]) -> SymWord {
        let mut out = SymWord::empty();
        for &(n, e) in w {
            if let Some(x) = self.map.get(&n) {
                out.append(&x.pow(e as i64));
            }
        }
        out
    }

    pub fn kills(&self, w: &[(Name, i32)]) -> bool {
        self.expr.trivial(&self.eval(w))
    }

    fn failures(&self, eqs: &[NameWord]) -> usize {
        eqs.iter().filter(|e| !self.kills(e)).count()
    }

    fn holds_all(&self, eqs: &[NameWord]) -> bool {
        eqs.iter().all(|e| self.kills(e))
    }

    fn substituted(&self, f: &impl Fn(Sym) -> SymWord) -> BTreeMap<Name, SymWord> {
        self.map
            .iter()
            .map(|(&n, w)| (n, w.substitute(f)))
            .collect()
    }
}

/// Extra structure of the move being realised.
#[derive(Debug, Clone, Default)]
pub enum Hint {
    #[default]
    None,
    Quadruple {
        g: Name,
        h: Name,
        a: Name,
        b: Name,
    },
    Chain {
        conj: Name,
        chain: Vec<Name>,
    },
}

pub struct Request<'a> {
    /// All equations after the move.
    pub equations: &'a [NameWord],
    /// All inequations after the move.
    pub inequations: &'a [NameWord],
    pub fresh: &'a [Name],
    pub hint: &'a Hint,
}

#[derive(Clone, Debug, Default)]
pub struct Witness {
    pub components: Vec<Component>,
    next_id: u32,
}

fn sym(id: u32, label: &str) -> Sym {
    Sym::new(&format!("w{id}_{label}"))
}

fn rebrand(s: Sym, id: u32) -> Sym {
    let name = s.name();
    let rest = name.split_once('_').map_or(&*name, |(_, r)| r);
    sym(id, rest)
}

type Candidate = (GroupExpr, BTreeMap<Name, SymWord>, String);

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    /// The witness group as one expression.
    pub fn expr(&self) -> GroupExpr {
        let mut it = self.components.iter().map(|c| c.expr.clone());
        let first = it
            .next()
            .unwrap_or_else(|| GroupExpr::free::<&str>(&[]).expect("empty free group"));
        it.fold(first, |acc, e| {
            GroupExpr::direct_product(acc, e).expect("component names are distinct")
        })
    }

    pub fn image(&self, n: Name) -> SymWord {
        let mut out = SymWord::empty();
        for c in &self.components {
            out.append(&c.image(n));
        }
        out
    }

    pub fn assignment(&self) -> BTreeMap<Name, SymWord> {
        let names: BTreeSet<Name> = self
            .components
            .iter()
            .flat_map(|c| c.map.keys().copied())
            .collect();
        names.into_iter().map(|n| (n, self.image(n))).collect()
    }

    pub fn is_trivial(&self, w: &[(Name, i32)]) -> bool {
        self.components.iter().all(|c| c.kills(w))
    }

    pub fn satisfies(&self, c: &Condition) -> bool {
        match c.polarity {
            Polarity::Equation => self.is_trivial(&c.word),
            Polarity::Inequation => !self.is_trivial(&c.word),
        }
    }

    /// A witness for the conditions of `req`, or the first inequation the
    /// extension rules could not separate.
    pub fn extend(&self, req: &Request) -> Result<(Witness, Vec<String>), String> {
        let mut w = Witness {
            components: Vec::new(),
            next_id: self.next_id,
        };
        let mut notes = Vec::new();
        for c in &self.components {
            if c.holds_all(req.equations) {
                w.components.push(c.clone());
            } else if let Some(r) = repair(c, req.equations, req.fresh) {
                notes.push(format!("component {} adjusted", c.id));
                w.components.push(r);
            } else {
                notes.push(format!("component {} ({}) dropped", c.id, c.origin));
            }
        }
        for ineq in req.inequations {
            if w.components.iter().any(|c| !c.kills(ineq)) {
                continue;
            }
            let c = w
                .separator(ineq, req)
                .ok_or_else(|| format!("no separating component for {} != 1", format_word(ineq)))?;
            notes.push(format!(
                "component {} ({}) separates {} != 1",
                c.id,
                c.origin,
                format_word(ineq)
            ));
            w.next_id += 1;
            w.components.push(c);
        }
        Ok((w, notes))
    }

    fn separator(&self, ineq: &NameWord, req: &Request) -> Option<Component> {
        let id = self.next_id;
        let accept = |(expr, map, origin): Candidate| {
            let c = Component {
                id,
                expr,
                map,
                origin,
            };
            (!c.kills(ineq) && c.holds_all(req.equations)).then_some(c)
        };
        if let Hint::Quadruple { g, h, a, b } = *req.hint {
            if *ineq == commutator(&gen(a), &commutator(&gen(b), &gen(h))) {
                if let Some(c) = self
                    .quadruple_candidates(id, g, h, a, b, req.equations)
                    .into_iter()
                    .find_map(accept)
                {
                    return Some(c);
                }
            }
        }
        if let Hint::Chain { conj, chain } = req.hint {
            if let Some(c) = accept(chain_candidate(id, *conj, chain)) {
                return Some(c);
            }
        }
        let names: Vec<Name> = ineq
            .iter()
            .map(|(n, _)| *n)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if let Some(c) = free_support_candidates(id, &names)
            .into_iter()
            .find_map(accept)
        {
            return Some(c);
        }
        if let Some(c) = solved_candidate(id, req.equations, &names).and_then(accept) {
            return Some(c);
        }
        for src in &self.components {
            if let Some(c) = variants(src, id, &names).into_iter().find_map(accept) {
                return Some(c);
            }
        }
        nullspace_candidate(id, req.equations, &names).and_then(accept)
    }

    /// Components realising `[a, g] = [b, g] = [[a, [b, h]], g] = 1` with
    /// `[a, [b, h]] ≠ 1`: either kill `g` and adjoin a free `F(a, b)`, or
    /// amalgamate `Z³(a, b, c)` along `c = g` where `g`, `h` commute and
    /// `h ∉ ⟨g⟩`.
    fn quadruple_candidates(
        &self,
        id: u32,
        g: Name,
        h: Name,
        a: Name,
        b: Name,
        eqs: &[NameWord],
    ) -> Vec<Candidate> {
        let mut bases: Vec<Candidate> = Vec::new();
        for src in &self.components {
            bases.extend(variants(src, id, &[g, h]));
        }
        let built = [
            solved_candidate(id, eqs, &[g, h]),
            nullspace_candidate(id, eqs, &[g, h]),
        ];
        for (expr, map, origin) in built.into_iter().flatten() {
            let src = Component {
                id,
                expr,
                map,
                origin,
            };
            bases.extend(variants(&src, id, &[g, h]));
        }
        let (sa, sb, sc) = (sym(id, "a"), sym(id, "b"), sym(id, "c"));
        let mut out = Vec::new();
        for (expr, mut map, origin) in bases {
            let probe = Component {
                id,
                expr: expr.clone(),
                map: map.clone(),
                origin: String::new(),
            };
            let (gw, hw) = (probe.image(g), probe.image(h));
            let t = if expr.trivial(&gw) {
                if expr.trivial(&hw) {
                    continue;
                }
                let fab = GroupExpr::free(&[&*sa.name(), &*sb.name()]).expect("distinct names");
                GroupExpr::free_product(expr, fab).map(|t| (t, format!("{origin} * free pair")))
            } else {
                if !expr.trivial(&SymWord::commutator(&gw, &hw)) || expr.member(&hw, &gw).is_some()
                {
                    continue;
                }
                let z3 = GroupExpr::free_abelian(&[&*sa.name(), &*sb.name(), &*sc.name()])
                    .expect("distinct names");
                GroupExpr::amalgam_cyclic(expr, z3, gw, SymWord::gen(sc))
                    .map(|t| (t, format!("{origin} amalgamated with Z^3 over g")))
            };
            if let Ok((t, o)) = t {
                map.insert(a, SymWord::gen(sa));
                map.insert(b, SymWord::gen(sb));
                out.push((t, map, o));
            }
        }
        out
    }
}

/// Reassigns names declared by the move, then tries killing one generator.
fn repair(c: &Component, eqs: &[NameWord], fresh: &[Name]) -> Option<Component> {
    let gens: Vec<Sym> = c.expr.generators().to_vec();
    if !fresh.is_empty() {
        let mut cand = vec![SymWord::empty()];
        for &g in &gens {
            cand.push(SymWord::gen(g));
            cand.push(SymWord::power(g, -1));
        }
        let mut d = c.clone();
        for &n in fresh {
            let best = cand
                .iter()
                .min_by_key(|x| {
                    let mut t = d.clone();
                    t.map.insert(n, (*x).clone());
                    t.failures(eqs)
                })
                .cloned()
                .unwrap_or_else(SymWord::empty);
            d.map.insert(n, best);
        }
        if d.holds_all(eqs) {
            return Some(d);
        }
    }
    if c.expr.is_free() || c.expr.is_free_abelian() {
        for &x in &gens {
            let map = c.substituted(&|s| {
                if s == x {
                    SymWord::empty()
                } else {
                    SymWord::gen(s)
                }
            });
            let d = Component { map, ..c.clone() };
            if d.holds_all(eqs) && d.map.values().any(|w| !w.is_empty()) {
                return Some(d);
            }
        }
    }
    None
}

fn chain_candidate(id: u32, conj: Name, chain: &[Name]) -> Candidate {
    let (y, t) = (sym(id, "y"), sym(id, "t"));
    let expr = GroupExpr::free(&[&*y.name(), &*t.name()]).expect("distinct names");
    let mut map = BTreeMap::new();
    for (i, &k) in chain.iter().enumerate() {
        map.insert(
            k,
            SymWord::gen(y).conjugate_by(&SymWord::power(t, i as i64)),
        );
    }
    map.insert(conj, SymWord::gen(t));
    (expr, map, format!("conjugation chain by x{conj}"))
}

/// Free groups on subsets of `names`, largest first; other names map to 1.
fn free_support_candidates(id: u32, names: &[Name]) -> Vec<Candidate> {
    let m = names.len().min(10);
    let mut masks: Vec<u32> = (1..(1u32 << m)).collect();
    masks.sort_by_key(|k| std::cmp::Reverse(k.count_ones()));
    masks
        .into_iter()
        .map(|mask| {
            let support: Vec<Name> = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| names[i])
                .collect();
            let syms: Vec<Sym> = support.iter().map(|n| sym(id, &format!("x{n}"))).collect();
            let labels: Vec<String> = syms.iter().map(|s| s.name().to_string()).collect();
            let expr = GroupExpr::free(&labels).expect("distinct names");
            let map = support
                .iter()
                .zip(&syms)
                .map(|(&n, &s)| (n, SymWord::gen(s)))
                .collect();
            (expr, map, "free on its support".to_string())
        })
        .collect()
}

/// Copies of `src` and images of it under simple maps: killing one
/// generator, killing the support of `focus[0]`, and, for few generators,
/// sending generators into `Z² ⋊ Z` with the swap action or into `BS(1,2)`.
fn variants(src: &Component, id: u32, focus: &[Name]) -> Vec<Candidate> {
    let expr = src.expr.renamed(&|s| rebrand(s, id));
    let base = Component {
        id,
        expr: expr.clone(),
        map: src
            .map
            .iter()
            .map(|(&n, w)| (n, w.map_names(&|s| rebrand(s, id))))
            .collect(),
        origin: String::new(),
    };
    let mut out = vec![(
        expr.clone(),
        base.map.clone(),
        format!("copy of component {}", src.id),
    )];
    if !(expr.is_free() || expr.is_free_abelian()) {
        return out;
    }
    let gens: Vec<Sym> = expr.generators().to_vec();
    for &x in &gens {
        let map = base.substituted(&|s| {
            if s == x {
                SymWord::empty()
            } else {
                SymWord::gen(s)
            }
        });
        out.push((
            expr.clone(),
            map,
            format!("component {} with {x} killed", src.id),
        ));
    }
    if let Some(&f) = focus.first() {
        let supp: BTreeSet<Sym> = base.image(f).generators().collect();
        let map = base.substituted(&|s| {
            if supp.contains(&s) {
                SymWord::empty()
            } else {
                SymWord::gen(s)
            }
        });
        out.push((
            expr.clone(),
            map,
            format!("component {} with the support of x{f} killed", src.id),
        ));
    }
    if gens.len() <= 6 {
        let (p, q, s) = (sym(id, "p"), sym(id, "q"), sym(id, "s"));
        let base_ab = GroupExpr::free_abelian(&[&*p.name(), &*q.name()]).expect("distinct names");
        let swap =
            GroupExpr::semidirect_involution(base_ab, &[(&*p.name(), &*q.name())], &s.name())
                .expect("swap is an automorphism");
        let choices = [SymWord::empty(), SymWord::gen(p), SymWord::gen(s)];
        for code in 1..3usize.pow(gens.len() as u32) {
            let img: BTreeMap<Sym, SymWord> = gens
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, choices[code / 3usize.pow(i as u32) % 3].clone()))
                .collect();
            let map = base.substituted(&|x| img[&x].clone());
            out.push((
                swap.clone(),
                map,
                format!("component {} mapped into Z^2 x| Z", src.id),
            ));
        }
    }
    if gens.len() <= 5 {
        let (u, v) = (sym(id, "u"), sym(id, "v"));
        let bs = GroupExpr::affine_bs(2, &u.name(), &v.name()).expect("valid parameters");
        let choices = [
            SymWord::empty(),
            SymWord::gen(u),
            SymWord::gen(v),
            SymWord::power(v, -1),
        ];
        for code in 1..4usize.pow(gens.len() as u32) {
            let img: BTreeMap<Sym, SymWord> = gens
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, choices[code / 4usize.pow(i as u32) % 4].clone()))
                .collect();
            let map = base.substituted(&|x| img[&x].clone());
            out.push((
                bs.clone(),
                map,
                format!("component {} mapped into BS(1,2)", src.id),
            ));
        }
    }
    out
}

/// Names reachable from `focus` through shared equations.
fn linked_names(eqs: &[NameWord], focus: &[Name]) -> BTreeSet<Name> {
    let mut rel: BTreeSet<Name> = focus.iter().copied().collect();
    loop {
        let before = rel.len();
        for e in eqs {
            if e.iter().any(|(n, _)| rel.contains(n)) {
                rel.extend(e.iter().map(|(n, _)| *n));
            }
        }
        if rel.len() == before {
            return rel;
        }
    }
}

/// A free group on the linked names, made to satisfy the equations by
/// solving for names that occur once and killing generators otherwise.
/// Names outside `focus` are eliminated first.
fn solved_candidate(id: u32, eqs: &[NameWord], focus: &[Name]) -> Option<Candidate> {
    let vars = linked_names(eqs, focus);
    let rel: Vec<&NameWord> = eqs
        .iter()
        .filter(|e| e.iter().any(|(n, _)| vars.contains(n)))
        .collect();
    let gen_of = |n: Name| sym(id, &format!("x{n}"));
    let mut val: BTreeMap<Name, SymWord> =
        vars.iter().map(|&n| (n, SymWord::gen(gen_of(n)))).collect();
    let eval = |val: &BTreeMap<Name, SymWord>, w: &[(Name, i32)]| {
        let mut out = SymWord::empty();
        for &(n, e) in w {
            out.append(&val[&n].pow(e as i64));
        }
        out
    };
    // Non-focus names first, later names first.
    let order =
        |names: &mut Vec<Name>| names.sort_by_key(|n| (focus.contains(n), std::cmp::Reverse(*n)));
    for _ in 0..(2 * vars.len() + 4) {
        let Some(e) = rel.iter().find(|e| !eval(&val, e).is_empty()) else {
            break;
        };
        let mut once: Vec<Name> = e
            .iter()
            .map(|(n, _)| *n)
            .filter(|n| e.iter().filter(|(m, _)| m == n).count() == 1)
            .collect();
        order(&mut once);
        let solvable = once.into_iter().find(|&n| {
            let x = gen_of(n);
            val[&n] == SymWord::gen(x)
                && e.iter()
                    .all(|(m, _)| *m == n || val[m].generators().all(|s| s != x))
        });
        if let Some(n) = solvable {
            let pos = e.iter().position(|(m, _)| *m == n).expect("name occurs");
            let (u, v) = (eval(&val, &e[..pos]), eval(&val, &e[pos + 1..]));
            let sol = if e[pos].1 > 0 {
                u.inverse().mul(&v.inverse())
            } else {
                v.mul(&u)
            };
            let x = gen_of(n);
            for w in val.values_mut() {
                *w = w.substitute(&|s| if s == x { sol.clone() } else { SymWord::gen(s) });
            }
        } else {
            let present: BTreeSet<Sym> = eval(&val, e).generators().collect();
            let mut names: Vec<Name> = e
                .iter()
                .map(|(n, _)| *n)
                .filter(|&n| present.contains(&gen_of(n)))
                .collect();
            order(&mut names);
            let x = match names.first() {
                Some(&n) => gen_of(n),
                None => *present.iter().next_back()?,
            };
            for w in val.values_mut() {
                *w = w.substitute(&|s| {
                    if s == x {
                        SymWord::empty()
                    } else {
                        SymWord::gen(s)
                    }
                });
            }
        }
    }
    if rel.iter().any(|e| !eval(&val, e).is_empty()) {
        return None;
    }
    let labels: Vec<String> = vars.iter().map(|&n| gen_of(n).name().to_string()).collect();
    let expr = GroupExpr::free(&labels).ok()?;
    Some((expr, val, "free model of the equations".to_string()))
}

/// The torsion-free abelian quotient on the names linked to `focus` through
/// the equations.
fn nullspace_candidate(id: u32, eqs: &[NameWord], focus: &[Name]) -> Option<Candidate> {
    let vars: Vec<Name> = linked_names(eqs, focus).into_iter().collect();
    let index: BTreeMap<Name, usize> = vars.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let rows: Vec<Vec<i64>> = eqs
        .iter()
        .filter(|e| e.iter().any(|(n, _)| index.contains_key(n)))
        .map(|e| {
            let mut r = vec![0i64; vars.len()];
            for &(n, x) in e {
                r[index[&n]] += x as i64;
            }
            r
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let basis = integer_kernel(&rows, vars.len());
    if basis.is_empty() {
        return None;
    }
    let syms: Vec<Sym> = (0..basis.len())
        .map(|i| sym(id, &format!("z{i}")))
        .collect();
    let labels: Vec<String> = syms.iter().map(|s| s.name().to_string()).collect();
    let expr = GroupExpr::free_abelian(&labels).ok()?;
    let map = vars
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let w = SymWord::from_pairs(basis.iter().zip(&syms).map(|(v, &s)| (s, v[j])));
            (n, w)
        })
        .collect();
    Some((expr, map, "abelian quotient".to_string()))
}

/// Integer basis of `{x : rows · x = 0}`.
pub(crate) fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let lead = m[r][col].clone();
        for x in m[r].iter_mut() {
            *x /= lead.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..n {
                    let d = m[r][j].clone() * f.clone();
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[i][free].clone();
        }
        let l = v
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Option<Vec<i64>> = v
            .iter()
            .map(|x| {
                (x.numer() * (&l / x.denom())).abs().to_i64().map(|a| {
                    if x.is_negative() {
                        -a
                    } else {
                        a
                    }
                })
            })
            .collect();
        if let Some(ints) = ints {
            out.push(ints);
        }
    }
    out
}
