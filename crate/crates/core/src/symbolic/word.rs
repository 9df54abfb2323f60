//! Interned generator names and freely reduced words.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// A generator name. Equality and hashing are by interned id; ordering is
/// by the name itself so that sorted output does not depend on interning order.
#[derive(Clone, Copy)]
pub struct Sym(u32);

impl Sym {
    pub fn new(name: &str) -> Sym {
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Sym(id);
        }
        let mut w = interner().write().unwrap();
        if let Some(&id) = w.ids.get(name) {
            return Sym(id);
        }
        let id = w.names.len() as u32;
        let arc: Arc<str> = Arc::from(name);
        w.names.push(arc.clone());
        w.ids.insert(arc, id);
        Sym(id)
    }

    pub fn name(&self) -> Arc<str> {
        interner().read().unwrap().names[self.0 as usize].clone()
    }
}

impl PartialEq for Sym {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for Sym {}

impl Hash for Sym {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let r = interner().read().unwrap();
        r.names[self.0 as usize].cmp(&r.names[other.0 as usize])
    }
}
impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl Serialize for Sym {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Sym {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Sym::new(&s))
    }
}

/// A freely reduced word: `(generator, exponent)` pairs with nonzero
/// exponents and no two neighbours sharing a generator.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SymWord(Vec<(Sym, i64)>);

impl SymWord {
    pub fn empty() -> Self {
        SymWord(Vec::new())
    }

    pub fn gen(name: impl Into<Sym>) -> Self {
        SymWord(vec![(name.into(), 1)])
    }

    pub fn power(name: impl Into<Sym>, e: i64) -> Self {
        let mut w = SymWord::empty();
        w.push(name.into(), e);
        w
    }

    /// Reduces an arbitrary list of pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Sym, i64)>>(pairs: I) -> Self {
        let mut w = SymWord::empty();
        for (s, e) in pairs {
            w.push(s, e);
        }
        w
    }

    /// Parses names separated by whitespace with optional `^exp`, e.g. `"g h^-1"`.
    pub fn parse_simple(text: &str) -> Self {
        let mut w = SymWord::empty();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().expect("integer exponent")),
                None => (tok, 1),
            };
            w.push(Sym::new(name), exp);
        }
        w
    }

    pub fn pairs(&self) -> &[(Sym, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of letters, `Σ |exponent|`.
    pub fn len(&self) -> usize {
        self.0.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn syllables(&self) -> usize {
        self.0.len()
    }

    /// Appends `s^e`, cancelling against the tail.
    pub fn push(&mut self, s: Sym, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == s {
                last.1 += e;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((s, e));
    }

    pub fn append(&mut self, other: &SymWord) {
        for &(s, e) in &other.0 {
            self.push(s, e);
        }
    }

    pub fn mul(&self, other: &SymWord) -> SymWord {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> SymWord {
        SymWord(self.0.iter().rev().map(|&(s, e)| (s, -e)).collect())
    }

    pub fn pow(&self, k: i64) -> SymWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = SymWord::empty();
        for _ in 0..k.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &SymWord, b: &SymWord) -> SymWord {
        let mut w = a.inverse();
        w.append(&b.inverse());
        w.append(a);
        w.append(b);
        w
    }

    /// `u⁻¹ self u`.
    pub fn conjugate_by(&self, u: &SymWord) -> SymWord {
        let mut w = u.inverse();
        w.append(self);
        w.append(u);
        w
    }

    /// Letters as unit-exponent pairs.
    pub fn letters(&self) -> impl Iterator<Item = (Sym, i64)> + '_ {
        self.0
            .iter()
            .flat_map(|&(s, e)| std::iter::repeat_n((s, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn exponent_sum(&self, s: Sym) -> i64 {
        self.0.iter().filter(|(t, _)| *t == s).map(|(_, e)| e).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = Sym> + '_ {
        self.0.iter().map(|(s, _)| *s)
    }

    pub fn map_names(&self, f: &impl Fn(Sym) -> Sym) -> SymWord {
        SymWord::from_pairs(self.0.iter().map(|&(s, e)| (f(s), e)))
    }

    /// Replaces every generator by a word.
    pub fn substitute(&self, f: &impl Fn(Sym) -> SymWord) -> SymWord {
        let mut w = SymWord::empty();
        for &(s, e) in &self.0 {
            w.append(&f(s).pow(e));
        }
        w
    }

    /// Deletes letters not accepted by `keep`.
    pub fn project(&self, keep: impl Fn(Sym) -> bool) -> SymWord {
        SymWord::from_pairs(self.0.iter().copied().filter(|(s, _)| keep(*s)))
    }

    /// Writes `self = u · core · u⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (SymWord, SymWord) {
        let mut p = std::collections::VecDeque::from(self.0.clone());
        let mut u = SymWord::empty();
        // s^a M s^b = s^-b (s^(a+b) M) s^b
        while p.len() >= 2 && p[0].0 == p[p.len() - 1].0 {
            let (s, b) = p.pop_back().unwrap();
            p[0].1 += b;
            if p[0].1 == 0 {
                p.pop_front();
            }
            u.push(s, -b);
        }
        (u, SymWord(p.into()))
    }
}

impl fmt::Display for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

/// Free reduction of an arbitrary pair list.
pub fn reduce_free(pairs: &[(Sym, i64)]) -> SymWord {
    SymWord::from_pairs(pairs.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SymWord {
        SymWord::parse_simple(s)
    }

    #[test]
    fn reduction_examples() {
        assert!(w("g g^-1").is_empty());
        assert_eq!(w("g^2 g^3"), SymWord::power("g", 5));
        assert!(w("g h h^-1 g^-1").is_empty());
    }

    #[test]
    fn cyclic_reduction_conjugates_back() {
        for text in [
            "h g h^-1",
            "h^2 g h^-2",
            "h g^3 h^2",
            "g h g",
            "g^2 h g^-1",
            "h",
        ] {
            let x = w(text);
            let (u, core) = x.cyclic_reduction();
            assert_eq!(u.mul(&core).mul(&u.inverse()), x, "{text}");
            let p = core.pairs();
            assert!(
                p.len() < 2 || p[0].0 != p[p.len() - 1].0,
                "{text} -> {core}"
            );
        }
    }

    #[test]
    fn inverse_and_commutator() {
        let a = w("a b^2");
        assert!(a.mul(&a.inverse()).is_empty());
        assert_eq!(SymWord::commutator(&w("a"), &w("b")), w("a^-1 b^-1 a b"));
    }
}
