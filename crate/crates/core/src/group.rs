//! Fully enumerated permutation groups.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::perm::{Perm, PermError};

pub const DEFAULT_CLOSURE_CAP: usize = 20_000;

// Groups up to this order get a precomputed Cayley table.
const TABLE_LIMIT: usize = 1_500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("element {0} is not in the group")]
    NotInGroup(String),
    #[error("unknown group preset {0:?}")]
    UnknownPreset(String),
}

/// Index of an element in a group's canonical order.
pub type Elem = usize;

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, Elem>,
    identity: Elem,
    inverses: Vec<Elem>,
    table: Option<Vec<u32>>,
}

impl FiniteGroup {
    /// Closes the generators under composition. Elements are ordered
    /// lexicographically by their image sequences.
    pub fn generate(degree: usize, generators: &[Perm]) -> Result<Self, GroupError> {
        Self::generate_with_cap(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn generate_with_cap(
        degree: usize,
        generators: &[Perm],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()).into());
            }
        }
        let id = Perm::identity(degree);
        let mut seen: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.then_unchecked(g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Perm> = seen.into_iter().collect();
        Ok(Self::from_sorted(degree, generators.to_vec(), elements))
    }

    fn from_sorted(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> Self {
        let index: HashMap<Perm, Elem> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let identity = index[&Perm::identity(degree)];
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.then_unchecked(b)] as u32);
                }
            }
            t
        });
        FiniteGroup {
            degree,
            generators,
            elements,
            index,
            identity,
            inverses,
            table,
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted(degree, Vec::new(), vec![Perm::identity(degree)])
    }

    /// Named presets: `S3`, `S4`, `A4`, `D4`, `C5xC5`, `C12`, `S3xS3`, `trivial`.
    pub fn preset(name: &str) -> Result<Self, GroupError> {
        let c = |n: usize, cycles: &[&[usize]]| {
            Perm::from_cycles(n, &cycles.iter().map(|x| x.to_vec()).collect::<Vec<_>>())
        };
        let (degree, gens) = match name {
            "trivial" | "C1" => (1, vec![]),
            "S3" => (3, vec![c(3, &[&[0, 1]])?, c(3, &[&[0, 1, 2]])?]),
            "S4" => (4, vec![c(4, &[&[0, 1]])?, c(4, &[&[0, 1, 2, 3]])?]),
            "A4" => (4, vec![c(4, &[&[0, 1, 2]])?, c(4, &[&[1, 2, 3]])?]),
            "D4" => (4, vec![c(4, &[&[0, 1, 2, 3]])?, c(4, &[&[0, 2]])?]),
            "C5xC5" => (
                10,
                vec![c(10, &[&[0, 1, 2, 3, 4]])?, c(10, &[&[5, 6, 7, 8, 9]])?],
            ),
            "C12" => (12, vec![c(12, &[&(0..12).collect::<Vec<_>>()])?]),
            "S3xS3" => {
                let s3 = Self::preset("S3")?;
                return Ok(s3.direct_product(&s3)?.0);
            }
            other => return Err(GroupError::UnknownPreset(other.to_string())),
        };
        Self::generate(degree, &gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: Elem) -> &Perm {
        &self.elements[i]
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn index_of(&self, p: &Perm) -> Option<Elem> {
        self.index.get(p).copied()
    }

    pub fn require(&self, p: &Perm) -> Result<Elem, GroupError> {
        self.index_of(p)
            .ok_or_else(|| GroupError::NotInGroup(p.to_string()))
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as Elem,
            None => self.index[&self.elements[a].then_unchecked(&self.elements[b])],
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a]
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b` on indices.
    #[inline]
    pub fn comm(&self, a: Elem, b: Elem) -> Elem {
        let x = self.mul(self.inv(a), self.inv(b));
        self.mul(self.mul(x, a), b)
    }

    #[inline]
    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, a: Elem, e: u32) -> Elem {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.commutes_with(b)))
    }

    /// Indices of the elements commuting with `g`, in canonical order.
    pub fn centralizer_of(&self, g: Elem) -> Vec<Elem> {
        (0..self.order()).filter(|&x| self.commute(x, g)).collect()
    }

    pub fn centralizer(&self, g: &Perm) -> Result<Vec<Elem>, GroupError> {
        Ok(self.centralizer_of(self.require(g)?))
    }

    pub fn center(&self) -> Vec<Elem> {
        (0..self.order())
            .filter(|&x| (0..self.order()).all(|y| self.commute(x, y)))
            .collect()
    }

    /// Classes under `x ~ h⁻¹ x h`, each sorted, ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<Elem>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members = BTreeSet::new();
            for h in 0..n {
                members.insert(self.mul(self.mul(self.inv(h), x), h));
            }
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members.into_iter().collect());
        }
        classes
    }

    /// The direct product acting on the disjoint union of the two domains,
    /// together with the embeddings of each factor's elements.
    pub fn direct_product(
        &self,
        other: &FiniteGroup,
    ) -> Result<(FiniteGroup, ProductEmbedding), GroupError> {
        self.direct_product_with_cap(other, DEFAULT_CLOSURE_CAP)
    }

    pub fn direct_product_with_cap(
        &self,
        other: &FiniteGroup,
        cap: usize,
    ) -> Result<(FiniteGroup, ProductEmbedding), GroupError> {
        let total = self.degree + other.degree;
        let mut gens: Vec<Perm> = self
            .generators
            .iter()
            .map(|g| g.shifted(0, total))
            .collect();
        gens.extend(
            other
                .generators
                .iter()
                .map(|g| g.shifted(self.degree, total)),
        );
        let product = Self::generate_with_cap(total, &gens, cap)?;
        let left = self
            .elements
            .iter()
            .map(|p| product.require(&p.shifted(0, total)))
            .collect::<Result<_, _>>()?;
        let right = other
            .elements
            .iter()
            .map(|p| product.require(&p.shifted(self.degree, total)))
            .collect::<Result<_, _>>()?;
        Ok((product, ProductEmbedding { left, right }))
    }

    /// Exhaustive closure check over all pairs.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.contains(&a.then_unchecked(b)))
        })
    }
}

/// Element indices of `(x, 1)` and `(1, y)` inside a direct product.
#[derive(Debug, Clone)]
pub struct ProductEmbedding {
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
}
