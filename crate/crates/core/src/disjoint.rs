//! Algebraic disjointness in finite groups, evaluated by exhaustive search.
//!
//! `g` is algebraically disjoint from `f` when every `h` that fails to
//! commute with `f` admits `a, b ∈ C(g)` with `1 ≠ [a,[b,h]] ∈ C(g)`.
//! The relation is not symmetric.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::group::{Elem, FiniteGroup, GroupError};
use crate::perm::Perm;

/// Which `h` admit a witnessing pair `a, b ∈ C(g)`. Independent of `f`.
fn rescuable(group: &FiniteGroup, g: Elem) -> Vec<bool> {
    let cent = group.centralizer_of(g);
    let n = group.order();
    let id = group.identity();
    // Memoise over y = [b,h]: does some a ∈ C(g) give 1 ≠ [a,y] ∈ C(g)?
    let mut memo: Vec<Option<bool>> = vec![None; n];
    let mut out = vec![false; n];
    for (h, slot) in out.iter_mut().enumerate() {
        *slot = cent.iter().any(|&b| {
            let y = group.comm(b, h);
            *memo[y].get_or_insert_with(|| {
                cent.iter().any(|&a| {
                    let x = group.comm(a, y);
                    x != id && group.commute(x, g)
                })
            })
        });
    }
    out
}

fn disjoint_given(group: &FiniteGroup, rescue: &[bool], f: Elem) -> bool {
    (0..group.order()).all(|h| group.commute(f, h) || rescue[h])
}

/// Index-level test.
pub fn disjoint_from(group: &FiniteGroup, g: Elem, f: Elem) -> bool {
    if (0..group.order()).all(|h| group.commute(f, h)) {
        return true;
    }
    disjoint_given(group, &rescuable(group, g), f)
}

pub fn is_algebraically_disjoint(
    group: &FiniteGroup,
    g: &Perm,
    f: &Perm,
) -> Result<bool, GroupError> {
    let gi = group.require(g)?;
    let fi = group.require(f)?;
    Ok(disjoint_from(group, gi, fi))
}

/// `D[g][f]` over the canonical element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessMatrix {
    /// Elements in canonical order, as image lists.
    pub elements: Vec<Perm>,
    pub matrix: Vec<Vec<bool>>,
}

impl DisjointnessMatrix {
    pub fn compute(group: &FiniteGroup) -> Self {
        let n = group.order();
        let matrix = (0..n)
            .into_par_iter()
            .map(|g| {
                let rescue = rescuable(group, g);
                (0..n).map(|f| disjoint_given(group, &rescue, f)).collect()
            })
            .collect();
        DisjointnessMatrix {
            elements: group.elements().to_vec(),
            matrix,
        }
    }

    pub fn get(&self, g: Elem, f: Elem) -> bool {
        self.matrix[g][f]
    }

    pub fn all_true(&self) -> bool {
        self.matrix.iter().all(|row| row.iter().all(|&b| b))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serialises")
    }
}

/// `S_f`: twelfth powers of everything algebraically disjoint from `f`.
pub fn compute_s(group: &FiniteGroup, f: &Perm) -> Result<BTreeSet<Elem>, GroupError> {
    let fi = group.require(f)?;
    Ok(s_of(group, fi))
}

/// Exponent used to form `S_f`.
pub const S_POWER: u32 = 12;

pub(crate) fn s_of(group: &FiniteGroup, f: Elem) -> BTreeSet<Elem> {
    s_of_power(group, f, S_POWER)
}

pub(crate) fn s_of_power(group: &FiniteGroup, f: Elem, power: u32) -> BTreeSet<Elem> {
    (0..group.order())
        .filter(|&g| disjoint_from(group, g, f))
        .map(|g| group.pow(g, power))
        .collect()
}

/// `S_f` with a different exponent in place of 12.
pub fn compute_s_with_power(
    group: &FiniteGroup,
    f: &Perm,
    power: u32,
) -> Result<BTreeSet<Elem>, GroupError> {
    Ok(s_of_power(group, group.require(f)?, power))
}

fn s_from_matrix(
    group: &FiniteGroup,
    m: &DisjointnessMatrix,
    f: Elem,
    power: u32,
) -> BTreeSet<Elem> {
    (0..group.order())
        .filter(|&g| m.get(g, f))
        .map(|g| group.pow(g, power))
        .collect()
}

pub fn centralizer_of_set_idx(group: &FiniteGroup, set: &BTreeSet<Elem>) -> Vec<Elem> {
    (0..group.order())
        .filter(|&x| set.iter().all(|&s| group.commute(x, s)))
        .collect()
}

pub fn centralizer_of_set(group: &FiniteGroup, set: &[Perm]) -> Result<Vec<Elem>, GroupError> {
    let idx = set
        .iter()
        .map(|p| group.require(p))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(centralizer_of_set_idx(group, &idx))
}

/// `C_G(S_f)` for every `f`, in canonical order of `f`.
pub fn centralizers_of_s(group: &FiniteGroup, power: u32) -> Vec<Vec<Elem>> {
    let m = DisjointnessMatrix::compute(group);
    (0..group.order())
        .into_par_iter()
        .map(|f| centralizer_of_set_idx(group, &s_from_matrix(group, &m, f, power)))
        .collect()
}

/// Outcome of the direct-product experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductReport {
    pub left_order: usize,
    pub right_order: usize,
    pub left_centerless: bool,
    pub right_centerless: bool,
    pub pairs_checked: usize,
    /// Cross pairs `((x,1),(1,y))` that are not mutually disjoint, as cycle strings.
    pub counterexamples: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl ProductReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Checks that non-trivial `(x,1)` and `(1,y)` are mutually algebraically
/// disjoint in `G1 × G2`.
pub fn product_disjointness_check(
    left: &FiniteGroup,
    right: &FiniteGroup,
) -> Result<ProductReport, GroupError> {
    let (product, emb) = left.direct_product(right)?;
    let left_centerless = left.center().len() == 1;
    let right_centerless = right.center().len() == 1;
    let mut notes = Vec::new();
    if !left_centerless || !right_centerless {
        notes.push(
            "a factor has non-trivial center; the implication may fail when [b,h] is central"
                .to_string(),
        );
    }
    let lefts: Vec<Elem> = emb
        .left
        .iter()
        .copied()
        .filter(|&x| x != product.identity())
        .collect();
    let rights: Vec<Elem> = emb
        .right
        .iter()
        .copied()
        .filter(|&y| y != product.identity())
        .collect();
    let movers: BTreeSet<Elem> = lefts.iter().chain(rights.iter()).copied().collect();
    let rescue: Vec<(Elem, Vec<bool>)> = movers
        .par_iter()
        .map(|&g| (g, rescuable(&product, g)))
        .collect();
    let rescue_of = |g: Elem| &rescue.iter().find(|(x, _)| *x == g).unwrap().1;
    let mut counterexamples = Vec::new();
    let mut pairs_checked = 0;
    for &x in &lefts {
        for &y in &rights {
            pairs_checked += 1;
            let xy = disjoint_given(&product, rescue_of(x), y);
            let yx = disjoint_given(&product, rescue_of(y), x);
            if !(xy && yx) {
                counterexamples.push((
                    product.element(x).to_string(),
                    product.element(y).to_string(),
                ));
            }
        }
    }
    Ok(ProductReport {
        left_order: left.order(),
        right_order: right.order(),
        left_centerless,
        right_centerless,
        pairs_checked,
        counterexamples,
        notes,
    })
}
