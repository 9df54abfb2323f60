//! The poset of finite intersections of the centralizers `C_G(S_f)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::disjoint::{centralizers_of_s, S_POWER};
use crate::group::{Elem, FiniteGroup, GroupError, DEFAULT_CLOSURE_CAP};

#[derive(Debug, Clone, Copy)]
pub struct PosetOptions {
    /// Also include the empty intersection, i.e. `G` itself.
    pub include_whole_group: bool,
    pub cap: Option<usize>,
    /// Exponent used to form `S_f`.
    pub power: u32,
}

impl Default for PosetOptions {
    fn default() -> Self {
        PosetOptions {
            include_whole_group: false,
            cap: None,
            power: S_POWER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetNode {
    /// Sorted element indices.
    pub elements: Vec<Elem>,
    /// One tuple `(f1, …, fn)` realising the node; empty for `G` itself.
    pub witness: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RubinPoset {
    pub group_order: usize,
    pub nodes: Vec<PosetNode>,
    /// Covering pairs `(lower, upper)` by node index.
    pub hasse: Vec<(usize, usize)>,
}

impl RubinPoset {
    pub fn compute(group: &FiniteGroup, opts: PosetOptions) -> Result<Self, GroupError> {
        let cap = opts.cap.unwrap_or(DEFAULT_CLOSURE_CAP);
        if group.order() > cap {
            return Err(GroupError::CapExceeded(cap));
        }
        let bases = centralizers_of_s(group, opts.power);
        // Keyed by element set; the first witness found in canonical f order wins.
        let mut found: BTreeMap<Vec<Elem>, Vec<Elem>> = BTreeMap::new();
        for (f, c) in bases.into_iter().enumerate() {
            found.entry(c).or_insert_with(|| vec![f]);
        }
        if opts.include_whole_group {
            found.entry((0..group.order()).collect()).or_default();
        }
        loop {
            let current: Vec<(Vec<Elem>, Vec<Elem>)> =
                found.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            let mut added = false;
            for (i, (a, wa)) in current.iter().enumerate() {
                for (b, wb) in &current[i + 1..] {
                    let meet = intersect(a, b);
                    if let std::collections::btree_map::Entry::Vacant(e) = found.entry(meet) {
                        let mut w = wa.clone();
                        w.extend(wb);
                        e.insert(w);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let mut nodes: Vec<PosetNode> = found
            .into_iter()
            .map(|(elements, witness)| PosetNode { elements, witness })
            .collect();
        nodes.sort_by(|x, y| {
            x.elements
                .len()
                .cmp(&y.elements.len())
                .then_with(|| x.elements.cmp(&y.elements))
        });
        let hasse = hasse_edges(&nodes);
        Ok(RubinPoset {
            group_order: group.order(),
            nodes,
            hasse,
        })
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        is_subset(&self.nodes[i].elements, &self.nodes[j].elements)
    }

    /// Index of the node contained in every other node, if any.
    pub fn least(&self) -> Option<usize> {
        (0..self.nodes.len()).find(|&i| (0..self.nodes.len()).all(|j| self.leq(i, j)))
    }

    pub fn is_intersection_closed(&self) -> bool {
        let sets: BTreeSet<&Vec<Elem>> = self.nodes.iter().map(|n| &n.elements).collect();
        self.nodes.iter().all(|a| {
            self.nodes
                .iter()
                .all(|b| sets.contains(&intersect(&a.elements, &b.elements)))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("poset serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Hasse diagram in DOT; nodes show subgroup order and a witness tuple.
    pub fn to_dot(&self, group: &FiniteGroup) -> String {
        let mut out = String::from("digraph rubin_poset {\n  rankdir=BT;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let witness: Vec<String> = n
                .witness
                .iter()
                .map(|&f| group.element(f).to_string())
                .collect();
            let _ = writeln!(
                out,
                "  n{i} [label=\"|H|={}\\nf=({})\"];",
                n.elements.len(),
                witness.join(", ")
            );
        }
        for (a, b) in &self.hasse {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn rubin_poset(group: &FiniteGroup) -> Result<RubinPoset, GroupError> {
    RubinPoset::compute(group, PosetOptions::default())
}

fn intersect(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let sb: BTreeSet<&Elem> = b.iter().collect();
    a.iter().filter(|x| sb.contains(x)).copied().collect()
}

fn is_subset(a: &[Elem], b: &[Elem]) -> bool {
    let sb: BTreeSet<&Elem> = b.iter().collect();
    a.iter().all(|x| sb.contains(x))
}

fn hasse_edges(nodes: &[PosetNode]) -> Vec<(usize, usize)> {
    let n = nodes.len();
    let lt = |i: usize, j: usize| i != j && is_subset(&nodes[i].elements, &nodes[j].elements);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                edges.push((i, j));
            }
        }
    }
    edges
}
