#![allow(dead_code)]

use std::collections::BTreeSet;

use rubin_core::{FiniteGroup, Perm};

pub fn preset(name: &str) -> FiniteGroup {
    FiniteGroup::preset(name).unwrap()
}

/// The groups named in the finite examples.
pub fn test_groups() -> Vec<(&'static str, FiniteGroup)> {
    ["S3", "S4", "A4", "D4", "C5xC5", "C12", "S3xS3"]
        .into_iter()
        .map(|n| (n, preset(n)))
        .collect()
}

pub fn cyclic(n: usize) -> FiniteGroup {
    if n == 1 {
        return FiniteGroup::trivial(1);
    }
    let c = Perm::from_cycles(n, &[(0..n).collect()]).unwrap();
    FiniteGroup::generate(n, &[c]).unwrap()
}

pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    a.direct_product(b).unwrap().0
}

fn cyclics(ns: &[usize]) -> FiniteGroup {
    ns[1..]
        .iter()
        .fold(cyclic(ns[0]), |acc, &n| product(&acc, &cyclic(n)))
}

/// Right regular representation of a group given by its multiplication on `0..n`.
pub fn from_table(n: usize, mul: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let gens: Vec<Perm> = (0..n)
        .map(|g| Perm::from_images((0..n).map(|x| mul(x, g)).collect()).unwrap())
        .collect();
    let g = FiniteGroup::generate(n, &gens).unwrap();
    assert_eq!(g.order(), n);
    g
}

/// `⟨a, x | aⁿ, xᵐ = aˢ, x⁻¹ a x = aʳ⟩` on pairs `aⁱ xʲ`.
pub fn metacyclic(n: usize, m: usize, r: usize, s: usize) -> FiniteGroup {
    let rpow = |j: usize| (0..j).fold(1, |p, _| p * r % n);
    assert_eq!(rpow(m), 1 % n);
    from_table(n * m, |p, q| {
        let (i, j) = (p / m, p % m);
        let (k, l) = (q / m, q % m);
        // x^j a^k = a^(k r^-j) x^j; write with r^(m-j) to stay in range.
        let k2 = k * rpow((m - j) % m) % n;
        let wrap = if j + l >= m { s } else { 0 };
        ((i + k2 + wrap) % n) * m + (j + l) % m
    })
}

/// `N ⋊ C_m` for `N = Z_{n1} × Z_{n2}`, the generator acting by `phi`.
pub fn split_abelian(
    n: [usize; 2],
    m: usize,
    phi: impl Fn([usize; 2]) -> [usize; 2],
) -> FiniteGroup {
    let size = n[0] * n[1];
    let enc = |v: [usize; 2]| v[0] * n[1] + v[1];
    let dec = |x: usize| [x / n[1], x % n[1]];
    let act = |v: [usize; 2], j: usize| (0..j).fold(v, |w, _| phi(w));
    from_table(size * m, |p, q| {
        let (v, j) = (dec(p / m), p % m);
        let (w, l) = (dec(q / m), q % m);
        let w = act(w, j);
        let sum = [(v[0] + w[0]) % n[0], (v[1] + w[1]) % n[1]];
        enc(sum) * m + (j + l) % m
    })
}

pub fn dihedral(n: usize) -> FiniteGroup {
    metacyclic(n, 2, n - 1, 0)
}

pub fn dicyclic(n: usize) -> FiniteGroup {
    metacyclic(2 * n, 2, 2 * n - 1, n)
}

fn sl23() -> FiniteGroup {
    let vecs: Vec<[u8; 2]> = (0..9u8)
        .map(|i| [i / 3, i % 3])
        .filter(|v| *v != [0, 0])
        .collect();
    let mat = |m: [[u8; 2]; 2]| {
        let images = vecs
            .iter()
            .map(|v| {
                let w = [
                    (m[0][0] * v[0] + m[0][1] * v[1]) % 3,
                    (m[1][0] * v[0] + m[1][1] * v[1]) % 3,
                ];
                vecs.iter().position(|u| *u == w).unwrap()
            })
            .collect();
        Perm::from_images(images).unwrap()
    };
    FiniteGroup::generate(8, &[mat([[1, 1], [0, 1]]), mat([[1, 0], [1, 1]])]).unwrap()
}

/// `C3 ⋊ D4` where the kernel of the action is a Klein four-group.
fn c3_by_d4() -> FiniteGroup {
    let c = |cycles: &[&[usize]]| {
        Perm::from_cycles(7, &cycles.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    };
    FiniteGroup::generate(
        7,
        &[
            c(&[&[0, 1, 2]]),
            c(&[&[0, 1], &[3, 4, 5, 6]]),
            c(&[&[3, 5]]),
        ],
    )
    .unwrap()
}

/// One representative of every isomorphism class of order `≤ 24`.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    let s3 = preset("S3");
    let a4 = preset("A4");
    let d4 = dihedral(4);
    let q8 = dicyclic(2);
    let dic3 = dicyclic(3);
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    let mut add = |name: &str, g: FiniteGroup| out.push((name.to_string(), g));
    for n in 1..=24 {
        add(&format!("C{n}"), cyclic(n));
    }
    add("C2xC2", cyclics(&[2, 2]));
    add("S3", s3.clone());
    add("C4xC2", cyclics(&[4, 2]));
    add("C2^3", cyclics(&[2, 2, 2]));
    add("D4", d4.clone());
    add("Q8", q8.clone());
    add("C3xC3", cyclics(&[3, 3]));
    add("D5", dihedral(5));
    add("C6xC2", cyclics(&[6, 2]));
    add("A4", a4.clone());
    add("D6", dihedral(6));
    add("Dic3", dic3.clone());
    add("D7", dihedral(7));
    add("C8xC2", cyclics(&[8, 2]));
    add("C4xC4", cyclics(&[4, 4]));
    add("C4xC2^2", cyclics(&[4, 2, 2]));
    add("C2^4", cyclics(&[2, 2, 2, 2]));
    add("D8", dihedral(8));
    add("Q16", dicyclic(4));
    add("SD16", metacyclic(8, 2, 3, 0));
    add("M16", metacyclic(8, 2, 5, 0));
    add("C4:C4", metacyclic(4, 4, 3, 0));
    add(
        "(C4xC2):C2",
        split_abelian([4, 2], 2, |[x, y]| [x, (y + x) % 2]),
    );
    add(
        "Pauli",
        split_abelian([4, 2], 2, |[x, y]| [(x + 2 * y) % 4, y]),
    );
    add("C2xD4", product(&cyclic(2), &d4));
    add("C2xQ8", product(&cyclic(2), &q8));
    add("C6xC3", cyclics(&[6, 3]));
    add("D9", dihedral(9));
    add("C3xS3", product(&cyclic(3), &s3));
    add(
        "(C3xC3):C2",
        split_abelian([3, 3], 2, |[x, y]| [(3 - x) % 3, (3 - y) % 3]),
    );
    add("C10xC2", cyclics(&[10, 2]));
    add("D10", dihedral(10));
    add("Dic5", dicyclic(5));
    add("F20", metacyclic(5, 4, 2, 0));
    add("C7:C3", metacyclic(7, 3, 2, 0));
    add("D11", dihedral(11));
    add("C12xC2", cyclics(&[12, 2]));
    add("C6xC2^2", cyclics(&[6, 2, 2]));
    add("C3:C8", metacyclic(3, 8, 2, 0));
    add("SL(2,3)", sl23());
    add("Dic6", dicyclic(6));
    add("C4xS3", product(&cyclic(4), &s3));
    add("D12", dihedral(12));
    add("C2xDic3", product(&cyclic(2), &dic3));
    add("C3:D4", c3_by_d4());
    add("C3xD4", product(&cyclic(3), &d4));
    add("C3xQ8", product(&cyclic(3), &q8));
    add("S4", preset("S4"));
    add("C2xA4", product(&cyclic(2), &a4));
    add("C2^2xS3", product(&cyclics(&[2, 2]), &s3));
    out
}

/// Number of isomorphism classes of groups of each order `0..=24`.
pub const GROUP_COUNTS: [usize; 25] = [
    0, 1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15,
];

/// Multiplication table computed from the permutations, bypassing the group's own table.
pub struct Table {
    pub n: usize,
    pub id: usize,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

impl Table {
    pub fn new(g: &FiniteGroup) -> Self {
        let els = g.elements();
        let n = els.len();
        let find = |p: &Perm| els.iter().position(|q| q == p).unwrap();
        let mul: Vec<Vec<usize>> = els
            .iter()
            .map(|a| els.iter().map(|b| find(&a.then(b).unwrap())).collect())
            .collect();
        let id = els.iter().position(|p| p.is_identity()).unwrap();
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == id).unwrap())
            .collect();
        Table { n, id, mul, inv }
    }

    pub fn comm(&self, a: usize, b: usize) -> usize {
        let m = &self.mul;
        m[m[m[self.inv[a]][self.inv[b]]][a]][b]
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul[a][b] == self.mul[b][a]
    }

    pub fn pow(&self, a: usize, e: u32) -> usize {
        (0..e).fold(self.id, |x, _| self.mul[x][a])
    }

    /// Quantifiers evaluated literally, with no precomputation.
    pub fn naive_disjoint(&self, g: usize, f: usize) -> bool {
        (0..self.n).all(|h| {
            self.comm(f, h) == self.id
                || (0..self.n).any(|a| {
                    (0..self.n).any(|b| {
                        let x = self.comm(a, self.comm(b, h));
                        self.comm(a, g) == self.id
                            && self.comm(b, g) == self.id
                            && x != self.id
                            && self.comm(x, g) == self.id
                    })
                })
        })
    }

    pub fn naive_s(&self, f: usize) -> BTreeSet<usize> {
        (0..self.n)
            .filter(|&g| self.naive_disjoint(g, f))
            .map(|g| self.pow(g, 12))
            .collect()
    }

    pub fn centralizer(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.n)
            .filter(|&x| set.iter().all(|&s| self.commute(x, s)))
            .collect()
    }
}

pub type Fingerprint = Vec<(usize, usize, usize, usize)>;

/// Isomorphism invariant: per element, its order, centralizer sizes of it
/// and its square, and its number of square roots.
pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let t = Table::new(g);
    let order = |a: usize| (1..=t.n).find(|&k| t.pow(a, k as u32) == t.id).unwrap();
    let mut fp: Fingerprint = (0..t.n)
        .map(|a| {
            let c = (0..t.n).filter(|&b| t.commute(a, b)).count();
            let sq = t.mul[a][a];
            let csq = (0..t.n).filter(|&b| t.commute(sq, b)).count();
            let roots = (0..t.n).filter(|&b| t.mul[b][b] == a).count();
            (order(a), c, csq, roots)
        })
        .collect();
    fp.sort();
    fp
}
