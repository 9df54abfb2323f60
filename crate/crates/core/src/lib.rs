//! Computational tools around algebraic disjointness and Rubin posets.
//!
//! * [`perm`], [`group`]: fully enumerated permutation groups.
//! * [`disjoint`], [`poset`]: brute-force disjointness, `S_f`, `C_G(S_f)`
//!   and the poset of their finite intersections.
//! * [`symbolic`]: word problems for a grammar of torsion-free groups and
//!   the overgroup constructions built from it.
//! * [`game`]: a Banach–Mazur game engine with explicit witness groups.
//! * [`parse`]: text formats for permutations and group expressions.

pub mod disjoint;
pub mod game;
pub mod group;
pub mod parse;
pub mod perm;
pub mod poset;
pub mod symbolic;

pub use disjoint::{
    centralizer_of_set, compute_s, is_algebraically_disjoint, product_disjointness_check,
    DisjointnessMatrix, ProductReport,
};
pub use group::{FiniteGroup, GroupError};
pub use parse::{parse_group_spec, parse_word, ParseError, ParsedGroup};
pub use perm::{commutator, support, Perm, PermError};
pub use poset::{rubin_poset, PosetOptions, RubinPoset};
pub use symbolic::{GroupExpr, Membership, SymError, SymWord};
