//! Symbolic groups: words, constructions with solvable word problems, and
//! the overgroup constructions verified on top of them.

pub mod affine;
pub mod expr;
pub mod lemmas;
pub mod search;
pub mod word;

pub use affine::AffineMap;
pub use expr::{GroupExpr, Membership, SymError};
pub use lemmas::{
    build_lemma31, build_lemma32, lemma32_ball_check, lemma34_control, verify_lemma34, BallCheck,
    ConstructionReport, Lemma32,
};
pub use search::{lemma33_bounded_search, lemma33_bounded_search_with_budget, SearchReport};
pub use word::{reduce_free, Sym, SymWord};
