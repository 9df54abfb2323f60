//! Banach–Mazur game on conditions over named elements.
//!
//! Player A follows the commutator-triple strategy; player B is pluggable.
//! Every move is checked against a concrete torsion-free witness built from
//! the symbolic groups.

pub mod engine;
pub mod forcing;
pub mod triples;
pub mod witness;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use engine::{
    audit_transcript, is_admissible, new_game, player_a_move, player_b_move, run_game, AuditCheck,
    AuditReport, FinalReport, GameError, GameState, WitnessReport,
};
pub use forcing::{ForcedState, ForcingBounds, ForcingStatus};
pub use triples::triples;
pub use witness::{Component, Witness};

pub type Name = u32;

/// Freely reduced word in names; exponents are `±1`.
pub type NameWord = Vec<(Name, i32)>;

pub fn reduce(w: &[(Name, i32)]) -> NameWord {
    let mut out: NameWord = Vec::with_capacity(w.len());
    for &(n, e) in w {
        for _ in 0..e.unsigned_abs() {
            let s = e.signum();
            if out.last() == Some(&(n, -s)) {
                out.pop();
            } else {
                out.push((n, s));
            }
        }
    }
    out
}

pub fn gen(n: Name) -> NameWord {
    vec![(n, 1)]
}

pub fn inverse(w: &[(Name, i32)]) -> NameWord {
    w.iter().rev().map(|&(n, e)| (n, -e)).collect()
}

pub fn mul(a: &[(Name, i32)], b: &[(Name, i32)]) -> NameWord {
    reduce(&[a, b].concat())
}

/// `[a, b] = a⁻¹ b⁻¹ a b`.
pub fn commutator(a: &[(Name, i32)], b: &[(Name, i32)]) -> NameWord {
    reduce(&[inverse(a), inverse(b), a.to_vec(), b.to_vec()].concat())
}

pub fn is_reduced(w: &[(Name, i32)]) -> bool {
    w.iter().all(|&(_, e)| e.abs() == 1)
        && w.windows(2).all(|p| p[0].0 != p[1].0 || p[0].1 == p[1].1)
}

pub fn format_word(w: &[(Name, i32)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(n, e)| {
            if e > 0 {
                format!("x{n}")
            } else {
                format!("x{n}^-1")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "eq")]
    Equation,
    #[serde(rename = "neq")]
    Inequation,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub word: NameWord,
    pub polarity: Polarity,
}

impl Condition {
    pub fn equation(word: NameWord) -> Self {
        Condition {
            word: reduce(&word),
            polarity: Polarity::Equation,
        }
    }

    pub fn inequation(word: NameWord) -> Self {
        Condition {
            word: reduce(&word),
            polarity: Polarity::Inequation,
        }
    }

    pub fn names(&self) -> impl Iterator<Item = Name> + '_ {
        self.word.iter().map(|(n, _)| *n)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.polarity {
            Polarity::Equation => "=",
            Polarity::Inequation => "!=",
        };
        write!(f, "{} {rel} 1", format_word(&self.word))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BStrategy {
    #[default]
    Passive,
    ConjugacyForcer,
    RandomConsistent,
}

impl std::str::FromStr for BStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "passive" => Ok(BStrategy::Passive),
            "conjugacyforcer" | "conjugacy" => Ok(BStrategy::ConjugacyForcer),
            "randomconsistent" | "random" => Ok(BStrategy::RandomConsistent),
            _ => Err(format!(
                "unknown strategy {s:?} (passive, conjugacy, random)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    pub rounds: u32,
    pub seed: u64,
    pub identity: Name,
    pub strategy: BStrategy,
    pub max_rule_len: usize,
    pub max_rules: usize,
    pub retry_budget: u32,
}

impl Default for GameConfig {
    fn default() -> Self {
        let b = ForcingBounds::default();
        GameConfig {
            rounds: 10,
            seed: 0,
            identity: 0,
            strategy: BStrategy::Passive,
            max_rule_len: b.max_rule_len,
            max_rules: b.max_rules,
            retry_budget: 20,
        }
    }
}

impl GameConfig {
    pub fn bounds(&self) -> ForcingBounds {
        ForcingBounds {
            max_rule_len: self.max_rule_len,
            max_rules: self.max_rules,
            ..ForcingBounds::default()
        }
    }
}

/// Which branch of A's strategy produced a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "1.1")]
    C11,
    #[serde(rename = "1.2")]
    C12,
    #[serde(rename = "1.3")]
    C13,
    #[serde(rename = "2")]
    C2,
    #[serde(rename = "3")]
    C3,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::Identity => "identity",
            Case::C11 => "1.1",
            Case::C12 => "1.2",
            Case::C13 => "1.3",
            Case::C2 => "2",
            Case::C3 => "3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveNote {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<(Name, Name, Name)>,
    /// `(g, h, a, b)` for a witness-pair move.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadruple: Option<(Name, Name, Name, Name)>,
    /// Conjugator and the names it shifts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<(Name, Vec<Name>)>,
    /// How the witness was extended.
    pub realization: Vec<String>,
    /// A B move the engine could not realise; an empty move was played instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub round: u32,
    pub player: Player,
    pub declares: Vec<Name>,
    pub conditions: Vec<Condition>,
    pub note: MoveNote,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: GameConfig,
    pub moves: Vec<Move>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
