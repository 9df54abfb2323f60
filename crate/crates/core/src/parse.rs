//! Text formats for groups, permutations and words.
//!
//! ```text
//! spec    := "perm" ["(" int ")"] ":" perm ("," perm)*  |  preset  |  expr
//! perm    := "()" | ("(" int+ ")")+
//! expr    := "free(" names ")" | "abelian(" names ")"
//!          | "prod(" expr "," expr ")" | "fprod(" expr "," expr ")"
//!          | "amalgam(" expr "," expr ";" word "~" word ")"
//!          | "semidir(" expr "; swap(" name name ("," name name)* ");" name ")"
//!          | "bs(" int ";" name "," name ")"
//! word    := atom* ; atom := (name | "1" | "[" word "," word "]" | "(" word ")") ["^" int]
//! ```

use std::fmt;

use thiserror::Error;

use crate::group::FiniteGroup;
use crate::perm::Perm;
use crate::symbolic::{GroupExpr, Sym, SymWord};

const HINT: &str = "expected `perm: (0 1), (0 1 2)`, a preset such as S4, or an expression such as `amalgam(free(g,h), free(g2,h2); g ~ g2)`";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub hint: &'static str,
}

#[derive(Debug, Clone)]
pub enum ParsedGroup {
    Finite(FiniteGroup),
    Symbolic(GroupExpr),
}

impl fmt::Display for ParsedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsedGroup::Finite(g) => write!(f, "finite group of order {}", g.order()),
            ParsedGroup::Symbolic(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let v = s.parse::<i64>().map_err(|_| ParseError {
                line,
                column: col,
                message: format!("integer `{s}` out of range"),
                hint: HINT,
            })?;
            out.push((Tok::Int(v), start.0, start.1));
            col += j - i;
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
            {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().collect()), start.0, start.1));
            col += j - i;
            i = j;
            continue;
        }
        if "(),;:~[]^*".contains(c) {
            out.push((Tok::Sym(c), line, col));
            col += 1;
            i += 1;
            continue;
        }
        return Err(ParseError {
            line,
            column: col,
            message: format!("unexpected character `{c}`"),
            hint: HINT,
        });
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: String) -> ParseError {
        let (_, line, column) = self.toks[self.pos];
        ParseError {
            line,
            column,
            message,
            hint: HINT,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(format!("expected `{c}`, found {}", self.peek())))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            t => Err(self.err_here(format!("expected a name, found {t}"))),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.next();
                Ok(v)
            }
            t => Err(self.err_here(format!("expected an integer, found {t}"))),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(self.err_here(format!("unexpected {t} after complete input"))),
        }
    }

    fn semantic<T, E: fmt::Display>(&self, at: usize, r: Result<T, E>) -> Result<T, ParseError> {
        r.map_err(|e| {
            let (_, line, column) = self.toks[at];
            ParseError {
                line,
                column,
                message: e.to_string(),
                hint: HINT,
            }
        })
    }

    /// One permutation in cycle notation, as a list of cycles.
    fn cycles(&mut self) -> Result<Vec<Vec<usize>>, ParseError> {
        let mut cycles = Vec::new();
        if *self.peek() != Tok::Sym('(') {
            return Err(self.err_here(format!("expected `(`, found {}", self.peek())));
        }
        while self.eat('(') {
            let mut cycle = Vec::new();
            while let Tok::Int(v) = *self.peek() {
                if v < 0 {
                    return Err(self.err_here(format!("negative point {v}")));
                }
                cycle.push(v as usize);
                self.next();
            }
            self.expect(')')?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }

    fn perm_spec(&mut self) -> Result<FiniteGroup, ParseError> {
        let start = self.pos;
        self.next(); // `perm`
        let mut degree = None;
        if self.eat('(') {
            degree = Some(self.int()? as usize);
            self.expect(')')?;
        }
        self.expect(':')?;
        let mut gens = vec![self.cycles()?];
        while self.eat(',') {
            gens.push(self.cycles()?);
        }
        self.end()?;
        let n = degree.unwrap_or_else(|| {
            gens.iter()
                .flatten()
                .flatten()
                .map(|&p| p + 1)
                .max()
                .unwrap_or(1)
        });
        let perms: Vec<Perm> = gens
            .iter()
            .map(|c| Perm::from_cycles(n, c))
            .collect::<Result<_, _>>()
            .map_err(|e| self.semantic::<(), _>(start, Err(e)).unwrap_err())?;
        self.semantic(start, FiniteGroup::generate(n, &perms))
    }

    fn names(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident()?];
        while self.eat(',') {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<GroupExpr, ParseError> {
        let at = self.pos;
        let head = self.ident()?;
        self.expect('(')?;
        let e = match head.as_str() {
            "free" => {
                let n = self.names()?;
                self.semantic(at, GroupExpr::free(&n))
            }
            "abelian" => {
                let n = self.names()?;
                self.semantic(at, GroupExpr::free_abelian(&n))
            }
            "prod" | "fprod" => {
                let l = self.expr()?;
                self.expect(',')?;
                let r = self.expr()?;
                if head == "prod" {
                    self.semantic(at, GroupExpr::direct_product(l, r))
                } else {
                    self.semantic(at, GroupExpr::free_product(l, r))
                }
            }
            "amalgam" => {
                let l = self.expr()?;
                self.expect(',')?;
                let r = self.expr()?;
                self.expect(';')?;
                let wl = self.word()?;
                self.expect('~')?;
                let wr = self.word()?;
                self.semantic(at, GroupExpr::amalgam_cyclic(l, r, wl, wr))
            }
            "semidir" => {
                let base = self.expr()?;
                self.expect(';')?;
                let kw = self.ident()?;
                if kw != "swap" {
                    return Err(self.err_here(format!("expected `swap`, found `{kw}`")));
                }
                self.expect('(')?;
                let mut pairs = vec![(self.ident()?, self.ident()?)];
                while self.eat(',') {
                    pairs.push((self.ident()?, self.ident()?));
                }
                self.expect(')')?;
                self.expect(';')?;
                let b = self.ident()?;
                self.semantic(at, GroupExpr::semidirect_involution(base, &pairs, &b))
            }
            "bs" => {
                let m = self.int()?;
                self.expect(';')?;
                let g = self.ident()?;
                self.expect(',')?;
                let h = self.ident()?;
                self.semantic(at, GroupExpr::affine_bs(m, &g, &h))
            }
            other => {
                self.pos = at;
                return Err(self.err_here(format!("unknown constructor `{other}`")));
            }
        }?;
        self.expect(')')?;
        Ok(e)
    }

    fn word(&mut self) -> Result<SymWord, ParseError> {
        let mut w = SymWord::empty();
        loop {
            self.eat('*');
            let atom = match self.peek().clone() {
                Tok::Ident(s) => {
                    self.next();
                    SymWord::gen(Sym::new(&s))
                }
                Tok::Int(1) => {
                    self.next();
                    SymWord::empty()
                }
                Tok::Sym('[') => {
                    self.next();
                    let a = self.word()?;
                    self.expect(',')?;
                    let b = self.word()?;
                    self.expect(']')?;
                    SymWord::commutator(&a, &b)
                }
                Tok::Sym('(') => {
                    self.next();
                    let a = self.word()?;
                    self.expect(')')?;
                    a
                }
                _ => break,
            };
            let atom = if self.eat('^') {
                atom.pow(self.int()?)
            } else {
                atom
            };
            w.append(&atom);
        }
        Ok(w)
    }
}

/// Parses a finite permutation group, a preset name, or a symbolic expression.
pub fn parse_group_spec(text: &str) -> Result<ParsedGroup, ParseError> {
    let mut p = Parser::new(text)?;
    match (p.peek().clone(), p.peek_at(1).clone()) {
        (Tok::Ident(s), Tok::Sym(':')) | (Tok::Ident(s), Tok::Sym('(')) if s == "perm" => {
            Ok(ParsedGroup::Finite(p.perm_spec()?))
        }
        (Tok::Ident(s), Tok::End) => {
            let at = p.pos;
            p.next();
            Ok(ParsedGroup::Finite(
                p.semantic(at, FiniteGroup::preset(&s))?,
            ))
        }
        (Tok::Ident(_), Tok::Sym('(')) => {
            let e = p.expr()?;
            p.end()?;
            Ok(ParsedGroup::Symbolic(e))
        }
        (t, _) => Err(p.err_here(format!("expected a group specification, found {t}"))),
    }
}

pub fn parse_group_expr(text: &str) -> Result<GroupExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.end()?;
    Ok(e)
}

pub fn parse_word(text: &str) -> Result<SymWord, ParseError> {
    let mut p = Parser::new(text)?;
    let w = p.word()?;
    p.end()?;
    Ok(w)
}

/// A single permutation of the given degree, e.g. `(0 1)(2 3)` or `()`.
pub fn parse_perm(text: &str, degree: usize) -> Result<Perm, ParseError> {
    let mut p = Parser::new(text)?;
    let cycles = p.cycles()?;
    p.end()?;
    p.semantic(0, Perm::from_cycles(degree, &cycles))
}
