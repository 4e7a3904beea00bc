//! Propositional formulas over indexed primitives plus a handful of
//! distinguished atoms.
//!
//! Formulas are stored as trees and printed with full parenthesization, so
//! syntactic identity is plain structural equality. The text syntax accepted
//! by [`Formula::from_str`] and emitted by [`Display`](std::fmt::Display):
//!
//! * atoms: `P0`, `P1`, … (indexed primitives), `V`, `c`, or a bare
//!   identifier naming a base term (`bold`);
//! * connectives: `!`, `&`, `|`, `->`, `<->`, with `!` binding tightest and
//!   the binary connectives right-associative.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A propositional atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// Indexed primitive `P0`, `P1`, …
    Prim(u32),
    /// The intensifier atom, printed `V`.
    Very,
    /// The "perfect" constant, printed `c`.
    Perfect,
    /// A named base term taken from a qualifiable vocabulary.
    Term(String),
}

impl Atom {
    /// Index of the atom for capped modus ponens. Only indexed primitives
    /// carry one; the other atoms never satisfy a finite cap.
    pub fn prim_index(&self) -> Option<u32> {
        match self {
            Atom::Prim(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Prim(i) => write!(f, "P{i}"),
            Atom::Very => write!(f, "V"),
            Atom::Perfect => write!(f, "c"),
            Atom::Term(s) => write!(f, "{s}"),
        }
    }
}

/// A propositional formula tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

pub fn prim(i: u32) -> Formula {
    Formula::Atom(Atom::Prim(i))
}

pub fn very() -> Formula {
    Formula::Atom(Atom::Very)
}

pub fn perfect() -> Formula {
    Formula::Atom(Atom::Perfect)
}

pub fn term(name: &str) -> Formula {
    Formula::Atom(Atom::Term(name.to_string()))
}

pub fn not(a: Formula) -> Formula {
    Formula::Not(Box::new(a))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::Iff(Box::new(a), Box::new(b))
}

impl Formula {
    /// Collects the distinct atoms of the formula in first-occurrence order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.walk_atoms(&mut |a| {
            if !out.contains(a) {
                out.push(a.clone());
            }
        });
        out
    }

    fn walk_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(x) => x.walk_atoms(f),
            Formula::And(x, y)
            | Formula::Or(x, y)
            | Formula::Implies(x, y)
            | Formula::Iff(x, y) => {
                x.walk_atoms(f);
                y.walk_atoms(f);
            }
        }
    }

    /// Largest indexed-primitive subscript occurring in the formula, if any.
    pub fn max_prim_index(&self) -> Option<u32> {
        let mut max = None;
        self.walk_atoms(&mut |a| {
            if let Atom::Prim(i) = a {
                max = Some(max.map_or(*i, |m: u32| m.max(*i)));
            }
        });
        max
    }

    /// True when every atom is an indexed primitive with subscript `<= cap`.
    pub fn prim_indices_within(&self, cap: u32) -> bool {
        let mut ok = true;
        self.walk_atoms(&mut |a| match a.prim_index() {
            Some(i) => ok &= i <= cap,
            None => ok = false,
        });
        ok
    }

    /// Symbol count of the parenthesis-free rendering: one per atom plus one
    /// per connective.
    pub fn symbol_len(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(x) => 1 + x.symbol_len(),
            Formula::And(x, y)
            | Formula::Or(x, y)
            | Formula::Implies(x, y)
            | Formula::Iff(x, y) => 1 + x.symbol_len() + y.symbol_len(),
        }
    }

    /// All subformulas, including the formula itself, without duplicates.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>) {
        if !out.contains(self) {
            out.push(self.clone());
        }
        match self {
            Formula::Atom(_) => {}
            Formula::Not(x) => x.collect_subformulas(out),
            Formula::And(x, y)
            | Formula::Or(x, y)
            | Formula::Implies(x, y)
            | Formula::Iff(x, y) => {
                x.collect_subformulas(out);
                y.collect_subformulas(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(x) => write!(f, "!{x}"),
            Formula::And(x, y) => write!(f, "({x}&{y})"),
            Formula::Or(x, y) => write!(f, "({x}|{y})"),
            Formula::Implies(x, y) => write!(f, "({x}->{y})"),
            Formula::Iff(x, y) => write!(f, "({x}<->{y})"),
        }
    }
}

/// Error raised while parsing formula text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let f = p.parse_iff()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(f)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_implies()?;
        if self.eat("<->") {
            let rhs = self.parse_iff()?;
            Ok(iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_or()?;
        // `->` must not swallow the tail of `<->`; the `<` case is handled
        // one level up.
        if self.eat("->") {
            let rhs = self.parse_implies()?;
            Ok(implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_and()?;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'|') {
            self.pos += 1;
            let rhs = self.parse_or()?;
            Ok(or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_unary()?;
        if self.eat("&") {
            let rhs = self.parse_and()?;
            Ok(and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'!') => {
                self.pos += 1;
                Ok(not(self.parse_unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_iff()?;
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.err("expected ')'"))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.parse_atom(),
            _ => Err(self.err("expected an atom, '!', or '('")),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if name == "V" {
            return Ok(very());
        }
        if name == "c" {
            return Ok(perfect());
        }
        if let Some(digits) = name.strip_prefix('P') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let i: u32 = digits.parse().map_err(|_| ParseError {
                    position: start,
                    message: "primitive index out of range".to_string(),
                })?;
                return Ok(prim(i));
            }
        }
        Ok(term(name))
    }
}
