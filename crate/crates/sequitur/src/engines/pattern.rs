//! Graded behavior-pattern words and adjective reasoning.
//!
//! A pattern is a base term from a qualifiable vocabulary prefixed by some
//! number of intensifier strings (`very,` plus the blank glyph). Adjective
//! reasoning derives a pattern from any pattern with the same base and at
//! least as many intensifiers: removing one or more prefixes is the single
//! rule of inference.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::word::DEFAULT_BLANK;

/// A base term under `intensity` many `very,` prefixes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub base: String,
    pub intensity: u32,
}

impl Pattern {
    pub fn new(base: impl Into<String>, intensity: u32) -> Self {
        Pattern {
            base: base.into(),
            intensity,
        }
    }

    /// Renders the word form using the given blank glyph.
    pub fn render(&self, blank: &str) -> String {
        let mut s = String::new();
        for _ in 0..self.intensity {
            s.push_str("very,");
            s.push_str(blank);
        }
        s.push_str(&self.base);
        s
    }

    /// Parses a word form: leading `very,<blank>` prefixes then the base.
    pub fn parse(text: &str, blank: &str) -> Option<Pattern> {
        let prefix = format!("very,{blank}");
        let mut rest = text;
        let mut intensity = 0;
        while let Some(tail) = rest.strip_prefix(&prefix) {
            intensity += 1;
            rest = tail;
        }
        if rest.is_empty() {
            return None;
        }
        Some(Pattern::new(rest, intensity))
    }

    /// Glyph count of the word form, one glyph per character except the
    /// blank, which counts once.
    pub fn symbol_len(&self) -> usize {
        self.intensity as usize * 6 + self.base.chars().count()
    }

    /// Patterns obtainable by removing one or more prefixes.
    pub fn reductions(&self) -> impl Iterator<Item = Pattern> + '_ {
        (0..self.intensity).map(|k| Pattern::new(self.base.clone(), k))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(DEFAULT_BLANK))
    }
}

/// The "better than" order: comparable only on a shared base, then by
/// intensity.
impl Pattern {
    pub fn compare_strength(&self, other: &Pattern) -> Option<Ordering> {
        if self.base == other.base {
            Some(self.intensity.cmp(&other.intensity))
        } else {
            None
        }
    }

    /// `self` is at most as strong as `other`; `None` when incomparable.
    pub fn better_than_or_equal(&self, other: &Pattern) -> Option<bool> {
        self.compare_strength(other).map(|o| o != Ordering::Greater)
    }
}

/// Every pattern over `base` with intensity at most `depth`.
pub fn generate(base: &[String], depth: u32) -> BTreeSet<Pattern> {
    let mut out = BTreeSet::new();
    for b in base {
        for k in 0..=depth {
            out.insert(Pattern::new(b.clone(), k));
        }
    }
    out
}

/// Adjective closure: the input plus every reduction of an input pattern.
pub fn adjective_close(input: &BTreeSet<Pattern>) -> BTreeSet<Pattern> {
    let mut out = input.clone();
    for p in input {
        out.extend(p.reductions());
    }
    out
}

/// The reduction rule set behind adjective reasoning: each pattern with a
/// nonzero intensity is paired with the chain of words reached by stripping
/// one prefix at a time.
pub fn reduction_rules(p: &Pattern) -> Vec<(Pattern, Pattern)> {
    let mut rules = Vec::new();
    let mut current = p.clone();
    while current.intensity > 0 {
        let next = Pattern::new(current.base.clone(), current.intensity - 1);
        rules.push((p.clone(), next.clone()));
        current = next;
    }
    rules
}

/// Closure of a set under a binary rule relation, starting from membership.
pub fn rule_close(input: &BTreeSet<Pattern>, rules: &[(Pattern, Pattern)]) -> BTreeSet<Pattern> {
    let mut out = input.clone();
    loop {
        let mut grew = false;
        for (from, to) in rules {
            if out.contains(from) && out.insert(to.clone()) {
                grew = true;
            }
        }
        if !grew {
            return out;
        }
    }
}
