//! Reasoning from the perfect.
//!
//! Two engines share the idea of a distinguished "perfect" sentence. The
//! trivial one works on words: any finite set containing `perfect` closes to
//! the whole ambient language, anything else stays put. The strong one works
//! on formulas: a modus-ponens calculus whose only axioms are the
//! intensifier-stripping implications `(V&x)->x` and whose proof steps are
//! confined to those axioms plus the generated language. Membership in the
//! strong closure has a closed form, and [`prove_bounded`] is an independent
//! proof-search oracle for it: it enumerates derivations directly and
//! returns a checkable [`Proof`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::pattern::Pattern;
use super::EngineError;
use crate::formula::{and, implies, perfect, very, Atom, Formula};

/// An element of the word language extended by the perfect sentence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Claim {
    Graded(Pattern),
    Perfect,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Graded(p) => write!(f, "{p}"),
            Claim::Perfect => write!(f, "perfect"),
        }
    }
}

/// The ambient truncated language: every pattern up to `depth` plus the
/// perfect sentence.
pub fn perfect_ambient(base: &[String], depth: u32) -> BTreeSet<Claim> {
    let mut out: BTreeSet<Claim> = super::pattern::generate(base, depth)
        .into_iter()
        .map(Claim::Graded)
        .collect();
    out.insert(Claim::Perfect);
    out
}

/// Type-W reasoning from the perfect: presence of the perfect sentence
/// yields the whole ambient language, absence changes nothing. The caller
/// fixes an ambient set containing the input.
pub fn trivial_close(input: &BTreeSet<Claim>, ambient: &BTreeSet<Claim>) -> BTreeSet<Claim> {
    if input.contains(&Claim::Perfect) {
        ambient.clone()
    } else {
        input.clone()
    }
}

/// The truncated formula language for strong reasoning from the perfect:
/// flat intensifier conjunctions over a base vocabulary, the constant `c`,
/// and the implications from `c` into each conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectLanguage {
    base: Vec<String>,
    depth: u32,
}

impl PerfectLanguage {
    /// The intensifier and perfect atoms are reserved and cannot double as
    /// base terms.
    pub fn new(base: impl IntoIterator<Item = impl Into<String>>, depth: u32) -> Self {
        let mut base: Vec<String> = base.into_iter().map(Into::into).collect();
        base.sort();
        base.dedup();
        assert!(
            base.iter().all(|b| b != "V" && b != "c"),
            "base terms must not collide with the reserved atoms"
        );
        PerfectLanguage { base, depth }
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// The right-nested formula form of a pattern.
    pub fn pattern_formula(p: &Pattern) -> Formula {
        let mut f = Formula::Atom(Atom::Term(p.base.clone()));
        for _ in 0..p.intensity {
            f = and(very(), f);
        }
        f
    }

    /// Reads a right-nested intensifier conjunction back as a pattern.
    pub fn formula_pattern(f: &Formula) -> Option<Pattern> {
        let mut intensity = 0;
        let mut cur = f;
        loop {
            match cur {
                Formula::Atom(Atom::Term(b)) => {
                    return Some(Pattern::new(b.clone(), intensity));
                }
                Formula::And(l, r) if **l == very() => {
                    intensity += 1;
                    cur = r;
                }
                _ => return None,
            }
        }
    }

    /// The pattern stratum: `|base| * (depth + 1)` formulas.
    pub fn patterns(&self) -> BTreeSet<Formula> {
        super::pattern::generate(&self.base, self.depth)
            .iter()
            .map(Self::pattern_formula)
            .collect()
    }

    /// The perfect stratum: `c` and one implication per pattern.
    pub fn implications(&self) -> BTreeSet<Formula> {
        let mut out: BTreeSet<Formula> = self
            .patterns()
            .into_iter()
            .map(|x| implies(perfect(), x))
            .collect();
        out.insert(perfect());
        out
    }

    /// The whole generated language.
    pub fn all(&self) -> BTreeSet<Formula> {
        let mut out = self.patterns();
        out.extend(self.implications());
        out
    }

    /// The axiom instances whose antecedents stay inside the truncation.
    pub fn axioms(&self) -> BTreeSet<Formula> {
        super::pattern::generate(&self.base, self.depth)
            .iter()
            .filter(|p| p.intensity >= 1)
            .map(|p| {
                let antecedent = Self::pattern_formula(p);
                let reduced = Self::pattern_formula(&Pattern::new(p.base.clone(), p.intensity - 1));
                implies(antecedent, reduced)
            })
            .collect()
    }

    fn contains(&self, f: &Formula) -> bool {
        if *f == perfect() {
            return true;
        }
        let body = match f {
            Formula::Implies(l, r) if **l == perfect() => r,
            other => other,
        };
        match Self::formula_pattern(body) {
            Some(p) => p.intensity <= self.depth && self.base.contains(&p.base),
            None => false,
        }
    }
}

/// Leaves of a conjunction tree, left to right.
fn conjunction_leaves(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(l, r) => {
            let mut out = conjunction_leaves(l);
            out.extend(conjunction_leaves(r));
            out
        }
        other => vec![other.clone()],
    }
}

/// Re-associates an intensifier conjunction to the canonical right-nested
/// shape: the leaves must read `V, …, V, b` with at least one `V`.
pub fn insert_parens(f: &Formula) -> Result<Formula, EngineError> {
    let leaves = conjunction_leaves(f);
    if leaves.len() < 2 {
        return Err(EngineError::NotFlatForm(f.clone()));
    }
    let (base, intensifiers) = leaves.split_last().unwrap();
    let base_ok = matches!(base, Formula::Atom(Atom::Term(_) | Atom::Prim(_)));
    if !base_ok || intensifiers.iter().any(|v| *v != very()) {
        return Err(EngineError::NotFlatForm(f.clone()));
    }
    let mut out = base.clone();
    for _ in intensifiers {
        out = and(very(), out);
    }
    Ok(out)
}

/// The leaf string of a conjunction, the parenthesis-free reading.
pub fn strip_parens(f: &Formula) -> Vec<Formula> {
    conjunction_leaves(f)
}

/// Strong reasoning from the perfect, in closed form: the input, every
/// reduction of an input pattern, and, when `c` is present, the consequent
/// of every input implication together with its reductions. No occurrence
/// of `c` or of an implication is ever derived.
pub fn strong_close(
    lang: &PerfectLanguage,
    input: &BTreeSet<Formula>,
) -> Result<BTreeSet<Formula>, EngineError> {
    for f in input {
        if !lang.contains(f) {
            return Err(EngineError::OutsideLanguage(f.clone()));
        }
    }
    let mut out = input.clone();
    let mut reachable_patterns: Vec<Pattern> = input
        .iter()
        .filter_map(PerfectLanguage::formula_pattern)
        .collect();
    if input.contains(&perfect()) {
        for f in input {
            if let Formula::Implies(l, r) = f {
                if **l == perfect() {
                    out.insert((**r).clone());
                    reachable_patterns.extend(PerfectLanguage::formula_pattern(r));
                }
            }
        }
    }
    for p in reachable_patterns {
        for r in p.reductions() {
            out.insert(PerfectLanguage::pattern_formula(&r));
        }
    }
    Ok(out)
}

/// One line of a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub formula: Formula,
    pub rule: Justification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Justification {
    Assumption,
    AxiomInstance,
    /// Modus ponens from the steps at the two indices: antecedent first,
    /// implication second.
    ModusPonens(usize, usize),
}

/// A finite ordered list of justified steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Number of modus-ponens applications.
    pub fn mp_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.rule, Justification::ModusPonens(..)))
            .count()
    }

    /// Checks every line: assumptions must come from `assumptions`, axiom
    /// instances from `axioms`, and each modus ponens must cite prior steps
    /// of the shapes `X` and `X -> Y` to conclude `Y`. Every step must lie
    /// in `allowed`.
    pub fn validate(
        &self,
        assumptions: &BTreeSet<Formula>,
        axioms: &BTreeSet<Formula>,
        allowed: &BTreeSet<Formula>,
    ) -> bool {
        for (idx, step) in self.steps.iter().enumerate() {
            if !allowed.contains(&step.formula) {
                return false;
            }
            let ok = match step.rule {
                Justification::Assumption => assumptions.contains(&step.formula),
                Justification::AxiomInstance => axioms.contains(&step.formula),
                Justification::ModusPonens(i, j) => {
                    i < idx
                        && j < idx
                        && self.steps[j].formula
                            == implies(self.steps[i].formula.clone(), step.formula.clone())
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

const SEARCH_STATE_BUDGET: usize = 200_000;

/// Exhaustive bounded proof search for the strong calculus.
///
/// `max_steps` bounds the number of modus-ponens applications; assumption
/// and axiom lines are free, so the bound is on inference work rather than
/// transcription. Returns a validated proof when one exists within the
/// bound, `None` when the bounded search space is exhausted without one.
pub fn prove_bounded(
    lang: &PerfectLanguage,
    premises: &BTreeSet<Formula>,
    goal: &Formula,
    max_steps: usize,
) -> Result<Option<Proof>, EngineError> {
    for f in premises {
        if !lang.contains(f) {
            return Err(EngineError::OutsideLanguage(f.clone()));
        }
    }
    let axioms = lang.axioms();
    if premises.contains(goal) || axioms.contains(goal) {
        return Ok(Some(trivial_proof(premises, goal)));
    }

    // Implications usable as the major premise of a modus ponens: the axiom
    // instances and the assumed `c -> y` formulas. Their consequents are the
    // only formulas a search step can add.
    let mut implications: Vec<(Formula, Formula, Formula)> = Vec::new(); // (whole, antecedent, consequent)
    for ax in &axioms {
        if let Formula::Implies(l, r) = ax {
            implications.push((ax.clone(), (**l).clone(), (**r).clone()));
        }
    }
    for p in premises {
        if let Formula::Implies(l, r) = p {
            implications.push((p.clone(), (**l).clone(), (**r).clone()));
        }
    }
    let conclusions: Vec<Formula> = {
        let set: BTreeSet<Formula> = implications.iter().map(|(_, _, c)| c.clone()).collect();
        set.into_iter().collect()
    };
    if conclusions.len() > 63 {
        return Err(EngineError::BudgetExceeded {
            visited: conclusions.len(),
        });
    }
    let index_of = |f: &Formula| conclusions.iter().position(|c| c == f);
    let goal_idx = match index_of(goal) {
        Some(i) => i,
        None => return Ok(None), // nothing can ever conclude the goal
    };

    let free: BTreeSet<Formula> = premises.union(&axioms).cloned().collect();
    let available = |state: u64, f: &Formula| {
        free.contains(f) || index_of(f).is_some_and(|i| state >> i & 1 == 1)
    };

    let mut parents: BTreeMap<u64, (u64, usize)> = BTreeMap::new(); // state -> (prev, implication idx)
    let mut depth: BTreeMap<u64, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    depth.insert(0, 0);
    queue.push_back(0u64);

    let mut goal_state = None;
    'bfs: while let Some(state) = queue.pop_front() {
        let d = depth[&state];
        if d == max_steps {
            continue;
        }
        for (imp_idx, (_, antecedent, consequent)) in implications.iter().enumerate() {
            let c_idx = index_of(consequent).unwrap();
            if state >> c_idx & 1 == 1 || !available(state, antecedent) {
                continue;
            }
            let next = state | 1 << c_idx;
            if depth.contains_key(&next) {
                continue;
            }
            depth.insert(next, d + 1);
            parents.insert(next, (state, imp_idx));
            if c_idx == goal_idx {
                goal_state = Some(next);
                break 'bfs;
            }
            queue.push_back(next);
            if depth.len() > SEARCH_STATE_BUDGET {
                return Err(EngineError::BudgetExceeded {
                    visited: depth.len(),
                });
            }
        }
    }

    let Some(found) = goal_state else {
        return Ok(None);
    };

    // Unwind the modus-ponens chain, then lay out the proof: cited
    // assumptions and axiom instances first, inferences after.
    let mut chain = Vec::new();
    let mut cursor = found;
    while cursor != 0 {
        let (prev, imp_idx) = parents[&cursor];
        chain.push(implications[imp_idx].clone());
        cursor = prev;
    }
    chain.reverse();

    let mut proof = Proof { steps: Vec::new() };
    let mut line_of: BTreeMap<Formula, usize> = BTreeMap::new();
    let push = |proof: &mut Proof,
                    line_of: &mut BTreeMap<Formula, usize>,
                    f: Formula,
                    rule: Justification| {
        if let Some(&i) = line_of.get(&f) {
            return i;
        }
        proof.steps.push(ProofStep {
            formula: f.clone(),
            rule,
        });
        let i = proof.steps.len() - 1;
        line_of.insert(f, i);
        i
    };
    for (whole, antecedent, consequent) in chain {
        let just = if premises.contains(&antecedent) {
            Justification::Assumption
        } else {
            Justification::AxiomInstance
        };
        // The antecedent is either free (assumed or an axiom) or the
        // conclusion of an earlier link in the chain, already pushed.
        let a = if line_of.contains_key(&antecedent) {
            line_of[&antecedent]
        } else {
            push(&mut proof, &mut line_of, antecedent.clone(), just)
        };
        let imp_just = if premises.contains(&whole) {
            Justification::Assumption
        } else {
            Justification::AxiomInstance
        };
        let i = push(&mut proof, &mut line_of, whole, imp_just);
        push(
            &mut proof,
            &mut line_of,
            consequent,
            Justification::ModusPonens(a, i),
        );
    }

    let mut allowed = lang.all();
    allowed.extend(axioms.iter().cloned());
    debug_assert!(proof.validate(premises, &axioms, &allowed));
    Ok(Some(proof))
}

fn trivial_proof(premises: &BTreeSet<Formula>, goal: &Formula) -> Proof {
    let rule = if premises.contains(goal) {
        Justification::Assumption
    } else {
        Justification::AxiomInstance
    };
    Proof {
        steps: vec![ProofStep {
            formula: goal.clone(),
            rule,
        }],
    }
}
