//! Semantic propositional closure.
//!
//! Derivability for full propositional deduction is decided by truth tables
//! over the atoms that actually occur; soundness and completeness make this
//! coincide with Hilbert-style derivability. A small bounded Hilbert search
//! with a configurable schema list lives in [`hilbert`] as a cross-check on
//! tiny cases; it instantiates schemata over a finite formula pool, so only
//! its positive answers are conclusive.

use std::collections::{BTreeMap, BTreeSet};

use super::EngineError;
use crate::formula::{Atom, Formula};

/// Default bound on primitive indices and distinct atoms per truth table.
pub const DEFAULT_TABLE_BOUND: u32 = 20;

fn eval(f: &Formula, assignment: &BTreeMap<Atom, bool>) -> bool {
    match f {
        Formula::Atom(a) => assignment[a],
        Formula::Not(x) => !eval(x, assignment),
        Formula::And(x, y) => eval(x, assignment) && eval(y, assignment),
        Formula::Or(x, y) => eval(x, assignment) || eval(y, assignment),
        Formula::Implies(x, y) => !eval(x, assignment) || eval(y, assignment),
        Formula::Iff(x, y) => eval(x, assignment) == eval(y, assignment),
    }
}

fn occurring_atoms(
    premises: &BTreeSet<Formula>,
    goal: Option<&Formula>,
    bound: u32,
) -> Result<Vec<Atom>, EngineError> {
    let mut atoms = Vec::new();
    let mut push = |a: Atom| {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    };
    for f in premises.iter().chain(goal) {
        for a in f.atoms() {
            if let Atom::Prim(i) = a {
                if i >= bound {
                    return Err(EngineError::IndexOverflow { index: i, bound });
                }
            }
            push(a);
        }
    }
    if atoms.len() > bound as usize {
        return Err(EngineError::AtomOverflow {
            count: atoms.len(),
            bound,
        });
    }
    Ok(atoms)
}

/// Truth-table entailment: every assignment satisfying all premises
/// satisfies the goal.
pub fn entails(
    premises: &BTreeSet<Formula>,
    goal: &Formula,
    bound: u32,
) -> Result<bool, EngineError> {
    let atoms = occurring_atoms(premises, Some(goal), bound)?;
    let rows = 1u64 << atoms.len();
    for row in 0..rows {
        let assignment: BTreeMap<Atom, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), row >> i & 1 == 1))
            .collect();
        if premises.iter().all(|p| eval(p, &assignment)) && !eval(goal, &assignment) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The entailment closure of `premises` within a finite formula space.
pub fn close_within(
    space: &BTreeSet<Formula>,
    premises: &BTreeSet<Formula>,
    bound: u32,
) -> Result<BTreeSet<Formula>, EngineError> {
    let mut out = BTreeSet::new();
    for x in space {
        if entails(premises, x, bound)? {
            out.insert(x.clone());
        }
    }
    Ok(out)
}

/// The truth set of a valuation over a finite formula space.
pub fn truth_set(
    space: &BTreeSet<Formula>,
    valuation: &BTreeMap<Atom, bool>,
) -> BTreeSet<Formula> {
    space
        .iter()
        .filter(|f| eval(f, valuation))
        .cloned()
        .collect()
}

pub mod hilbert {
    //! Bounded Hilbert-style search with configurable axiom schemata.

    use super::*;
    use crate::formula::{and, implies, not, or, term};

    /// A metavariable slot inside a schema.
    pub fn meta(name: &str) -> Formula {
        term(&format!("%{name}"))
    }

    /// A conventional schema list for the positive and negative fragments:
    /// weakening and distribution of implication, conjunction introduction
    /// and projections, disjunction injections and elimination, reductio,
    /// and double-negation elimination.
    pub fn default_schemata() -> Vec<Formula> {
        let (a, b, c) = (meta("A"), meta("B"), meta("C"));
        vec![
            implies(a.clone(), implies(b.clone(), a.clone())),
            implies(
                implies(a.clone(), b.clone()),
                implies(
                    implies(a.clone(), implies(b.clone(), c.clone())),
                    implies(a.clone(), c.clone()),
                ),
            ),
            implies(a.clone(), implies(b.clone(), and(a.clone(), b.clone()))),
            implies(and(a.clone(), b.clone()), a.clone()),
            implies(and(a.clone(), b.clone()), b.clone()),
            implies(a.clone(), or(a.clone(), b.clone())),
            implies(b.clone(), or(a.clone(), b.clone())),
            implies(
                implies(a.clone(), c.clone()),
                implies(
                    implies(b.clone(), c.clone()),
                    implies(or(a.clone(), b.clone()), c.clone()),
                ),
            ),
            implies(
                implies(a.clone(), b.clone()),
                implies(implies(a.clone(), not(b.clone())), not(a.clone())),
            ),
            implies(not(not(a.clone())), a),
        ]
    }

    fn metavars(schema: &Formula) -> Vec<Atom> {
        schema
            .atoms()
            .into_iter()
            .filter(|a| matches!(a, Atom::Term(n) if n.starts_with('%')))
            .collect()
    }

    fn substitute(schema: &Formula, map: &BTreeMap<Atom, Formula>) -> Formula {
        match schema {
            Formula::Atom(a) => map.get(a).cloned().unwrap_or_else(|| schema.clone()),
            Formula::Not(x) => Formula::Not(Box::new(substitute(x, map))),
            Formula::And(x, y) => {
                Formula::And(Box::new(substitute(x, map)), Box::new(substitute(y, map)))
            }
            Formula::Or(x, y) => {
                Formula::Or(Box::new(substitute(x, map)), Box::new(substitute(y, map)))
            }
            Formula::Implies(x, y) => {
                Formula::Implies(Box::new(substitute(x, map)), Box::new(substitute(y, map)))
            }
            Formula::Iff(x, y) => {
                Formula::Iff(Box::new(substitute(x, map)), Box::new(substitute(y, map)))
            }
        }
    }

    fn instances(schema: &Formula, pool: &[Formula], out: &mut BTreeSet<Formula>) {
        let vars = metavars(schema);
        let mut choice = vec![0usize; vars.len()];
        loop {
            let map: BTreeMap<Atom, Formula> = vars
                .iter()
                .cloned()
                .zip(choice.iter().map(|&i| pool[i].clone()))
                .collect();
            out.insert(substitute(schema, &map));
            // Odometer over the pool.
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return;
                }
                choice[k] += 1;
                if choice[k] < pool.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Bounded search: instantiate every schema over the subformulas of the
    /// premises and goal, then saturate modus ponens for `rounds` passes.
    /// A `true` answer is a genuine derivation; `false` only means the
    /// bounded space contains none.
    pub fn bounded_derives(
        schemata: &[Formula],
        premises: &BTreeSet<Formula>,
        goal: &Formula,
        rounds: usize,
    ) -> bool {
        let mut pool: Vec<Formula> = Vec::new();
        for f in premises.iter().chain([goal]) {
            for sub in f.subformulas() {
                if !pool.contains(&sub) {
                    pool.push(sub);
                }
            }
        }
        if pool.is_empty() {
            return false;
        }
        let mut derived: BTreeSet<Formula> = premises.clone();
        for schema in schemata {
            instances(schema, &pool, &mut derived);
        }
        for _ in 0..rounds {
            if derived.contains(goal) {
                return true;
            }
            let additions: Vec<Formula> = derived
                .iter()
                .filter_map(|f| match f {
                    Formula::Implies(x, y) if derived.contains(x) && !derived.contains(y) => {
                        Some((**y).clone())
                    }
                    _ => None,
                })
                .collect();
            if additions.is_empty() {
                break;
            }
            derived.extend(additions);
        }
        derived.contains(goal)
    }
}
