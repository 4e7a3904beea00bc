//! The order and meet structure of closure operators, chains, and bases.
//!
//! Operators over one universe are compared pointwise: `C1 <= C2` when every
//! closure under `C1` is contained in the closure under `C2`. The meet is
//! the pointwise intersection. Chains admit a second characterization
//! through composition, and both are computed side by side so their
//! agreement can be asserted rather than assumed.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::consequence::{
    audit::{check_axioms, AuditMode, AxiomReport},
    mask_elems, ClosureOperator, ConsequenceError, Mask,
};
use crate::engines::mp::{mp_close, Cap};
use crate::engines::pattern::Pattern;
use crate::engines::perfect::PerfectLanguage;
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Consequence(#[from] ConsequenceError),
    #[error("length order is undefined on empty sets")]
    EmptySet,
    #[error("family member fails axiom ({0}) required for the chain criterion")]
    AxiomPrecondition(u8),
}

/// Pointwise inclusion of operator outputs, checked on every subset.
pub fn stronger_than(
    weaker: &ClosureOperator,
    stronger: &ClosureOperator,
) -> Result<bool, AlgebraError> {
    if weaker.universe() != stronger.universe() {
        return Err(ConsequenceError::UniverseMismatch.into());
    }
    let full = weaker.universe().full_mask();
    Ok((0..=full).all(|b| weaker.apply(b) & !stronger.apply(b) == 0))
}

/// The pointwise meet, together with an axiom audit of the result. The
/// surrounding algebra is a meet semilattice for operators satisfying the
/// closure axioms; the audit records rather than assumes this.
pub fn meet(
    left: &ClosureOperator,
    right: &ClosureOperator,
) -> Result<(ClosureOperator, AxiomReport), AlgebraError> {
    if left.universe() != right.universe() {
        return Err(ConsequenceError::UniverseMismatch.into());
    }
    let (l, r) = (left.clone(), right.clone());
    let met = ClosureOperator::from_rule(left.universe().clone(), move |b| {
        l.apply(b) & r.apply(b)
    });
    let mode = if met.universe().len() <= 12 {
        AuditMode::Exhaustive { cap: 12 }
    } else {
        AuditMode::Sampled {
            seed: 0,
            samples: 512,
        }
    };
    let report = check_axioms(&met, &[2, 3, 4, 5], mode)?;
    Ok((met, report))
}

/// Both chain characterizations of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    /// Every pair is comparable under the pointwise order.
    pub pairwise_comparable: bool,
    /// Every pair satisfies the composition criterion: one composition
    /// collapses onto its outer operator.
    pub composition_criterion: bool,
}

impl ChainCheck {
    pub fn is_chain(&self) -> bool {
        self.pairwise_comparable
    }

    pub fn criteria_agree(&self) -> bool {
        self.pairwise_comparable == self.composition_criterion
    }
}

/// Tests whether a family forms a chain, by direct comparison and by the
/// composition criterion. Members must satisfy axioms (2), (3), (5); the
/// criterion is only meaningful for closure operators.
pub fn is_chain(family: &[ClosureOperator]) -> Result<ChainCheck, AlgebraError> {
    for member in family {
        let mode = if member.universe().len() <= 12 {
            AuditMode::Exhaustive { cap: 12 }
        } else {
            AuditMode::Sampled {
                seed: 0,
                samples: 256,
            }
        };
        let report = check_axioms(member, &[2, 3, 5], mode)?;
        for (axiom, check) in [
            (2u8, &report.axiom2),
            (3, &report.axiom3),
            (5, &report.axiom5),
        ] {
            if !check.as_ref().is_some_and(|c| c.passed) {
                return Err(AlgebraError::AxiomPrecondition(axiom));
            }
        }
    }
    let mut comparable = true;
    let mut criterion = true;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            comparable &= stronger_than(a, b)? || stronger_than(b, a)?;
            let ab = a.compose(b)?;
            let ba = b.compose(a)?;
            criterion &=
                ab.extensionally_eq(a)? || ba.extensionally_eq(b)?;
        }
    }
    Ok(ChainCheck {
        pairwise_comparable: comparable,
        composition_criterion: criterion,
    })
}

/// Anything with a symbol length participates in the length pre-order.
pub trait SymbolLength {
    fn measure(&self) -> usize;
}

impl SymbolLength for Formula {
    fn measure(&self) -> usize {
        self.symbol_len()
    }
}

impl SymbolLength for Pattern {
    fn measure(&self) -> usize {
        self.symbol_len()
    }
}

impl SymbolLength for crate::word::Word {
    fn measure(&self) -> usize {
        self.len()
    }
}

/// The length pre-order on sets: every member of `left` is at most as long
/// as every member of `right`. Reflexive only on sets of uniform length,
/// and mutual ordering does not force set equality.
pub fn length_order<T: SymbolLength>(left: &[T], right: &[T]) -> Result<bool, AlgebraError> {
    if left.is_empty() || right.is_empty() {
        return Err(AlgebraError::EmptySet);
    }
    let max_left = left.iter().map(SymbolLength::measure).max().unwrap();
    let min_right = right.iter().map(SymbolLength::measure).min().unwrap();
    Ok(max_left <= min_right)
}

/// The set-lifted strength order on patterns: each member of `left` is
/// bounded by some comparable member of `right`.
pub fn better_than_sets(left: &BTreeSet<Pattern>, right: &BTreeSet<Pattern>) -> bool {
    left.iter().all(|f| {
        right
            .iter()
            .any(|g| f.better_than_or_equal(g) == Some(true))
    })
}

/// The uniform-length stratum at a fixed intensity: one flat formula per
/// base term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub index: u32,
    pub members: BTreeSet<Formula>,
}

impl Stratum {
    pub fn new(base: &[String], index: u32) -> Self {
        let members = base
            .iter()
            .map(|b| PerfectLanguage::pattern_formula(&Pattern::new(b.clone(), index)))
            .collect();
        Stratum { index, members }
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.members.iter().cloned().collect()
    }
}

/// Whether `set` is fixed by the operator.
pub fn is_deductive_system(op: &ClosureOperator, set: Mask) -> bool {
    op.apply(set) == set
}

/// A subset-minimal `F` of `b` with the same closure as `b`. The operator
/// must be finitary (axiom (4)), which over a finite universe is exactly
/// monotonicity: dropping an element can then only shrink the closure, so
/// greedy removal in canonical element order lands on a minimal set.
pub fn minimal_finite_basis(op: &ClosureOperator, b: Mask) -> Result<Mask, AlgebraError> {
    let mode = if op.universe().len() <= 12 {
        AuditMode::Exhaustive { cap: 12 }
    } else {
        AuditMode::Sampled {
            seed: 0,
            samples: 256,
        }
    };
    let report = check_axioms(op, &[4], mode)?;
    if !report.axiom4.as_ref().is_some_and(|c| c.passed) {
        return Err(AlgebraError::AxiomPrecondition(4));
    }
    let target = op.apply(b);
    let mut basis = b;
    for i in mask_elems(b) {
        let candidate = basis & !(1 << i);
        if op.apply(candidate) == target {
            basis = candidate;
        }
    }
    Ok(basis)
}

/// Result of reconstructing an uncapped closure from the capped chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainUnion {
    /// Union of the capped closures up to the stabilizing cap.
    pub union: BTreeSet<Formula>,
    /// The cap at which the union stops growing (the largest primitive
    /// index in the premises).
    pub stabilized_at: u32,
    /// The uncapped closure, for comparison.
    pub unlimited: BTreeSet<Formula>,
    /// Whether the union reproduces the uncapped closure. Holds whenever
    /// the premises are built from indexed primitives.
    pub agrees: bool,
}

/// Computes the capped closures of `premises` for every cap up to the
/// largest primitive index present, unions them, and compares against the
/// unrestricted closure.
pub fn chain_union_closure(premises: &BTreeSet<Formula>) -> ChainUnion {
    let max_index = premises
        .iter()
        .filter_map(Formula::max_prim_index)
        .max()
        .unwrap_or(0);
    let mut union = BTreeSet::new();
    let mut stabilized_at = 0;
    for cap in 0..=max_index {
        let at_cap = mp_close(premises, Cap::Index(cap));
        if !at_cap.is_subset(&union) {
            stabilized_at = cap;
        }
        union.extend(at_cap);
    }
    let unlimited = mp_close(premises, Cap::Unlimited);
    let agrees = union == unlimited;
    ChainUnion {
        union,
        stabilized_at,
        unlimited,
        agrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consequence::Universe;
    use crate::formula::{implies, prim};

    fn formula_universe(formulas: &[Formula]) -> (Universe, Vec<Formula>) {
        let labels: Vec<String> = formulas.iter().map(|f| f.to_string()).collect();
        (Universe::new(labels).unwrap(), formulas.to_vec())
    }

    /// Realizes a set-level closure as a mask operator over a fixed listing.
    fn operator_over(
        universe: Universe,
        elems: Vec<Formula>,
        close: impl Fn(&BTreeSet<Formula>) -> BTreeSet<Formula> + Send + Sync + 'static,
    ) -> ClosureOperator {
        ClosureOperator::from_rule(universe, move |mask| {
            let input: BTreeSet<Formula> =
                mask_elems(mask).map(|i| elems[i].clone()).collect();
            let output = close(&input);
            elems
                .iter()
                .enumerate()
                .filter(|(_, f)| output.contains(f))
                .fold(0, |m, (i, _)| m | 1 << i)
        })
    }

    fn mp_universe() -> (Universe, Vec<Formula>) {
        // Closed under taking consequents, so capped closures stay inside.
        formula_universe(&[
            prim(0),
            prim(1),
            prim(2),
            prim(3),
            implies(prim(0), prim(1)),
            implies(prim(1), prim(2)),
            implies(prim(2), prim(3)),
            implies(prim(0), prim(3)),
        ])
    }

    fn mp_operator(cap: Cap) -> ClosureOperator {
        let (u, elems) = mp_universe();
        operator_over(u, elems, move |b| mp_close(b, cap))
    }

    #[test]
    fn identity_below_everything() {
        let (u, elems) = mp_universe();
        let id = ClosureOperator::identity(u.clone());
        let upper = ClosureOperator::upper_unit(u.clone());
        let mp = operator_over(u, elems, |b| mp_close(b, Cap::Unlimited));
        assert!(stronger_than(&id, &mp).unwrap());
        assert!(stronger_than(&id, &upper).unwrap());
        assert!(stronger_than(&mp, &upper).unwrap());
        assert!(!stronger_than(&upper, &id).unwrap());
    }

    #[test]
    fn capped_closures_are_ordered() {
        for n in 0..3u32 {
            let weaker = mp_operator(Cap::Index(n));
            let stronger = mp_operator(Cap::Index(n + 1));
            assert!(stronger_than(&weaker, &stronger).unwrap());
        }
    }

    #[test]
    fn meet_of_identity_and_upper_unit() {
        let u = Universe::opaque(4).unwrap();
        let id = ClosureOperator::identity(u.clone());
        let upper = ClosureOperator::upper_unit(u);
        let (met, report) = meet(&id, &upper).unwrap();
        assert!(met.extensionally_eq(&id).unwrap());
        assert!(report.passed_all());

        let (met, _) = meet(&id, &id.clone()).unwrap();
        assert!(met.extensionally_eq(&id).unwrap());
    }

    #[test]
    fn meet_is_a_lower_bound() {
        let adjective = {
            let patterns: Vec<Pattern> = (0..2)
                .flat_map(|k| {
                    ["x", "y"]
                        .iter()
                        .map(move |b| Pattern::new(*b, k))
                })
                .collect();
            let labels: Vec<String> = patterns.iter().map(|p| p.to_string()).collect();
            let u = Universe::new(labels).unwrap();
            let elems = patterns.clone();
            ClosureOperator::from_rule(u, move |mask| {
                let input: BTreeSet<Pattern> =
                    mask_elems(mask).map(|i| elems[i].clone()).collect();
                let out = crate::engines::pattern::adjective_close(&input);
                elems
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| out.contains(p))
                    .fold(0, |m, (i, _)| m | 1 << i)
            })
        };
        let upper = ClosureOperator::upper_unit(adjective.universe().clone());
        let (met, report) = meet(&adjective, &upper).unwrap();
        assert!(stronger_than(&met, &adjective).unwrap());
        assert!(stronger_than(&met, &upper).unwrap());
        assert!(report.passed_all());
    }

    #[test]
    fn capped_family_is_a_chain() {
        let family: Vec<ClosureOperator> =
            (0..3).map(|n| mp_operator(Cap::Index(n))).collect();
        let check = is_chain(&family).unwrap();
        assert!(check.is_chain());
        assert!(check.criteria_agree());
    }

    #[test]
    fn identity_and_upper_unit_chain() {
        let u = Universe::opaque(3).unwrap();
        let family = vec![
            ClosureOperator::identity(u.clone()),
            ClosureOperator::upper_unit(u),
        ];
        let check = is_chain(&family).unwrap();
        assert!(check.is_chain() && check.criteria_agree());
    }

    #[test]
    fn incomparable_pair_is_not_a_chain() {
        // Two closures on {0,1,2} that disagree on two singletons.
        let u = Universe::opaque(3).unwrap();
        let fix = |extra: Mask| {
            ClosureOperator::from_rule(u.clone(), move |b| {
                if b == 0 {
                    0
                } else {
                    b | extra
                }
            })
        };
        let family = vec![fix(0b010), fix(0b100)];
        let check = is_chain(&family).unwrap();
        assert!(!check.is_chain());
        assert!(check.criteria_agree());
    }

    #[test]
    fn chain_precondition_enforced() {
        let u = Universe::opaque(3).unwrap();
        // Drops elements: fails extensiveness.
        let bad = ClosureOperator::from_rule(u, |_| 0b001);
        assert!(matches!(
            is_chain(&[bad]),
            Err(AlgebraError::AxiomPrecondition(2))
        ));
    }

    #[test]
    fn strata_are_length_ordered() {
        let base: Vec<String> = vec!["b".into(), "k".into()];
        let g1 = Stratum::new(&base, 1);
        let g2 = Stratum::new(&base, 2);
        assert!(length_order(&g1.formulas(), &g2.formulas()).unwrap());
        assert!(!length_order(&g2.formulas(), &g1.formulas()).unwrap());
        assert!(length_order(&g1.formulas(), &g1.formulas()).unwrap());
        assert_ne!(g1, g2);
        assert!(g1.members.intersection(&g2.members).next().is_none());
    }

    #[test]
    fn mutual_length_order_without_equality() {
        let left = vec![prim(0)];
        let right = vec![prim(1)];
        assert!(length_order(&left, &right).unwrap());
        assert!(length_order(&right, &left).unwrap());
        assert_ne!(left, right);
        assert!(matches!(
            length_order(&Vec::<Formula>::new(), &right),
            Err(AlgebraError::EmptySet)
        ));
    }

    #[test]
    fn deductive_systems() {
        let (u, elems) = mp_universe();
        let op = operator_over(u.clone(), elems.clone(), |b| mp_close(b, Cap::Unlimited));
        // Any closure output is fixed.
        let closed = op.apply(0b10001);
        assert!(is_deductive_system(&op, closed));
        // {P0, P0 -> P1} is not: P1 is missing.
        let open = u
            .labels_to_mask(["P0", "(P0->P1)"])
            .unwrap();
        assert!(!is_deductive_system(&op, open));
    }

    #[test]
    fn truth_sets_are_deductive_systems() {
        use crate::engines::semantic::truth_set;
        use crate::formula::Atom;
        use std::collections::BTreeMap;

        let (u, elems) = mp_universe();
        let op = operator_over(u.clone(), elems.clone(), |b| mp_close(b, Cap::Unlimited));
        let space: BTreeSet<Formula> = elems.iter().cloned().collect();
        // Every valuation of the four primitives yields a fixed set.
        for bits in 0..16u32 {
            let valuation: BTreeMap<Atom, bool> = (0..4)
                .map(|i| (Atom::Prim(i), bits >> i & 1 == 1))
                .collect();
            let t = truth_set(&space, &valuation);
            let mask = u
                .labels_to_mask(t.iter().map(|f| f.to_string()))
                .unwrap();
            assert!(is_deductive_system(&op, mask), "valuation {bits:04b}");
        }
    }

    #[test]
    fn minimal_basis_examples() {
        let u = Universe::opaque(4).unwrap();
        let id = ClosureOperator::identity(u.clone());
        assert_eq!(minimal_finite_basis(&id, 0b1011).unwrap(), 0b1011);

        let (fu, elems) = mp_universe();
        let op = operator_over(fu.clone(), elems, |b| mp_close(b, Cap::Unlimited));
        let b = fu.labels_to_mask(["P0", "(P0->P1)", "P1"]).unwrap();
        let basis = minimal_finite_basis(&op, b).unwrap();
        assert_eq!(basis, fu.labels_to_mask(["P0", "(P0->P1)"]).unwrap());
        assert_eq!(op.apply(basis), op.apply(b));
    }

    #[test]
    fn minimal_basis_is_subset_minimal() {
        let (fu, elems) = mp_universe();
        let op = operator_over(fu.clone(), elems, |b| mp_close(b, Cap::Unlimited));
        for b in [0b11111111u64, 0b10110, 0b01111] {
            let basis = minimal_finite_basis(&op, b).unwrap();
            let target = op.apply(b);
            assert_eq!(op.apply(basis), target);
            // Exhaustive: no proper subset reproduces the closure.
            let mut sub = basis;
            while sub != 0 {
                sub = (sub - 1) & basis;
                if sub != basis {
                    assert_ne!(op.apply(sub), target, "subset {sub:b} of {basis:b}");
                }
                if sub == 0 {
                    break;
                }
            }
        }
    }

    #[test]
    fn adjective_basis_keeps_the_strongest() {
        let patterns: Vec<Pattern> = (0..3).map(|k| Pattern::new("bold", k)).collect();
        let labels: Vec<String> = patterns.iter().map(|p| p.to_string()).collect();
        let u = Universe::new(labels).unwrap();
        let elems = patterns.clone();
        let op = ClosureOperator::from_rule(u.clone(), move |mask| {
            let input: BTreeSet<Pattern> = mask_elems(mask).map(|i| elems[i].clone()).collect();
            let out = crate::engines::pattern::adjective_close(&input);
            patterns
                .iter()
                .enumerate()
                .filter(|(_, p)| out.contains(p))
                .fold(0, |m, (i, _)| m | 1 << i)
        });
        let everything = u.full_mask();
        let basis = minimal_finite_basis(&op, everything).unwrap();
        let strongest = u
            .labels_to_mask(["very,|||very,|||bold"])
            .unwrap();
        assert_eq!(basis, strongest);
    }

    #[test]
    fn set_lifted_strength_order() {
        let a: BTreeSet<Pattern> = [Pattern::new("bold", 0), Pattern::new("kind", 1)].into();
        let d: BTreeSet<Pattern> = [Pattern::new("bold", 2), Pattern::new("kind", 1)].into();
        assert!(better_than_sets(&a, &d));
        assert!(!better_than_sets(&d, &a));
    }

    #[test]
    fn chain_union_matches_uncapped() {
        let premises: BTreeSet<Formula> = [prim(0), implies(prim(0), prim(1))].into();
        let out = chain_union_closure(&premises);
        assert!(out.agrees);
        assert_eq!(out.stabilized_at, 1);
        assert!(out.union.contains(&prim(1)));

        // No implications: stable immediately.
        let flat: BTreeSet<Formula> = [prim(0), prim(3)].into();
        let out = chain_union_closure(&flat);
        assert!(out.agrees);
        assert_eq!(out.union, flat);

        // High-index premises stabilize only at their top subscript.
        let high: BTreeSet<Formula> = [prim(2), implies(prim(2), prim(0))].into();
        let out = chain_union_closure(&high);
        assert!(out.agrees);
        assert_eq!(out.stabilized_at, 2);
    }
}
