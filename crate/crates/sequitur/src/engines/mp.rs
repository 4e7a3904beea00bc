//! Modus ponens closure, plain or restricted by primitive index.
//!
//! The capped rule admits an inference from `A` and `A -> B` only when every
//! atom in the primitive expansions of both premises is an indexed primitive
//! with subscript at most the cap. The intensifier, perfect, and named atoms
//! carry no index, so they never satisfy a finite cap. Saturation terminates
//! because every conclusion is a subterm of its implication premise.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::formula::Formula;

/// Index restriction for the modus ponens rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cap {
    Unlimited,
    Index(u32),
}

impl Cap {
    fn admits(&self, antecedent: &Formula, implication: &Formula) -> bool {
        match self {
            Cap::Unlimited => true,
            Cap::Index(n) => {
                antecedent.prim_indices_within(*n) && implication.prim_indices_within(*n)
            }
        }
    }
}

/// Forward-chaining saturation of a finite set under (possibly capped)
/// modus ponens.
pub fn mp_close(input: &BTreeSet<Formula>, cap: Cap) -> BTreeSet<Formula> {
    let mut out = input.clone();
    loop {
        let mut additions = Vec::new();
        for f in &out {
            if let Formula::Implies(x, y) = f {
                if !out.contains(y) && out.contains(x) && cap.admits(x, f) {
                    additions.push((**y).clone());
                }
            }
        }
        if additions.is_empty() {
            return out;
        }
        out.extend(additions);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{and, implies, prim, term, very};

    fn set(items: impl IntoIterator<Item = Formula>) -> BTreeSet<Formula> {
        items.into_iter().collect()
    }

    #[test]
    fn single_step() {
        let b = set([prim(0), implies(prim(0), prim(1))]);
        let closed = mp_close(&b, Cap::Unlimited);
        assert!(closed.contains(&prim(1)));
        assert_eq!(closed.len(), 3);
    }

    #[test]
    fn cap_blocks_high_indices() {
        // Premises P_n and P_n -> P_m with n < m: the capped rule at n never
        // fires, the rule at m does.
        for (n, m) in [(0u32, 1u32), (1, 3), (2, 4)] {
            let b = set([prim(n), implies(prim(n), prim(m))]);
            let at_n = mp_close(&b, Cap::Index(n));
            assert!(!at_n.contains(&prim(m)));
            let at_m = mp_close(&b, Cap::Index(m));
            assert!(at_m.contains(&prim(m)));
        }
    }

    #[test]
    fn caps_are_monotone() {
        let b = set([
            prim(0),
            implies(prim(0), prim(2)),
            implies(prim(2), prim(1)),
        ]);
        let mut previous = mp_close(&b, Cap::Index(0));
        for n in 1..=4 {
            let current = mp_close(&b, Cap::Index(n));
            assert!(previous.is_subset(&current));
            previous = current;
        }
        assert_eq!(previous, mp_close(&b, Cap::Unlimited));
    }

    #[test]
    fn chained_inferences_saturate() {
        let b = set([
            prim(0),
            implies(prim(0), implies(prim(1), prim(2))),
            prim(1),
        ]);
        let closed = mp_close(&b, Cap::Unlimited);
        assert!(closed.contains(&prim(2)));
    }

    #[test]
    fn unindexed_atoms_never_pass_a_cap() {
        let b = set([very(), implies(very(), term("bold"))]);
        assert!(!mp_close(&b, Cap::Index(10)).contains(&term("bold")));
        assert!(mp_close(&b, Cap::Unlimited).contains(&term("bold")));
        // A conjunction premise works uncapped too.
        let c = set([
            and(prim(0), prim(1)),
            implies(and(prim(0), prim(1)), prim(2)),
        ]);
        assert!(mp_close(&c, Cap::Unlimited).contains(&prim(2)));
    }
}
