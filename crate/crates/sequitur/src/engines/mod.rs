//! Concrete deduction engines over generated languages: adjective
//! reasoning, the two kinds of reasoning from the perfect, plain and
//! index-capped modus ponens, and semantic propositional closure.

pub mod mp;
pub mod pattern;
pub mod perfect;
pub mod semantic;

use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("formula {0} is not a flat intensifier conjunction")]
    NotFlatForm(Formula),
    #[error("formula {0} lies outside the generated language")]
    OutsideLanguage(Formula),
    #[error("primitive index {index} exceeds the truth-table bound {bound}")]
    IndexOverflow { index: u32, bound: u32 },
    #[error("too many distinct atoms ({count}) for a truth table bounded at {bound}")]
    AtomOverflow { count: usize, bound: u32 },
    #[error("proof search exhausted its state budget after {visited} states")]
    BudgetExceeded { visited: usize },
}
