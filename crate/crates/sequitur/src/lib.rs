//! Finitary closure-operator logic: word codecs, deductive processes, and
//! the deduction engines and operator algebra built on them.
//!
//! The crate has five layers, one module each:
//!
//! * [`word`] — words over a finite alphabet, their bijective numeric
//!   codes, and the partial sequences that reassemble a word from joined
//!   segments in inverse index order.
//! * [`consequence`] — deductive processes and closure operators over a
//!   finite universe, axiom audits with witnesses, and transport along
//!   injections.
//! * [`engines`] — concrete closures: adjective reasoning over graded
//!   behavior patterns, trivial and strong reasoning from the perfect
//!   (with a bounded proof-search oracle), plain and index-capped modus
//!   ponens, and semantic propositional closure.
//! * [`algebra`] — the pointwise order and meet of operators, chain
//!   criteria, length orders, deductive systems, and minimal bases.
//! * [`vset`] — hereditarily finite sets with atoms, transitive closures,
//!   and depth-bounded cumulative hierarchies.
//!
//! Everything is immutable after construction and sized for exhaustive
//! checking: universes are bitmask-backed and capped, generated languages
//! are truncated by a depth parameter, and every engine is audited against
//! the closure axioms in tests. The [`battery`] module bundles those
//! checks into a reproducible pass/fail suite; the `sequitur` binary in
//! the companion CLI crate exposes it as `sequitur suite`.
//!
//! ```
//! use sequitur::engines::pattern::{adjective_close, Pattern};
//! use std::collections::BTreeSet;
//!
//! let premise: BTreeSet<Pattern> = [Pattern::new("bold", 2)].into();
//! let closed = adjective_close(&premise);
//! assert_eq!(closed.len(), 3); // bold, very,|||bold, very,|||very,|||bold
//! ```

pub mod algebra;
pub mod battery;
pub mod consequence;
pub mod engines;
pub mod formula;
pub mod vset;
pub mod word;

pub use formula::{Atom, Formula};
