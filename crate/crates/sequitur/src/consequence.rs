//! Deductive processes and closure operators over a finite universe.
//!
//! A deductive process is a finite relation between finite premise sets and
//! single conclusions. Every total process generates an operator on subsets
//! of the universe, and every operator yields a process back; the two
//! constructions are mutually inverse on operators satisfying the closure
//! axioms. This module represents both sides, audits the axioms
//! (extensiveness, idempotence, finitary character, monotonicity) either
//! exhaustively or by seeded sampling, and transports processes and
//! operators along injections.
//!
//! Subsets of the universe are bitmasks over element indices, so universes
//! are capped at 63 elements; exhaustive audits enumerate all `2^|A|`
//! subsets and are intended for universes of a dozen elements or so.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// A subset of the universe, one bit per element index.
pub type Mask = u64;

/// Iterates the element indices present in a mask.
pub fn mask_elems(mask: Mask) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConsequenceError {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("universe of size {size} exceeds the supported cap {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("duplicate element {0:?} in universe")]
    DuplicateElement(String),
    #[error("deductive process must be nonempty")]
    EmptyProcess,
    #[error("process is not total: no premise set applies inside {witness:?}")]
    NotTotal { witness: Vec<String> },
    #[error("operands are defined over different universes")]
    UniverseMismatch,
    #[error("map is not injective: {0:?} is hit twice")]
    NotInjective(String),
    #[error("element index {0} is outside the universe")]
    ElementOutOfRange(usize),
}

/// A finite nonempty set of atoms, with a fixed element order that all
/// masks refer to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    labels: Vec<String>,
}

impl Universe {
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, ConsequenceError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(ConsequenceError::EmptyUniverse);
        }
        if labels.len() > 63 {
            return Err(ConsequenceError::UniverseTooLarge {
                size: labels.len(),
                cap: 63,
            });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(ConsequenceError::DuplicateElement(l.clone()));
            }
        }
        Ok(Universe { labels })
    }

    /// `n` opaque elements named `e0`, `e1`, ….
    pub fn opaque(n: usize) -> Result<Self, ConsequenceError> {
        Universe::new((0..n).map(|i| format!("e{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The mask with every element present.
    pub fn full_mask(&self) -> Mask {
        if self.labels.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.labels.len()) - 1
        }
    }

    pub fn mask_to_labels(&self, mask: Mask) -> Vec<String> {
        mask_elems(mask).map(|i| self.labels[i].clone()).collect()
    }

    pub fn labels_to_mask<S: AsRef<str>>(
        &self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Mask, ConsequenceError> {
        let mut mask = 0;
        for l in labels {
            let i = self
                .index_of(l.as_ref())
                .ok_or_else(|| ConsequenceError::DuplicateElement(l.as_ref().to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }
}

/// A deductive process: a finite set of (premises, conclusion) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    universe: Universe,
    pairs: BTreeSet<(Mask, usize)>,
}

/// Flags computed by [`Process::classify`]. The two ordinary conditions are
/// reported separately: weakening admits any finite superset of a premise
/// set, cut composes conclusions back into premises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessClass {
    pub total: bool,
    pub weakening: bool,
    pub cut: bool,
    pub singular: bool,
}

impl ProcessClass {
    pub fn ordinary(&self) -> bool {
        self.weakening && self.cut
    }
}

impl Process {
    pub fn new(
        universe: Universe,
        pairs: impl IntoIterator<Item = (Mask, usize)>,
    ) -> Result<Self, ConsequenceError> {
        let pairs: BTreeSet<(Mask, usize)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(ConsequenceError::EmptyProcess);
        }
        let full = universe.full_mask();
        for &(premises, conclusion) in &pairs {
            if premises & !full != 0 || conclusion >= universe.len() {
                return Err(ConsequenceError::ElementOutOfRange(conclusion));
            }
        }
        Ok(Process { universe, pairs })
    }

    /// The process `{({x}, x) : x in A}`.
    pub fn singular_identity(universe: Universe) -> Self {
        let pairs = (0..universe.len()).map(|i| (1u64 << i, i)).collect();
        Process { universe, pairs }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn pairs(&self) -> &BTreeSet<(Mask, usize)> {
        &self.pairs
    }

    /// Whether some pair applies inside every nonempty subset.
    pub fn is_total(&self) -> bool {
        self.uncovered_subset().is_none()
    }

    fn uncovered_subset(&self) -> Option<Mask> {
        if self.pairs.iter().any(|&(f, _)| f == 0) {
            return None;
        }
        (1..=self.universe.full_mask())
            .find(|&b| !self.pairs.iter().any(|&(f, _)| f & !b == 0))
    }

    pub fn classify(&self) -> ProcessClass {
        let full = self.universe.full_mask();
        let total = self.is_total();

        let mut weakening = true;
        'outer: for &(premises, conclusion) in &self.pairs {
            // Enumerate strict supersets by adding missing elements.
            let mut sup = premises;
            loop {
                sup = (sup + 1) | premises;
                if sup > full {
                    break;
                }
                if !self.pairs.contains(&(sup, conclusion)) {
                    weakening = false;
                    break 'outer;
                }
            }
        }

        let premise_sets: BTreeSet<Mask> = self.pairs.iter().map(|&(f, _)| f).collect();
        let mut cut = true;
        'cut: for &base in &premise_sets {
            let conclusions: Mask = self
                .pairs
                .iter()
                .filter(|&&(f, _)| f == base)
                .fold(0, |m, &(_, c)| m | 1 << c);
            for &(mid, c) in &self.pairs {
                if mid & !conclusions == 0 && !self.pairs.contains(&(base, c)) {
                    cut = false;
                    break 'cut;
                }
            }
        }

        let singular = (0..self.universe.len()).all(|i| self.pairs.contains(&(1 << i, i)));

        ProcessClass {
            total,
            weakening,
            cut,
            singular,
        }
    }
}

/// A total map on subsets of a finite universe.
#[derive(Clone)]
pub struct ClosureOperator {
    universe: Universe,
    realization: Realization,
}

#[derive(Clone)]
enum Realization {
    Table(Arc<Vec<Mask>>),
    Rule(Arc<dyn Fn(Mask) -> Mask + Send + Sync>),
}

impl fmt::Debug for ClosureOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.realization {
            Realization::Table(_) => "table",
            Realization::Rule(_) => "rule",
        };
        write!(
            f,
            "ClosureOperator({kind} over {} elements)",
            self.universe.len()
        )
    }
}

impl ClosureOperator {
    /// Wraps a rule-driven closure procedure. The rule must keep its output
    /// inside the universe; [`apply`](Self::apply) enforces this.
    pub fn from_rule(
        universe: Universe,
        rule: impl Fn(Mask) -> Mask + Send + Sync + 'static,
    ) -> Self {
        ClosureOperator {
            universe,
            realization: Realization::Rule(Arc::new(rule)),
        }
    }

    /// Builds an explicit table by evaluating a rule on every subset.
    /// Intended for small universes; the table has `2^|A|` rows.
    pub fn tabulate(
        universe: Universe,
        rule: impl Fn(Mask) -> Mask,
    ) -> Result<Self, ConsequenceError> {
        if universe.len() > 24 {
            return Err(ConsequenceError::UniverseTooLarge {
                size: universe.len(),
                cap: 24,
            });
        }
        let full = universe.full_mask();
        let table: Vec<Mask> = (0..=full).map(|b| rule(b) & full).collect();
        Ok(ClosureOperator {
            universe,
            realization: Realization::Table(Arc::new(table)),
        })
    }

    /// The identity operator.
    pub fn identity(universe: Universe) -> Self {
        ClosureOperator::from_rule(universe, |b| b)
    }

    /// The upper unit: every subset maps to the whole universe.
    pub fn upper_unit(universe: Universe) -> Self {
        let full = universe.full_mask();
        ClosureOperator::from_rule(universe, move |_| full)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn apply(&self, subset: Mask) -> Mask {
        let full = self.universe.full_mask();
        let b = subset & full;
        match &self.realization {
            Realization::Table(t) => t[b as usize],
            Realization::Rule(r) => r(b) & full,
        }
    }

    /// Applies the operator to labelled elements, for report output.
    pub fn apply_labels<S: AsRef<str>>(
        &self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Vec<String>, ConsequenceError> {
        let mask = self.universe.labels_to_mask(labels)?;
        Ok(self.universe.mask_to_labels(self.apply(mask)))
    }

    /// Precomputes the table form of this operator.
    pub fn to_table(&self) -> Result<Self, ConsequenceError> {
        match &self.realization {
            Realization::Table(_) => Ok(self.clone()),
            Realization::Rule(r) => {
                let rule = Arc::clone(r);
                ClosureOperator::tabulate(self.universe.clone(), move |b| rule(b))
            }
        }
    }

    /// Extensional equality: the same output on every subset.
    pub fn extensionally_eq(&self, other: &ClosureOperator) -> Result<bool, ConsequenceError> {
        if self.universe != other.universe {
            return Err(ConsequenceError::UniverseMismatch);
        }
        if self.universe.len() > 24 {
            return Err(ConsequenceError::UniverseTooLarge {
                size: self.universe.len(),
                cap: 24,
            });
        }
        Ok((0..=self.universe.full_mask()).all(|b| self.apply(b) == other.apply(b)))
    }

    /// Pointwise composition `self(other(X))`.
    pub fn compose(&self, other: &ClosureOperator) -> Result<ClosureOperator, ConsequenceError> {
        if self.universe != other.universe {
            return Err(ConsequenceError::UniverseMismatch);
        }
        let a = self.clone();
        let b = other.clone();
        Ok(ClosureOperator::from_rule(self.universe.clone(), move |x| {
            a.apply(b.apply(x))
        }))
    }
}

/// The operator generated by a total process: a conclusion enters the
/// closure of `B` exactly when some premise set inside `B` yields it.
pub fn generated_operator(process: &Process) -> Result<ClosureOperator, ConsequenceError> {
    if let Some(witness) = process.uncovered_subset() {
        return Err(ConsequenceError::NotTotal {
            witness: process.universe.mask_to_labels(witness),
        });
    }
    let pairs: Vec<(Mask, usize)> = process.pairs.iter().copied().collect();
    Ok(ClosureOperator::from_rule(
        process.universe.clone(),
        move |b| {
            pairs
                .iter()
                .filter(|&&(f, _)| f & !b == 0)
                .fold(0, |m, &(_, c)| m | 1 << c)
        },
    ))
}

/// The process extracted from an operator: every finite premise set is
/// paired with each element of its closure.
pub fn process_of_operator(op: &ClosureOperator) -> Result<Process, ConsequenceError> {
    let full = op.universe().full_mask();
    let mut pairs = BTreeSet::new();
    for premises in 0..=full {
        let closed = op.apply(premises);
        for c in mask_elems(closed) {
            pairs.insert((premises, c));
        }
    }
    if pairs.is_empty() {
        // Possible only for an operator that sends everything to the empty
        // set; such a map fails axiom (2) but still yields a relation shape.
        return Err(ConsequenceError::EmptyProcess);
    }
    Process::new(op.universe().clone(), pairs)
}

pub mod audit {
    //! Axiom audits with witnesses.

    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// How to quantify over subsets during an audit.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
    pub enum AuditMode {
        /// Enumerate every subset (and every subset pair). Requires the
        /// universe to fit under `cap` elements.
        Exhaustive { cap: usize },
        /// Draw `samples` subsets (pairs) from a seeded generator.
        Sampled { seed: u64, samples: usize },
    }

    impl Default for AuditMode {
        fn default() -> Self {
            AuditMode::Exhaustive { cap: 12 }
        }
    }

    /// A failed instance, as element labels.
    #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
    pub struct Witness {
        pub subset: Vec<String>,
        pub other: Option<Vec<String>>,
    }

    #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
    pub struct AxiomCheck {
        pub passed: bool,
        pub witness: Option<Witness>,
    }

    /// Outcome of auditing one operator. A `None` field means the axiom was
    /// not requested.
    #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
    pub struct AxiomReport {
        pub axiom2: Option<AxiomCheck>,
        pub axiom3: Option<AxiomCheck>,
        pub axiom4: Option<AxiomCheck>,
        pub axiom5: Option<AxiomCheck>,
    }

    impl AxiomReport {
        pub fn passed_all(&self) -> bool {
            [&self.axiom2, &self.axiom3, &self.axiom4, &self.axiom5]
                .into_iter()
                .flatten()
                .all(|c| c.passed)
        }
    }

    fn witness(u: &Universe, subset: Mask, other: Option<Mask>) -> Option<Witness> {
        Some(Witness {
            subset: u.mask_to_labels(subset),
            other: other.map(|m| u.mask_to_labels(m)),
        })
    }

    /// Checks the requested axioms, returning pass/fail plus a witness for
    /// each failure.
    pub fn check_axioms(
        op: &ClosureOperator,
        which: &[u8],
        mode: AuditMode,
    ) -> Result<AxiomReport, ConsequenceError> {
        let u = op.universe().clone();
        let op = match mode {
            AuditMode::Exhaustive { cap } => {
                if u.len() > cap {
                    return Err(ConsequenceError::UniverseTooLarge {
                        size: u.len(),
                        cap,
                    });
                }
                op.to_table()?
            }
            AuditMode::Sampled { .. } => op.clone(),
        };
        let full = u.full_mask();

        let singles: Vec<Mask> = match mode {
            AuditMode::Exhaustive { .. } => (0..=full).collect(),
            AuditMode::Sampled { seed, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples).map(|_| rng.gen::<u64>() & full).collect()
            }
        };
        let pairs: Vec<(Mask, Mask)> = match mode {
            AuditMode::Exhaustive { .. } => {
                let mut out = Vec::new();
                for d in 0..=full {
                    // Submask walk: every b with b subset of d.
                    let mut b = d;
                    loop {
                        out.push((b, d));
                        if b == 0 {
                            break;
                        }
                        b = (b - 1) & d;
                    }
                }
                out
            }
            AuditMode::Sampled { seed, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
                (0..samples)
                    .map(|_| {
                        let d = rng.gen::<u64>() & full;
                        let b = rng.gen::<u64>() & d;
                        (b, d)
                    })
                    .collect()
            }
        };

        let mut report = AxiomReport {
            axiom2: None,
            axiom3: None,
            axiom4: None,
            axiom5: None,
        };

        if which.contains(&2) {
            let mut check = AxiomCheck {
                passed: true,
                witness: None,
            };
            for &b in &singles {
                let c = op.apply(b);
                if b & !c != 0 || c & !full != 0 {
                    check = AxiomCheck {
                        passed: false,
                        witness: witness(&u, b, None),
                    };
                    break;
                }
            }
            report.axiom2 = Some(check);
        }
        if which.contains(&3) {
            let mut check = AxiomCheck {
                passed: true,
                witness: None,
            };
            for &b in &singles {
                let c = op.apply(b);
                if op.apply(c) != c {
                    check = AxiomCheck {
                        passed: false,
                        witness: witness(&u, b, None),
                    };
                    break;
                }
            }
            report.axiom3 = Some(check);
        }
        if which.contains(&4) {
            // On a finite universe every subset is finite, so the axiom
            // reads: the closure of B is the union of the closures of B's
            // subsets. The union always contains C(B); failures are subsets
            // whose closure escapes.
            let mut check = AxiomCheck {
                passed: true,
                witness: None,
            };
            for &(f, b) in &pairs {
                if op.apply(f) & !op.apply(b) != 0 {
                    check = AxiomCheck {
                        passed: false,
                        witness: witness(&u, b, Some(f)),
                    };
                    break;
                }
            }
            report.axiom4 = Some(check);
        }
        if which.contains(&5) {
            let mut check = AxiomCheck {
                passed: true,
                witness: None,
            };
            for &(b, d) in &pairs {
                if op.apply(b) & !op.apply(d) != 0 {
                    check = AxiomCheck {
                        passed: false,
                        witness: witness(&u, b, Some(d)),
                    };
                    break;
                }
            }
            report.axiom5 = Some(check);
        }
        Ok(report)
    }

    /// Re-evaluates a reported witness against the stated axiom. Used to
    /// guarantee that failure reports are real.
    pub fn recheck_witness(op: &ClosureOperator, axiom: u8, w: &Witness) -> bool {
        let u = op.universe();
        let subset = u.labels_to_mask(w.subset.iter()).unwrap_or(0);
        let other = w.other.as_ref().map(|o| u.labels_to_mask(o.iter()).unwrap_or(0));
        match (axiom, other) {
            (2, _) => subset & !op.apply(subset) != 0,
            (3, _) => {
                let c = op.apply(subset);
                op.apply(c) != c
            }
            (4, Some(f)) => op.apply(f) & !op.apply(subset) != 0,
            (5, Some(d)) => op.apply(subset) & !op.apply(d) != 0,
            _ => false,
        }
    }
}

/// An injection from one universe into another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    source: Universe,
    target: Universe,
    map: Vec<usize>,
}

impl Injection {
    pub fn new(
        source: Universe,
        target: Universe,
        map: Vec<usize>,
    ) -> Result<Self, ConsequenceError> {
        if map.len() != source.len() {
            return Err(ConsequenceError::ElementOutOfRange(map.len()));
        }
        let mut hit = BTreeSet::new();
        for &t in &map {
            if t >= target.len() {
                return Err(ConsequenceError::ElementOutOfRange(t));
            }
            if !hit.insert(t) {
                return Err(ConsequenceError::NotInjective(target.label(t).to_string()));
            }
        }
        Ok(Injection {
            source,
            target,
            map,
        })
    }

    pub fn identity(u: &Universe) -> Self {
        Injection {
            source: u.clone(),
            target: u.clone(),
            map: (0..u.len()).collect(),
        }
    }

    pub fn source(&self) -> &Universe {
        &self.source
    }

    /// The image of the source, as a universe of its own. Transported
    /// objects live here: outside the image the transported relation says
    /// nothing.
    pub fn image_universe(&self) -> Universe {
        let mut idx: Vec<usize> = self.map.clone();
        idx.sort_unstable();
        Universe::new(idx.into_iter().map(|t| self.target.label(t).to_string()))
            .expect("image of a nonempty universe is nonempty")
    }

    /// Forward image of a source mask, in image-universe coordinates.
    pub fn push_mask(&self, source_mask: Mask, image: &Universe) -> Mask {
        let mut out = 0;
        for i in mask_elems(source_mask) {
            let label = self.target.label(self.map[i]);
            out |= 1 << image.index_of(label).expect("image universe covers the map");
        }
        out
    }

    /// Inverse image of an image mask, in source coordinates.
    pub fn pull_mask(&self, image_mask: Mask, image: &Universe) -> Mask {
        let mut out = 0;
        for j in mask_elems(image_mask) {
            let label = image.label(j);
            let t = self.target.index_of(label).expect("image label is in target");
            if let Some(i) = self.map.iter().position(|&m| m == t) {
                out |= 1 << i;
            }
        }
        out
    }
}

/// Transports an operator along an injection; the result is defined over
/// the image universe.
pub fn transport_operator(inj: &Injection, op: &ClosureOperator) -> Result<ClosureOperator, ConsequenceError> {
    if op.universe() != inj.source() {
        return Err(ConsequenceError::UniverseMismatch);
    }
    let image = inj.image_universe();
    let inj = inj.clone();
    let op = op.clone();
    let image_for_rule = image.clone();
    Ok(ClosureOperator::from_rule(image, move |b| {
        let pulled = inj.pull_mask(b, &image_for_rule);
        inj.push_mask(op.apply(pulled), &image_for_rule)
    }))
}

/// Transports a process along an injection, pair by pair.
pub fn transport_process(inj: &Injection, k: &Process) -> Result<Process, ConsequenceError> {
    if k.universe() != inj.source() {
        return Err(ConsequenceError::UniverseMismatch);
    }
    let image = inj.image_universe();
    let pairs: BTreeSet<(Mask, usize)> = k
        .pairs()
        .iter()
        .map(|&(f, c)| {
            let fm = inj.push_mask(f, &image);
            let cm = inj.push_mask(1 << c, &image);
            (fm, mask_elems(cm).next().unwrap())
        })
        .collect();
    Process::new(image, pairs)
}

pub mod sample {
    //! Seeded generators for random deductive processes, used by audits and
    //! the verification battery.

    use super::*;

    /// A random total process: every singleton premise yields at least one
    /// conclusion, plus extra noise pairs.
    pub fn random_total_process(rng: &mut impl Rng, universe: &Universe) -> Process {
        let n = universe.len();
        let mut pairs = BTreeSet::new();
        for i in 0..n {
            pairs.insert((1u64 << i, rng.gen_range(0..n)));
        }
        let extra = rng.gen_range(0..=2 * n);
        for _ in 0..extra {
            let f = rng.gen::<u64>() & universe.full_mask();
            let c = rng.gen_range(0..n);
            pairs.insert((f, c));
        }
        Process::new(universe.clone(), pairs).expect("generator emits pairs")
    }

    /// Closes a process under weakening and cut while keeping it singular,
    /// yielding a total, ordinary, singular process.
    pub fn ordinary_singular_closure(k: &Process) -> Process {
        let universe = k.universe().clone();
        let full = universe.full_mask();
        let mut pairs = k.pairs().clone();
        for i in 0..universe.len() {
            pairs.insert((1 << i, i));
        }
        loop {
            let before = pairs.len();
            // Weakening: supersets of known premise sets conclude the same.
            let snapshot: Vec<(Mask, usize)> = pairs.iter().copied().collect();
            for (f, c) in &snapshot {
                let mut sup = *f;
                loop {
                    sup = (sup + 1) | f;
                    if sup > full {
                        break;
                    }
                    pairs.insert((sup, *c));
                }
            }
            // Cut: conclusions of a premise set feed pairs whose premises
            // they cover.
            let snapshot: Vec<(Mask, usize)> = pairs.iter().copied().collect();
            let premise_sets: BTreeSet<Mask> = snapshot.iter().map(|&(f, _)| f).collect();
            for &base in &premise_sets {
                let conclusions: Mask = snapshot
                    .iter()
                    .filter(|&&(f, _)| f == base)
                    .fold(0, |m, &(_, c)| m | 1 << c);
                for &(mid, c) in &snapshot {
                    if mid & !conclusions == 0 {
                        pairs.insert((base, c));
                    }
                }
            }
            if pairs.len() == before {
                break;
            }
        }
        Process::new(universe, pairs).expect("closure keeps pairs")
    }

    /// A seeded random total + ordinary + singular process.
    pub fn random_tos_process(rng: &mut impl Rng, universe: &Universe) -> Process {
        ordinary_singular_closure(&random_total_process(rng, universe))
    }

    /// A random injection from `universe` into a target of `target_size`
    /// opaque elements.
    pub fn random_injection(
        rng: &mut impl Rng,
        universe: &Universe,
        target_size: usize,
    ) -> Injection {
        assert!(target_size >= universe.len());
        let target = Universe::opaque(target_size).expect("target size within cap");
        let mut slots: Vec<usize> = (0..target_size).collect();
        // Fisher-Yates prefix.
        for i in 0..universe.len() {
            let j = rng.gen_range(i..slots.len());
            slots.swap(i, j);
        }
        Injection::new(universe.clone(), target, slots[..universe.len()].to_vec())
            .expect("distinct slots are injective")
    }
}

#[cfg(test)]
mod tests {
    use super::audit::{check_axioms, recheck_witness, AuditMode};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn u(n: usize) -> Universe {
        Universe::opaque(n).unwrap()
    }

    #[test]
    fn classify_singular_identity() {
        let k = Process::singular_identity(u(2));
        let class = k.classify();
        assert!(class.total);
        assert!(class.singular);
        // Strict supersets of {x} are missing, so weakening fails.
        assert!(!class.weakening);
    }

    #[test]
    fn classify_partial_process() {
        // {({a}, b)} over {a, b}: the subset {b} has no applicable pair.
        let k = Process::new(u(2), [(0b01, 1)]).unwrap();
        let class = k.classify();
        assert!(!class.total);
        assert!(!class.singular);
    }

    #[test]
    fn classify_membership_process() {
        // All pairs (F, x) with x in F: total, ordinary, singular.
        let universe = u(3);
        let full = universe.full_mask();
        let mut pairs = Vec::new();
        for f in 1..=full {
            for c in mask_elems(f) {
                pairs.push((f, c));
            }
        }
        let k = Process::new(universe, pairs).unwrap();
        let class = k.classify();
        assert!(class.total && class.ordinary() && class.singular);
    }

    #[test]
    fn empty_process_rejected() {
        assert_eq!(
            Process::new(u(2), Vec::new()),
            Err(ConsequenceError::EmptyProcess)
        );
    }

    #[test]
    fn generated_operator_examples() {
        // k = {({a},a),({a},b),({b},b)}: closure of {a} is {a, b}.
        let k = Process::new(u(2), [(0b01, 0), (0b01, 1), (0b10, 1)]).unwrap();
        let c = generated_operator(&k).unwrap();
        assert_eq!(c.apply(0b01), 0b11);
        assert_eq!(c.apply(0b10), 0b10);
        // No empty premise set, so the empty set closes to itself.
        assert_eq!(c.apply(0), 0);
    }

    #[test]
    fn generated_operator_requires_totality() {
        let k = Process::new(u(2), [(0b01, 1)]).unwrap();
        assert!(matches!(
            generated_operator(&k),
            Err(ConsequenceError::NotTotal { .. })
        ));
    }

    #[test]
    fn empty_premises_close_the_empty_set() {
        let k = Process::new(u(2), [(0, 1), (0b01, 0), (0b10, 1)]).unwrap();
        let c = generated_operator(&k).unwrap();
        assert_eq!(c.apply(0), 0b10);
    }

    #[test]
    fn identity_process_generates_identity() {
        let universe = u(3);
        let k = Process::singular_identity(universe.clone());
        let c = generated_operator(&k).unwrap();
        assert!(c
            .extensionally_eq(&ClosureOperator::identity(universe))
            .unwrap());
    }

    #[test]
    fn process_of_identity_is_membership() {
        let c = ClosureOperator::identity(u(2));
        let k = process_of_operator(&c).unwrap();
        for &(f, a) in k.pairs() {
            assert_eq!(f >> a & 1, 1);
        }
        assert!(k.classify().ordinary());
    }

    #[test]
    fn process_of_upper_unit_is_everything() {
        let universe = u(2);
        let c = ClosureOperator::upper_unit(universe.clone());
        let k = process_of_operator(&c).unwrap();
        assert_eq!(k.pairs().len(), 4 * 2); // every (F, a)
    }

    #[test]
    fn operator_process_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let universe = u(4);
            let k = sample::random_tos_process(&mut rng, &universe);
            let c = generated_operator(&k).unwrap();
            let k2 = process_of_operator(&c).unwrap();
            let c2 = generated_operator(&k2).unwrap();
            assert!(c.extensionally_eq(&c2).unwrap());
        }
    }

    #[test]
    fn audits_pass_for_identity_and_upper_unit() {
        for op in [
            ClosureOperator::identity(u(4)),
            ClosureOperator::upper_unit(u(4)),
        ] {
            let report =
                check_axioms(&op, &[2, 3, 4, 5], AuditMode::default()).unwrap();
            assert!(report.passed_all(), "{report:?}");
        }
    }

    #[test]
    fn audit_catches_broken_idempotence() {
        // B plus the successor (wrap-around) of max(B): extensive but not
        // idempotent.
        let universe = u(3);
        let op = ClosureOperator::from_rule(universe, |b| {
            if b == 0 {
                return 0;
            }
            let max = 63 - b.leading_zeros() as usize;
            b | 1 << ((max + 1) % 3)
        });
        let report = check_axioms(&op, &[2, 3], AuditMode::default()).unwrap();
        assert!(report.axiom2.unwrap().passed);
        let a3 = report.axiom3.unwrap();
        assert!(!a3.passed);
        assert!(recheck_witness(&op, 3, a3.witness.as_ref().unwrap()));
    }

    #[test]
    fn audit_rejects_oversized_exhaustive_universe() {
        let op = ClosureOperator::identity(u(13));
        assert!(matches!(
            check_axioms(&op, &[2], AuditMode::Exhaustive { cap: 12 }),
            Err(ConsequenceError::UniverseTooLarge { .. })
        ));
        // Sampled mode accepts the same universe.
        let report = check_axioms(
            &op,
            &[2, 3, 4, 5],
            AuditMode::Sampled {
                seed: 0,
                samples: 128,
            },
        )
        .unwrap();
        assert!(report.passed_all());
    }

    #[test]
    fn transport_identity_is_identity() {
        let universe = u(3);
        let inj = Injection::identity(&universe);
        let op = ClosureOperator::upper_unit(universe.clone());
        let moved = transport_operator(&inj, &op).unwrap();
        assert!(moved.extensionally_eq(&op).unwrap());
    }

    #[test]
    fn transport_swap_example() {
        // Constant-to-{a} closure adjusted to satisfy axiom (2).
        let universe = u(2);
        let op = ClosureOperator::from_rule(universe.clone(), |b| b | 0b01);
        let swap = Injection::new(universe.clone(), universe.clone(), vec![1, 0]).unwrap();
        let moved = transport_operator(&swap, &op).unwrap();
        let image = swap.image_universe();
        // (βC)({b}) = β[C({a})] = β[{a,b}] = {a,b}.
        let b_only = image.labels_to_mask(["e0"]).unwrap();
        assert_eq!(
            moved.apply(swap.push_mask(0b01, &image)),
            swap.push_mask(op.apply(0b01), &image)
        );
        assert_eq!(moved.apply(b_only), image.full_mask() & moved.apply(b_only) | b_only);
    }

    #[test]
    fn transport_commutes_with_generation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let universe = u(4);
            let k = sample::random_tos_process(&mut rng, &universe);
            let inj = sample::random_injection(&mut rng, &universe, 6);
            let lhs = transport_operator(&inj, &generated_operator(&k).unwrap()).unwrap();
            let rhs = generated_operator(&transport_process(&inj, &k).unwrap()).unwrap();
            assert!(lhs.extensionally_eq(&rhs).unwrap());
        }
    }

    #[test]
    fn injection_rejects_collisions() {
        assert!(matches!(
            Injection::new(u(2), u(2), vec![0, 0]),
            Err(ConsequenceError::NotInjective(_))
        ));
    }
}
