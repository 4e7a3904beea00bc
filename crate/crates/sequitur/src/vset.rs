//! Hereditarily finite set values with atoms, the transitive closure
//! operator, and depth-bounded cumulative hierarchies.
//!
//! Atoms are opaque named tokens: membership inside an atom is undefined,
//! so unions simply skip them. Levels of a hierarchy are built by
//! `X_{n+1} = X_n ∪ P(X_n)`; sizes explode doubly exponentially, so
//! construction is feasibility-capped and sizes beyond the buildable range
//! are projected analytically.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// A value of the cumulative hierarchy: an atom or a finite set of values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VSet {
    Atom(String),
    Set(BTreeSet<VSet>),
}

impl VSet {
    pub fn empty() -> VSet {
        VSet::Set(BTreeSet::new())
    }

    pub fn atom(name: impl Into<String>) -> VSet {
        VSet::Atom(name.into())
    }

    pub fn set(members: impl IntoIterator<Item = VSet>) -> VSet {
        VSet::Set(members.into_iter().collect())
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, VSet::Atom(_))
    }

    pub fn members(&self) -> Option<&BTreeSet<VSet>> {
        match self {
            VSet::Atom(_) => None,
            VSet::Set(m) => Some(m),
        }
    }
}

impl fmt::Display for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VSet::Atom(name) => write!(f, "{name}"),
            VSet::Set(members) => {
                write!(f, "{{")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VSetError {
    #[error("bad set literal at byte {at}: {message}")]
    BadLiteral { at: usize, message: String },
    #[error("construction cap exceeded: {0}")]
    CapExceeded(String),
    #[error("level {level} was not built (depth {depth})")]
    DepthUnavailable { level: usize, depth: usize },
}

impl FromStr for VSet {
    type Err = VSetError;

    /// Parses literals like `{{a}, a}` or `{}`; bare identifiers are atoms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let v = parse_vset(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(VSetError::BadLiteral {
                at: pos,
                message: "trailing input".into(),
            });
        }
        Ok(v)
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_vset(bytes: &[u8], pos: &mut usize) -> Result<VSet, VSetError> {
    skip_ws(bytes, pos);
    match bytes.get(*pos) {
        Some(b'{') => {
            *pos += 1;
            let mut members = BTreeSet::new();
            skip_ws(bytes, pos);
            if bytes.get(*pos) == Some(&b'}') {
                *pos += 1;
                return Ok(VSet::Set(members));
            }
            loop {
                members.insert(parse_vset(bytes, pos)?);
                skip_ws(bytes, pos);
                match bytes.get(*pos) {
                    Some(b',') => *pos += 1,
                    Some(b'}') => {
                        *pos += 1;
                        return Ok(VSet::Set(members));
                    }
                    _ => {
                        return Err(VSetError::BadLiteral {
                            at: *pos,
                            message: "expected ',' or '}'".into(),
                        })
                    }
                }
            }
        }
        Some(c) if c.is_ascii_alphanumeric() || *c == b'_' => {
            let start = *pos;
            while bytes
                .get(*pos)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
            {
                *pos += 1;
            }
            Ok(VSet::Atom(
                std::str::from_utf8(&bytes[start..*pos]).unwrap().to_string(),
            ))
        }
        _ => Err(VSetError::BadLiteral {
            at: *pos,
            message: "expected '{' or an atom".into(),
        }),
    }
}

/// The transitive closure of a value, by iterated unions. Unions skip
/// atoms, whose membership is undefined; the closure of an atom itself is
/// empty.
pub fn transitive_closure(v: &VSet) -> BTreeSet<VSet> {
    let mut out = BTreeSet::new();
    let mut stage: BTreeSet<VSet> = match v.members() {
        None => return out,
        Some(m) => m.clone(),
    };
    loop {
        let new: Vec<VSet> = stage.iter().filter(|x| !out.contains(*x)).cloned().collect();
        if new.is_empty() {
            return out;
        }
        out.extend(new);
        stage = union_of(&stage);
    }
}

/// Union of the set members of a collection, skipping atoms.
fn union_of(values: &BTreeSet<VSet>) -> BTreeSet<VSet> {
    let mut out = BTreeSet::new();
    for v in values {
        if let Some(members) = v.members() {
            out.extend(members.iter().cloned());
        }
    }
    out
}

/// Whether every member of `s` is either in the ground set or a subset of
/// `s`.
pub fn is_transitive(s: &BTreeSet<VSet>, ground: &BTreeSet<VSet>) -> bool {
    s.iter().all(|x| {
        ground.contains(x)
            || x.members()
                .is_some_and(|m| m.iter().all(|y| s.contains(y)))
    })
}

/// Largest power-set argument the builder accepts.
pub const MAX_POWERSET_BASE: usize = 16;
/// Caps on the ground size and depth of a built hierarchy.
pub const MAX_GROUND: usize = 3;
pub const MAX_DEPTH: usize = 4;

/// A materialized cumulative hierarchy over a small ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superstructure {
    ground: BTreeSet<VSet>,
    levels: Vec<BTreeSet<VSet>>,
}

impl Superstructure {
    /// Builds levels `X_0 ..= X_depth`. Fails with `CapExceeded` when the
    /// ground or depth caps are violated or a power set would be taken of
    /// more than [`MAX_POWERSET_BASE`] elements.
    pub fn build(ground: BTreeSet<VSet>, depth: usize) -> Result<Self, VSetError> {
        if ground.len() > MAX_GROUND {
            return Err(VSetError::CapExceeded(format!(
                "ground size {} exceeds {MAX_GROUND}",
                ground.len()
            )));
        }
        if depth > MAX_DEPTH {
            return Err(VSetError::CapExceeded(format!(
                "depth {depth} exceeds {MAX_DEPTH}"
            )));
        }
        let mut levels = vec![ground.clone()];
        for _ in 0..depth {
            let current = levels.last().unwrap();
            if current.len() > MAX_POWERSET_BASE {
                return Err(VSetError::CapExceeded(format!(
                    "power set of {} elements is not materializable",
                    current.len()
                )));
            }
            let mut next = current.clone();
            next.extend(power_set(current));
            levels.push(next);
        }
        Ok(Superstructure { ground, levels })
    }

    pub fn ground(&self) -> &BTreeSet<VSet> {
        &self.ground
    }

    pub fn levels(&self) -> &[BTreeSet<VSet>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&BTreeSet<VSet>, VSetError> {
        self.levels.get(n).ok_or(VSetError::DepthUnavailable {
            level: n,
            depth: self.levels.len() - 1,
        })
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(BTreeSet::len).collect()
    }

    /// Whether the ground set is `n`-atomic: every ground element is
    /// nonempty, and no member of a ground element lies in level `n`.
    pub fn is_n_atomic(&self, n: usize) -> Result<bool, VSetError> {
        let level = self.level(n)?;
        Ok(self.ground.iter().all(|x| match x.members() {
            None => true,
            Some(members) => !members.is_empty() && members.iter().all(|y| !level.contains(y)),
        }))
    }
}

fn power_set(base: &BTreeSet<VSet>) -> Vec<VSet> {
    let items: Vec<&VSet> = base.iter().collect();
    let mut out = Vec::with_capacity(1 << items.len());
    for mask in 0u32..1 << items.len() {
        let subset: BTreeSet<VSet> = items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| (*v).clone())
            .collect();
        out.push(VSet::Set(subset));
    }
    out
}

/// Sufficient condition for the ground set to be `n`-atomic at every depth:
/// the empty set is absent from its transitive closure and no ground
/// element's closure meets the ground.
pub fn atomicity_criterion(ground: &BTreeSet<VSet>) -> bool {
    let ground_value = VSet::Set(ground.clone());
    let tc = transitive_closure(&ground_value);
    if tc.contains(&VSet::empty()) {
        return false;
    }
    ground.iter().all(|y| {
        let tcy = transitive_closure(y);
        tcy.intersection(ground).next().is_none()
    })
}

/// Projected level sizes, continuing past what can be materialized.
///
/// A level splits into the subsets of the previous level plus the ground
/// elements that are not subsets of it: atoms never are, and a ground set
/// becomes a subset once all of its members have appeared. Sizes are exact
/// `BigUint`s while the exponent fits; afterwards they are reported as a
/// power-tower expression.
pub fn projected_level_sizes(ground: &BTreeSet<VSet>, depth: usize) -> Vec<String> {
    // Level at which a value first appears, if ever: ground members at 0,
    // pure sets one past their last member, never for foreign atoms.
    fn appears_at(v: &VSet, ground: &BTreeSet<VSet>) -> Option<usize> {
        if ground.contains(v) {
            return Some(0);
        }
        let members = v.members()?;
        let mut level = 1;
        for m in members {
            level = level.max(appears_at(m, ground)? + 1);
        }
        Some(level)
    }

    let stragglers: Vec<usize> = ground
        .iter()
        .filter_map(|x| {
            let members = x.members()?; // atoms are never subsets
            let mut ready = 0usize;
            for m in members {
                match appears_at(m, ground) {
                    Some(l) => ready = ready.max(l),
                    None => return Some(usize::MAX), // never a subset
                }
            }
            Some(ready)
        })
        .collect();
    let atoms = ground.iter().filter(|x| x.is_atom()).count();

    let mut sizes = Vec::with_capacity(depth + 1);
    let mut current: Result<BigUint, String> = Ok(BigUint::from(ground.len()));
    sizes.push(ground.len().to_string());
    for n in 0..depth {
        let outside = atoms + stragglers.iter().filter(|&&ready| ready > n).count();
        current = match current {
            Ok(size) => {
                // 2^size + outside, exact while the exponent is modest.
                match usize::try_from(size.clone()) {
                    Ok(exp) if exp <= 1 << 20 => {
                        Ok((BigUint::from(1u8) << exp) + BigUint::from(outside))
                    }
                    _ => Err(format!("2^({size}) + {outside}")),
                }
            }
            Err(expr) => Err(format!("2^({expr}) + {outside}")),
        };
        sizes.push(match &current {
            Ok(size) => size.to_string(),
            Err(expr) => expr.clone(),
        });
    }
    sizes
}
