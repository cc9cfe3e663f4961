use std::fmt;

use super::{EqStructure, UltrametricSpace};
use crate::error::{Error, Result};
use crate::lattice::LatticeProvider;

/// An injective partial map between point sets, as `(source, target)` index
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    pairs: Vec<(usize, usize)>,
}

enum Conflict {
    Source(usize),
    Target(usize, usize),
}

fn find_conflict(pairs: &[(usize, usize)]) -> Option<Conflict> {
    for (i, &(s, t)) in pairs.iter().enumerate() {
        for &(s2, t2) in &pairs[..i] {
            if s == s2 {
                return Some(Conflict::Source(s));
            }
            if t == t2 {
                return Some(Conflict::Target(s2, s));
            }
        }
    }
    None
}

impl PartialMap {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        match find_conflict(&pairs) {
            None => Ok(PartialMap { pairs }),
            Some(Conflict::Source(s)) => Err(Error::RepeatedSource(s.to_string())),
            Some(Conflict::Target(a, b)) => Err(Error::NotInjective(a.to_string(), b.to_string())),
        }
    }

    /// Resolves label pairs against the source and target point lists.
    pub fn from_labels<S: AsRef<str>>(
        source: &[String],
        target: &[String],
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let find = |pts: &[String], s: &str| {
            pts.iter()
                .position(|p| p == s)
                .ok_or_else(|| Error::UnknownPoint(s.to_string()))
        };
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((find(source, a.as_ref())?, find(target, b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        match find_conflict(&pairs) {
            None => Ok(PartialMap { pairs }),
            Some(Conflict::Source(s)) => Err(Error::RepeatedSource(source[s].clone())),
            Some(Conflict::Target(a, b)) => {
                Err(Error::NotInjective(source[a].clone(), source[b].clone()))
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        PartialMap {
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// The total map `i ↦ perm[i]`; `perm` must be injective.
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        Self::new(perm.iter().copied().enumerate().collect())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    /// Whether the domain is exactly `0..n`.
    pub fn is_total(&self, n: usize) -> bool {
        self.pairs.len() == n && (0..n).all(|x| self.apply(x).is_some())
    }

    /// `i ↦ image` as a vector, when total on `0..n`.
    pub fn as_permutation(&self, n: usize) -> Option<Vec<usize>> {
        (0..n).map(|x| self.apply(x)).collect()
    }

    /// `other ∘ self`, defined where both steps are.
    pub fn then(&self, other: &PartialMap) -> PartialMap {
        PartialMap {
            pairs: self
                .pairs
                .iter()
                .filter_map(|&(s, t)| other.apply(t).map(|u| (s, u)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> PartialMap {
        PartialMap {
            pairs: self.pairs.iter().map(|&(s, t)| (t, s)).collect(),
        }
    }

    pub fn to_labels(&self, source: &[String], target: &[String]) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(s, t)| (source[s].clone(), target[t].clone()))
            .collect()
    }

    fn check_total(&self, source: &[String], target_len: usize) -> Result<()> {
        if let Some(x) = (0..source.len()).find(|&x| self.apply(x).is_none()) {
            return Err(Error::NotTotal(source[x].clone()));
        }
        if let Some(&(s, _)) = self.pairs.iter().find(|p| p.0 >= source.len() || p.1 >= target_len) {
            return Err(Error::UnknownPoint(s.to_string()));
        }
        Ok(())
    }
}

/// Why a map fails to be an embedding or an isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismFailure {
    /// `E_λ(x, y)` holds on exactly one side.
    Relation {
        element: String,
        x: String,
        y: String,
        holds_in_source: bool,
    },
    /// `d(x, y) ≠ d(f x, f y)`.
    Distance {
        x: String,
        y: String,
        source: String,
        target: String,
    },
}

impl fmt::Display for MorphismFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismFailure::Relation {
                element,
                x,
                y,
                holds_in_source,
            } => write!(
                f,
                "relation {element} on {x} {y} {} in source but not in target",
                if *holds_in_source { "holds" } else { "fails" }
            ),
            MorphismFailure::Distance {
                x,
                y,
                source,
                target,
            } => write!(f, "distance {x} {y} is {source} in source but {target} in target"),
        }
    }
}

/// The first pair `(x, y)`, `x < y`, and element λ (in id order) on which
/// `f` does not preserve and reflect `E_λ`; `None` if `f` is an embedding.
pub fn embedding_failure(
    f: &PartialMap,
    a: &EqStructure,
    b: &EqStructure,
) -> Result<Option<MorphismFailure>> {
    if a.lattice() != b.lattice() {
        return Err(Error::LatticeMismatch);
    }
    f.check_total(a.points(), b.len())?;
    let l = a.lattice();
    let n = a.len();
    for x in 0..n {
        for y in x + 1..n {
            let (fx, fy) = (f.apply(x).unwrap(), f.apply(y).unwrap());
            for el in l.elements() {
                let here = a.related(el, x, y);
                if here != b.related(el, fx, fy) {
                    return Ok(Some(MorphismFailure::Relation {
                        element: l.name_of(el).to_string(),
                        x: a.points()[x].clone(),
                        y: a.points()[y].clone(),
                        holds_in_source: here,
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_embedding(f: &PartialMap, a: &EqStructure, b: &EqStructure) -> Result<bool> {
    embedding_failure(f, a, b).map(|w| w.is_none())
}

/// The first pair `(x, y)`, `x < y`, whose distance `f` changes; `None` if `f`
/// is an isometric embedding.
pub fn isometry_failure<P: LatticeProvider + PartialEq>(
    f: &PartialMap,
    m: &UltrametricSpace<P>,
    n: &UltrametricSpace<P>,
) -> Result<Option<MorphismFailure>> {
    if m.lattice() != n.lattice() {
        return Err(Error::LatticeMismatch);
    }
    f.check_total(m.points(), n.len())?;
    let l = m.lattice();
    for x in 0..m.len() {
        for y in x + 1..m.len() {
            let (fx, fy) = (f.apply(x).unwrap(), f.apply(y).unwrap());
            if m.d(x, y) != n.d(fx, fy) {
                return Ok(Some(MorphismFailure::Distance {
                    x: m.points()[x].clone(),
                    y: m.points()[y].clone(),
                    source: l.label(m.d(x, y)),
                    target: l.label(n.d(fx, fy)),
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_isometry<P: LatticeProvider + PartialEq>(
    f: &PartialMap,
    m: &UltrametricSpace<P>,
    n: &UltrametricSpace<P>,
) -> Result<bool> {
    isometry_failure(f, m, n).map(|w| w.is_none())
}
