use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{check_points, subset_indices, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::partition::Partition;

/// A finite set with one partition `E_λ` per element λ of a finite lattice.
///
/// Construction only checks that the data is well formed; whether the
/// family is meet-preserving with `E_0` equality and `E_1` trivial is the
/// job of [`EqStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqStructure {
    name: String,
    lattice: Arc<FiniteLattice>,
    points: Vec<String>,
    relations: Vec<Partition>,
}

impl EqStructure {
    /// Builds a structure from explicit partitions. Every element other than
    /// bottom and top needs one; bottom defaults to equality and top to the
    /// trivial relation.
    pub fn new(
        name: &str,
        lattice: Arc<FiniteLattice>,
        points: Vec<String>,
        explicit: Vec<(Elem, Partition)>,
    ) -> Result<Self> {
        check_points(&points)?;
        let n = points.len();
        let mut relations: Vec<Option<Partition>> = vec![None; lattice.len()];
        for (el, p) in explicit {
            if el >= lattice.len() {
                return Err(Error::NotInLattice(el.to_string()));
            }
            if p.len() != n {
                return Err(Error::MalformedPartition(format!(
                    "relation for `{}` covers {} points, expected {n}",
                    lattice.name_of(el),
                    p.len()
                )));
            }
            if relations[el].is_some() {
                return Err(Error::Invalid(format!(
                    "relation for `{}` given twice",
                    lattice.name_of(el)
                )));
            }
            relations[el] = Some(p);
        }
        let bottom = lattice.bottom();
        let top = lattice.top();
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(el, p)| match p {
                Some(p) => Ok(p),
                None if el == bottom => Ok(Partition::discrete(n)),
                None if el == top => Ok(Partition::trivial(n)),
                None => Err(Error::MissingRelation(lattice.name_of(el).to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EqStructure {
            name: name.to_string(),
            lattice,
            points,
            relations,
        })
    }

    /// Builds a structure from one partition per lattice element, in id order.
    pub fn from_relations(
        name: &str,
        lattice: Arc<FiniteLattice>,
        points: Vec<String>,
        relations: Vec<Partition>,
    ) -> Result<Self> {
        if relations.len() != lattice.len() {
            return Err(Error::Invalid(format!(
                "{} relations for a lattice of {} elements",
                relations.len(),
                lattice.len()
            )));
        }
        Self::new(name, lattice, points, relations.into_iter().enumerate().collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn relation(&self, el: Elem) -> &Partition {
        &self.relations[el]
    }

    pub fn relations(&self) -> &[Partition] {
        &self.relations
    }

    pub fn related(&self, el: Elem, x: usize, y: usize) -> bool {
        self.relations[el].related(x, y)
    }

    /// The set `{λ : E_λ(x, y)}` as a bitset over lattice ids.
    pub fn relating_set(&self, x: usize, y: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.lattice.len());
        for el in self.lattice.elements() {
            set.set(el, self.related(el, x, y));
        }
        set
    }

    pub fn validate(&self) -> ValidationReport {
        let l = &*self.lattice;
        let n = self.len();
        let pt = |i: usize| self.points[i].clone();
        let mut violations = Vec::new();
        let pairs = || (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)));

        if let Some((x, y)) = pairs().find(|&(x, y)| self.related(l.bottom(), x, y)) {
            violations.push(Violation::BottomNotEquality { x: pt(x), y: pt(y) });
        }
        if let Some((x, y)) = pairs().find(|&(x, y)| !self.related(l.top(), x, y)) {
            violations.push(Violation::TopNotTrivial { x: pt(x), y: pt(y) });
        }
        for a in l.elements() {
            for b in l.elements().filter(|&b| b > a) {
                let m = l.meet(a, b);
                let expected = self.relations[a].meet(&self.relations[b]);
                if self.relations[m] == expected {
                    continue;
                }
                let (x, y) = pairs()
                    .find(|&(x, y)| self.related(m, x, y) != expected.related(x, y))
                    .expect("partitions differ on some pair");
                violations.push(Violation::MeetNotPreserved {
                    lambda: l.name_of(a).to_string(),
                    mu: l.name_of(b).to_string(),
                    x: pt(x),
                    y: pt(y),
                });
            }
        }
        ValidationReport { violations }
    }

    /// Restriction of every relation to the given points, kept in their
    /// original order.
    pub fn induced<S: AsRef<str>>(&self, subset: &[S]) -> Result<Self> {
        let idx = subset_indices(&self.points, subset)?;
        Ok(self.induced_indices(&idx))
    }

    pub(crate) fn induced_indices(&self, idx: &[usize]) -> Self {
        EqStructure {
            name: self.name.clone(),
            lattice: Arc::clone(&self.lattice),
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            relations: self.relations.iter().map(|p| p.restrict(idx)).collect(),
        }
    }

    /// Renames points; `labels[i]` replaces point `i`.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Invalid("relabeling has the wrong length".into()));
        }
        check_points(&labels)?;
        Ok(EqStructure {
            points: labels,
            ..self.clone()
        })
    }

    /// Whether `λ ↦ E_λ` also preserves joins (join of equivalence relations
    /// being the transitive closure of the union).
    pub fn label_map_is_homomorphism(&self) -> bool {
        let l = &*self.lattice;
        l.elements().all(|a| {
            l.elements().all(|b| {
                self.relations[l.meet(a, b)] == self.relations[a].meet(&self.relations[b])
                    && self.relations[l.join(a, b)] == self.relations[a].join(&self.relations[b])
            })
        })
    }
}
