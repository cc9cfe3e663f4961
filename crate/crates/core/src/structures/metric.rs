use std::fmt;
use std::sync::Arc;

use super::{check_points, subset_indices, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::lattice::LatticeProvider;

/// A finite set with a distance matrix valued in a lattice.
pub struct UltrametricSpace<P: LatticeProvider> {
    name: String,
    lattice: Arc<P>,
    points: Vec<String>,
    dist: Vec<P::Elem>,
}

impl<P: LatticeProvider> Clone for UltrametricSpace<P> {
    fn clone(&self) -> Self {
        UltrametricSpace {
            name: self.name.clone(),
            lattice: Arc::clone(&self.lattice),
            points: self.points.clone(),
            dist: self.dist.clone(),
        }
    }
}

impl<P: LatticeProvider + PartialEq> PartialEq for UltrametricSpace<P> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
            && self.points == other.points
            && self.dist == other.dist
    }
}

impl<P: LatticeProvider> fmt::Debug for UltrametricSpace<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let rows: Vec<Vec<String>> = (0..n)
            .map(|x| (0..n).map(|y| self.lattice.label(self.d(x, y))).collect())
            .collect();
        f.debug_struct("UltrametricSpace")
            .field("name", &self.name)
            .field("points", &self.points)
            .field("dist", &rows)
            .finish()
    }
}

impl<P: LatticeProvider> UltrametricSpace<P> {
    /// Builds a space from a full row-major `n × n` matrix. Entries must
    /// belong to the value lattice; the axioms are checked by
    /// [`UltrametricSpace::validate`].
    pub fn new(name: &str, lattice: Arc<P>, points: Vec<String>, dist: Vec<P::Elem>) -> Result<Self> {
        check_points(&points)?;
        let n = points.len();
        if dist.len() != n * n {
            return Err(Error::Invalid(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        if let Some(bad) = dist.iter().find(|d| !lattice.contains(d)) {
            return Err(Error::NotInLattice(format!("{bad:?}")));
        }
        Ok(UltrametricSpace {
            name: name.to_string(),
            lattice,
            points,
            dist,
        })
    }

    /// Builds a symmetric space with bottom on the diagonal from a function
    /// giving `d(x, y)` for `x < y`.
    pub fn from_upper(
        name: &str,
        lattice: Arc<P>,
        points: Vec<String>,
        mut upper: impl FnMut(usize, usize) -> P::Elem,
    ) -> Result<Self> {
        let n = points.len();
        let mut dist = vec![lattice.bottom(); n * n];
        for x in 0..n {
            for y in x + 1..n {
                let d = upper(x, y);
                dist[x * n + y] = d.clone();
                dist[y * n + x] = d;
            }
        }
        Self::new(name, lattice, points, dist)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn lattice(&self) -> &Arc<P> {
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

    pub fn d(&self, x: usize, y: usize) -> &P::Elem {
        &self.dist[x * self.len() + y]
    }

    pub fn matrix(&self) -> &[P::Elem] {
        &self.dist
    }

    /// Overwrites one entry, leaving its mirror untouched.
    pub fn set_entry(&mut self, x: usize, y: usize, value: P::Elem) -> Result<()> {
        if !self.lattice.contains(&value) {
            return Err(Error::NotInLattice(format!("{value:?}")));
        }
        let n = self.len();
        self.dist[x * n + y] = value;
        Ok(())
    }

    pub fn validate(&self) -> ValidationReport {
        let l = &*self.lattice;
        let n = self.len();
        let pt = |i: usize| self.points[i].clone();
        let bottom = l.bottom();
        let mut violations = Vec::new();
        for x in 0..n {
            if *self.d(x, x) != bottom {
                violations.push(Violation::DiagonalNotBottom { x: pt(x) });
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if self.d(x, y) != self.d(y, x) {
                    violations.push(Violation::Asymmetric { x: pt(x), y: pt(y) });
                }
                if *self.d(x, y) == bottom || *self.d(y, x) == bottom {
                    violations.push(Violation::ZeroDistance { x: pt(x), y: pt(y) });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !l.leq(self.d(x, y), &l.join(self.d(x, z), self.d(y, z))) {
                        violations.push(Violation::Triangle {
                            x: pt(x),
                            y: pt(y),
                            z: pt(z),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn induced<S: AsRef<str>>(&self, subset: &[S]) -> Result<Self> {
        let idx = subset_indices(&self.points, subset)?;
        Ok(self.induced_indices(&idx))
    }

    pub(crate) fn induced_indices(&self, idx: &[usize]) -> Self {
        let dist = idx
            .iter()
            .flat_map(|&x| idx.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.d(x, y).clone())
            .collect();
        UltrametricSpace {
            name: self.name.clone(),
            lattice: Arc::clone(&self.lattice),
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            dist,
        }
    }

    /// The same space with distances pushed through `f` into another lattice.
    pub fn map_values<Q: LatticeProvider>(
        &self,
        lattice: Arc<Q>,
        f: impl Fn(&P::Elem) -> Q::Elem,
    ) -> Result<UltrametricSpace<Q>> {
        UltrametricSpace::new(
            &self.name,
            lattice,
            self.points.clone(),
            self.dist.iter().map(f).collect(),
        )
    }
}
