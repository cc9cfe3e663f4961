use super::check_points;
use crate::error::{Error, Result};
use crate::filter::{Filter, FilterBase, FilterDescriptor};
use crate::lattice::{DenseUnitChain, Rational};
use crate::partition::Partition;

/// A structure indexed by the dense unit chain whose relations change at
/// finitely many places.
///
/// Each step `(F, P)` says that `E_λ = P` for every λ in `F` outside the next
/// step's filter. Steps start at the whole chain with equality, shrink
/// strictly, coarsen monotonically and end with the trivial relation. Over a
/// chain meet preservation is the same as monotonicity, so every value built
/// here is a valid structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseEqStructure {
    name: String,
    points: Vec<String>,
    steps: Vec<(Filter<DenseUnitChain>, Partition)>,
}

impl DenseEqStructure {
    pub fn new(
        name: &str,
        points: Vec<String>,
        steps: Vec<(Filter<DenseUnitChain>, Partition)>,
    ) -> Result<Self> {
        check_points(&points)?;
        let n = points.len();
        let chain = DenseUnitChain;
        let Some((first, _)) = steps.first() else {
            return Err(Error::Invalid("no steps".into()));
        };
        if *first != FilterDescriptor::Principal(Rational::from_integer(0)) {
            return Err(Error::Invalid("first step must start at 0".into()));
        }
        if let Some((_, p)) = steps.iter().find(|(_, p)| p.len() != n) {
            return Err(Error::MalformedPartition(format!(
                "step partition covers {} points, expected {n}",
                p.len()
            )));
        }
        if !steps[0].1.is_discrete() {
            return Err(Error::Invalid("relation at 0 is not equality".into()));
        }
        if !steps[steps.len() - 1].1.is_trivial() {
            return Err(Error::Invalid("relation at 1 is not trivial".into()));
        }
        for w in steps.windows(2) {
            let ((f, p), (g, q)) = (&w[0], &w[1]);
            if !chain.includes(f, g) || f == g {
                return Err(Error::Invalid("step filters must shrink strictly".into()));
            }
            if !p.refines(q) {
                return Err(Error::Invalid("step relations must coarsen".into()));
            }
        }
        Ok(DenseEqStructure {
            name: name.to_string(),
            points,
            steps,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn steps(&self) -> &[(Filter<DenseUnitChain>, Partition)] {
        &self.steps
    }

    /// `E_λ` for a λ in `[0, 1]`.
    pub fn relation_at(&self, lambda: &Rational) -> Result<&Partition> {
        let chain = DenseUnitChain;
        let mut current = None;
        for (f, p) in &self.steps {
            if chain.member(f, lambda)? {
                current = Some(p);
            }
        }
        Ok(current.expect("the first step covers the whole chain"))
    }

    pub fn related(&self, lambda: &Rational, x: usize, y: usize) -> Result<bool> {
        Ok(self.relation_at(lambda)?.related(x, y))
    }

    /// The filter `{λ : E_λ(x, y)}`: the start of the first step relating
    /// the pair.
    pub fn distance(&self, x: usize, y: usize) -> Filter<DenseUnitChain> {
        self.steps
            .iter()
            .find(|(_, p)| p.related(x, y))
            .map(|(f, _)| *f)
            .expect("the last step is trivial")
    }
}
