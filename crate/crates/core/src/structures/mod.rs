//! The two kinds of object: structures carrying a lattice-indexed family of
//! equivalence relations, and lattice-valued ultrametric spaces.

mod dense;
mod eq;
mod generators;
mod map;
mod metric;

use std::fmt;

pub use dense::DenseEqStructure;
pub use eq::EqStructure;
pub use generators::{
    gen_affine_m3, gen_boolean_example, gen_degenerate, gen_degenerate_on, BOOLEAN_EXAMPLE_CAP,
};
pub use map::{embedding_failure, is_embedding, is_isometry, isometry_failure, MorphismFailure, PartialMap};
pub use metric::UltrametricSpace;

use crate::error::{Error, Result};

/// One failed axiom, with the smallest witness in id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `E_0` relates two distinct points.
    BottomNotEquality { x: String, y: String },
    /// `E_1` fails to relate two points.
    TopNotTrivial { x: String, y: String },
    /// `E_{λ∧μ}` and `E_λ ∩ E_μ` disagree on a pair.
    MeetNotPreserved {
        lambda: String,
        mu: String,
        x: String,
        y: String,
    },
    Asymmetric { x: String, y: String },
    /// Nonzero distance on the diagonal.
    DiagonalNotBottom { x: String },
    /// Zero distance between distinct points.
    ZeroDistance { x: String, y: String },
    /// `d(x,y) ≰ d(x,z) ∨ d(y,z)`.
    Triangle { x: String, y: String, z: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BottomNotEquality { x, y } => {
                write!(f, "VIOLATION bottom-not-equality {x} {y}")
            }
            Violation::TopNotTrivial { x, y } => write!(f, "VIOLATION top-not-trivial {x} {y}"),
            Violation::MeetNotPreserved { lambda, mu, x, y } => {
                write!(f, "VIOLATION meet-not-preserved {lambda} {mu} {x} {y}")
            }
            Violation::Asymmetric { x, y } => write!(f, "VIOLATION asymmetric {x} {y}"),
            Violation::DiagonalNotBottom { x } => write!(f, "VIOLATION diagonal-not-bottom {x}"),
            Violation::ZeroDistance { x, y } => write!(f, "VIOLATION zero-distance {x} {y}"),
            Violation::Triangle { x, y, z } => write!(f, "VIOLATION triangle {x} {y} {z}"),
        }
    }
}

/// All violations found; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::Invalid(v.to_string())),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Point labels must be nonempty, whitespace-free and distinct.
pub(crate) fn check_points(points: &[String]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyCarrier);
    }
    let mut seen = std::collections::HashSet::new();
    for p in points {
        if p.is_empty() || p.chars().any(char::is_whitespace) {
            return Err(Error::Invalid(format!("bad point label `{p}`")));
        }
        if !seen.insert(p.as_str()) {
            return Err(Error::DuplicateLabel(p.clone()));
        }
    }
    Ok(())
}

/// Resolves a point subset given by labels into indices sorted by the
/// original order.
pub(crate) fn subset_indices<S: AsRef<str>>(points: &[String], subset: &[S]) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::EmptyCarrier);
    }
    let mut idx = subset
        .iter()
        .map(|s| {
            points
                .iter()
                .position(|p| p == s.as_ref())
                .ok_or_else(|| Error::UnknownPoint(s.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}
