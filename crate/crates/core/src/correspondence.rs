//! The maps `m` (structure to Φ(Λ)-valued space) and `e` (back again),
//! their dense-chain counterparts, and morphism transfer.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::filter::{Filter, FilterDescriptor, PhiLattice};
use crate::homogeneity::{is_homogeneous, HomogeneityVerdict};
use crate::lattice::{DenseUnitChain, Elem, FiniteLattice, LatticeProvider};
use crate::partition::Partition;
use crate::structures::{
    embedding_failure, isometry_failure, DenseEqStructure, EqStructure, MorphismFailure,
    PartialMap, UltrametricSpace,
};

/// A space valued in the filter lattice of a finite lattice.
pub type PhiSpace = UltrametricSpace<PhiLattice<FiniteLattice>>;

/// A space valued in the filter lattice of the dense chain.
pub type DensePhiSpace = UltrametricSpace<PhiLattice<DenseUnitChain>>;

/// `m(A)`: `d(x, y)` is the filter `{λ : E_λ(x, y)}`, described by its
/// minimum.
pub fn to_metric(a: &EqStructure) -> Result<PhiSpace> {
    a.validate().into_result()?;
    let l = a.lattice();
    let phi = Arc::new(PhiLattice::new(Arc::clone(l)));
    let m = UltrametricSpace::from_upper(a.name(), phi, a.points().to_vec(), |x, y| {
        let related = a.relating_set(x, y);
        let min = l.meet_all(related.ones());
        debug_assert_eq!(&related, l.upset(min), "relating set is a filter");
        FilterDescriptor::Principal(min)
    })?;
    debug_assert!(m.validate().is_valid(), "{}", m.validate());
    Ok(m)
}

/// `e(M)`: `E_λ(x, y)` iff λ lies in `d(x, y)`.
pub fn to_eq(m: &PhiSpace) -> Result<EqStructure> {
    m.validate().into_result()?;
    let phi = m.lattice();
    let l = phi.base();
    let n = m.len();
    let relations = l
        .elements()
        .map(|el| {
            Partition::from_relation(n, |x, y| {
                phi.member(m.d(x, y), &el).expect("element of the base")
            })
            .ok_or_else(|| Error::NotEquivalence(l.name_of(el).to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let a = EqStructure::from_relations(m.name(), Arc::clone(l), m.points().to_vec(), relations)?;
    debug_assert!(a.validate().is_valid(), "{}", a.validate());
    Ok(a)
}

/// The Λ-valued form of a Φ(Λ)-valued space over a finite Λ, reading each
/// filter as its minimum.
pub fn finite_view(m: &PhiSpace) -> UltrametricSpace<FiniteLattice> {
    m.map_values(Arc::clone(m.lattice().base()), |f| match f {
        FilterDescriptor::Principal(x) => *x,
        FilterDescriptor::StrictAbove(never) => match *never {},
    })
    .expect("minima lie in the base")
}

/// Inverse of [`finite_view`].
pub fn from_finite_view(v: &UltrametricSpace<FiniteLattice>) -> PhiSpace {
    let phi = Arc::new(PhiLattice::new(Arc::clone(v.lattice())));
    v.map_values(phi, |&x| FilterDescriptor::Principal(x))
        .expect("principal filters lie in Φ")
}

/// `e(m(A)) = A`, literally.
pub fn roundtrip_eq(a: &EqStructure) -> Result<bool> {
    Ok(to_eq(&to_metric(a)?)? == *a)
}

/// `m(e(M)) = M`, literally.
pub fn roundtrip_metric(m: &PhiSpace) -> Result<bool> {
    Ok(to_metric(&to_eq(m)?)? == *m)
}

/// `m` over the dense chain.
pub fn to_metric_dense(a: &DenseEqStructure) -> DensePhiSpace {
    let phi = Arc::new(PhiLattice::new(Arc::new(DenseUnitChain)));
    UltrametricSpace::from_upper(a.name(), phi, a.points().to_vec(), |x, y| a.distance(x, y))
        .expect("distances are filters")
}

/// `e` over the dense chain. The distances must be totally ordered, which
/// holds for every valid space since Φ of a chain is a chain.
pub fn to_eq_dense(m: &DensePhiSpace) -> Result<DenseEqStructure> {
    m.validate().into_result()?;
    let phi = m.lattice();
    let n = m.len();
    let mut values: Vec<Filter<DenseUnitChain>> = vec![phi.bottom()];
    for d in m.matrix() {
        if !values.contains(d) {
            values.push(*d);
        }
    }
    values.sort_by(|f, g| {
        if f == g {
            std::cmp::Ordering::Equal
        } else if phi.leq(f, g) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let steps = values
        .into_iter()
        .map(|f| {
            let p = Partition::from_relation(n, |x, y| phi.leq(m.d(x, y), &f))
                .ok_or_else(|| Error::Invalid("distance classes are not transitive".into()))?;
            Ok((f, p))
        })
        .collect::<Result<Vec<_>>>()?;
    DenseEqStructure::new(m.name(), m.points().to_vec(), steps)
}

/// Both verdicts of a morphism check, which must agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferReport {
    pub embedding: Option<MorphismFailure>,
    pub isometry: Option<MorphismFailure>,
}

impl TransferReport {
    pub fn is_embedding(&self) -> bool {
        self.embedding.is_none()
    }

    pub fn is_isometry(&self) -> bool {
        self.isometry.is_none()
    }

    pub fn agree(&self) -> bool {
        self.is_embedding() == self.is_isometry()
    }
}

/// Checks `f` both as an embedding `A → B` and as an isometry
/// `m(A) → m(B)`.
pub fn verify_morphism_transfer(
    f: &PartialMap,
    a: &EqStructure,
    b: &EqStructure,
) -> Result<TransferReport> {
    if a.lattice() != b.lattice() {
        return Err(Error::LatticeMismatch);
    }
    let embedding = embedding_failure(f, a, b)?;
    let isometry = isometry_failure(f, &to_metric(a)?, &to_metric(b)?)?;
    Ok(TransferReport {
        embedding,
        isometry,
    })
}

/// Homogeneity verdicts for a structure and for its image under `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityTransfer {
    pub structure: HomogeneityVerdict,
    pub metric: HomogeneityVerdict,
}

impl HomogeneityTransfer {
    pub fn agree(&self) -> bool {
        self.structure.is_homogeneous() == self.metric.is_homogeneous()
    }
}

pub fn homogeneity_transfer(a: &EqStructure, cap: usize) -> Result<HomogeneityTransfer> {
    Ok(HomogeneityTransfer {
        structure: is_homogeneous(a, cap)?,
        metric: is_homogeneous(&to_metric(a)?, cap)?,
    })
}

/// A random valid Λ-valued space on `n` points.
///
/// Off-diagonal distances are drawn from the non-bottom elements, then every
/// triangle violation `d(x,y) ≰ d(x,z) ∨ d(z,y)` is repaired by raising
/// `d(x,z)` to `d(x,z) ∨ d(x,y)` until nothing changes.
pub fn random_finite_space<R: Rng + ?Sized>(
    lattice: &Arc<FiniteLattice>,
    n: usize,
    rng: &mut R,
) -> Result<UltrametricSpace<FiniteLattice>> {
    let l = &**lattice;
    let nonzero: Vec<Elem> = l.elements().filter(|&x| x != l.bottom()).collect();
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    if n > 1 && nonzero.is_empty() {
        return Err(Error::Invalid(
            "one-element lattice cannot separate points".into(),
        ));
    }
    let mut d = vec![l.bottom(); n * n];
    for x in 0..n {
        for y in x + 1..n {
            let v = nonzero[rng.gen_range(0..nonzero.len())];
            d[x * n + y] = v;
            d[y * n + x] = v;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (dxy, dxz, dzy) = (d[x * n + y], d[x * n + z], d[z * n + y]);
                    if !l.leq(dxy, l.join(dxz, dzy)) {
                        let raised = l.join(dxz, dxy);
                        d[x * n + z] = raised;
                        d[z * n + x] = raised;
                        changed = true;
                    }
                }
            }
        }
    }
    let points = (0..n).map(|i| format!("x{i}")).collect();
    let m = UltrametricSpace::new("random", Arc::clone(lattice), points, d)?;
    debug_assert!(m.validate().is_valid());
    Ok(m)
}

/// A random valid structure on `n` points: `e` applied to
/// [`random_finite_space`].
pub fn random_eq_structure<R: Rng + ?Sized>(
    lattice: &Arc<FiniteLattice>,
    n: usize,
    rng: &mut R,
) -> Result<EqStructure> {
    to_eq(&from_finite_view(&random_finite_space(lattice, n, rng)?))
}
