use std::sync::Arc;

use super::EqStructure;
use crate::error::{Error, Result};
use crate::lattice::{catalog, CatalogCaps, CatalogKind, FiniteLattice};
use crate::partition::Partition;

/// Default largest `n` accepted by [`gen_boolean_example`].
pub const BOOLEAN_EXAMPLE_CAP: usize = 6;

/// The Boolean algebra with `n` atoms acting on `{0,1}^n`.
///
/// Points are the binary strings of length `n` in lexicographic order; the
/// first character is coordinate 1. Coatom `i` (every atom but `i`) carries
/// agreement in coordinate `i`, so an element with atom set `T` relates two
/// strings iff they agree on every coordinate outside `T`.
pub fn gen_boolean_example(n: usize, cap: usize) -> Result<EqStructure> {
    if n == 0 || n > cap {
        return Err(Error::OutOfRange(format!(
            "boolean example needs 1 <= n <= {cap}, got {n}"
        )));
    }
    let lattice = Arc::new(catalog(&CatalogKind::Boolean(n), &CatalogCaps::default())?);
    let size = 1usize << n;
    let points = (0..size)
        .map(|p| format!("{p:0n$b}"))
        .collect::<Vec<String>>();
    // Coordinate j (1-based) of point p is bit n-j of p; atom j is bit j-1
    // of an element id.
    let kept_bits = |mask: usize| {
        (1..=n)
            .filter(|j| mask >> (j - 1) & 1 == 0)
            .fold(0usize, |acc, j| acc | 1 << (n - j))
    };
    let relations = lattice
        .elements()
        .map(|mask| {
            let keep = kept_bits(mask);
            let ids: Vec<usize> = (0..size).map(|p| p & keep).collect();
            Partition::from_block_ids(&ids)
        })
        .collect();
    EqStructure::from_relations(&format!("boolean_example{n}"), lattice, points, relations)
}

/// Equality below top and the trivial relation at top, on points
/// `p0 .. p{k-1}`.
pub fn gen_degenerate(lattice: Arc<FiniteLattice>, k: usize) -> Result<EqStructure> {
    let labels = (0..k).map(|i| format!("p{i}")).collect();
    gen_degenerate_on(lattice, labels)
}

/// [`gen_degenerate`] with caller-chosen point labels.
pub fn gen_degenerate_on(lattice: Arc<FiniteLattice>, points: Vec<String>) -> Result<EqStructure> {
    let k = points.len();
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "degenerate structure needs at least 2 points, got {k}"
        )));
    }
    if lattice.bottom() == lattice.top() {
        return Err(Error::Invalid(
            "one-element lattice cannot carry distinct points".into(),
        ));
    }
    let top = lattice.top();
    let relations = lattice
        .elements()
        .map(|el| {
            if el == top {
                Partition::trivial(k)
            } else {
                Partition::discrete(k)
            }
        })
        .collect();
    EqStructure::from_relations("degenerate", lattice, points, relations)
}

/// The affine plane over F₂ with its three parallel classes of lines as the
/// atoms of `m3`: `a` is agreement in the first coordinate, `b` in the
/// second, `c` in the coordinate sum.
pub fn gen_affine_m3() -> EqStructure {
    let lattice = Arc::new(catalog(&CatalogKind::M3, &CatalogCaps::default()).expect("m3 builds"));
    let points = ["00", "01", "10", "11"].map(String::from).to_vec();
    let direction = |f: fn(usize) -> usize| {
        let ids: Vec<usize> = (0..4).map(f).collect();
        Partition::from_block_ids(&ids)
    };
    let explicit = vec![
        (lattice.elem("a").unwrap(), direction(|p| p >> 1)),
        (lattice.elem("b").unwrap(), direction(|p| p & 1)),
        (lattice.elem("c").unwrap(), direction(|p| (p >> 1) ^ (p & 1))),
    ];
    EqStructure::new("affine_m3", lattice, points, explicit).expect("affine plane is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(kind: CatalogKind) -> Arc<FiniteLattice> {
        Arc::new(catalog(&kind, &CatalogCaps::default()).unwrap())
    }

    #[test]
    fn boolean_two_coordinates() {
        let s = gen_boolean_example(2, BOOLEAN_EXAMPLE_CAP).unwrap();
        assert!(s.validate().is_valid(), "{}", s.validate());
        let l = s.lattice();
        let (x, y) = (s.point("00").unwrap(), s.point("01").unwrap());
        assert!(s.related(l.elem("01").unwrap(), x, y));
        assert!(!s.related(l.elem("10").unwrap(), x, y));
        assert!(s.relation(l.bottom()).is_discrete());
        assert!(s.relation(l.top()).is_trivial());
    }

    #[test]
    fn boolean_range() {
        assert!(gen_boolean_example(0, 6).is_err());
        assert!(gen_boolean_example(7, 6).is_err());
        for n in 1..=4 {
            assert!(gen_boolean_example(n, 6).unwrap().validate().is_valid());
        }
    }

    #[test]
    fn degenerate_homomorphism_caveat() {
        let m3 = gen_degenerate(lat(CatalogKind::M3), 2).unwrap();
        assert!(m3.validate().is_valid());
        assert!(!m3.label_map_is_homomorphism());
        let chain = gen_degenerate(lat(CatalogKind::Chain(3)), 2).unwrap();
        assert!(chain.validate().is_valid());
        assert!(chain.label_map_is_homomorphism());
        assert!(gen_degenerate(lat(CatalogKind::Boolean(2)), 3).unwrap().validate().is_valid());
        assert!(gen_degenerate(lat(CatalogKind::M3), 1).is_err());
        assert!(gen_degenerate(lat(CatalogKind::Chain(1)), 2).is_err());
    }

    #[test]
    fn affine_directions() {
        let s = gen_affine_m3();
        assert!(s.validate().is_valid(), "{}", s.validate());
        let l = s.lattice();
        let (p00, p01) = (s.point("00").unwrap(), s.point("01").unwrap());
        assert!(s.related(l.elem("a").unwrap(), p00, p01));
        for (u, v) in [("a", "b"), ("a", "c"), ("b", "c")] {
            let m = s
                .relation(l.elem(u).unwrap())
                .meet(s.relation(l.elem(v).unwrap()));
            assert!(m.is_discrete());
        }
    }

    #[test]
    fn constant_sequences_are_degenerate() {
        let s = gen_boolean_example(2, 6).unwrap();
        let sub = s.induced(&["00", "11"]).unwrap();
        let expected =
            gen_degenerate_on(Arc::clone(s.lattice()), vec!["00".into(), "11".into()]).unwrap();
        assert_eq!(sub.with_name("degenerate"), expected);
    }
}
