use super::{Elem, FiniteLattice};

/// A five-element sublattice witnessing non-distributivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbiddenSublattice {
    /// Three pairwise-incomparable elements with common meet and join.
    M3 {
        bottom: Elem,
        atoms: [Elem; 3],
        top: Elem,
    },
    /// `low < high`, and `side` meets and joins both to the same values.
    N5 {
        bottom: Elem,
        low: Elem,
        high: Elem,
        side: Elem,
        top: Elem,
    },
}

impl FiniteLattice {
    /// The first triple `(x, y, z)` in lexicographic id order with
    /// `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`, if any.
    pub fn distributivity_witness(&self) -> Option<[Elem; 3]> {
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// Searches for a sublattice isomorphic to M₃ or N₅; a lattice is
    /// distributive iff none exists.
    pub fn find_forbidden(&self) -> Option<ForbiddenSublattice> {
        let els = || self.elements();
        for a in els() {
            for b in els().filter(|&b| b > a) {
                let (o, i) = (self.meet(a, b), self.join(a, b));
                if o == a || o == b {
                    continue;
                }
                for c in els().filter(|&c| c > b) {
                    if [self.meet(a, c), self.meet(b, c)] == [o, o]
                        && [self.join(a, c), self.join(b, c)] == [i, i]
                    {
                        return Some(ForbiddenSublattice::M3 {
                            bottom: o,
                            atoms: [a, b, c],
                            top: i,
                        });
                    }
                }
            }
        }
        for low in els() {
            for high in els().filter(|&h| self.lt(low, h)) {
                for side in els() {
                    if self.meet(low, side) == self.meet(high, side)
                        && self.join(low, side) == self.join(high, side)
                    {
                        return Some(ForbiddenSublattice::N5 {
                            bottom: self.meet(low, side),
                            low,
                            high,
                            side,
                            top: self.join(low, side),
                        });
                    }
                }
            }
        }
        None
    }

    /// Elements other than bottom that are not the join of two strictly
    /// smaller elements.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&x| x != self.bottom())
            .filter(|&x| {
                let below: Vec<Elem> = self.downset(x).ones().filter(|&y| y != x).collect();
                !below
                    .iter()
                    .any(|&a| below.iter().any(|&b| self.join(a, b) == x))
            })
            .collect()
    }

    pub fn is_join_irreducible(&self, x: Elem) -> bool {
        self.join_irreducibles().contains(&x)
    }
}

/// An order isomorphism `self -> other` as an id map, found by backtracking
/// over elements in id order, pruned by downset and upset sizes.
pub fn lattice_isomorphic(l1: &FiniteLattice, l2: &FiniteLattice) -> Option<Vec<Elem>> {
    if l1.len() != l2.len() {
        return None;
    }
    let profile = |l: &FiniteLattice, x: Elem| {
        (
            l.downset(x).count_ones(..),
            l.upset(x).count_ones(..),
        )
    };
    let p1: Vec<_> = l1.elements().map(|x| profile(l1, x)).collect();
    let p2: Vec<_> = l2.elements().map(|x| profile(l2, x)).collect();
    let mut s1 = p1.clone();
    let mut s2 = p2.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return None;
    }

    fn extend(
        x: Elem,
        l1: &FiniteLattice,
        l2: &FiniteLattice,
        p1: &[(usize, usize)],
        p2: &[(usize, usize)],
        map: &mut Vec<Elem>,
        used: &mut [bool],
    ) -> bool {
        if x == l1.len() {
            return true;
        }
        for y in l2.elements() {
            if used[y] || p1[x] != p2[y] {
                continue;
            }
            let consistent = (0..x).all(|w| {
                l1.leq(w, x) == l2.leq(map[w], y) && l1.leq(x, w) == l2.leq(y, map[w])
            });
            if !consistent {
                continue;
            }
            map.push(y);
            used[y] = true;
            if extend(x + 1, l1, l2, p1, p2, map, used) {
                return true;
            }
            map.pop();
            used[y] = false;
        }
        false
    }

    let mut map = Vec::with_capacity(l1.len());
    let mut used = vec![false; l2.len()];
    extend(0, l1, l2, &p1, &p2, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{catalog, CatalogCaps};

    fn build(s: &str) -> FiniteLattice {
        catalog(&s.parse().unwrap(), &CatalogCaps::default()).unwrap()
    }

    #[test]
    fn boolean3_is_distributive() {
        assert!(build("boolean3").is_distributive());
        assert!(build("boolean3").find_forbidden().is_none());
    }

    #[test]
    fn m3_witness_is_the_atoms() {
        let l = build("m3");
        let w = l.distributivity_witness().unwrap();
        let names: Vec<_> = w.iter().map(|&x| l.name_of(x)).collect();
        assert_eq!(names, ["a", "b", "c"]);
        let [x, y, z] = w;
        assert_eq!(l.meet(x, l.join(y, z)), x);
        assert_eq!(l.join(l.meet(x, y), l.meet(x, z)), l.bottom());
        assert!(matches!(l.find_forbidden(), Some(ForbiddenSublattice::M3 { .. })));
    }

    #[test]
    fn n5_is_not_distributive() {
        let l = build("n5");
        let [x, y, z] = l.distributivity_witness().unwrap();
        assert_ne!(
            l.meet(x, l.join(y, z)),
            l.join(l.meet(x, y), l.meet(x, z))
        );
        assert!(matches!(l.find_forbidden(), Some(ForbiddenSublattice::N5 { .. })));
    }

    #[test]
    fn join_irreducibles_examples() {
        let c3 = build("chain3");
        assert_eq!(c3.join_irreducibles(), vec![1, 2]);
        let b2 = build("boolean2");
        let names: Vec<_> = b2
            .join_irreducibles()
            .into_iter()
            .map(|x| b2.name_of(x).to_string())
            .collect();
        assert_eq!(names, ["10", "01"]);
        let m3 = build("m3");
        let names: Vec<_> = m3
            .join_irreducibles()
            .into_iter()
            .map(|x| m3.name_of(x).to_string())
            .collect();
        assert_eq!(names, ["a", "b", "c"]);
    }

    #[test]
    fn isomorphism_examples() {
        let m3 = build("m3");
        assert_eq!(lattice_isomorphic(&m3, &m3), Some(vec![0, 1, 2, 3, 4]));
        assert_eq!(lattice_isomorphic(&m3, &build("n5")), None);
        let b2 = build("boolean2");
        let prod = build("product(chain2,chain2)");
        let iso = lattice_isomorphic(&b2, &prod).unwrap();
        for x in b2.elements() {
            for y in b2.elements() {
                assert_eq!(iso[b2.meet(x, y)], prod.meet(iso[x], iso[y]));
                assert_eq!(iso[b2.join(x, y)], prod.join(iso[x], iso[y]));
            }
        }
        assert_eq!(lattice_isomorphic(&b2, &build("chain4")), None);
    }
}
