//! Automorphism-invariant equivalence relations of a finite structure and the
//! lattice they form.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::homogeneity::{automorphism_perms, Relational};
use crate::lattice::{lattice_isomorphic, Elem, FiniteLattice};
use crate::partition::Partition;
use crate::structures::EqStructure;

/// Largest number of invariant equivalence relations collected before the
/// search gives up.
pub const RELATION_GUARD: usize = 512;

/// The orbits of the automorphism group on ordered pairs of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalPartition {
    n: usize,
    orbit_of: Vec<u32>,
    count: usize,
}

impl OrbitalPartition {
    /// Number of points.
    pub fn points(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Orbit index of `(x, y)`; orbits are numbered by their first pair in
    /// row-major order.
    pub fn orbit_of(&self, x: usize, y: usize) -> usize {
        self.orbit_of[x * self.n + y] as usize
    }

    pub fn orbits(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.count];
        for x in 0..self.n {
            for y in 0..self.n {
                out[self.orbit_of(x, y)].push((x, y));
            }
        }
        out
    }

    /// Whether orbit `o` consists of diagonal pairs.
    pub fn is_diagonal(&self, o: usize) -> bool {
        (0..self.n).any(|x| self.orbit_of(x, x) == o)
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "point count",
            value: n,
            cap,
        });
    }
    Ok(())
}

pub fn orbitals<X: Relational>(x: &X, cap: usize) -> Result<OrbitalPartition> {
    x.check_valid()?;
    let n = x.point_labels().len();
    check_cap(n, cap)?;
    let auts = automorphism_perms(&x.pair_codes());
    let mut orbit_of = vec![u32::MAX; n * n];
    let mut count = 0u32;
    for a in 0..n {
        for b in 0..n {
            if orbit_of[a * n + b] != u32::MAX {
                continue;
            }
            for sigma in &auts {
                orbit_of[sigma[a] * n + sigma[b]] = count;
            }
            count += 1;
        }
    }
    Ok(OrbitalPartition {
        n,
        orbit_of,
        count: count as usize,
    })
}

/// The invariant equivalence relations, ordered by inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantLattice {
    /// Elements `r0, r1, ...`, numbered by relation size and then by
    /// partition encoding.
    pub lattice: FiniteLattice,
    /// `relations[i]` realizes element `i`.
    pub relations: Vec<Partition>,
}

/// Every equivalence relation that is a union of orbitals, checked to form a
/// lattice under intersection and the transitive closure of union.
///
/// Such a relation is the join of the relations generated by the orbitals
/// it contains, so the relations are found as the join-closure of the
/// diagonal under those generators.
pub fn invariant_eq_lattice<X: Relational>(x: &X, cap: usize) -> Result<InvariantLattice> {
    let orb = orbitals(x, cap)?;
    let n = orb.points();
    let generators: Vec<Partition> = orb
        .orbits()
        .iter()
        .map(|pairs| {
            pairs.iter().fold(Partition::discrete(n), |p, &(a, b)| {
                let mut ids: Vec<usize> = (0..n).collect();
                ids[b] = a;
                p.join(&Partition::from_block_ids(&ids))
            })
        })
        .collect();
    let mut seen: HashSet<Partition> = HashSet::from([Partition::discrete(n)]);
    let mut frontier = vec![Partition::discrete(n)];
    while let Some(p) = frontier.pop() {
        for g in &generators {
            let q = p.join(g);
            if !seen.contains(&q) {
                if seen.len() >= RELATION_GUARD {
                    return Err(Error::CapExceeded {
                        what: "invariant relation count",
                        value: seen.len() + 1,
                        cap: RELATION_GUARD,
                    });
                }
                seen.insert(q.clone());
                frontier.push(q);
            }
        }
    }
    let size = |p: &Partition| -> usize { p.blocks().iter().map(|b| b.len() * b.len()).sum() };
    let mut found: Vec<(usize, Partition)> = seen.into_iter().map(|p| (size(&p), p)).collect();
    found.sort();
    let relations: Vec<Partition> = found.into_iter().map(|(_, p)| p).collect();
    let labels: Vec<String> = (0..relations.len()).map(|i| format!("r{i}")).collect();
    let lattice = FiniteLattice::from_order(&format!("inv({})", x.name()), &labels, |i, j| {
        relations[i].refines(&relations[j])
    })?;
    for i in lattice.elements() {
        for j in lattice.elements() {
            if relations[lattice.meet(i, j)] != relations[i].meet(&relations[j])
                || relations[lattice.join(i, j)] != relations[i].join(&relations[j])
            {
                return Err(Error::Invalid(format!(
                    "invariant relations r{i} and r{j} are not closed under meet and join"
                )));
            }
        }
    }
    Ok(InvariantLattice { lattice, relations })
}

/// How the lattice of a structure compares with its invariant lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub invariant: InvariantLattice,
    /// Whether the two lattices are isomorphic at all.
    pub isomorphic: bool,
    /// `mapping[λ]` is the invariant element realized by `E_λ`, when
    /// `λ ↦ E_λ` is an isomorphism onto the invariant lattice.
    pub mapping: Option<Vec<Elem>>,
}

impl Realization {
    pub fn realizes(&self) -> bool {
        self.mapping.is_some()
    }
}

/// Whether `λ ↦ E_λ` is an isomorphism from the lattice of `a` onto its
/// lattice of invariant equivalence relations.
pub fn realizes(a: &EqStructure, cap: usize) -> Result<Realization> {
    let invariant = invariant_eq_lattice(a, cap)?;
    let l = a.lattice();
    let isomorphic = lattice_isomorphic(l, &invariant.lattice).is_some();
    let image: Option<Vec<Elem>> = l
        .elements()
        .map(|el| invariant.relations.iter().position(|r| r == a.relation(el)))
        .collect();
    let mapping = image.filter(|m| {
        let mut sorted = m.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == invariant.lattice.len()
            && l.elements().all(|x| {
                l.elements().all(|y| l.leq(x, y) == invariant.lattice.leq(m[x], m[y]))
            })
    });
    Ok(Realization {
        invariant,
        isomorphic,
        mapping,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::lattice::{catalog, CatalogCaps, CatalogKind};
    use crate::structures::{gen_affine_m3, gen_boolean_example, gen_degenerate, UltrametricSpace};

    fn lat(kind: CatalogKind) -> Arc<FiniteLattice> {
        Arc::new(catalog(&kind, &CatalogCaps::default()).unwrap())
    }

    #[test]
    fn affine_gives_m3() {
        let a = gen_affine_m3();
        assert_eq!(orbitals(&a, 10).unwrap().len(), 4);
        let r = realizes(&a, 10).unwrap();
        assert_eq!(r.invariant.lattice.len(), 5);
        assert!(lattice_isomorphic(&r.invariant.lattice, a.lattice()).is_some());
        assert!(r.isomorphic);
        assert!(r.realizes());
    }

    #[test]
    fn degenerate_gives_two_chain() {
        let a = gen_degenerate(lat(CatalogKind::M3), 3).unwrap();
        assert_eq!(orbitals(&a, 10).unwrap().len(), 2);
        let r = realizes(&a, 10).unwrap();
        assert!(lattice_isomorphic(&r.invariant.lattice, &lat(CatalogKind::Chain(2))).is_some());
        assert!(!r.isomorphic);
        assert!(!r.realizes());
    }

    #[test]
    fn boolean_two_invariants_form_m3() {
        let a = gen_boolean_example(2, 6).unwrap();
        let r = realizes(&a, 10).unwrap();
        assert!(lattice_isomorphic(&r.invariant.lattice, &lat(CatalogKind::M3)).is_some());
        assert!(!r.realizes());
    }

    #[test]
    fn one_point() {
        let m = UltrametricSpace::from_upper("one", lat(CatalogKind::Chain(2)), vec!["x".into()], |_, _| 0)
            .unwrap();
        assert_eq!(orbitals(&m, 10).unwrap().len(), 1);
        assert_eq!(invariant_eq_lattice(&m, 10).unwrap().lattice.len(), 1);
    }
}
