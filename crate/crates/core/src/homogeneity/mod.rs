//! Automorphism groups, finite homogeneity, amalgamation of Λ-ultrametric
//! spaces and the finite index profile.

mod amalgam;

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

pub use amalgam::{
    amalgamate, check_amalgamation_property, check_amalgamation_property_with,
    search_amalgam_failure, AmalgamInstance, AmalgamReport, AmalgamWitness, Enumeration,
    DEFAULT_AMALGAM_CAP,
};

use crate::error::{Error, Result};
use crate::lattice::{Elem, LatticeProvider};
use crate::structures::{EqStructure, PartialMap, UltrametricSpace};

/// Default largest carrier for automorphism and homogeneity checks.
pub const DEFAULT_POINT_CAP: usize = 10;

/// Pair types of a finite object: `code(x, y)` equals `code(u, v)` iff the
/// pairs satisfy the same relations (or sit at the same distance).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    n: usize,
    codes: Vec<u32>,
}

impl CodeMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn code(&self, x: usize, y: usize) -> u32 {
        self.codes[x * self.n + y]
    }

    fn row_profile(&self, x: usize) -> Vec<u32> {
        let mut row = self.codes[x * self.n..(x + 1) * self.n].to_vec();
        row.sort_unstable();
        row
    }
}

/// A finite object whose symmetries are determined by its pair types.
pub trait Relational {
    fn name(&self) -> &str;
    fn point_labels(&self) -> &[String];
    fn pair_codes(&self) -> CodeMatrix;
    /// Fails with the first violated axiom.
    fn check_valid(&self) -> Result<()>;
}

impl Relational for EqStructure {
    fn name(&self) -> &str {
        EqStructure::name(self)
    }

    fn point_labels(&self) -> &[String] {
        self.points()
    }

    fn pair_codes(&self) -> CodeMatrix {
        let n = self.len();
        let mut intern: HashMap<FixedBitSet, u32> = HashMap::new();
        let mut codes = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let next = intern.len() as u32;
                codes.push(*intern.entry(self.relating_set(x, y)).or_insert(next));
            }
        }
        CodeMatrix { n, codes }
    }

    fn check_valid(&self) -> Result<()> {
        self.validate().into_result()
    }
}

impl<P: LatticeProvider> Relational for UltrametricSpace<P> {
    fn name(&self) -> &str {
        UltrametricSpace::name(self)
    }

    fn point_labels(&self) -> &[String] {
        self.points()
    }

    fn pair_codes(&self) -> CodeMatrix {
        let n = self.len();
        let mut seen: Vec<&P::Elem> = Vec::new();
        let mut codes = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let d = self.d(x, y);
                let code = match seen.iter().position(|s| *s == d) {
                    Some(i) => i,
                    None => {
                        seen.push(d);
                        seen.len() - 1
                    }
                };
                codes.push(code as u32);
            }
        }
        CodeMatrix { n, codes }
    }

    fn check_valid(&self) -> Result<()> {
        self.validate().into_result()
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

/// All permutations preserving every pair code, in lexicographic order of
/// their image vectors.
pub(crate) fn automorphism_perms(codes: &CodeMatrix) -> Vec<Vec<usize>> {
    let n = codes.len();
    let profiles: Vec<Vec<u32>> = (0..n).map(|x| codes.row_profile(x)).collect();
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend_perm(codes, &profiles, &mut image, &mut used, &mut out);
    out
}

fn extend_perm(
    codes: &CodeMatrix,
    profiles: &[Vec<u32>],
    image: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let n = codes.len();
    let x = image.len();
    if x == n {
        out.push(image.clone());
        return;
    }
    for y in 0..n {
        if used[y] || profiles[x] != profiles[y] {
            continue;
        }
        let consistent = (0..x).all(|w| {
            codes.code(w, x) == codes.code(image[w], y) && codes.code(x, w) == codes.code(y, image[w])
        });
        if !consistent {
            continue;
        }
        used[y] = true;
        image.push(y);
        extend_perm(codes, profiles, image, used, out);
        image.pop();
        used[y] = false;
    }
}

/// Every structure-preserving bijection, as total maps.
pub fn automorphisms<X: Relational>(x: &X, cap: usize) -> Result<Vec<PartialMap>> {
    x.check_valid()?;
    check_cap(x.point_labels().len(), cap)?;
    Ok(automorphism_perms(&x.pair_codes())
        .iter()
        .map(|p| PartialMap::from_permutation(p).expect("a permutation is injective"))
        .collect())
}

/// Outcome of [`is_homogeneous`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityVerdict {
    /// A smallest partial isomorphism with no extending automorphism.
    pub witness: Option<PartialMap>,
    pub automorphism_count: usize,
    /// Partial isomorphisms examined, after skipping domains that are images
    /// of earlier ones under automorphisms.
    pub partial_isos_checked: u64,
}

impl HomogeneityVerdict {
    pub fn is_homogeneous(&self) -> bool {
        self.witness.is_none()
    }
}

/// Whether every isomorphism between induced substructures extends to an
/// automorphism.
///
/// Domains are scanned by size, then lexicographically; a domain that is
/// the image of an earlier one under an automorphism is skipped, since its
/// partial isomorphisms are conjugates of ones already checked. The first
/// failure is therefore of minimal size.
pub fn is_homogeneous<X: Relational>(x: &X, cap: usize) -> Result<HomogeneityVerdict> {
    x.check_valid()?;
    let n = x.point_labels().len();
    check_cap(n, cap)?;
    let codes = x.pair_codes();
    let auts = automorphism_perms(&codes);
    let mut checked = 0u64;
    for k in 1..=n {
        let mut covered: HashSet<Vec<usize>> = HashSet::new();
        for domain in combinations(n, k) {
            if covered.contains(&domain) {
                continue;
            }
            let mut orbit: HashSet<Vec<usize>> = HashSet::with_capacity(auts.len());
            for sigma in &auts {
                let tuple: Vec<usize> = domain.iter().map(|&d| sigma[d]).collect();
                let mut set = tuple.clone();
                set.sort_unstable();
                covered.insert(set);
                orbit.insert(tuple);
            }
            let mut witness = None;
            for_each_partial_iso(&codes, &domain, &mut |image| {
                checked += 1;
                if orbit.contains(image) {
                    return true;
                }
                witness = Some(image.to_vec());
                false
            });
            if let Some(image) = witness {
                let map = PartialMap::new(domain.iter().copied().zip(image).collect())
                    .expect("partial isomorphisms are injective");
                return Ok(HomogeneityVerdict {
                    witness: Some(map),
                    automorphism_count: auts.len(),
                    partial_isos_checked: checked,
                });
            }
        }
    }
    Ok(HomogeneityVerdict {
        witness: None,
        automorphism_count: auts.len(),
        partial_isos_checked: checked,
    })
}

/// Sorted `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Calls `visit` on every injective image tuple of `domain` preserving all
/// pair codes, in lexicographic order, until it returns `false`.
fn for_each_partial_iso(codes: &CodeMatrix, domain: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(
        codes: &CodeMatrix,
        domain: &[usize],
        image: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let i = image.len();
        if i == domain.len() {
            return visit(image);
        }
        let d = domain[i];
        for y in 0..codes.len() {
            if used[y] || codes.code(y, y) != codes.code(d, d) {
                continue;
            }
            let ok = (0..i).all(|j| {
                codes.code(domain[j], d) == codes.code(image[j], y)
                    && codes.code(d, domain[j]) == codes.code(y, image[j])
            });
            if !ok {
                continue;
            }
            used[y] = true;
            image.push(y);
            let more = go(codes, domain, image, used, visit);
            image.pop();
            used[y] = false;
            if !more {
                return false;
            }
        }
        true
    }
    let mut used = vec![false; codes.len()];
    go(codes, domain, &mut Vec::new(), &mut used, visit);
}

/// How the classes of one relation split into classes of a relation covered
/// by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub lower: Elem,
    pub upper: Elem,
    /// For each `E_upper` class in block order, the number of `E_lower`
    /// classes inside it.
    pub splits: Vec<usize>,
}

/// One entry per covering pair `λ ⋖ μ` of the lattice, in id order.
pub fn index_profile(a: &EqStructure) -> Result<Vec<IndexEntry>> {
    a.validate().into_result()?;
    let l = a.lattice();
    Ok(l.covers()
        .into_iter()
        .map(|(lower, upper)| {
            let fine = a.relation(lower);
            let splits = a
                .relation(upper)
                .blocks()
                .iter()
                .map(|block| {
                    let mut classes: Vec<usize> = block.iter().map(|&x| fine.block_of(x)).collect();
                    classes.sort_unstable();
                    classes.dedup();
                    classes.len()
                })
                .collect();
            IndexEntry {
                lower,
                upper,
                splits,
            }
        })
        .collect())
}
