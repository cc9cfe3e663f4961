//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracles only consult `leq` (or raw labels) and recompute everything
//! else from scratch, so they do not share code paths with the library.

#![allow(dead_code)]

use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultralat::correspondence::{from_finite_view, random_eq_structure, to_eq};
use ultralat::lattice::{catalog, CatalogCaps, CatalogKind, Elem, FiniteLattice};
use ultralat::structures::{gen_affine_m3, gen_boolean_example, gen_degenerate, EqStructure, UltrametricSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn kind(s: &str) -> CatalogKind {
    s.parse().unwrap()
}

pub fn lat(s: &str) -> Arc<FiniteLattice> {
    Arc::new(catalog(&kind(s), &CatalogCaps::default()).unwrap())
}

/// Catalog lattices with at most `max` elements: chains, boolean algebras,
/// m3, n5 and products of small factors.
pub fn catalog_upto(max: usize) -> Vec<Arc<FiniteLattice>> {
    let mut kinds: Vec<CatalogKind> = (1..=16).map(CatalogKind::Chain).collect();
    kinds.extend((1..=4).map(CatalogKind::Boolean));
    kinds.push(CatalogKind::M3);
    kinds.push(CatalogKind::N5);
    let factors = ["chain2", "chain3", "chain4", "boolean2", "m3", "n5"];
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            kinds.push(kind(&format!("product({a},{b})")));
        }
    }
    kinds
        .iter()
        .map(|k| Arc::new(catalog(k, &CatalogCaps::default()).unwrap()))
        .filter(|l| l.len() <= max)
        .collect()
}

/// The greatest lower bound of `xs`, found by scanning the order relation.
pub fn glb(l: &FiniteLattice, xs: &[Elem]) -> Elem {
    let lower: Vec<Elem> = l.elements().filter(|&z| xs.iter().all(|&x| l.leq(z, x))).collect();
    let best: Vec<Elem> = lower
        .iter()
        .copied()
        .filter(|&z| lower.iter().all(|&w| l.leq(w, z)))
        .collect();
    assert_eq!(best.len(), 1, "glb must be unique");
    best[0]
}

pub fn lub(l: &FiniteLattice, xs: &[Elem]) -> Elem {
    let upper: Vec<Elem> = l.elements().filter(|&z| xs.iter().all(|&x| l.leq(x, z))).collect();
    let best: Vec<Elem> = upper
        .iter()
        .copied()
        .filter(|&z| upper.iter().all(|&w| l.leq(z, w)))
        .collect();
    assert_eq!(best.len(), 1, "lub must be unique");
    best[0]
}

/// Order, meet and join tables recomputed from `leq` alone.
pub struct Oracle {
    n: usize,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
}

impl Oracle {
    pub fn new(l: &FiniteLattice) -> Self {
        let n = l.len();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                meet[x * n + y] = glb(l, &[x, y]);
                join[x * n + y] = lub(l, &[x, y]);
            }
        }
        Oracle {
            n,
            leq: (0..n * n).map(|i| l.leq(i / n, i % n)).collect(),
            meet,
            join,
        }
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x * self.n + y]
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.n + y]
    }

    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.n + y]
    }

    pub fn meet_all(&self, xs: &[Elem]) -> Elem {
        let (first, rest) = xs.split_first().expect("nonempty");
        rest.iter().fold(*first, |acc, &x| self.meet(acc, x))
    }

    pub fn upset(&self, x: Elem) -> Vec<bool> {
        (0..self.n).map(|y| self.leq(x, y)).collect()
    }

    /// Nonempty, upward closed, closed under pairwise meets.
    pub fn is_filter_set(&self, set: &[bool]) -> bool {
        let members: Vec<Elem> = (0..self.n).filter(|&x| set[x]).collect();
        !members.is_empty()
            && members.iter().all(|&x| (0..self.n).all(|y| !self.leq(x, y) || set[y]))
            && members.iter().all(|&x| members.iter().all(|&y| set[self.meet(x, y)]))
    }

    /// Every filter as a membership vector, by exhausting subsets.
    pub fn all_filters(&self) -> Vec<Vec<bool>> {
        let n = self.n;
        (1u32..1 << n)
            .map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|s| self.is_filter_set(s))
            .collect()
    }

    /// The smallest filter containing every element marked in `gens`.
    pub fn generated_filter_set(&self, gens: &[bool]) -> Vec<bool> {
        let mut set = gens.to_vec();
        loop {
            let mut next = set.clone();
            for x in (0..self.n).filter(|&x| set[x]) {
                for y in 0..self.n {
                    if self.leq(x, y) {
                        next[y] = true;
                    }
                    if set[y] {
                        next[self.meet(x, y)] = true;
                    }
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }
}

/// A space from the upper triangle, listed row by row as labels.
pub fn space_from_labels(
    name: &str,
    l: &Arc<FiniteLattice>,
    points: &[&str],
    upper: &[&str],
) -> UltrametricSpace<FiniteLattice> {
    let mut it = upper.iter();
    UltrametricSpace::from_upper(
        name,
        Arc::clone(l),
        points.iter().map(|s| s.to_string()).collect(),
        |_, _| l.elem(it.next().unwrap()).unwrap(),
    )
    .unwrap()
}

/// Every built-in structure used as a fixture.
pub fn fixtures() -> Vec<EqStructure> {
    let mut out = vec![gen_affine_m3()];
    for n in 1..=4 {
        out.push(gen_boolean_example(n, 6).unwrap());
    }
    for (k, size) in [("m3", 3), ("n5", 2), ("chain3", 4), ("boolean2", 3), ("product(chain2,chain3)", 2)] {
        out.push(gen_degenerate(lat(k), size).unwrap().with_name(&format!("degenerate_{k}_{size}")));
    }
    // points 0,1 closer than either is to 2
    let chain3 = lat("chain3");
    let lopsided = space_from_labels("lopsided", &chain3, &["x0", "x1", "x2"], &["1", "2", "2"]);
    out.push(to_eq(&from_finite_view(&lopsided)).unwrap());
    let mut r = rng(7);
    for (i, (k, n)) in [("chain4", 5), ("boolean2", 5), ("n5", 4), ("m3", 6), ("boolean3", 6)]
        .into_iter()
        .enumerate()
    {
        let a = random_eq_structure(&lat(k), n, &mut r).unwrap();
        out.push(a.with_name(&format!("random{i}_{k}")));
    }
    out
}

/// Whether `f` (a map on `domain`) preserves every relation in both
/// directions, read off point pairs directly.
pub fn preserves_relations(a: &EqStructure, b: &EqStructure, pairs: &[(usize, usize)]) -> bool {
    let l = a.lattice();
    pairs.iter().all(|&(x, fx)| {
        pairs.iter().all(|&(y, fy)| {
            l.elements().all(|el| a.relation(el).related(x, y) == b.relation(el).related(fx, fy))
        })
    })
}

/// Homogeneity by brute force: every injective map between subsets that
/// preserves all relations extends to a relation-preserving permutation.
pub fn homogeneous_oracle(a: &EqStructure) -> bool {
    let n = a.len();
    let auts: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .filter(|p| {
            let pairs: Vec<(usize, usize)> = p.iter().copied().enumerate().collect();
            preserves_relations(a, a, &pairs)
        })
        .collect();
    (0..=n).all(|k| {
        (0..n).combinations(k).all(|dom| {
            (0..n).permutations(k).all(|img| {
                let pairs: Vec<(usize, usize)> = dom.iter().copied().zip(img.iter().copied()).collect();
                !preserves_relations(a, a, &pairs)
                    || auts.iter().any(|s| pairs.iter().all(|&(x, y)| s[x] == y))
            })
        })
    })
}

/// A random injective map from a random subset of `0..n` into `0..m`.
pub fn random_injection(n: usize, m: usize, r: &mut impl Rng) -> Vec<(usize, usize)> {
    let k = r.gen_range(0..=n.min(m));
    let dom = rand::seq::index::sample(r, n, k).into_vec();
    let img = rand::seq::index::sample(r, m, k).into_vec();
    dom.into_iter().zip(img).collect()
}

/// Collects failure messages for one acceptance criterion and prints a
/// single pass/fail line.
pub struct Criterion {
    number: u32,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(number: u32) -> Self {
        Criterion {
            number,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// Prints the failure line, if any, and reports whether the criterion
    /// held. Passing lines are printed by the runner, with timings.
    pub fn finish(self) -> bool {
        if self.failures.is_empty() {
            return true;
        }
        println!("criterion {}: FAIL ({} findings)", self.number, self.failures.len());
        for f in self.failures.iter().take(10) {
            println!("  {f}");
        }
        false
    }
}
