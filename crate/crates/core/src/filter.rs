//! Filters, the filter lattice Φ(Λ) under reverse inclusion, and the
//! principal-filter embedding `λ ↦ ^λ`.
//!
//! Filters are described intensionally by a [`FilterDescriptor`]. Over a
//! [`FiniteLattice`] every filter has a minimum, so the strict variant is
//! uninhabited there (its payload type is [`Infallible`]). Over the
//! [`DenseUnitChain`] a filter is either `[q, 1]` or `(q, 1]` with `q < 1`.

use std::cmp::Ordering;
use std::convert::Infallible;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::{DenseUnitChain, Elem, FiniteLattice, LatticeProvider, Rational};

/// `q` with `0 <= q < 1`; the bound of a strict-upper-set filter.
///
/// `q = 1` would describe the empty set, which is not a filter, so the
/// constructor refuses it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrictBound(Rational);

impl StrictBound {
    pub fn new(q: Rational) -> Result<Self> {
        if q < Rational::from_integer(0) || q >= Rational::one() {
            return Err(Error::OutOfRange(format!("strict filter bound {q}")));
        }
        Ok(StrictBound(q))
    }

    pub fn value(&self) -> Rational {
        self.0
    }
}

/// An intensional description of a filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterDescriptor<E, S> {
    /// `{y : y >= x}`.
    Principal(E),
    /// `{y : y > q}`.
    StrictAbove(S),
}

/// Filter descriptors over a particular base lattice.
pub type Filter<B> = FilterDescriptor<<B as LatticeProvider>::Elem, <B as FilterBase>::Strict>;

/// A base lattice whose filters can be described and combined
/// intensionally.
pub trait FilterBase: LatticeProvider + Sized {
    type Strict: Clone + PartialEq + fmt::Debug;

    /// Membership of a base element in a described filter.
    fn member(&self, f: &Filter<Self>, x: &Self::Elem) -> Result<bool>;
    /// `f ⊇ g` as sets.
    fn includes(&self, f: &Filter<Self>, g: &Filter<Self>) -> bool;
    /// The filter `f ∩ g`.
    fn intersect(&self, f: &Filter<Self>, g: &Filter<Self>) -> Filter<Self>;
    /// The filter generated by `f ∪ g`.
    fn generate_union(&self, f: &Filter<Self>, g: &Filter<Self>) -> Filter<Self>;
    fn strict_label(&self, s: &Self::Strict) -> String;
    fn parse_strict(&self, label: &str) -> Option<Self::Strict>;
}

impl FilterBase for FiniteLattice {
    type Strict = Infallible;

    fn member(&self, f: &Filter<Self>, x: &Elem) -> Result<bool> {
        if *x >= self.len() {
            return Err(Error::NotInLattice(x.to_string()));
        }
        match f {
            FilterDescriptor::Principal(p) => Ok(self.leq(*p, *x)),
            FilterDescriptor::StrictAbove(never) => match *never {},
        }
    }

    fn includes(&self, f: &Filter<Self>, g: &Filter<Self>) -> bool {
        self.leq(principal_of(f), principal_of(g))
    }

    fn intersect(&self, f: &Filter<Self>, g: &Filter<Self>) -> Filter<Self> {
        FilterDescriptor::Principal(self.join(principal_of(f), principal_of(g)))
    }

    fn generate_union(&self, f: &Filter<Self>, g: &Filter<Self>) -> Filter<Self> {
        FilterDescriptor::Principal(self.meet(principal_of(f), principal_of(g)))
    }

    fn strict_label(&self, s: &Infallible) -> String {
        match *s {}
    }

    fn parse_strict(&self, _: &str) -> Option<Infallible> {
        None
    }
}

fn principal_of(f: &FilterDescriptor<Elem, Infallible>) -> Elem {
    match f {
        FilterDescriptor::Principal(p) => *p,
        FilterDescriptor::StrictAbove(never) => match *never {},
    }
}

impl FilterBase for DenseUnitChain {
    type Strict = StrictBound;

    fn member(&self, f: &Filter<Self>, x: &Rational) -> Result<bool> {
        if !self.contains(x) {
            return Err(Error::NotInLattice(x.to_string()));
        }
        Ok(match f {
            FilterDescriptor::Principal(p) => x >= p,
            FilterDescriptor::StrictAbove(q) => *x > q.value(),
        })
    }

    fn includes(&self, f: &Filter<Self>, g: &Filter<Self>) -> bool {
        use FilterDescriptor::*;
        match (f, g) {
            // [a,1] ⊇ [b,1] and [a,1] ⊇ (b,1] both need a <= b, the latter by density
            (Principal(a), Principal(b)) => a <= b,
            (Principal(a), StrictAbove(b)) => *a <= b.value(),
            (StrictAbove(a), Principal(b)) => a.value() < *b,
            (StrictAbove(a), StrictAbove(b)) => a.value() <= b.value(),
        }
    }

    fn intersect(&self, f: &Filter<Self>, g: &Filter<Self>) -> Filter<Self> {
        // Two up-sets of a chain are nested; the intersection is the smaller.
        if self.includes(f, g) {
            *g
        } else {
            *f
        }
    }

    fn generate_union(&self, f: &Filter<Self>, g: &Filter<Self>) -> Filter<Self> {
        // The union of nested up-sets is the larger one, already a filter.
        if self.includes(f, g) {
            *f
        } else {
            *g
        }
    }

    fn strict_label(&self, s: &StrictBound) -> String {
        format!(">{}", s.value())
    }

    fn parse_strict(&self, label: &str) -> Option<StrictBound> {
        let q: Rational = label.strip_prefix('>')?.parse().ok()?;
        StrictBound::new(q).ok()
    }
}

/// The filter lattice Φ(B): filters of `B` under reverse inclusion, with join
/// given by intersection and meet by the filter generated by the union.
#[derive(Debug)]
pub struct PhiLattice<B> {
    base: Arc<B>,
}

impl<B> Clone for PhiLattice<B> {
    fn clone(&self) -> Self {
        PhiLattice {
            base: Arc::clone(&self.base),
        }
    }
}

impl<B: PartialEq> PartialEq for PhiLattice<B> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || self.base == other.base
    }
}

impl<B: FilterBase> PhiLattice<B> {
    pub fn new(base: Arc<B>) -> Self {
        PhiLattice { base }
    }

    pub fn base(&self) -> &Arc<B> {
        &self.base
    }

    pub fn principal(&self, x: B::Elem) -> Filter<B> {
        FilterDescriptor::Principal(x)
    }

    pub fn member(&self, f: &Filter<B>, x: &B::Elem) -> Result<bool> {
        self.base.member(f, x)
    }
}

impl<B: FilterBase> LatticeProvider for PhiLattice<B> {
    type Elem = Filter<B>;

    fn leq(&self, f: &Filter<B>, g: &Filter<B>) -> bool {
        self.base.includes(f, g)
    }
    fn meet(&self, f: &Filter<B>, g: &Filter<B>) -> Filter<B> {
        self.base.generate_union(f, g)
    }
    fn join(&self, f: &Filter<B>, g: &Filter<B>) -> Filter<B> {
        self.base.intersect(f, g)
    }
    fn bottom(&self) -> Filter<B> {
        FilterDescriptor::Principal(self.base.bottom())
    }
    fn top(&self) -> Filter<B> {
        FilterDescriptor::Principal(self.base.top())
    }
    fn contains(&self, f: &Filter<B>) -> bool {
        match f {
            FilterDescriptor::Principal(x) => self.base.contains(x),
            FilterDescriptor::StrictAbove(_) => true,
        }
    }
    fn is_finite(&self) -> bool {
        self.base.is_finite()
    }
    fn enumerate(&self) -> Option<Vec<Filter<B>>> {
        self.base
            .enumerate()
            .map(|xs| xs.into_iter().map(FilterDescriptor::Principal).collect())
    }
    fn label(&self, f: &Filter<B>) -> String {
        match f {
            FilterDescriptor::Principal(x) => format!("^{}", self.base.label(x)),
            FilterDescriptor::StrictAbove(s) => format!("^{}", self.base.strict_label(s)),
        }
    }
    fn parse_element(&self, label: &str) -> Option<Filter<B>> {
        let rest = label.strip_prefix('^')?;
        if let Some(s) = self.base.parse_strict(rest) {
            return Some(FilterDescriptor::StrictAbove(s));
        }
        self.base
            .parse_element(rest)
            .map(FilterDescriptor::Principal)
    }
}

/// The filter generated by a finite nonempty set of generators: the principal
/// filter of their meet.
pub fn generated_filter<B: FilterBase>(base: &B, gens: &[B::Elem]) -> Result<Filter<B>> {
    let (first, rest) = gens.split_first().ok_or(Error::EmptyGenerators)?;
    if let Some(bad) = gens.iter().find(|g| !base.contains(g)) {
        return Err(Error::NotInLattice(format!("{bad:?}")));
    }
    let m = rest.iter().fold(first.clone(), |acc, g| base.meet(&acc, g));
    Ok(FilterDescriptor::Principal(m))
}

/// Φ(Λ) of a finite lattice, materialized.
#[derive(Debug, Clone)]
pub struct PhiFinite {
    /// The intensional filter lattice over Λ.
    pub lattice: PhiLattice<FiniteLattice>,
    /// The same lattice as a [`FiniteLattice`] with labels `^<element>`;
    /// element `i` is the filter with minimum `i`.
    pub table: FiniteLattice,
    /// `embedding[λ]` is the principal filter `^λ`.
    pub embedding: Vec<Filter<FiniteLattice>>,
}

/// Enumerates the filters of a finite lattice and orders them by reverse
/// inclusion of their extensions.
///
/// Each filter is identified by its minimum, but the order of `table` is
/// computed from the extensional up-sets, not from the order of Λ.
pub fn phi(base: Arc<FiniteLattice>) -> PhiFinite {
    let n = base.len();
    let extensions: Vec<FixedBitSet> = base.elements().map(|x| base.upset(x).clone()).collect();
    debug_assert!(extensions.iter().all(|f| is_filter(&base, f)));
    let names: Vec<String> = base.names().iter().map(|s| format!("^{s}")).collect();
    let table = FiniteLattice::from_order(&format!("phi({})", base.name()), &names, |f, g| {
        extensions[g].is_subset(&extensions[f])
    })
    .expect("filters of a lattice form a lattice");
    debug_assert_eq!(table.len(), n);
    PhiFinite {
        embedding: base.elements().map(FilterDescriptor::Principal).collect(),
        lattice: PhiLattice::new(base),
        table,
    }
}

/// Whether an extensional subset of a finite lattice is a filter: nonempty,
/// upward closed and closed under binary meet.
pub fn is_filter(l: &FiniteLattice, set: &FixedBitSet) -> bool {
    if set.is_clear() {
        return false;
    }
    set.ones().all(|x| {
        l.upset(x).is_subset(set) && set.ones().all(|y| set.contains(l.meet(x, y)))
    })
}

/// A minimum-size nonempty subset of `gens` whose meet is exactly `target`,
/// scanning subsets by size and then lexicographically.
///
/// When `^target` is the meet of `{^g : g ∈ gens}` in Φ(Λ) such a subset
/// always exists.
pub fn finite_meet_witness(l: &FiniteLattice, target: Elem, gens: &[Elem]) -> Option<Vec<Elem>> {
    let mut cands: Vec<Elem> = gens.iter().copied().filter(|&g| l.leq(target, g)).collect();
    cands.sort_unstable();
    cands.dedup();
    if cands.is_empty() || l.meet_all(cands.iter().copied()) != target {
        return None;
    }
    for size in 1..=cands.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if l.meet_all(idx.iter().map(|&i| cands[i])) == target {
                return Some(idx.iter().map(|&i| cands[i]).collect());
            }
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&p| idx[p] < cands.len() - size + p) else {
                break;
            };
            idx[pos] += 1;
            for p in pos + 1..size {
                idx[p] = idx[p - 1] + 1;
            }
        }
    }
    unreachable!("the full candidate set meets to the target")
}

/// An element of `([0,1] × {0,1}) ∖ {(1,1)}` under the lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexPair {
    pub value: Rational,
    pub strict: bool,
}

impl LexPair {
    pub fn new(value: Rational, strict: bool) -> Result<Self> {
        if value < Rational::from_integer(0) || value > Rational::one() {
            return Err(Error::OutOfRange(format!("pair value {value}")));
        }
        if strict && value == Rational::one() {
            return Err(Error::OutOfRange("(1,1) is the empty filter".into()));
        }
        Ok(LexPair { value, strict })
    }

    pub fn to_filter(self) -> Filter<DenseUnitChain> {
        if self.strict {
            FilterDescriptor::StrictAbove(StrictBound(self.value))
        } else {
            FilterDescriptor::Principal(self.value)
        }
    }

    pub fn from_filter(f: &Filter<DenseUnitChain>) -> Self {
        match f {
            FilterDescriptor::Principal(q) => LexPair {
                value: *q,
                strict: false,
            },
            FilterDescriptor::StrictAbove(s) => LexPair {
                value: s.value(),
                strict: true,
            },
        }
    }
}

/// Outcome of [`phi_dense_chain_model`]; an empty mismatch list is a pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseModelReport {
    pub descriptors: usize,
    pub pairs_checked: usize,
    pub empty_filter_excluded: bool,
    pub mismatches: Vec<String>,
}

impl DenseModelReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.empty_filter_excluded
    }
}

/// Checks the lexicographic pair model of Φ over the dense chain against the
/// filter descriptors, and both against extensional membership.
///
/// Descriptors range over every bound with denominator at most `max_den`.
/// Membership is probed at each bound and at the midpoint of every pair of
/// consecutive bounds, which decides inclusion between such filters exactly.
pub fn phi_dense_chain_model(max_den: i64) -> DenseModelReport {
    let chain = DenseUnitChain;
    let phi = PhiLattice::new(Arc::new(chain));
    let bounds = chain.sample(max_den);
    let mut probes = bounds.clone();
    probes.extend(bounds.windows(2).map(|w| (w[0] + w[1]) / 2));
    probes.sort();

    let pairs: Vec<LexPair> = bounds
        .iter()
        .flat_map(|&q| [LexPair::new(q, false), LexPair::new(q, true)])
        .filter_map(|p| p.ok())
        .collect();
    let filters: Vec<Filter<DenseUnitChain>> = pairs.iter().map(|p| p.to_filter()).collect();
    let ext: Vec<FixedBitSet> = filters
        .iter()
        .map(|f| {
            let mut set = FixedBitSet::with_capacity(probes.len());
            for (i, x) in probes.iter().enumerate() {
                set.set(i, chain.member(f, x).expect("probes lie in [0,1]"));
            }
            set
        })
        .collect();

    let mut mismatches = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..pairs.len() {
        if LexPair::from_filter(&filters[i]) != pairs[i] {
            mismatches.push(format!("correspondence {:?}", pairs[i]));
        }
        for j in 0..pairs.len() {
            pairs_checked += 1;
            let (p, q) = (pairs[i], pairs[j]);
            let (f, g) = (&filters[i], &filters[j]);
            let lex_leq = p.cmp(&q) != Ordering::Greater;
            let ext_leq = ext[j].is_subset(&ext[i]);
            if lex_leq != phi.leq(f, g) || lex_leq != ext_leq {
                mismatches.push(format!("order {p:?} {q:?}"));
            }
            let lex_meet = p.min(q);
            let meet = phi.meet(f, g);
            let mut union = ext[i].clone();
            union.union_with(&ext[j]);
            if LexPair::from_filter(&meet) != lex_meet
                || ext[filter_index(&pairs, lex_meet)] != union
            {
                mismatches.push(format!("meet {p:?} {q:?}"));
            }
            let lex_join = p.max(q);
            let join = phi.join(f, g);
            let mut inter = ext[i].clone();
            inter.intersect_with(&ext[j]);
            if LexPair::from_filter(&join) != lex_join
                || ext[filter_index(&pairs, lex_join)] != inter
            {
                mismatches.push(format!("join {p:?} {q:?}"));
            }
        }
    }
    let empty_filter_excluded = LexPair::new(Rational::one(), true).is_err()
        && StrictBound::new(Rational::one()).is_err();
    DenseModelReport {
        descriptors: pairs.len(),
        pairs_checked,
        empty_filter_excluded,
        mismatches,
    }
}

fn filter_index(pairs: &[LexPair], p: LexPair) -> usize {
    pairs.binary_search(&p).expect("pairs are sorted and closed")
}
