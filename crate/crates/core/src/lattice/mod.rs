//! Finite bounded lattices and the provider abstraction shared with the
//! infinite value lattices (the dense rational chain and filter lattices).
//!
//! A [`FiniteLattice`] stores its order as one upset and one downset bitset per
//! element, plus full meet and join tables. Elements are dense ids `0..len()`
//! with a label table; every constructor either validates the lattice axioms or
//! computes the tables from closed forms that are checked in the test suite.

mod analysis;
mod catalog;
mod dense;

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

pub use analysis::{lattice_isomorphic, ForbiddenSublattice};
pub use catalog::{catalog, product, CatalogCaps, CatalogKind};
pub use dense::{DenseUnitChain, Rational};

use crate::error::{Error, Result};

/// Element id inside a [`FiniteLattice`].
pub type Elem = usize;

/// Capability record for a bounded lattice of values.
///
/// Implemented by [`FiniteLattice`], [`DenseUnitChain`] and
/// [`PhiLattice`](crate::filter::PhiLattice), so that distances and the
/// ultrametric axioms can be stated once over any of them.
pub trait LatticeProvider {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    /// Whether `a` is a legal element of this lattice.
    fn contains(&self, a: &Self::Elem) -> bool;
    fn is_finite(&self) -> bool;
    /// All elements, for finite providers only.
    fn enumerate(&self) -> Option<Vec<Self::Elem>>;
    fn label(&self, a: &Self::Elem) -> String;
    fn parse_element(&self, label: &str) -> Option<Self::Elem>;
}

/// A bounded finite lattice with full order, meet and join tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    name: String,
    names: Vec<String>,
    index: HashMap<String, Elem>,
    /// `up[x]` holds every `y` with `x <= y`.
    up: Vec<FixedBitSet>,
    /// `down[x]` holds every `y` with `y <= x`.
    down: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: Elem,
    top: Elem,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("name", &self.name)
            .field("elements", &self.names)
            .field("covers", &self.covers_labelled())
            .finish()
    }
}

fn label_index(names: &[String]) -> Result<HashMap<String, Elem>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.chars().any(char::is_whitespace) {
            return Err(Error::Invalid(format!("bad element label `{n}`")));
        }
        if index.insert(n.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(n.clone()));
        }
    }
    Ok(index)
}

impl FiniteLattice {
    /// Builds a lattice from its Hasse diagram (or any generating set of
    /// order pairs): the order is the reflexive-transitive closure of `covers`.
    pub fn from_covers<S: AsRef<str>>(
        name: &str,
        names: &[S],
        covers: &[(S, S)],
    ) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let index = label_index(&names)?;
        let n = names.len();
        let mut succ: Vec<Vec<Elem>> = vec![Vec::new(); n];
        for (lo, hi) in covers {
            let lo = *index
                .get(lo.as_ref())
                .ok_or_else(|| Error::UnknownLabel(lo.as_ref().to_string()))?;
            let hi = *index
                .get(hi.as_ref())
                .ok_or_else(|| Error::UnknownLabel(hi.as_ref().to_string()))?;
            succ[lo].push(hi);
        }
        // DFS reachability from every node.
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (start, reach) in up.iter_mut().enumerate() {
            let mut stack = vec![start];
            reach.insert(start);
            while let Some(v) = stack.pop() {
                for &w in &succ[v] {
                    if !reach.contains(w) {
                        reach.insert(w);
                        stack.push(w);
                    }
                }
            }
        }
        Self::from_upsets(name, names, index, up)
    }

    /// Builds a lattice from an explicit order predicate. The predicate must
    /// describe a partial order; antisymmetry and transitivity are checked.
    pub fn from_order<S: AsRef<str>>(
        name: &str,
        names: &[S],
        leq: impl Fn(Elem, Elem) -> bool,
    ) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let index = label_index(&names)?;
        let n = names.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..n {
                if x == y || leq(x, y) {
                    row.insert(y);
                }
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if !up[y].is_subset(&up[x]) {
                    let z = up[y].difference(&up[x]).next().unwrap();
                    return Err(Error::Invalid(format!(
                        "order is not transitive: {} <= {} <= {}",
                        names[x], names[y], names[z]
                    )));
                }
            }
        }
        Self::from_upsets(name, names, index, up)
    }

    fn from_upsets(
        name: &str,
        names: Vec<String>,
        index: HashMap<String, Elem>,
        up: Vec<FixedBitSet>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyLattice);
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        for a in 0..n {
            for b in up[a].ones().filter(|&b| b > a) {
                if up[b].contains(a) {
                    return Err(Error::Cycle(names[a].clone(), names[b].clone()));
                }
            }
        }
        let minimal: Vec<Elem> = (0..n).filter(|&x| down[x].count_ones(..) == 1).collect();
        if minimal.len() != 1 {
            return Err(Error::NoBottom(
                names[minimal[0]].clone(),
                names[minimal[1]].clone(),
            ));
        }
        let maximal: Vec<Elem> = (0..n).filter(|&x| up[x].count_ones(..) == 1).collect();
        if maximal.len() != 1 {
            return Err(Error::NoTop(
                names[maximal[0]].clone(),
                names[maximal[1]].clone(),
            ));
        }
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for x in 0..n {
            for y in x..n {
                let m = extremal_bound(&down, &down[x], &down[y]).ok_or_else(|| {
                    Error::NotALattice(names[x].clone(), names[y].clone(), "meet")
                })?;
                let j = extremal_bound(&up, &up[x], &up[y]).ok_or_else(|| {
                    Error::NotALattice(names[x].clone(), names[y].clone(), "join")
                })?;
                meet[x * n + y] = m as u32;
                meet[y * n + x] = m as u32;
                join[x * n + y] = j as u32;
                join[y * n + x] = j as u32;
            }
        }
        Ok(FiniteLattice {
            name: name.to_string(),
            names,
            index,
            up,
            down,
            meet,
            join,
            bottom: minimal[0],
            top: maximal[0],
        })
    }

    /// Assembles a lattice whose tables come from closed forms. Only used by
    /// the catalog, whose tables are cross-checked against the order in tests.
    pub(crate) fn from_closed_forms(
        name: String,
        names: Vec<String>,
        leq: impl Fn(Elem, Elem) -> bool,
        meet: impl Fn(Elem, Elem) -> Elem,
        join: impl Fn(Elem, Elem) -> Elem,
        bottom: Elem,
        top: Elem,
    ) -> Result<Self> {
        let index = label_index(&names)?;
        let n = names.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        let mut meet_t = vec![0u32; n * n];
        let mut join_t = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    up[x].insert(y);
                    down[y].insert(x);
                }
                meet_t[x * n + y] = meet(x, y) as u32;
                join_t[x * n + y] = join(x, y) as u32;
            }
        }
        Ok(FiniteLattice {
            name,
            names,
            index,
            up,
            down,
            meet: meet_t,
            join: join_t,
            bottom,
            top,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.index.get(label).copied()
    }

    pub fn elem(&self, label: &str) -> Result<Elem> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.len() + y] as Elem
    }

    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.len() + y] as Elem
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn upset(&self, x: Elem) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn downset(&self, x: Elem) -> &FixedBitSet {
        &self.down[x]
    }

    /// Meet of a finite family; the empty meet is top.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a finite family; the empty join is bottom.
    pub fn join_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Covering pairs `(lower, upper)` sorted by ids.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.up[x].ones().filter(|&y| y != x) {
                // y covers x iff the interval [x, y] is exactly {x, y}
                if self.up[x].intersection(&self.down[y]).count() == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn covers_labelled(&self) -> Vec<(&str, &str)> {
        self.covers()
            .into_iter()
            .map(|(a, b)| (self.name_of(a), self.name_of(b)))
            .collect()
    }
}

/// Greatest element of `bounds` = `a ∩ b` with respect to `cone`: the element
/// whose cone equals the full bound set.
fn extremal_bound(cone: &[FixedBitSet], a: &FixedBitSet, b: &FixedBitSet) -> Option<Elem> {
    let mut bounds = a.clone();
    bounds.intersect_with(b);
    let best = bounds.ones().max_by_key(|&z| cone[z].count_ones(..))?;
    (cone[best] == bounds).then_some(best)
}

impl LatticeProvider for FiniteLattice {
    type Elem = Elem;

    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        FiniteLattice::leq(self, *a, *b)
    }
    fn meet(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteLattice::meet(self, *a, *b)
    }
    fn join(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteLattice::join(self, *a, *b)
    }
    fn bottom(&self) -> Elem {
        self.bottom
    }
    fn top(&self) -> Elem {
        self.top
    }
    fn contains(&self, a: &Elem) -> bool {
        *a < self.len()
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn enumerate(&self) -> Option<Vec<Elem>> {
        Some(self.elements().collect())
    }
    fn label(&self, a: &Elem) -> String {
        self.names[*a].clone()
    }
    fn parse_element(&self, label: &str) -> Option<Elem> {
        self.index_of(label)
    }
}
