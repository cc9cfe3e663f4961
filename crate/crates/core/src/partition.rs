use std::collections::HashMap;

use crate::error::{Error, Result};

/// An equivalence relation on `0..n`, stored as canonical block ids: blocks
/// are numbered in order of their first element, so equal relations have
/// equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block_of: Vec<u32>,
}

impl Partition {
    /// Canonicalizes arbitrary block ids.
    pub fn from_block_ids<T: Copy + Eq + std::hash::Hash>(ids: &[T]) -> Self {
        let mut seen = HashMap::new();
        let block_of = ids
            .iter()
            .map(|id| {
                let next = seen.len() as u32;
                *seen.entry(*id).or_insert(next)
            })
            .collect();
        Partition { block_of }
    }

    /// Equality on `n` points.
    pub fn discrete(n: usize) -> Self {
        Partition {
            block_of: (0..n as u32).collect(),
        }
    }

    /// The all-relating relation on `n` points.
    pub fn trivial(n: usize) -> Self {
        Partition {
            block_of: vec![0; n],
        }
    }

    /// Builds a partition from explicit blocks, which must be disjoint and
    /// cover `0..n`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut ids = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::MalformedPartition(format!("point {x} out of range")));
                }
                if ids[x] != usize::MAX {
                    return Err(Error::MalformedPartition(format!(
                        "point {x} lies in two blocks"
                    )));
                }
                ids[x] = b;
            }
        }
        if let Some(x) = ids.iter().position(|&b| b == usize::MAX) {
            return Err(Error::MalformedPartition(format!("point {x} is in no block")));
        }
        Ok(Self::from_block_ids(&ids))
    }

    /// The partition of a relation given as a predicate, or `None` if the
    /// relation is not an equivalence relation.
    pub fn from_relation(n: usize, rel: impl Fn(usize, usize) -> bool) -> Option<Self> {
        let mut ids = vec![u32::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if ids[x] != u32::MAX {
                continue;
            }
            ids[x] = next;
            for y in x + 1..n {
                if rel(x, y) {
                    if ids[y] != u32::MAX {
                        // y is already in an earlier block, but x was not
                        return None;
                    }
                    ids[y] = next;
                }
            }
            next += 1;
        }
        let p = Partition { block_of: ids };
        (0..n)
            .all(|x| (0..n).all(|y| rel(x, y) == p.related(x, y)))
            .then_some(p)
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x] as usize
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// Blocks in canonical order, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as relations: every block of `self` lies inside a block
    /// of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![u32::MAX; self.num_blocks()];
        self.block_of
            .iter()
            .zip(&other.block_of)
            .all(|(&b, &c)| match image[b as usize] {
                u32::MAX => {
                    image[b as usize] = c;
                    true
                }
                seen => seen == c,
            })
    }

    /// Intersection of the two relations (common refinement).
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(u32, u32)> = self
            .block_of
            .iter()
            .copied()
            .zip(other.block_of.iter().copied())
            .collect();
        Self::from_block_ids(&pairs)
    }

    /// Transitive closure of the union of the two relations.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for (x, &b) in p.block_of.iter().enumerate() {
                match first[b as usize] {
                    usize::MAX => first[b as usize] = x,
                    f => {
                        let (ra, rb) = (find(&mut parent, f), find(&mut parent, x));
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Self::from_block_ids(&roots)
    }

    /// The induced relation on the listed points, in the listed order.
    pub fn restrict(&self, points: &[usize]) -> Partition {
        let ids: Vec<u32> = points.iter().map(|&x| self.block_of[x]).collect();
        Self::from_block_ids(&ids)
    }

    /// The relation transported along a permutation: `x ~ y` in the result
    /// iff `perm⁻¹(x) ~ perm⁻¹(y)` here.
    pub fn permute(&self, perm: &[usize]) -> Partition {
        let mut ids = vec![0u32; self.len()];
        for (x, &px) in perm.iter().enumerate() {
            ids[px] = self.block_of[x];
        }
        Self::from_block_ids(&ids)
    }
}
