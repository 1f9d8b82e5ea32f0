use std::collections::{BTreeMap, BTreeSet};

use super::Tuple;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Partition of a target range into overlap-connected blocks.
///
/// Blocks are ordered by their smallest member, and block ids are positions
/// in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapPartition {
    blocks: Vec<BTreeSet<Tuple>>,
    block_index: BTreeMap<Tuple, usize>,
}

impl OverlapPartition {
    /// Builds a partition from arbitrary disjoint blocks, normalizing order.
    pub fn from_blocks(mut blocks: Vec<BTreeSet<Tuple>>) -> Self {
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by(|a, b| a.first().cmp(&b.first()));
        let mut block_index = BTreeMap::new();
        for (id, block) in blocks.iter().enumerate() {
            for t in block {
                let prev = block_index.insert(t.clone(), id);
                assert!(prev.is_none(), "blocks are not disjoint");
            }
        }
        Self { blocks, block_index }
    }

    pub fn blocks(&self) -> &[BTreeSet<Tuple>] {
        &self.blocks
    }

    pub fn block_index(&self) -> &BTreeMap<Tuple, usize> {
        &self.block_index
    }

    pub fn block_of(&self, t: &Tuple) -> Option<usize> {
        self.block_index.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Connected components of the intersection graph of `sets`, expressed on
/// their members. Members are unioned within each set, which links any two
/// sets sharing a member.
pub(crate) fn partition_sets<'a>(sets: impl Iterator<Item = &'a BTreeSet<Tuple>>) -> OverlapPartition {
    let mut ids: BTreeMap<&'a Tuple, usize> = BTreeMap::new();
    let sets: Vec<&'a BTreeSet<Tuple>> = sets.collect();
    for set in &sets {
        for t in set.iter() {
            let next = ids.len();
            ids.entry(t).or_insert(next);
        }
    }
    let mut uf = UnionFind::new(ids.len());
    for set in &sets {
        let mut members = set.iter().map(|t| ids[t]);
        if let Some(first) = members.next() {
            for m in members {
                uf.union(first, m);
            }
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<Tuple>> = BTreeMap::new();
    for (t, &id) in &ids {
        by_root.entry(uf.find(id)).or_default().insert((*t).clone());
    }
    OverlapPartition::from_blocks(by_root.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uv::int_tuple;

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(0), uf.find(3));
        uf.union(1, 4);
        assert_eq!(uf.find(0), uf.find(3));
        assert_ne!(uf.find(2), uf.find(0));
    }

    #[test]
    fn blocks_are_ordered_by_smallest_member() {
        let p = OverlapPartition::from_blocks(vec![
            [int_tuple(&[5]), int_tuple(&[1])].into_iter().collect(),
            [int_tuple(&[0])].into_iter().collect(),
        ]);
        assert_eq!(p.block_of(&int_tuple(&[0])), Some(0));
        assert_eq!(p.block_of(&int_tuple(&[5])), Some(1));
    }
}
