//! Dense digraphs stored as out/in adjacency bitsets.
//!
//! Product vertices are serialized row-major with the first factor major:
//! `(u, w)` in `G x H` is `u * |V(H)| + w`, and `(u, x)` in `G[bK1]` is
//! `u * b + x`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseDigraph {
    order: usize,
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
    allow_loops: bool,
}

impl std::fmt::Debug for DenseDigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DenseDigraph")
            .field("order", &self.order)
            .field("allow_loops", &self.allow_loops)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl DenseDigraph {
    /// Edgeless loopless digraph on `order` vertices.
    pub fn new(order: usize) -> Result<Self> {
        Self::build(order, false)
    }

    /// Edgeless digraph that may later receive loops.
    pub fn with_loops(order: usize) -> Result<Self> {
        Self::build(order, true)
    }

    fn build(order: usize, allow_loops: bool) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("digraph order must be at least 1".into()));
        }
        let words = order.div_ceil(WORD);
        Ok(DenseDigraph {
            order,
            words,
            out: vec![0; order * words],
            inn: vec![0; order * words],
            allow_loops,
        })
    }

    pub fn from_arcs<I>(order: usize, arcs: I, allow_loops: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::build(order, allow_loops)?;
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(order: usize) -> Result<Self> {
        Self::from_arcs(
            order,
            (0..order).flat_map(|u| (0..order).filter(move |&v| v != u).map(move |v| (u, v))),
            false,
        )
    }

    pub fn directed_cycle(order: usize) -> Result<Self> {
        Self::from_arcs(order, (0..order).map(|u| (u, (u + 1) % order)), order == 1)
    }

    pub fn single_loop() -> Self {
        Self::from_arcs(1, [(0, 0)], true).expect("valid single loop")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn allows_loops(&self) -> bool {
        self.allow_loops
    }

    pub fn has_loops(&self) -> bool {
        (0..self.order).any(|v| self.has_arc(v, v))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.order {
            return Err(Error::VertexOutOfRange { vertex: v, order: self.order });
        }
        Ok(())
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v && !self.allow_loops {
            return Err(Error::LoopNotAllowed(u));
        }
        self.set(u, v);
        Ok(())
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.out[u * self.words + v / WORD] |= 1 << (v % WORD);
        self.inn[v * self.words + u / WORD] |= 1 << (u % WORD);
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Out-adjacency bitset of `v` (bit `w` set iff `v -> w`).
    #[inline]
    pub fn out_row(&self, v: usize) -> &[u64] {
        &self.out[v * self.words..(v + 1) * self.words]
    }

    /// In-adjacency bitset of `v` (bit `u` set iff `u -> v`).
    #[inline]
    pub fn in_row(&self, v: usize) -> &[u64] {
        &self.inn[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |u| bits(self.out_row(u)).map(move |v| (u, v)))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn out_neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(bits(self.out_row(v)).collect())
    }

    pub fn in_neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(bits(self.in_row(v)).collect())
    }

    /// Image of the digraph under the vertex map `v -> map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.order {
            return Err(Error::InvalidParameter("relabeling has wrong length".into()));
        }
        let mut seen = vec![false; self.order];
        for &x in map {
            if x >= self.order || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidParameter("relabeling is not a bijection".into()));
            }
        }
        let mut g = Self::build(self.order, self.allow_loops)?;
        for (u, v) in self.arcs() {
            g.set(map[u], map[v]);
        }
        Ok(g)
    }

    /// Tensor (direct) product: `(u1,u2) -> (v1,v2)` iff both coordinates are arcs.
    pub fn tensor_product(&self, other: &DenseDigraph) -> DenseDigraph {
        let m = other.order;
        let mut g = Self::build(self.order * m, self.allow_loops && other.allow_loops)
            .expect("nonempty product");
        for (u1, v1) in self.arcs() {
            for (u2, v2) in other.arcs() {
                g.set(u1 * m + u2, v1 * m + v2);
            }
        }
        g
    }

    /// Lexicographic product with the edgeless digraph on `b` vertices.
    pub fn lex_product(&self, b: usize) -> Result<DenseDigraph> {
        if b < 1 {
            return Err(Error::InvalidParameter("lexicographic multiplicity must be at least 1".into()));
        }
        let mut g = Self::build(self.order * b, self.allow_loops)?;
        for (u, v) in self.arcs() {
            for x in 0..b {
                for y in 0..b {
                    g.set(u * b + x, v * b + y);
                }
            }
        }
        Ok(g)
    }

    /// Quotient by a partition; arcs inside a block become a loop.
    pub fn quotient(&self, p: &VertexPartition) -> Result<DenseDigraph> {
        if p.covered() != self.order {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} vertices, digraph has {}",
                p.covered(),
                self.order
            )));
        }
        let mut block_of = vec![0; self.order];
        for (i, block) in p.blocks().iter().enumerate() {
            for &v in block {
                block_of[v] = i;
            }
        }
        let mut g = Self::build(p.blocks().len(), true)?;
        for (u, v) in self.arcs() {
            g.set(block_of[u], block_of[v]);
        }
        Ok(g)
    }

    /// Classes of vertices sharing both out- and in-neighborhoods.
    pub fn thickness_classes(&self) -> VertexPartition {
        let mut index: HashMap<(&[u64], &[u64]), usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.order {
            let key = (self.out_row(v), self.in_row(v));
            let next = blocks.len();
            let i = *index.entry(key).or_insert(next);
            if i == next {
                blocks.push(Vec::new());
            }
            blocks[i].push(v);
        }
        VertexPartition { blocks }
    }

    pub fn is_r_thin(&self) -> bool {
        self.thickness_classes().blocks().len() == self.order
    }

    /// Weak connectivity (arc orientation ignored).
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![0u64; self.words];
        seen[0] |= 1;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for (i, (&o, &n)) in self.out_row(u).iter().zip(self.in_row(u)).enumerate() {
                let mut fresh = (o | n) & !seen[i];
                seen[i] |= fresh;
                while fresh != 0 {
                    let b = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    stack.push(i * WORD + b);
                    count += 1;
                }
            }
        }
        count == self.order
    }

    pub fn to_json(&self) -> DigraphJson {
        DigraphJson {
            order: self.order,
            arcs: self.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// Serialized dense digraph: `{"order":4,"arcs":[[0,1],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub order: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl TryFrom<DigraphJson> for DenseDigraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Self> {
        let loops = j.arcs.iter().any(|a| a[0] == a[1]);
        DenseDigraph::from_arcs(j.order, j.arcs.iter().map(|a| (a[0], a[1])), loops)
    }
}

pub(crate) fn bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * WORD + b)
        })
    })
}

/// Disjoint nonempty vertex blocks covering `0..order`.
///
/// Blocks are kept sorted internally and ordered by their least vertex, so
/// two partitions with the same blocks compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VertexPartition {
    blocks: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(order: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; order];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &v in block.iter() {
                if v >= order {
                    return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!("vertex {v} in two blocks")));
                }
            }
            block.sort_unstable();
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("vertex {v} not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(VertexPartition { blocks })
    }

    pub fn singletons(order: usize) -> Self {
        VertexPartition { blocks: (0..order).map(|v| vec![v]).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    fn covered(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> DenseDigraph {
        DenseDigraph::from_arcs(4, (0..4).flat_map(|u| [(u, (u + 1) % 4), (u, (u + 3) % 4)]), false).unwrap()
    }

    #[test]
    fn neighborhoods() {
        let c3 = DenseDigraph::directed_cycle(3).unwrap();
        assert_eq!(c3.out_neighborhood(0).unwrap(), vec![1]);
        assert_eq!(c3.in_neighborhood(0).unwrap(), vec![2]);
        let k3 = DenseDigraph::complete(3).unwrap();
        assert_eq!(k3.out_neighborhood(1).unwrap(), vec![0, 2]);
        let l = DenseDigraph::single_loop();
        assert_eq!(l.out_neighborhood(0).unwrap(), vec![0]);
        assert!(matches!(k3.out_neighborhood(3), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn loops_need_flag() {
        let mut g = DenseDigraph::new(2).unwrap();
        assert_eq!(g.add_arc(1, 1), Err(Error::LoopNotAllowed(1)));
        assert!(DenseDigraph::new(0).is_err());
    }

    #[test]
    fn tensor_examples() {
        let k2 = DenseDigraph::complete(2).unwrap();
        let p = k2.tensor_product(&k2);
        assert_eq!(p.order(), 4);
        assert_eq!(p.arc_count(), 4);
        assert!(!p.is_connected());
        // single loop is a tensor identity, labels unchanged
        let k3 = DenseDigraph::complete(3).unwrap();
        let l = DenseDigraph::single_loop();
        assert_eq!(l.tensor_product(&k3).arcs().collect::<Vec<_>>(), k3.arcs().collect::<Vec<_>>());
    }

    #[test]
    fn lex_examples() {
        let k2 = DenseDigraph::complete(2).unwrap();
        let g = k2.lex_product(2).unwrap();
        // vertices 0,1 | 2,3 ; every cross pair adjacent in both directions
        assert_eq!(g.arc_count(), 8);
        assert_eq!(g.out_neighborhood(0).unwrap(), vec![2, 3]);
        assert!(k2.lex_product(0).is_err());
        let c3 = DenseDigraph::directed_cycle(3).unwrap();
        assert_eq!(c3.lex_product(1).unwrap(), c3);
        assert_eq!(c3.lex_product(3).unwrap().arc_count(), 9 * c3.arc_count());
    }

    #[test]
    fn quotient_examples() {
        let g = c4();
        let q = g.quotient(&VertexPartition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap()).unwrap();
        assert_eq!(q.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        let one = g.quotient(&VertexPartition::new(4, vec![vec![0, 1, 2, 3]]).unwrap()).unwrap();
        assert_eq!(one, DenseDigraph::single_loop());
        let same = g.quotient(&VertexPartition::singletons(4)).unwrap();
        assert_eq!(same.arcs().collect::<Vec<_>>(), g.arcs().collect::<Vec<_>>());
        assert!(g.quotient(&VertexPartition::singletons(3)).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(VertexPartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(VertexPartition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn thickness_examples() {
        assert_eq!(c4().thickness_classes().blocks(), &[vec![0, 2], vec![1, 3]]);
        let k4 = DenseDigraph::complete(4).unwrap();
        assert!(k4.is_r_thin());
        let blown = k4.lex_product(3).unwrap();
        assert!(blown.thickness_classes().blocks().iter().all(|b| b.len() == 3));
    }

    #[test]
    fn connectivity() {
        assert!(DenseDigraph::directed_cycle(7).unwrap().is_connected());
        assert!(DenseDigraph::new(1).unwrap().is_connected());
        assert!(!DenseDigraph::new(2).unwrap().is_connected());
    }

    #[test]
    fn collapse_is_labeled_equality() {
        let g = c4();
        assert_eq!(g.lex_product(2).unwrap().lex_product(3).unwrap(), g.lex_product(6).unwrap());
    }
}
