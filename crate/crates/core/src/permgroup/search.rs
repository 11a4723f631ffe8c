//! Individualization-refinement backtracking for automorphisms and
//! isomorphisms of dense digraphs.
//!
//! Ordered partitions are refined to equitable ones by counting out- and
//! in-neighbours inside each cell. The refinement only looks at cell
//! positions and adjacency counts, so it commutes with isomorphisms; the
//! trace of split keys recorded on one side prunes the other side.

use super::chain::{PermGroup, StabChain};
use super::perm::Permutation;
use crate::digraph::DenseDigraph;
use crate::{Error, Result};

type Cells = Vec<Vec<usize>>;

fn mask_of(cell: &[usize], words: usize, mask: &mut Vec<u64>) {
    mask.clear();
    mask.resize(words, 0);
    for &v in cell {
        mask[v / 64] |= 1 << (v % 64);
    }
}

#[inline]
fn count_in(row: &[u64], mask: &[u64]) -> u64 {
    row.iter().zip(mask).map(|(a, b)| (a & b).count_ones() as u64).sum()
}

struct Trace<'e> {
    log: Vec<u64>,
    expected: Option<&'e [u64]>,
}

impl Trace<'_> {
    #[inline]
    fn push(&mut self, x: u64) -> bool {
        if let Some(e) = self.expected {
            if e.get(self.log.len()) != Some(&x) {
                return false;
            }
        }
        self.log.push(x);
        true
    }
}

/// Refines `cells` to an equitable partition. Returns `false` as soon as
/// the trace diverges from `expected`.
fn refine(g: &DenseDigraph, cells: &mut Cells, trace: &mut Trace<'_>) -> bool {
    let n = g.order() as u64 + 1;
    let mut mask = Vec::with_capacity(g.words());
    loop {
        let splitters: Cells = cells.clone();
        let mut changed = false;
        for splitter in &splitters {
            mask_of(splitter, g.words(), &mut mask);
            let mut next: Cells = Vec::with_capacity(cells.len() + 1);
            for cell in cells.drain(..) {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(u64, usize)> = cell
                    .iter()
                    .map(|&v| (count_in(g.out_row(v), &mask) * n + count_in(g.in_row(v), &mask), v))
                    .collect();
                keyed.sort_unstable();
                let mut start = 0;
                let mut groups = 0;
                while start < keyed.len() {
                    let key = keyed[start].0;
                    let end = start + keyed[start..].iter().take_while(|(k, _)| *k == key).count();
                    if !trace.push(key) || !trace.push((end - start) as u64) {
                        return false;
                    }
                    next.push(keyed[start..end].iter().map(|&(_, v)| v).collect());
                    start = end;
                    groups += 1;
                }
                changed |= groups > 1;
            }
            *cells = next;
        }
        if !changed {
            break;
        }
    }
    match trace.expected {
        Some(e) => e.len() == trace.log.len(),
        None => true,
    }
}

fn individualize(cells: &Cells, ci: usize, v: usize) -> Cells {
    let mut out = Cells::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..ci]);
    out.push(vec![v]);
    out.push(cells[ci].iter().copied().filter(|&x| x != v).collect());
    out.extend_from_slice(&cells[ci + 1..]);
    out
}

fn first_nonsingleton(cells: &Cells) -> Option<usize> {
    cells.iter().position(|c| c.len() > 1)
}

struct Searcher<'a> {
    left: &'a DenseDigraph,
    right: &'a DenseDigraph,
}

impl Searcher<'_> {
    fn is_isomorphism(&self, map: &[usize]) -> bool {
        self.left.arcs().all(|(u, v)| self.right.has_arc(map[u], map[v]))
    }

    /// Both partitions are refined and have identical traces so far.
    fn extend(&self, left: &Cells, right: &Cells) -> Option<Vec<usize>> {
        let Some(ci) = first_nonsingleton(left) else {
            let mut map = vec![0; self.left.order()];
            for (l, r) in left.iter().zip(right) {
                map[l[0]] = r[0];
            }
            return self.is_isomorphism(&map).then_some(map);
        };
        let x = left[ci][0];
        let mut l2 = individualize(left, ci, x);
        let mut lt = Trace { log: Vec::new(), expected: None };
        refine(self.left, &mut l2, &mut lt);
        for &y in &right[ci] {
            let mut r2 = individualize(right, ci, y);
            let mut rt = Trace { log: Vec::new(), expected: Some(&lt.log) };
            if !refine(self.right, &mut r2, &mut rt) {
                continue;
            }
            if let Some(map) = self.extend(&l2, &r2) {
                return Some(map);
            }
        }
        None
    }
}

fn check_bound(g: &DenseDigraph, bound: usize) -> Result<()> {
    if g.order() > bound {
        return Err(Error::SearchBoundExceeded { order: g.order(), bound });
    }
    Ok(())
}

/// An arc-preserving bijection `V(g1) -> V(g2)`, if any.
pub fn find_isomorphism(g1: &DenseDigraph, g2: &DenseDigraph, bound: usize) -> Result<Option<Permutation>> {
    check_bound(g1, bound)?;
    check_bound(g2, bound)?;
    if g1.order() != g2.order() || g1.arc_count() != g2.arc_count() {
        return Ok(None);
    }
    let n = g1.order();
    let mut left: Cells = vec![(0..n).collect()];
    let mut lt = Trace { log: Vec::new(), expected: None };
    refine(g1, &mut left, &mut lt);
    let mut right: Cells = vec![(0..n).collect()];
    let mut rt = Trace { log: Vec::new(), expected: Some(&lt.log) };
    if !refine(g2, &mut right, &mut rt) {
        return Ok(None);
    }
    let searcher = Searcher { left: g1, right: g2 };
    Ok(searcher.extend(&left, &right).map(Permutation::from_images_unchecked))
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn join(&mut self, p: &Permutation) {
        for v in 0..p.degree() {
            let (a, b) = (self.find(v), self.find(p.apply(v)));
            if a != b {
                self.parent[a.max(b)] = a.min(b);
            }
        }
    }
}

/// Full automorphism group with a stabilizer chain read off the search.
///
/// The base is the leftmost individualization path; level `i` collects
/// automorphisms fixing the first `i` base points, so the generators form
/// a strong generating set and the order is the product of basic orbits.
pub fn automorphism_group(g: &DenseDigraph, bound: usize) -> Result<PermGroup> {
    check_bound(g, bound)?;
    let n = g.order();
    let mut root: Cells = vec![(0..n).collect()];
    refine(g, &mut root, &mut Trace { log: Vec::new(), expected: None });

    let mut path: Vec<(Cells, usize, usize)> = Vec::new();
    let mut current = root;
    while let Some(ci) = first_nonsingleton(&current) {
        let b = current[ci][0];
        let mut next = individualize(&current, ci, b);
        refine(g, &mut next, &mut Trace { log: Vec::new(), expected: None });
        path.push((current, ci, b));
        current = next;
    }

    let searcher = Searcher { left: g, right: g };
    let mut gens: Vec<Permutation> = Vec::new();
    let mut orbits = Orbits::new(n);
    for (cells, ci, b) in path.iter().rev() {
        let mut left = individualize(cells, *ci, *b);
        let mut lt = Trace { log: Vec::new(), expected: None };
        refine(g, &mut left, &mut lt);
        let mut failed: Vec<usize> = Vec::new();
        for &w in &cells[*ci] {
            if orbits.find(w) == orbits.find(*b) || failed.iter().any(|&f| orbits.find(f) == orbits.find(w)) {
                continue;
            }
            let mut right = individualize(cells, *ci, w);
            let mut rt = Trace { log: Vec::new(), expected: Some(&lt.log) };
            let found = if refine(g, &mut right, &mut rt) {
                searcher.extend(&left, &right)
            } else {
                None
            };
            match found {
                Some(map) => {
                    let p = Permutation::from_images_unchecked(map);
                    orbits.join(&p);
                    gens.push(p);
                }
                None => failed.push(w),
            }
        }
    }
    let base = path.iter().map(|(_, _, b)| *b).collect();
    let chain = StabChain::from_strong(n, base, gens.clone());
    Ok(PermGroup::with_chain(n, gens, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn order(g: &DenseDigraph) -> BigUint {
        automorphism_group(g, 64).unwrap().order()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&DenseDigraph::complete(4).unwrap()), BigUint::from(24u32));
        assert_eq!(order(&DenseDigraph::directed_cycle(5).unwrap()), BigUint::from(5u32));
        assert_eq!(order(&DenseDigraph::new(3).unwrap()), BigUint::from(6u32));
        assert_eq!(order(&DenseDigraph::single_loop()), BigUint::from(1u32));
    }

    #[test]
    fn generators_are_automorphisms() {
        let g = DenseDigraph::complete(3).unwrap().lex_product(3).unwrap();
        let grp = automorphism_group(&g, 64).unwrap();
        for p in grp.generators() {
            assert!(g.arcs().all(|(u, v)| g.has_arc(p.apply(u), p.apply(v))));
        }
        // S_3 wr S_3
        assert_eq!(grp.order(), BigUint::from(6u32 * 6 * 6 * 6));
    }

    #[test]
    fn bound_enforced() {
        let g = DenseDigraph::new(10).unwrap();
        assert!(matches!(automorphism_group(&g, 9), Err(Error::SearchBoundExceeded { .. })));
    }

    #[test]
    fn isomorphism_witness() {
        let c3 = DenseDigraph::directed_cycle(3).unwrap();
        let k3 = DenseDigraph::complete(3).unwrap();
        assert!(find_isomorphism(&k3, &c3, 64).unwrap().is_none());
        let shuffled = c3.relabel(&[2, 0, 1]).unwrap();
        let map = find_isomorphism(&c3, &shuffled, 64).unwrap().unwrap();
        assert!(c3.arcs().all(|(u, v)| shuffled.has_arc(map.apply(u), map.apply(v))));
    }
}
