use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::perm::Permutation;
use crate::{Error, Result};

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    orbit: Vec<usize>,
    trans: Vec<Option<Permutation>>,
    trans_inv: Vec<Option<Permutation>>,
}

/// Base, strong generators and transversals of a permutation group.
#[derive(Debug, Clone)]
pub(crate) struct StabChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl StabChain {
    /// Trusts that `strong` is a strong generating set relative to `base`.
    pub(crate) fn from_strong(degree: usize, base: Vec<usize>, strong: Vec<Permutation>) -> Self {
        let mut chain = StabChain { degree, base, strong, levels: Vec::new() };
        chain.rebuild_levels();
        chain
    }

    /// Deterministic Schreier-Sims.
    pub(crate) fn schreier_sims(degree: usize, gens: &[Permutation]) -> Self {
        let mut base: Vec<usize> = Vec::new();
        let mut strong: Vec<Permutation> = Vec::new();
        for g in gens.iter().filter(|g| !g.is_identity()) {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().expect("non-identity"));
            }
            strong.push(g.clone());
        }
        let mut chain = StabChain { degree, base, strong, levels: Vec::new() };
        chain.rebuild_levels();

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.failing_schreier_generator(i as usize) {
                None => i -= 1,
                Some((h, j)) => {
                    if j == chain.base.len() {
                        chain.base.push(h.first_moved_point().expect("non-identity residue"));
                    }
                    chain.strong.push(h);
                    chain.rebuild_levels();
                    i = j as isize;
                }
            }
        }
        chain
    }

    fn rebuild_levels(&mut self) {
        let id = Permutation::identity(self.degree);
        self.levels = (0..self.base.len())
            .map(|i| {
                let gens: Vec<&Permutation> = self
                    .strong
                    .iter()
                    .filter(|g| self.base[..i].iter().all(|&b| g.apply(b) == b))
                    .collect();
                let b = self.base[i];
                let mut trans: Vec<Option<Permutation>> = vec![None; self.degree];
                trans[b] = Some(id.clone());
                let mut orbit = vec![b];
                let mut head = 0;
                while head < orbit.len() {
                    let p = orbit[head];
                    head += 1;
                    for s in &gens {
                        let q = s.apply(p);
                        if trans[q].is_none() {
                            trans[q] = Some(trans[p].as_ref().expect("visited").then(s));
                            orbit.push(q);
                        }
                    }
                }
                let trans_inv = trans.iter().map(|t| t.as_ref().map(Permutation::inverse)).collect();
                Level { base: b, orbit, trans, trans_inv }
            })
            .collect();
    }

    fn generators_at(&self, i: usize) -> impl Iterator<Item = &Permutation> {
        let prefix = &self.base[..i];
        self.strong.iter().filter(move |g| prefix.iter().all(|&b| g.apply(b) == b))
    }

    fn failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &p in &level.orbit {
            let up = level.trans[p].as_ref().expect("orbit point");
            for s in self.generators_at(i) {
                let q = s.apply(p);
                let y = up.then(s).then(level.trans_inv[q].as_ref().expect("orbit closed"));
                let (h, j) = self.sift(y, i + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where it dropped out (`levels.len()` when it passed every level).
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let p = g.apply(level.base);
            match &level.trans_inv[p] {
                None => return (g, l),
                Some(inv) => g = g.then(inv),
            }
        }
        (g, self.levels.len())
    }

    pub(crate) fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }

    pub(crate) fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub(crate) fn base(&self) -> &[usize] {
        &self.base
    }

    pub(crate) fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Visits every element exactly once as `u_0 . u_1 . ... . u_{k-1}`.
    pub(crate) fn for_each_element<F: FnMut(&Permutation)>(&self, mut f: F) {
        let k = self.levels.len();
        let mut stack: Vec<Permutation> = vec![Permutation::identity(self.degree); k + 1];
        self.visit(0, &mut stack, &mut f);
    }

    fn visit<F: FnMut(&Permutation)>(&self, depth: usize, stack: &mut [Permutation], f: &mut F) {
        if depth == self.levels.len() {
            f(&stack[depth]);
            return;
        }
        let level = &self.levels[depth];
        for &q in &level.orbit {
            let u = level.trans[q].as_ref().expect("orbit point");
            let (head, tail) = stack.split_at_mut(depth + 1);
            // apply u first, then the accumulated prefix
            u.then_into(&head[depth], &mut tail[0]);
            self.visit(depth + 1, stack, f);
        }
    }
}

/// A permutation group given by generators; its stabilizer chain (and so
/// its order) is computed on first use.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidParameter(format!(
                "generator of degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub(crate) fn with_chain(degree: usize, generators: Vec<Permutation>, chain: StabChain) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup { degree, generators, chain: cell }
    }

    pub(crate) fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::schreier_sims(self.degree, &self.generators))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    /// Base points of the stabilizer chain and the basic orbit sizes.
    pub fn base(&self) -> (Vec<usize>, Vec<usize>) {
        let chain = self.chain();
        (chain.base().to_vec(), chain.orbit_sizes())
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in &self.generators {
                let q = g.apply(p);
                if !std::mem::replace(&mut seen[q], true) {
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Calls `f` on every element, provided the order is within `budget`.
    pub fn for_each_element<F: FnMut(&Permutation)>(&self, budget: u64, f: F) -> Result<()> {
        let order = self.order();
        if order.to_u64().is_none_or(|o| o > budget) {
            return Err(Error::BudgetExceeded { order: order.to_string(), budget });
        }
        self.chain().for_each_element(f);
        Ok(())
    }
}
