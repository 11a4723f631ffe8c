//! Automorphism groups of dense digraphs by backtracking search, plus the
//! group-level queries the decomposition needs: arc-transitivity, regular
//! cyclic subgroups and normality of circulants.

mod chain;
mod perm;
mod search;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;

pub use chain::PermGroup;
pub use perm::Permutation;
pub use search::{automorphism_group, find_isomorphism};

use crate::circulant::Circulant;
use crate::digraph::DenseDigraph;
use crate::{Error, Limits, Result};

/// Size of the orbit of the first arc of `g` under `group`.
pub fn arc_orbit_size(g: &DenseDigraph, group: &PermGroup) -> Result<usize> {
    let n = g.order();
    let first = g
        .arcs()
        .next()
        .ok_or_else(|| Error::InvalidParameter("digraph has no arcs".into()))?;
    let mut seen = vec![false; n * n];
    seen[first.0 * n + first.1] = true;
    let mut queue = vec![first];
    let mut count = 1;
    while let Some((u, v)) = queue.pop() {
        for p in group.generators() {
            let (a, b) = (p.apply(u), p.apply(v));
            if !std::mem::replace(&mut seen[a * n + b], true) {
                count += 1;
                queue.push((a, b));
            }
        }
    }
    Ok(count)
}

pub fn is_arc_transitive(g: &DenseDigraph, bound: usize) -> Result<bool> {
    if g.arc_count() == 0 {
        return Err(Error::InvalidParameter("digraph has no arcs".into()));
    }
    let group = automorphism_group(g, bound)?;
    Ok(arc_orbit_size(g, &group)? == g.arc_count())
}

/// Every subgroup generated by a full cycle, one generator each.
///
/// The representative is the generator whose image of 0 is least. Output is
/// sorted by that generator.
pub fn regular_cyclic_subgroups(group: &PermGroup, budget: u64) -> Result<Vec<Permutation>> {
    let n = group.degree();
    let mut found: HashMap<Vec<usize>, Permutation> = HashMap::new();
    let mut cycle = vec![0usize; n];
    group.for_each_element(budget, |sigma| {
        if !sigma.is_full_cycle() {
            return;
        }
        // cycle[i] = sigma^i(0)
        let mut x = 0;
        for c in cycle.iter_mut() {
            *c = x;
            x = sigma.apply(x);
        }
        let power_images = |k: usize| {
            let mut images = vec![0; n];
            for i in 0..n {
                images[cycle[i]] = cycle[(i + k) % n];
            }
            images
        };
        // the unique element of the subgroup sending 0 to 1 identifies it
        let to_one = if n > 1 { cycle.iter().position(|&c| c == 1).expect("full cycle") } else { 0 };
        let key = power_images(to_one);
        found.entry(key).or_insert_with(|| {
            let j = (1..=n)
                .filter(|j| j.gcd(&n) == 1)
                .min_by_key(|&j| cycle[j % n])
                .unwrap_or(1);
            Permutation::from_images_unchecked(power_images(j % n))
        });
    })?;
    let mut subgroups: Vec<Permutation> = found.into_values().collect();
    subgroups.sort();
    Ok(subgroups)
}

/// Evidence behind a normality verdict for a circulant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalityEvidence {
    pub regular_cyclic_subgroups: usize,
    pub aut_order: BigUint,
    /// `n * |{k : kS = S}|`, the order of the normalizer of the translations.
    pub normalizer_order: BigUint,
}

impl NormalityEvidence {
    pub fn is_normal(&self) -> bool {
        self.regular_cyclic_subgroups == 1
    }
}

/// Order of the normalizer of the translation group in `Aut(Cay(Z_n, S))`.
pub fn normalizer_order(c: &Circulant) -> BigUint {
    BigUint::from(c.order()) * BigUint::from(c.multiplier_stabilizer().len())
}

/// Translations are normal in `Aut` iff `Aut` equals their normalizer.
pub fn is_normal_by_normalizer(c: &Circulant, bound: usize) -> Result<bool> {
    let aut = automorphism_group(&c.to_dense(), bound)?;
    Ok(aut.order() == normalizer_order(c))
}

pub fn normality_evidence(c: &Circulant, limits: &Limits) -> Result<NormalityEvidence> {
    let dense = c.to_dense();
    let aut = automorphism_group(&dense, limits.aut_bound)?;
    let subgroups = regular_cyclic_subgroups(&aut, limits.group_budget)?;
    let evidence = NormalityEvidence {
        regular_cyclic_subgroups: subgroups.len(),
        aut_order: aut.order(),
        normalizer_order: normalizer_order(c),
    };
    let by_normalizer = evidence.aut_order == evidence.normalizer_order;
    let arc_transitive = dense.arc_count() > 0 && arc_orbit_size(&dense, &aut)? == dense.arc_count();
    if c.is_connected() && arc_transitive && evidence.is_normal() != by_normalizer {
        return Err(Error::InvariantViolation(format!(
            "{c}: {} regular cyclic subgroups but |Aut| = {} and normalizer order {}",
            evidence.regular_cyclic_subgroups, evidence.aut_order, evidence.normalizer_order
        )));
    }
    Ok(evidence)
}

/// Normal iff `Aut` has exactly one regular cyclic subgroup. Meant for
/// connected arc-transitive circulants.
pub fn is_normal_circulant(c: &Circulant, limits: &Limits) -> Result<bool> {
    Ok(normality_evidence(c, limits)?.is_normal())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(text: &str) -> Circulant {
        text.parse().unwrap()
    }

    fn aut_order(text: &str) -> BigUint {
        automorphism_group(&c(text).to_dense(), 64).unwrap().order()
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(aut_order("4:1,3"), BigUint::from(8u32));
        assert_eq!(aut_order("4:1,2,3"), BigUint::from(24u32));
        assert_eq!(aut_order("7:1,2,4"), BigUint::from(21u32));
    }

    #[test]
    fn arc_transitivity_examples() {
        assert!(!is_arc_transitive(&c("5:1,2").to_dense(), 64).unwrap());
        for n in 2..8 {
            assert!(is_arc_transitive(&DenseDigraph::complete(n).unwrap(), 64).unwrap());
        }
        assert!(is_arc_transitive(&c("8:1,2,3,5,6,7").to_dense(), 64).unwrap());
        assert!(is_arc_transitive(&DenseDigraph::new(3).unwrap(), 64).is_err());
    }

    #[test]
    fn regular_cyclic_subgroup_examples() {
        let count = |g: &DenseDigraph| {
            let aut = automorphism_group(g, 64).unwrap();
            regular_cyclic_subgroups(&aut, 1_000_000).unwrap().len()
        };
        assert_eq!(count(&c("4:1,3").to_dense()), 1);
        assert_eq!(count(&DenseDigraph::complete(4).unwrap()), 3);
        assert_eq!(count(&DenseDigraph::directed_cycle(5).unwrap()), 1);
    }

    #[test]
    fn normality_examples() {
        let limits = Limits::default();
        assert!(is_normal_circulant(&c("4:1,3"), &limits).unwrap());
        assert!(!is_normal_circulant(&c("4:1,2,3"), &limits).unwrap());
        assert!(is_normal_circulant(&c("7:1,2,4"), &limits).unwrap());
        assert!(is_normal_by_normalizer(&c("7:1,2,4"), 64).unwrap());
        assert!(!is_normal_by_normalizer(&c("5:1,2,3,4"), 64).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let limits = Limits { group_budget: 100, ..Limits::default() };
        assert!(matches!(is_normal_circulant(&c("6:1,2,3,4,5"), &limits), Err(Error::BudgetExceeded { .. })));
    }
}
