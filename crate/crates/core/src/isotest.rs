//! Isomorphism of circulants by multipliers, with brute force as an
//! independent oracle.
//!
//! Connected arc-transitive circulants are CI: two of them are isomorphic
//! exactly when some unit `k` maps one connection set onto the other.

use serde::{Deserialize, Serialize};

use crate::circulant::Circulant;
use crate::digraph::DenseDigraph;
use crate::permgroup::{arc_orbit_size, automorphism_group, find_isomorphism, Permutation};
use crate::{Error, Limits, Result};

/// Least unit `k` with `k * S1 = S2`.
pub fn multiplier_equivalent(c1: &Circulant, c2: &Circulant) -> Result<Option<usize>> {
    if c1.order() != c2.order() {
        return Err(Error::OrderMismatch(c1.order(), c2.order()));
    }
    if c1.connection_set().len() != c2.connection_set().len() {
        return Ok(None);
    }
    Ok(c1.modulus().units().into_iter().find(|&k| c1.scaled(k) == *c2))
}

pub fn brute_force_isomorphic(g1: &DenseDigraph, g2: &DenseDigraph, bound: usize) -> Result<Option<Permutation>> {
    find_isomorphism(g1, g2, bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiReport {
    pub isomorphic: bool,
    pub multiplier: Option<usize>,
    /// Both inputs were verified connected and arc-transitive, so a missing
    /// multiplier rules out isomorphism. When false the answer is
    /// multiplier equivalence only.
    pub ci_guarantee: bool,
}

fn verified_arc_transitive(c: &Circulant, limits: &Limits) -> bool {
    if c.order() > limits.aut_bound || !c.is_connected() || c.connection_set().is_empty() {
        return false;
    }
    let dense = c.to_dense();
    match automorphism_group(&dense, limits.aut_bound) {
        Ok(aut) => arc_orbit_size(&dense, &aut).is_ok_and(|size| size == dense.arc_count()),
        Err(_) => false,
    }
}

pub fn ci_isomorphic(c1: &Circulant, c2: &Circulant, limits: &Limits) -> Result<CiReport> {
    let multiplier = multiplier_equivalent(c1, c2)?;
    let ci_guarantee = verified_arc_transitive(c1, limits) && verified_arc_transitive(c2, limits);
    Ok(CiReport { isomorphic: multiplier.is_some(), multiplier, ci_guarantee })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(text: &str) -> Circulant {
        text.parse().unwrap()
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multiplier_equivalent(&c("7:1,2,4"), &c("7:3,5,6")).unwrap(), Some(3));
        assert_eq!(multiplier_equivalent(&c("9:1,3"), &c("9:1,3")).unwrap(), Some(1));
        assert_eq!(multiplier_equivalent(&c("7:1,2,4"), &c("7:1,2,3")).unwrap(), None);
        assert!(matches!(
            multiplier_equivalent(&c("7:1"), &c("8:1")),
            Err(Error::OrderMismatch(7, 8))
        ));
    }

    #[test]
    fn brute_force_examples() {
        let c4 = c("4:1,3").to_dense();
        let k2b2 = DenseDigraph::complete(2).unwrap().lex_product(2).unwrap();
        let w = brute_force_isomorphic(&c4, &k2b2, 64).unwrap().unwrap();
        assert!(c4.arcs().all(|(u, v)| k2b2.has_arc(w.apply(u), w.apply(v))));
        let k3 = DenseDigraph::complete(3).unwrap();
        let c3 = DenseDigraph::directed_cycle(3).unwrap();
        assert!(brute_force_isomorphic(&k3, &c3, 64).unwrap().is_none());
        assert!(brute_force_isomorphic(&k3, &k3, 64).unwrap().is_some());
    }

    #[test]
    fn ci_examples() {
        let limits = Limits::default();
        let same = ci_isomorphic(&c("8:1,2,3,5,6,7"), &c("8:1,3,5,6,7,2"), &limits).unwrap();
        assert!(same.isomorphic && same.ci_guarantee);
        let r = ci_isomorphic(&c("7:1,2,4"), &c("7:3,5,6"), &limits).unwrap();
        assert_eq!(r, CiReport { isomorphic: true, multiplier: Some(3), ci_guarantee: true });
        let r = ci_isomorphic(&c("8:1"), &c("8:1,3,5,7"), &limits).unwrap();
        assert!(!r.isomorphic);
        let unverified = ci_isomorphic(&c("5:1,2"), &c("5:2,4"), &limits).unwrap();
        assert!(unverified.isomorphic && !unverified.ci_guarantee);
        assert_eq!(
            serde_json::to_string(&CiReport { isomorphic: true, multiplier: Some(3), ci_guarantee: true }).unwrap(),
            r#"{"isomorphic":true,"multiplier":3,"ci_guarantee":true}"#
        );
    }
}
