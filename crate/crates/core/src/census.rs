//! Connected arc-transitive circulants of a fixed order, one per
//! isomorphism class, enumerated two independent ways.
//!
//! The exhaustive census scans multiplier-canonical connection sets and
//! keeps those whose brute-force automorphism group is arc-transitive. The
//! constructive census assembles every admissible decomposition triple from
//! normal building blocks `Cay(Z_n0, M g)` and reconstructs it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::circulant::Circulant;
use crate::decompose::{aut_order, decompose_with, reconstruct, Decomposition};
use crate::permgroup::{arc_orbit_size, automorphism_group, normalizer_order};
use crate::zmod::Modulus;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub n: usize,
    /// Multiplier-minimal connection set.
    pub canonical_s: Vec<usize>,
    /// Decomposition with `gamma0` in canonical form.
    pub decomposition: Decomposition,
    #[serde(serialize_with = "as_decimal")]
    pub aut_order: BigUint,
    /// `S = -S`.
    pub undirected: bool,
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl CensusEntry {
    pub fn circulant(&self) -> Circulant {
        Circulant::new(self.n, self.canonical_s.iter().copied()).expect("census entries hold valid circulants")
    }

    fn from_parts(c: &Circulant, decomposition: Decomposition, aut_order: BigUint) -> Self {
        CensusEntry {
            n: c.order(),
            canonical_s: c.canonical().connection_set().to_vec(),
            decomposition: decomposition.with_canonical_gamma0(),
            aut_order,
            undirected: c.is_undirected(),
        }
    }
}

fn loop_entry() -> CensusEntry {
    let c = Circulant::single_loop();
    let d = Decomposition::new(c.clone(), Vec::new(), 1);
    CensusEntry::from_parts(&c, d, BigUint::from(1u32))
}

/// Invariants of the arc `0 -> s`: 2-paths `0 -> t -> s`, 2-paths
/// `0 -> s -> t` and common out-neighbours of `0` and `s`. An automorphism
/// preserves them, so arc-transitivity forces them constant over `S`.
fn arc_invariants_uniform(c: &Circulant) -> bool {
    let n = c.order();
    let s = c.connection_set();
    let profile = |x: usize| {
        let through = s.iter().filter(|&&t| c.contains((x + n - t) % n)).count();
        let onward = s.iter().filter(|&&t| c.contains((x + t) % n)).count();
        let common = s.iter().filter(|&&t| c.contains((t + n - x) % n)).count();
        (through, onward, common)
    };
    let first = profile(s[0]);
    s[1..].iter().all(|&x| profile(x) == first)
}

fn check_order(n: usize, bound: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > bound {
        return Err(Error::SearchBoundExceeded { order: n, bound });
    }
    Ok(())
}

fn sorted(mut entries: Vec<CensusEntry>) -> Vec<CensusEntry> {
    entries.sort_by(|a, b| a.canonical_s.cmp(&b.canonical_s));
    entries
}

/// Scans every multiplier-canonical nonempty `S` of `Z_n \ {0}`.
pub fn census_exhaustive(n: usize, limits: &Limits) -> Result<Vec<CensusEntry>> {
    check_order(n, limits.census_bound.min(limits.aut_bound))?;
    if n == 1 {
        return Ok(vec![loop_entry()]);
    }
    let masks = 1u64..(1u64 << (n - 1));
    let found: Vec<Option<CensusEntry>> = masks
        .into_par_iter()
        .map(|mask| {
            let s = (1..n).filter(|&x| mask >> (x - 1) & 1 == 1);
            let c = Circulant::new(n, s)?;
            if !c.is_connected() || c.canonical() != c || !arc_invariants_uniform(&c) {
                return Ok(None);
            }
            let dense = c.to_dense();
            let aut = automorphism_group(&dense, limits.aut_bound)?;
            if arc_orbit_size(&dense, &aut)? != dense.arc_count() {
                return Ok(None);
            }
            let d = decompose_with(&c, limits)?.decomposition;
            Ok(Some(CensusEntry::from_parts(&c, d, aut.order())))
        })
        .collect::<Result<_>>()?;
    Ok(sorted(found.into_iter().flatten().collect()))
}

/// Subgroups of the unit group of `Z_n`, each as a sorted element list.
fn unit_subgroups(n: Modulus) -> Vec<Vec<usize>> {
    let m = n.get();
    let units = n.units();
    let close = |gens: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::from([1 % m]);
        let mut frontier: Vec<usize> = out.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = x * g % m;
                if out.insert(y) {
                    frontier.push(y);
                }
            }
        }
        out
    };
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::from([close(&BTreeSet::new())]);
    let mut frontier: Vec<BTreeSet<usize>> = seen.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for &u in &units {
            if h.contains(&u) {
                continue;
            }
            let mut gens = h.clone();
            gens.insert(u);
            let bigger = close(&gens);
            if seen.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    seen.into_iter().map(|h| h.into_iter().collect()).collect()
}

/// Connected arc-transitive normal circulants of order `n0` other than
/// `C4`, in canonical form: orbits `M g` of unit subgroups on generators,
/// kept only when brute force confirms arc-transitivity and normality.
pub fn normal_building_blocks(n0: usize, limits: &Limits) -> Result<Vec<Circulant>> {
    check_order(n0, limits.aut_bound)?;
    if n0 == 1 {
        return Ok(vec![Circulant::single_loop()]);
    }
    let modulus = Modulus::new(n0)?;
    let units = modulus.units();
    let mut candidates: BTreeSet<Circulant> = BTreeSet::new();
    for m in unit_subgroups(modulus) {
        for &g in &units {
            candidates.insert(Circulant::new(n0, m.iter().map(|&k| k * g % n0))?.canonical());
        }
    }
    let mut blocks = Vec::new();
    for c in candidates {
        if n0 == 4 && c.connection_set() == [1, 3] {
            continue;
        }
        let dense = c.to_dense();
        let aut = automorphism_group(&dense, limits.aut_bound)?;
        if arc_orbit_size(&dense, &aut)? == dense.arc_count() && aut.order() == normalizer_order(&c) {
            blocks.push(c);
        }
    }
    Ok(blocks)
}

/// Ways to split `parts` into a (possibly empty) block for `n0` and
/// factor blocks of product at least 4. Returns `(n0, factors)` pairs.
fn tensor_shapes(parts: &[usize]) -> Vec<(usize, Vec<usize>)> {
    fn assign(i: usize, parts: &[usize], blocks: &mut Vec<usize>, n0: usize, out: &mut Vec<(usize, Vec<usize>)>) {
        if i == parts.len() {
            if blocks.iter().all(|&f| f >= 4) {
                let mut factors = blocks.clone();
                factors.sort_unstable();
                out.push((n0, factors));
            }
            return;
        }
        let p = parts[i];
        assign(i + 1, parts, blocks, n0 * p, out);
        for j in 0..blocks.len() {
            blocks[j] *= p;
            assign(i + 1, parts, blocks, n0, out);
            blocks[j] /= p;
        }
        blocks.push(p);
        assign(i + 1, parts, blocks, n0, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    assign(0, parts, &mut Vec::new(), 1, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Every triple `(G0, {n_i}, b)` of total order `n`, reconstructed.
pub fn census_constructive(n: usize, limits: &Limits) -> Result<Vec<CensusEntry>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut blocks: HashMap<usize, Vec<Circulant>> = HashMap::new();
    let mut triples: Vec<Decomposition> = Vec::new();
    for b in Modulus::new(n)?.divisors() {
        let thin = n / b;
        if thin == 1 && b > 1 {
            continue;
        }
        for (n0, factors) in tensor_shapes(&Modulus::new(thin)?.prime_power_parts()) {
            debug_assert!(factors.iter().all(|f| f.gcd(&n0) == 1));
            if let std::collections::hash_map::Entry::Vacant(e) = blocks.entry(n0) {
                e.insert(normal_building_blocks(n0, limits)?);
            }
            for g0 in &blocks[&n0] {
                triples.push(Decomposition::new(g0.clone(), factors.clone(), b));
            }
        }
    }

    let built: Vec<(Circulant, Decomposition)> = triples
        .into_par_iter()
        .map(|d| Ok((reconstruct(&d)?.canonical(), d)))
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<Circulant, Decomposition> = BTreeMap::new();
    for (c, d) in built {
        if let Some(other) = classes.get(&c) {
            return Err(Error::InvariantViolation(format!(
                "{c} arises from two triples: {other:?} and {d:?}"
            )));
        }
        classes.insert(c, d);
    }
    Ok(sorted(
        classes
            .into_iter()
            .map(|(c, d)| {
                let order = aut_order(&d);
                CensusEntry::from_parts(&c, d, order)
            })
            .collect(),
    ))
}

fn joined(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

/// Columns: `n, canonical_s, n0, s0, factors, b, aut_order, undirected`.
pub fn write_csv<W: Write>(entries: &[CensusEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv output failed: {e}"));
    w.write_record(["n", "canonical_s", "n0", "s0", "factors", "b", "aut_order", "undirected"])
        .map_err(io)?;
    for e in entries {
        let d = &e.decomposition;
        w.write_record([
            e.n.to_string(),
            joined(&e.canonical_s),
            d.gamma0.order().to_string(),
            joined(d.gamma0.connection_set()),
            joined(&d.factors),
            d.b.to_string(),
            e.aut_order.to_string(),
            e.undirected.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(format!("csv output failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(entries: &[CensusEntry]) -> Vec<Vec<usize>> {
        entries.iter().map(|e| e.canonical_s.clone()).collect()
    }

    #[test]
    fn small_exhaustive() {
        let limits = Limits::default();
        assert_eq!(sets(&census_exhaustive(4, &limits).unwrap()), vec![vec![1], vec![1, 2, 3], vec![1, 3]]);
        assert_eq!(sets(&census_exhaustive(2, &limits).unwrap()), vec![vec![1]]);
        assert_eq!(sets(&census_exhaustive(1, &limits).unwrap()), vec![vec![0]]);
        assert!(census_exhaustive(17, &limits).is_err());
    }

    #[test]
    fn small_constructive_matches() {
        let limits = Limits::default();
        for n in 1..=10 {
            assert_eq!(census_constructive(n, &limits).unwrap(), census_exhaustive(n, &limits).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn primes_have_one_entry_per_divisor() {
        let limits = Limits::default();
        for p in [2usize, 3, 5, 7, 11, 13] {
            let divisors = (1..p).filter(|d| (p - 1) % d == 0).count();
            assert_eq!(census_constructive(p, &limits).unwrap().len(), divisors);
        }
    }

    #[test]
    fn unit_subgroups_of_z8() {
        // units {1,3,5,7} form a Klein four-group: 5 subgroups
        assert_eq!(unit_subgroups(Modulus::new(8).unwrap()).len(), 5);
        assert_eq!(unit_subgroups(Modulus::new(7).unwrap()).len(), 4);
    }

    #[test]
    fn tensor_shapes_of_60() {
        let shapes = tensor_shapes(&[4, 3, 5]);
        assert!(shapes.contains(&(1, vec![4, 15])));
        assert!(shapes.contains(&(3, vec![4, 5])));
        assert!(shapes.contains(&(60, vec![])));
        assert!(!shapes.iter().any(|(_, f)| f.contains(&3)));
    }

    #[test]
    fn csv_layout() {
        let entries = census_exhaustive(4, &Limits::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&entries, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,canonical_s,n0,s0,factors,b,aut_order,undirected");
        assert_eq!(lines[2], "4,1;2;3,1,0,4,1,24,true");
        assert_eq!(lines.len(), 4);
    }
}
