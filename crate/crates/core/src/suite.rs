//! Self-check suite: each structural fact the library relies on, checked by
//! brute force over all small cases.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::{census_constructive, census_exhaustive, CensusEntry};
use crate::circulant::Circulant;
use crate::decompose::{aut_order, decompose_with, reconstruct, structurally_normal, verify_decomposition};
use crate::digraph::DenseDigraph;
use crate::isotest::multiplier_equivalent;
use crate::permgroup::{
    arc_orbit_size, automorphism_group, find_isomorphism, normality_evidence, normalizer_order,
};
use crate::{Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub check: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub max_n: usize,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn row(self, check: &'static str) -> SuiteRow {
        let detail = match self.failures.first() {
            None => String::new(),
            Some(first) => format!("{} failures, first: {first}", self.failures.len()),
        };
        SuiteRow { check, passed: self.failures.is_empty(), cases: self.cases, detail }
    }
}

fn errored(check: &'static str, e: crate::Error) -> SuiteRow {
    SuiteRow { check, passed: false, cases: 0, detail: e.to_string() }
}

/// Runs every check over orders `1..=max_n` (exhaustive parts capped at
/// the census bound).
pub fn run(max_n: usize, limits: &Limits) -> SuiteReport {
    let census_top = max_n.min(limits.census_bound).min(limits.aut_bound);
    let mut rows = Vec::new();
    let census: Result<Vec<Vec<CensusEntry>>> = (1..=census_top).map(|n| census_exhaustive(n, limits)).collect();
    let census = match census {
        Ok(c) => c,
        Err(e) => {
            rows.push(errored("census", e));
            return SuiteReport { max_n, rows };
        }
    };
    let entries: Vec<&CensusEntry> = census.iter().flatten().collect();

    rows.push(census_agreement(&census, limits));
    rows.push(round_trip(&entries, limits));
    rows.push(automorphism_formula(&entries, limits));
    rows.push(ci_property(&census, limits));
    rows.push(normality(&entries, limits));
    rows.push(normal_generators(&entries));
    rows.push(thick_normal(max_n, limits));
    rows.extend(products(100, 24, limits));
    SuiteReport { max_n, rows }
}

fn census_agreement(census: &[Vec<CensusEntry>], limits: &Limits) -> SuiteRow {
    let mut t = Tally::new();
    for (i, exhaustive) in census.iter().enumerate() {
        let n = i + 1;
        match census_constructive(n, limits) {
            Ok(constructive) => t.check(&constructive == exhaustive, || format!("n = {n}")),
            Err(e) => return errored("census-agreement", e),
        }
    }
    t.row("census-agreement")
}

fn round_trip(entries: &[&CensusEntry], limits: &Limits) -> SuiteRow {
    let mut t = Tally::new();
    for e in entries {
        let c = e.circulant();
        let outcome = decompose_with(&c, limits).and_then(|out| {
            let d = out.decomposition;
            let report = verify_decomposition(&c, &d, limits);
            let again = decompose_with(&reconstruct(&d)?, limits)?.decomposition;
            Ok(report.passed() && again.with_canonical_gamma0() == d.with_canonical_gamma0())
        });
        t.check(matches!(outcome, Ok(true)), || format!("{c}: {outcome:?}"));
    }
    t.row("decomposition-round-trip")
}

fn automorphism_formula(entries: &[&CensusEntry], limits: &Limits) -> SuiteRow {
    let mut t = Tally::new();
    for e in entries {
        let c = e.circulant();
        let brute = automorphism_group(&c.to_dense(), limits.aut_bound).map(|g| g.order());
        let formula = decompose_with(&c, limits).map(|d| aut_order(&d.decomposition));
        t.check(matches!((&brute, &formula), (Ok(a), Ok(b)) if a == b), || {
            format!("{c}: {brute:?} vs {formula:?}")
        });
    }
    t.row("automorphism-order-formula")
}

/// Each census class: every multiplier image is brute-force isomorphic, and
/// representatives of distinct classes are not isomorphic.
fn ci_property(census: &[Vec<CensusEntry>], limits: &Limits) -> SuiteRow {
    let mut t = Tally::new();
    for level in census {
        let dense: Vec<DenseDigraph> = level.iter().map(|e| e.circulant().to_dense()).collect();
        for (i, e) in level.iter().enumerate() {
            let c = e.circulant();
            for k in c.modulus().units() {
                let image = c.scaled(k);
                let iso = find_isomorphism(&dense[i], &image.to_dense(), limits.aut_bound);
                t.check(matches!(iso, Ok(Some(_))), || format!("{c} vs {image}"));
            }
            for (j, f) in level.iter().enumerate().skip(i + 1) {
                let iso = find_isomorphism(&dense[i], &dense[j], limits.aut_bound);
                let mult = multiplier_equivalent(&c, &f.circulant());
                t.check(matches!((iso, mult), (Ok(None), Ok(None))), || format!("{c} vs {}", f.circulant()));
            }
        }
    }
    t.row("ci-property")
}

fn normality(entries: &[&CensusEntry], limits: &Limits) -> SuiteRow {
    let mut t = Tally::new();
    for e in entries {
        if e.aut_order > BigUint::from(limits.group_budget) {
            continue;
        }
        let c = e.circulant();
        let evidence = normality_evidence(&c, limits);
        t.check(
            matches!(&evidence, Ok(ev) if ev.is_normal() == (e.aut_order == normalizer_order(&c))),
            || format!("{c}: {evidence:?}"),
        );
    }
    t.row("normality-criterion")
}

fn normal_generators(entries: &[&CensusEntry]) -> SuiteRow {
    let mut t = Tally::new();
    for e in entries {
        let c = e.circulant();
        if c.order() > 1 && e.aut_order == normalizer_order(&c) {
            t.check(structurally_normal(&c), || c.to_string());
        }
    }
    t.row("normal-generators-regular")
}

/// Connection sets that are unions of cosets of a subgroup of prime order:
/// exactly the R-thick circulants.
pub fn thick_connection_sets(n: usize) -> Vec<Circulant> {
    let Ok(modulus) = crate::zmod::Modulus::new(n) else { return Vec::new() };
    let mut out = std::collections::BTreeSet::new();
    for (p, _) in modulus.factorize() {
        let cosets = n / p;
        for mask in 1u64..(1u64 << (cosets - 1)) {
            let s = (1..cosets)
                .filter(|r| mask >> (r - 1) & 1 == 1)
                .flat_map(|r| (0..p).map(move |j| r + j * cosets));
            if let Ok(c) = Circulant::new(n, s) {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

fn thick_normal(max_n: usize, limits: &Limits) -> SuiteRow {
    let mut t = Tally::new();
    for n in 2..=max_n.min(limits.aut_bound) {
        for c in thick_connection_sets(n) {
            if !c.is_connected() {
                continue;
            }
            let dense = c.to_dense();
            let Ok(aut) = automorphism_group(&dense, limits.aut_bound) else { continue };
            let arc_transitive = arc_orbit_size(&dense, &aut).is_ok_and(|s| s == dense.arc_count());
            let normal = aut.order() == normalizer_order(&c);
            let is_c4 = n == 4 && c.connection_set() == [1, 3];
            t.check(!(arc_transitive && normal) || is_c4, || c.to_string());
        }
    }
    t.row("r-thick-normal-only-c4")
}

/// A loopless digraph on `order` vertices with arc density about one half.
pub fn random_digraph<R: Rng>(rng: &mut R, order: usize) -> DenseDigraph {
    let mut g = DenseDigraph::new(order).expect("positive order");
    for u in 0..order {
        for v in 0..order {
            if u != v && rng.gen_bool(0.5) {
                g.add_arc(u, v).expect("in range");
            }
        }
    }
    g
}

fn products(instances: usize, max_order: usize, limits: &Limits) -> Vec<SuiteRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut commute = Tally::new();
    let mut collapse = Tally::new();
    for _ in 0..instances {
        let a = rng.gen_range(1..=4);
        let c = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=max_order / (a * c)).min(4);
        let g = random_digraph(&mut rng, a);
        let s = random_digraph(&mut rng, c);
        let left = g.lex_product(m).expect("m >= 1").tensor_product(&s);
        let right = g.tensor_product(&s).lex_product(m).expect("m >= 1");
        let iso = find_isomorphism(&left, &right, limits.aut_bound);
        commute.check(matches!(iso, Ok(Some(_))), || format!("orders {a}, {c}, m = {m}"));

        let b = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=(max_order / b).min(4));
        let l = rng.gen_range(1..=max_order / (b * m));
        let g = random_digraph(&mut rng, b);
        let twice = g.lex_product(m).and_then(|x| x.lex_product(l));
        let once = g.lex_product(m * l);
        collapse.check(matches!((&twice, &once), (Ok(x), Ok(y)) if x == y), || {
            format!("order {b}, m = {m}, l = {l}")
        });
    }
    vec![commute.row("lex-tensor-commute"), collapse.row("lex-collapse")]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run(8, &Limits::default());
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.rows.len(), 9);
    }

    #[test]
    fn thick_sets_have_nontrivial_stabilizer() {
        for n in 2..=12 {
            for c in thick_connection_sets(n) {
                assert!(c.translation_stabilizer().len() > 1, "{c}");
            }
        }
        assert!(thick_connection_sets(4).contains(&"4:1,3".parse().unwrap()));
    }
}
