//! Tensor-lexicographic decomposition of connected arc-transitive
//! circulants.
//!
//! Every such circulant is `(G0 x K_n1 x ... x K_nr)[bK1]` where `G0` is a
//! connected arc-transitive normal circulant other than `C4`, each `n_i >= 4`,
//! and `|G0|, n_1, ..., n_r` are pairwise coprime. The triple
//! `(G0, {n_i}, b)` is unique up to isomorphism of `G0`.
//!
//! The computation is direct: `b` is the size of the translation
//! stabilizer, and each `K_m` factor shows up as a literal CRT split of the
//! connection set of the R-thin quotient.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::circulant::Circulant;
use crate::isotest::multiplier_equivalent;
use crate::permgroup::{arc_orbit_size, automorphism_group, find_isomorphism, normalizer_order};
use crate::zmod::CrtSplit;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    pub gamma0: Circulant,
    /// Orders of the complete tensor factors, ascending.
    pub factors: Vec<usize>,
    pub b: usize,
}

impl Decomposition {
    pub fn new(gamma0: Circulant, mut factors: Vec<usize>, b: usize) -> Self {
        factors.sort_unstable();
        Decomposition { gamma0, factors, b }
    }

    /// `n0 * n1 * ... * nr`, the order of the R-thin quotient.
    pub fn thin_order(&self) -> usize {
        self.gamma0.order() * self.factors.iter().product::<usize>()
    }

    pub fn order(&self) -> usize {
        self.thin_order() * self.b
    }

    /// Cheap invariants: factor sizes, coprimality, `b >= 1`, and no
    /// inflated loop.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.b == 0 {
            out.push("b must be at least 1".to_string());
        }
        if let Some(f) = self.factors.iter().find(|&&f| f < 4) {
            out.push(format!("factor {f} is below 4"));
        }
        if let Some((a, b)) = first_common_factor(&self.parts()) {
            out.push(format!("{a} and {b} are not coprime"));
        }
        if self.gamma0.connection_set().is_empty() {
            out.push("gamma0 has no arcs".to_string());
        }
        if self.thin_order() == 1 && self.b > 1 {
            out.push("a single loop cannot be inflated".to_string());
        }
        out
    }

    fn parts(&self) -> Vec<usize> {
        std::iter::once(self.gamma0.order()).chain(self.factors.iter().copied()).collect()
    }

    pub fn with_canonical_gamma0(&self) -> Decomposition {
        Decomposition { gamma0: self.gamma0.canonical(), ..self.clone() }
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            gamma0: self.gamma0.clone(),
            factors: self.factors.clone(),
            b: self.b,
            aut_order: aut_order(self).to_string(),
        }
    }
}

/// `{"gamma0":{"n":3,"s":[1,2]},"factors":[4],"b":1,"aut_order":"144"}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub gamma0: Circulant,
    pub factors: Vec<usize>,
    pub b: usize,
    pub aut_order: String,
}

fn first_common_factor(parts: &[usize]) -> Option<(usize, usize)> {
    for (i, &a) in parts.iter().enumerate() {
        for &b in &parts[i + 1..] {
            if a.gcd(&b) != 1 {
                return Some((a, b));
            }
        }
    }
    None
}

/// How normality of `gamma0` was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityCheck {
    /// `|Aut(G0)|` equals the normalizer order `n0 * |Aut(Z_n0, S0)|`.
    BruteForce,
    /// Only the necessary conditions were checked: every element of `S0` is
    /// a unit and the multiplier stabilizer is regular on `S0`.
    Structural,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposed {
    pub decomposition: Decomposition,
    /// False when the order exceeded the search bound and arc-transitivity
    /// was assumed.
    pub arc_transitivity_verified: bool,
    pub normality: NormalityCheck,
}

pub fn decompose(c: &Circulant) -> Result<Decomposition> {
    Ok(decompose_with(c, &Limits::default())?.decomposition)
}

pub fn decompose_with(c: &Circulant, limits: &Limits) -> Result<Decomposed> {
    if c.connection_set().is_empty() {
        return Err(Error::InvalidParameter(format!("{c} has no arcs")));
    }
    if !c.is_connected() {
        return Err(Error::NotConnected(c.to_string()));
    }
    let arc_transitivity_verified = c.order() <= limits.aut_bound;
    if arc_transitivity_verified {
        let dense = c.to_dense();
        let aut = automorphism_group(&dense, limits.aut_bound)?;
        if arc_orbit_size(&dense, &aut)? != dense.arc_count() {
            return Err(Error::NotArcTransitive(c.to_string()));
        }
    }

    let (mut residual, b) = if c.order() == 1 { (c.clone(), 1) } else { c.thin_quotient()? };
    let mut factors = Vec::new();
    'extract: loop {
        for m in residual.modulus().unitary_divisors() {
            if m < 4 {
                continue;
            }
            if let Some(rest) = residual.crt_factor_split(m)? {
                factors.push(m);
                residual = rest;
                continue 'extract;
            }
        }
        break;
    }

    let decomposition = Decomposition::new(residual, factors, b);
    let violations = decomposition.structural_violations();
    if !violations.is_empty() {
        return Err(Error::InvariantViolation(format!("{c}: {}", violations.join("; "))));
    }
    let normality = check_gamma0(&decomposition.gamma0, limits)?;
    Ok(Decomposed { decomposition, arc_transitivity_verified, normality })
}

fn is_c4(g: &Circulant) -> bool {
    g.order() == 4 && g.canonical().connection_set() == [1, 3]
}

/// `G0` must be arc-transitive, normal and not `C4`.
fn check_gamma0(g: &Circulant, limits: &Limits) -> Result<NormalityCheck> {
    if is_c4(g) {
        return Err(Error::InvariantViolation(format!("gamma0 {g} is C4")));
    }
    if g.order() <= limits.aut_bound {
        let dense = g.to_dense();
        let aut = automorphism_group(&dense, limits.aut_bound)?;
        if arc_orbit_size(&dense, &aut)? != dense.arc_count() {
            return Err(Error::InvariantViolation(format!("gamma0 {g} is not arc-transitive")));
        }
        if aut.order() != normalizer_order(g) {
            return Err(Error::InvariantViolation(format!("gamma0 {g} is not normal")));
        }
        Ok(NormalityCheck::BruteForce)
    } else if structurally_normal(g) {
        Ok(NormalityCheck::Structural)
    } else {
        Err(Error::InvariantViolation(format!("gamma0 {g} fails the generator/regularity conditions")))
    }
}

/// Every element of `S` is a unit and the multipliers fixing `S` act
/// regularly on it.
pub fn structurally_normal(g: &Circulant) -> bool {
    let m = g.modulus();
    let s = g.connection_set();
    if !s.iter().all(|&x| m.is_unit(x)) {
        return false;
    }
    let stab = g.multiplier_stabilizer();
    if stab.len() != s.len() {
        return false;
    }
    let Some(&first) = s.first() else { return false };
    let mut orbit: Vec<usize> = stab.iter().map(|&k| k * first % g.order()).collect();
    orbit.sort_unstable();
    orbit.dedup();
    orbit == s
}

/// Builds `(G0 x K_n1 x ... x K_nr)[bK1]` as a circulant through CRT
/// coordinates: `S0 x (Z_n1 \ 0) x ... x (Z_nr \ 0)`, inflated by `b`.
pub fn reconstruct(d: &Decomposition) -> Result<Circulant> {
    let violations = d.structural_violations();
    if !violations.is_empty() {
        return Err(Error::InvariantViolation(violations.join("; ")));
    }
    let parts = d.parts();
    let n = d.thin_order();
    let split = CrtSplit::new(crate::zmod::Modulus::new(n)?, &parts)?;
    let thin = Circulant::new(
        n,
        (0..n).filter(|&x| {
            let coords = split.forward(x);
            d.gamma0.contains(coords[0]) && coords[1..].iter().all(|&y| y != 0)
        }),
    )?;
    thin.inflate(d.b)
}

fn factorial(k: usize) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `|S_b wr (Aut(G0) x S_n1 x ... x S_nr)|` with `|Aut(G0)| = n0 * |Aut(Z_n0, S0)|`.
pub fn aut_order(d: &Decomposition) -> BigUint {
    let base = factorial(d.b).pow(d.thin_order() as u32);
    let top = d
        .factors
        .iter()
        .fold(normalizer_order(&d.gamma0), |acc, &f| acc * factorial(f));
    base * top
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status_of(&self, name: &str) -> Option<&CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.status)
    }

    fn record(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.checks.push(CheckResult { name, status, detail: detail.into() });
    }

    fn skip(&mut self, name: &'static str, detail: impl Into<String>) {
        self.checks.push(CheckResult { name, status: CheckStatus::Skipped, detail: detail.into() });
    }
}

/// Checks a claimed decomposition of `c`. Failures are report entries.
pub fn verify_decomposition(c: &Circulant, d: &Decomposition, limits: &Limits) -> VerificationReport {
    let mut report = VerificationReport { checks: Vec::new() };
    let g0 = &d.gamma0;
    let bound = limits.aut_bound;

    report.record("order", d.order() == c.order(), format!("{} vs {}", d.order(), c.order()));
    report.record("gamma0-connected", g0.is_connected() && !g0.connection_set().is_empty(), g0.to_string());

    if g0.connection_set().is_empty() {
        report.record("gamma0-arc-transitive", false, "no arcs");
        report.record("gamma0-normal", false, "no arcs");
    } else if g0.order() <= bound {
        let dense = g0.to_dense();
        match automorphism_group(&dense, bound) {
            Ok(aut) => {
                let orbit = arc_orbit_size(&dense, &aut).unwrap_or(0);
                report.record(
                    "gamma0-arc-transitive",
                    orbit == dense.arc_count(),
                    format!("arc orbit {orbit} of {}", dense.arc_count()),
                );
                let normalizer = normalizer_order(g0);
                report.record(
                    "gamma0-normal",
                    aut.order() == normalizer,
                    format!("|Aut| = {}, normalizer order {normalizer}", aut.order()),
                );
            }
            Err(e) => {
                report.skip("gamma0-arc-transitive", e.to_string());
                report.skip("gamma0-normal", e.to_string());
            }
        }
    } else {
        report.skip("gamma0-arc-transitive", "order exceeds the search bound");
        report.record("gamma0-normal", structurally_normal(g0), "structural conditions only");
    }
    report.record("gamma0-not-c4", !is_c4(g0), g0.to_string());
    report.record(
        "factors-at-least-4",
        d.factors.iter().all(|&f| f >= 4),
        format!("{:?}", d.factors),
    );
    let coprime = first_common_factor(&d.parts());
    report.record(
        "pairwise-coprime",
        coprime.is_none(),
        coprime.map(|(a, b)| format!("{a} and {b}")).unwrap_or_default(),
    );

    match reconstruct(d) {
        Err(e) => report.record("reconstruction-isomorphic", false, e.to_string()),
        Ok(r) if r.order() != c.order() => {
            report.record("reconstruction-isomorphic", false, format!("reconstructed {r}"))
        }
        Ok(r) if c.order() <= bound => match find_isomorphism(&r.to_dense(), &c.to_dense(), bound) {
            Ok(w) => report.record("reconstruction-isomorphic", w.is_some(), format!("brute force against {r}")),
            Err(e) => report.skip("reconstruction-isomorphic", e.to_string()),
        },
        Ok(r) => {
            let k = multiplier_equivalent(&r, c).ok().flatten();
            report.record("reconstruction-isomorphic", k.is_some(), format!("multiplier equivalence against {r}"))
        }
    }

    if c.order() <= bound && !c.connection_set().is_empty() {
        match automorphism_group(&c.to_dense(), bound) {
            Ok(aut) => {
                let formula = aut_order(d);
                report.record(
                    "automorphism-order",
                    aut.order() == formula,
                    format!("|Aut| = {}, formula {formula}", aut.order()),
                );
            }
            Err(e) => report.skip("automorphism-order", e.to_string()),
        }
    } else {
        report.skip("automorphism-order", "order exceeds the search bound");
    }
    report
}
