//! Circulants `Cay(Z_n, S)` in connection-set form.

use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::digraph::DenseDigraph;
use crate::zmod::{CrtSplit, Modulus};
use crate::{Error, Result};

/// `Cay(Z_n, S)`: vertex `x` points to `y` iff `y - x` lies in `S`.
///
/// `S` is kept sorted and duplicate-free. `0` may only appear when `n = 1`,
/// which encodes the single loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCirculant")]
pub struct Circulant {
    n: usize,
    s: Vec<usize>,
}

#[derive(Deserialize)]
struct RawCirculant {
    n: usize,
    s: Vec<usize>,
}

impl TryFrom<RawCirculant> for Circulant {
    type Error = Error;

    fn try_from(raw: RawCirculant) -> Result<Self> {
        Circulant::new(raw.n, raw.s)
    }
}

impl Circulant {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, s: I) -> Result<Self> {
        Modulus::new(n)?;
        let mut s: Vec<usize> = s.into_iter().collect();
        s.sort_unstable();
        s.dedup();
        if let Some(&x) = s.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidConnectionSet(format!("element {x} not below {n}")));
        }
        if n > 1 && s.first() == Some(&0) {
            return Err(Error::InvalidConnectionSet(format!("0 in connection set of order {n}")));
        }
        Ok(Circulant { n, s })
    }

    /// `Cay(Z_1, {0})`.
    pub fn single_loop() -> Self {
        Circulant { n: 1, s: vec![0] }
    }

    /// `K_n = Cay(Z_n, Z_n \ {0})`.
    pub fn complete(n: usize) -> Result<Self> {
        if n == 1 {
            return Ok(Self::single_loop());
        }
        Self::new(n, 1..n)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.n).expect("validated order")
    }

    #[inline]
    pub fn connection_set(&self) -> &[usize] {
        &self.s
    }

    pub fn contains(&self, x: usize) -> bool {
        self.s.binary_search(&(x % self.n)).is_ok()
    }

    pub fn is_single_loop(&self) -> bool {
        self.n == 1 && self.s == [0]
    }

    /// `S = -S`, i.e. the digraph is an undirected graph.
    pub fn is_undirected(&self) -> bool {
        self.s.iter().all(|&x| self.contains(self.n - x))
    }

    pub fn to_dense(&self) -> DenseDigraph {
        let n = self.n;
        DenseDigraph::from_arcs(
            n,
            (0..n).flat_map(|x| self.s.iter().map(move |&d| (x, (x + d) % n))),
            n == 1,
        )
        .expect("circulant arcs are in range")
    }

    /// `S` generates `Z_n`.
    pub fn is_connected(&self) -> bool {
        self.s.iter().fold(self.n, |g, &x| g.gcd(&x)) == 1
    }

    /// `{u : S + u = S}`, the class of 0 under the thickness relation.
    pub fn translation_stabilizer(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&u| self.s.iter().all(|&x| self.contains(x + u)))
            .collect()
    }

    /// Collapses the thickness classes: returns the R-thin quotient
    /// `Cay(Z_{n/b}, S mod n/b)` and the multiplicity `b`.
    pub fn thin_quotient(&self) -> Result<(Circulant, usize)> {
        if self.n < 2 || self.s.is_empty() {
            return Err(Error::InvalidParameter(
                "thin quotient needs order at least 2 and a nonempty connection set".into(),
            ));
        }
        let h = self.translation_stabilizer();
        let b = h.len();
        let m = self.n / b;
        if h != self.modulus().subgroup_of_order(b)? {
            return Err(Error::InvariantViolation(format!(
                "translation stabilizer of {self} is not the subgroup of order {b}"
            )));
        }
        if self.s.iter().any(|&x| x % m == 0) {
            return Err(Error::InvalidConnectionSet(format!(
                "{self} meets its translation stabilizer; the quotient would carry a loop"
            )));
        }
        let quotient = Circulant::new(m, self.s.iter().map(|&x| x % m))?;
        debug_assert_eq!(quotient.s.len() * b, self.s.len());
        Ok((quotient, b))
    }

    /// Splits off a `K_m` tensor factor: if `S = S' x (Z_m \ {0})` in the
    /// coordinates `Z_{n/m} x Z_m`, returns `Cay(Z_{n/m}, S')`.
    pub fn crt_factor_split(&self, m: usize) -> Result<Option<Circulant>> {
        let modulus = self.modulus();
        if m < 2 || !modulus.is_unitary_divisor(m) {
            return Err(Error::NotUnitaryDivisor { m, n: self.n });
        }
        let rest = self.n / m;
        let split = CrtSplit::new(modulus, &[rest, m])?;
        let mut residual = Vec::new();
        for &x in &self.s {
            let coords = split.forward(x);
            if coords[1] == 0 {
                return Ok(None);
            }
            residual.push(coords[0]);
        }
        residual.sort_unstable();
        residual.dedup();
        // every nonzero m-coordinate must occur above each residual element
        if residual.len() * (m - 1) != self.s.len() {
            return Ok(None);
        }
        if rest > 1 && residual.first() == Some(&0) {
            return Ok(None);
        }
        Ok(Some(Circulant::new(rest, residual)?))
    }

    /// `Cay(Z_n, kS)`; isomorphic to `self` via `x -> kx`.
    pub fn multiplier_apply(&self, k: usize) -> Result<Circulant> {
        if !self.modulus().is_unit(k) {
            return Err(Error::NotAUnit { k, n: self.n });
        }
        Ok(self.scaled(k % self.n))
    }

    pub(crate) fn scaled(&self, k: usize) -> Circulant {
        let mut s: Vec<usize> = self.s.iter().map(|&x| x * k % self.n).collect();
        s.sort_unstable();
        Circulant { n: self.n, s }
    }

    /// Units `k` with `kS = S`.
    pub fn multiplier_stabilizer(&self) -> Vec<usize> {
        self.modulus()
            .units()
            .into_iter()
            .filter(|&k| self.scaled(k).s == self.s)
            .collect()
    }

    /// Least `kS` (lexicographic on sorted sets) over all units `k`.
    pub fn canonical_multiplier_form(&self) -> MultiplierClass {
        let mut best: Option<Circulant> = None;
        let mut stabilizer = Vec::new();
        for k in self.modulus().units() {
            let image = self.scaled(k);
            if image.s == self.s {
                stabilizer.push(k);
            }
            if best.as_ref().is_none_or(|b| image.s < b.s) {
                best = Some(image);
            }
        }
        MultiplierClass {
            representative: best.expect("units are nonempty"),
            stabilizer_units: stabilizer,
        }
    }

    pub fn canonical(&self) -> Circulant {
        self.canonical_multiplier_form().representative
    }

    /// Tensor product of circulants of coprime orders, realized on
    /// `Z_{n1 n2}` through CRT coordinates.
    pub fn tensor_coprime(&self, other: &Circulant) -> Result<Circulant> {
        if self.n.gcd(&other.n) != 1 {
            return Err(Error::InvalidParameter(format!(
                "orders {} and {} are not coprime",
                self.n, other.n
            )));
        }
        let n = self.n * other.n;
        Circulant::new(n, (0..n).filter(|&x| self.contains(x % self.n) && other.contains(x % other.n)))
    }

    /// `Cay(Z_n, S)[bK1]` realized as `Cay(Z_{nb}, {x : x mod n in S})`.
    pub fn inflate(&self, b: usize) -> Result<Circulant> {
        if b < 1 {
            return Err(Error::InvalidParameter("lexicographic multiplicity must be at least 1".into()));
        }
        let n = self.n * b;
        Circulant::new(n, (0..n).filter(|&x| self.contains(x % self.n)))
    }
}

/// Multiplier orbit of a circulant, with its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierClass {
    pub representative: Circulant,
    pub stabilizer_units: Vec<usize>,
}

impl std::fmt::Display for Circulant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, x) in self.s.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Circulant {
    type Err = Error;

    /// Accepts `"n:s1,s2,..."` or the JSON object `{"n":..,"s":[..]}`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()));
        }
        let (n, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected \"n:s1,s2,...\", got {text:?}")))?;
        let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad order {n:?}")))?;
        let s = rest
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad element {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Circulant::new(n, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(text: &str) -> Circulant {
        text.parse().unwrap()
    }

    #[test]
    fn construction_rules() {
        assert_eq!(c("8:7,1,3,1").connection_set(), &[1, 3, 7]);
        assert!(Circulant::new(4, [0, 1]).is_err());
        assert!(Circulant::new(4, [4]).is_err());
        assert!(Circulant::new(0, []).is_err());
        assert!(c("1:0").is_single_loop());
        assert!("8-1".parse::<Circulant>().is_err());
        assert!("x:1".parse::<Circulant>().is_err());
    }

    #[test]
    fn text_and_json_forms_agree() {
        let a = c("8:1,3,5,7");
        let b: Circulant = r#"{"n":8,"s":[1,3,5,7]}"#.parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "8:1,3,5,7");
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"n":8,"s":[1,3,5,7]}"#);
        assert!(serde_json::from_str::<Circulant>(r#"{"n":4,"s":[0,1]}"#).is_err());
    }

    #[test]
    fn dense_forms() {
        assert_eq!(c("3:1,2").to_dense(), DenseDigraph::complete(3).unwrap());
        let c4 = c("4:1,3").to_dense();
        assert_eq!(c4.arc_count(), 8);
        assert_eq!(c4.out_neighborhood(0).unwrap(), vec![1, 3]);
        assert_eq!(c4.out_neighborhood(1).unwrap(), vec![0, 2]);
        assert_eq!(c("1:0").to_dense(), DenseDigraph::single_loop());
    }

    #[test]
    fn connectivity_examples() {
        assert!(!c("8:2,6").is_connected());
        assert!(c("8:1").is_connected());
        assert!(c("6:2,3").is_connected());
        for n in 1..=24 {
            for mask in 1u32..(1 << (n - 1)).min(1 << 12) {
                let s = (1..n).filter(|x| mask >> (x - 1) & 1 == 1);
                let g = Circulant::new(n, s).unwrap();
                assert_eq!(g.is_connected(), g.to_dense().is_connected(), "{g}");
            }
        }
    }

    #[test]
    fn translation_stabilizer_examples() {
        assert_eq!(c("4:1,3").translation_stabilizer(), vec![0, 2]);
        assert_eq!(c("8:1,3,5,7").translation_stabilizer(), vec![0, 2, 4, 6]);
        assert_eq!(c("7:1,2,4").translation_stabilizer(), vec![0]);
    }

    #[test]
    fn thin_quotient_examples() {
        assert_eq!(c("8:1,2,3,5,6,7").thin_quotient().unwrap(), (c("4:1,2,3"), 2));
        assert_eq!(c("8:1,3,5,7").thin_quotient().unwrap(), (c("2:1"), 4));
        assert_eq!(c("7:1,2,4").thin_quotient().unwrap(), (c("7:1,2,4"), 1));
        assert!(c("1:0").thin_quotient().is_err());
        assert!(c("5:").thin_quotient().is_err());
    }

    #[test]
    fn crt_split_examples() {
        let k3k4 = c("12:1,2,5,7,10,11");
        assert_eq!(k3k4.crt_factor_split(4).unwrap(), Some(c("3:1,2")));
        assert_eq!(k3k4.crt_factor_split(12).unwrap(), None);
        assert_eq!(c("6:1,2,3,4,5").crt_factor_split(2).unwrap(), None);
        assert_eq!(c("4:1,2,3").crt_factor_split(4).unwrap(), Some(Circulant::single_loop()));
        assert!(matches!(k3k4.crt_factor_split(6), Err(Error::NotUnitaryDivisor { .. })));
        assert!(k3k4.crt_factor_split(1).is_err());
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(c("7:1,2,4").multiplier_apply(3).unwrap(), c("7:3,5,6"));
        assert_eq!(c("7:1,2,4").multiplier_apply(1).unwrap(), c("7:1,2,4"));
        assert_eq!(c("5:1,3").multiplier_apply(2).unwrap(), c("5:1,2"));
        assert!(matches!(c("8:1").multiplier_apply(2), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(c("7:1,2,4").multiplier_stabilizer(), vec![1, 2, 4]);
        assert_eq!(c("9:1,2,3,4,5,6,7,8").multiplier_stabilizer(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(c("5:1,2").multiplier_stabilizer(), vec![1]);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(c("7:3,5,6").canonical(), c("7:1,2,4"));
        assert_eq!(c("4:1,3").canonical(), c("4:1,3"));
        assert_eq!(c("4:1,3").canonical_multiplier_form().stabilizer_units, vec![1, 3]);
        assert_eq!(c("5:2,3").canonical(), c("5:1,4"));
    }

    #[test]
    fn products() {
        assert_eq!(c("3:1,2").tensor_coprime(&Circulant::complete(4).unwrap()).unwrap(), c("12:1,2,5,7,10,11"));
        assert!(c("2:1").tensor_coprime(&c("4:1")).is_err());
        assert_eq!(c("2:1").inflate(2).unwrap(), c("4:1,3"));
        assert!(Circulant::single_loop().inflate(3).is_err());
    }
}
