//! Arithmetic in the cyclic group `Z_n`: units, divisors, CRT coordinates.

use num_integer::Integer;

use crate::{Error, Result};

/// Order of a cyclic group `Z_n`, always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(usize);

impl Modulus {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Residues coprime to `n`. For `n = 1` this is `{0}`, the identity of
    /// the one-element group.
    pub fn units(self) -> Vec<usize> {
        if self.0 == 1 {
            return vec![0];
        }
        (1..self.0).filter(|k| k.gcd(&self.0) == 1).collect()
    }

    pub fn is_unit(self, k: usize) -> bool {
        (k % self.0).gcd(&self.0) == 1
    }

    /// Prime factorization by trial division, primes ascending.
    pub fn factorize(self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let mut m = self.0;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            p += 1;
        }
        if m > 1 {
            out.push((m, 1));
        }
        out
    }

    /// Maximal prime-power components `p^e || n`, ascending by prime.
    pub fn prime_power_parts(self) -> Vec<usize> {
        self.factorize().into_iter().map(|(p, e)| p.pow(e)).collect()
    }

    pub fn divisors(self) -> Vec<usize> {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1;
        while d * d <= self.0 {
            if self.0.is_multiple_of(d) {
                small.push(d);
                if d * d != self.0 {
                    large.push(self.0 / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Divisors `m` with `gcd(m, n/m) = 1`, ascending.
    pub fn unitary_divisors(self) -> Vec<usize> {
        self.divisors()
            .into_iter()
            .filter(|&m| m.gcd(&(self.0 / m)) == 1)
            .collect()
    }

    pub fn is_unitary_divisor(self, m: usize) -> bool {
        m >= 1 && self.0.is_multiple_of(m) && m.gcd(&(self.0 / m)) == 1
    }

    /// The unique subgroup of order `d`: `{0, n/d, 2n/d, ...}`.
    pub fn subgroup_of_order(self, d: usize) -> Result<Vec<usize>> {
        if d == 0 || !self.0.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, n: self.0 });
        }
        let step = self.0 / d;
        Ok((0..d).map(|i| i * step).collect())
    }

    pub fn crt_split(self, parts: &[usize]) -> Result<CrtSplit> {
        CrtSplit::new(self, parts)
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Inverse of `k` modulo `n`, if `k` is a unit.
pub fn mod_inverse(k: usize, n: usize) -> Option<usize> {
    if n == 1 {
        return Some(0);
    }
    let e = (k as i64 % n as i64).extended_gcd(&(n as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(n as i64) as usize)
}

/// Coordinatization `Z_n -> Z_{m_0} x ... x Z_{m_k}` for pairwise coprime
/// parts with product `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtSplit {
    n: usize,
    parts: Vec<usize>,
    // idempotents: basis[i] = 1 mod parts[i], 0 mod parts[j] for j != i
    basis: Vec<usize>,
}

impl CrtSplit {
    pub fn new(n: Modulus, parts: &[usize]) -> Result<Self> {
        let n = n.get();
        let bad = |reason: String| Error::InvalidSplit { n, reason };
        if parts.is_empty() {
            return Err(bad("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(bad("zero part".into()));
        }
        let product = parts
            .iter()
            .try_fold(1usize, |acc, &p| acc.checked_mul(p))
            .ok_or_else(|| bad("product overflows".into()))?;
        if product != n {
            return Err(bad(format!("parts multiply to {product}")));
        }
        for (i, &a) in parts.iter().enumerate() {
            for &b in &parts[i + 1..] {
                if a.gcd(&b) != 1 {
                    return Err(bad(format!("{a} and {b} are not coprime")));
                }
            }
        }
        let basis = parts
            .iter()
            .map(|&m| {
                let cofactor = n / m;
                let inv = mod_inverse(cofactor % m, m).expect("coprime parts");
                ((cofactor as u128 * inv as u128) % n as u128) as usize
            })
            .collect();
        Ok(CrtSplit {
            n,
            parts: parts.to_vec(),
            basis,
        })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn forward(&self, x: usize) -> Vec<usize> {
        self.parts.iter().map(|&m| x % m).collect()
    }

    pub fn inverse(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.parts.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates, got {}",
                self.parts.len(),
                coords.len()
            )));
        }
        let mut acc = 0u128;
        for ((&a, &m), &e) in coords.iter().zip(&self.parts).zip(&self.basis) {
            if a >= m {
                return Err(Error::InvalidParameter(format!("coordinate {a} not below {m}")));
            }
            acc = (acc + a as u128 * e as u128) % self.n as u128;
        }
        Ok(acc as usize)
    }
}
