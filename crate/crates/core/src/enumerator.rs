//! Weight enumerating polynomials of polar cosets.
//!
//! Two independent routes are provided: a memoized recursion over the
//! even/odd split of the input prefix, and a brute-force sweep over every
//! free suffix using explicit generator rows.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Default limit on free bits for brute-force enumeration.
pub const DEFAULT_BRUTE_CAP: usize = 24;

/// `Σ_d A_d X^d` for a code of length `N`; holds `N + 1` coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightEnumerator {
    coeffs: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn zero(len: usize) -> Self {
        Self {
            coeffs: vec![BigUint::zero(); len + 1],
        }
    }

    /// `X^d` in length `len`.
    pub fn monomial(len: usize, d: usize) -> Self {
        let mut w = Self::zero(len);
        w.coeffs[d] = BigUint::one();
        w
    }

    /// `(1 + X)^len`.
    pub fn full_space(len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len + 1);
        let mut c = BigUint::one();
        coeffs.push(c.clone());
        for d in 1..=len {
            c = c * BigUint::from(len + 1 - d) / BigUint::from(d);
            coeffs.push(c.clone());
        }
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigUint>) -> Self {
        assert!(!coeffs.is_empty(), "enumerator needs at least one coefficient");
        Self { coeffs }
    }

    /// Block length `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &BigUint {
        &self.coeffs[d]
    }

    /// Total number of codewords counted.
    pub fn mass(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Nonzero `(d, A_d)` pairs in increasing `d`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// `self += 2^exp · other`.
    pub fn add_scaled_pow2(&mut self, other: &WeightEnumerator, exp: u32) {
        self.grow(other.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b << exp as usize;
            }
        }
    }

    /// `2^exp · self`.
    pub fn scale_pow2(&self, exp: u32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c << exp as usize).collect(),
        }
    }

    fn grow(&mut self, len: usize) {
        if self.coeffs.len() < len {
            self.coeffs.resize(len, BigUint::zero());
        }
    }
}

impl AddAssign<&WeightEnumerator> for WeightEnumerator {
    fn add_assign(&mut self, rhs: &WeightEnumerator) {
        self.grow(rhs.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Add for &WeightEnumerator {
    type Output = WeightEnumerator;

    fn add(self, rhs: &WeightEnumerator) -> WeightEnumerator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

/// Cauchy product; the result has length `N_a + N_b`.
impl Mul for &WeightEnumerator {
    type Output = WeightEnumerator;

    fn mul(self, rhs: &WeightEnumerator) -> WeightEnumerator {
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        WeightEnumerator { coeffs }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    len: usize,
    prefix_len: usize,
    words: Vec<u64>,
}

impl CacheKey {
    fn new(len: usize, prefix: &[bool]) -> Self {
        let mut words = vec![0u64; prefix.len().div_ceil(64)];
        for (i, &b) in prefix.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self {
            len,
            prefix_len: prefix.len(),
            words,
        }
    }
}

/// Memoized recursive enumerator for cosets of one block length.
///
/// Uses `u F_N` with weight preserved under `u ↦ (c, b)`, `c_j = u_{2j} ⊕
/// u_{2j+1}`, `b_j = u_{2j+1}`, so `w(u F_N) = w(c F_{N/2}) + w(b F_{N/2})`.
/// Sibling cosets share deep subproblems through the cache.
#[derive(Debug, Default)]
pub struct CosetEnumerator {
    cache: HashMap<CacheKey, Arc<WeightEnumerator>>,
}

impl std::fmt::Debug for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.len, self.prefix_len)
    }
}

impl CosetEnumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.len()
    }

    /// `A_N(u_0^i)(X)` for `prefix = u_0..u_i` and `N = 2^n`.
    pub fn enumerate(&mut self, prefix: &[bool], n: usize) -> Result<WeightEnumerator> {
        let len = 1usize << n;
        if prefix.len() > len {
            return Err(Error::IndexOutOfRange {
                index: prefix.len(),
                len: len + 1,
            });
        }
        Ok(self.rec(len, prefix).as_ref().clone())
    }

    fn rec(&mut self, len: usize, prefix: &[bool]) -> Arc<WeightEnumerator> {
        if prefix.is_empty() {
            let key = CacheKey::new(len, prefix);
            return self
                .cache
                .entry(key)
                .or_insert_with(|| Arc::new(WeightEnumerator::full_space(len)))
                .clone();
        }
        if len == 1 {
            return Arc::new(WeightEnumerator::monomial(1, prefix[0] as usize));
        }
        let key = CacheKey::new(len, prefix);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let half = len / 2;
        let pairs = prefix.len() / 2;
        let mut c: Vec<bool> = (0..pairs).map(|j| prefix[2 * j] ^ prefix[2 * j + 1]).collect();
        let mut b: Vec<bool> = (0..pairs).map(|j| prefix[2 * j + 1]).collect();
        let result = if prefix.len().is_multiple_of(2) {
            let left = self.rec(half, &c);
            let right = self.rec(half, &b);
            left.as_ref() * right.as_ref()
        } else {
            let last = prefix[prefix.len() - 1];
            let mut acc = WeightEnumerator::zero(len);
            for t in [false, true] {
                c.push(last ^ t);
                b.push(t);
                let left = self.rec(half, &c);
                let right = self.rec(half, &b);
                acc += &(left.as_ref() * right.as_ref());
                c.pop();
                b.pop();
            }
            acc
        };
        let result = Arc::new(result);
        self.cache.insert(key, result.clone());
        result
    }
}

/// Rows of the generator matrix as packed evaluation vectors; row `i` is
/// `ev(monomial(i))`.
pub fn generator_rows(n: usize) -> Vec<Vec<u64>> {
    (0..1usize << n)
        .map(|i| {
            Monomial::from_row_index(i, n)
                .expect("row index in range")
                .evaluate()
                .words()
                .to_vec()
        })
        .collect()
}

/// Weight distribution of `{base + Σ_{r ∈ rows} a_r r}` by a Gray-code sweep.
pub(crate) fn sweep_affine_span(len: usize, base: &[u64], rows: &[&[u64]]) -> WeightEnumerator {
    let mut counts = vec![0u64; len + 1];
    let mut word = base.to_vec();
    let weight = |w: &[u64]| w.iter().map(|x| x.count_ones() as usize).sum::<usize>();
    counts[weight(&word)] += 1;
    for step in 1u64..1u64 << rows.len() {
        let flip = step.trailing_zeros() as usize;
        for (a, b) in word.iter_mut().zip(rows[flip]) {
            *a ^= b;
        }
        counts[weight(&word)] += 1;
    }
    WeightEnumerator::from_coeffs(counts.into_iter().map(BigUint::from).collect())
}

/// `A_N(u_0^i)(X)` by iterating every free suffix.
pub fn enumerate_bruteforce(prefix: &[bool], n: usize, cap: usize) -> Result<WeightEnumerator> {
    let rows = generator_rows(n);
    enumerate_bruteforce_with(prefix, &rows, cap)
}

/// As [`enumerate_bruteforce`] with precomputed [`generator_rows`].
pub fn enumerate_bruteforce_with(prefix: &[bool], rows: &[Vec<u64>], cap: usize) -> Result<WeightEnumerator> {
    let len = rows.len();
    if prefix.len() > len {
        return Err(Error::IndexOutOfRange {
            index: prefix.len(),
            len: len + 1,
        });
    }
    let free = len - prefix.len();
    if free > cap {
        return Err(Error::CapExceeded {
            bits: free,
            cap: 1u64.checked_shl(cap as u32).unwrap_or(u64::MAX),
        });
    }
    let mut base = vec![0u64; len.div_ceil(64)];
    for (i, _) in prefix.iter().enumerate().filter(|(_, &b)| b) {
        for (a, b) in base.iter_mut().zip(&rows[i]) {
            *a ^= b;
        }
    }
    let free_rows: Vec<&[u64]> = rows[prefix.len()..].iter().map(Vec::as_slice).collect();
    Ok(sweep_affine_span(len, &base, &free_rows))
}
