//! Information sets, the 5G NR reliability construction, and the
//! last-frozen-bit / mixing-factor profile of a code.

use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MAX_VARS};

const NR_SEQUENCE: &str = include_str!("../assets/nr_polar_sequence.txt");

/// Polar channel indices ordered from least to most reliable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReliabilitySequence(Vec<usize>);

impl ReliabilitySequence {
    /// Length of the universal NR sequence.
    pub const NR_LEN: usize = 1024;

    /// The 3GPP TS 38.212 universal sequence.
    pub fn nr() -> Self {
        Self::parse(NR_SEQUENCE, None).expect("embedded sequence is valid")
    }

    /// Parses whitespace-separated integers. Without `expected_len` the input
    /// must hold all 1024 entries; a shorter sequence is accepted only when
    /// its length is requested explicitly and is a power of two.
    pub fn parse(text: &str, expected_len: Option<usize>) -> Result<Self> {
        let values = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Sequence(format!("not an integer: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let want = expected_len.unwrap_or(Self::NR_LEN);
        if !want.is_power_of_two() || want > Self::NR_LEN {
            return Err(Error::Sequence(format!("unsupported length {want}")));
        }
        if values.len() != want {
            return Err(Error::Sequence(format!(
                "expected {want} entries, found {}",
                values.len()
            )));
        }
        let mut seen = vec![false; want];
        for &v in &values {
            if v >= want {
                return Err(Error::Sequence(format!("entry {v} out of range [0, {want})")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Sequence(format!("duplicate entry {v}")));
            }
        }
        Ok(Self(values))
    }

    pub fn read<R: Read>(mut reader: R, expected_len: Option<usize>) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::parse(&text, expected_len)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A length-`2^n` code given by its information rows.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodeSpec {
    n: usize,
    info: Vec<bool>,
}

fn log2_len(len: usize) -> Result<usize> {
    if !len.is_power_of_two() || len < 2 || len.trailing_zeros() as usize > MAX_VARS {
        return Err(Error::CodeLength(len));
    }
    Ok(len.trailing_zeros() as usize)
}

impl CodeSpec {
    /// Keeps the `k` most reliable indices below `len`.
    pub fn construct_5g(len: usize, k: usize, sequence: &ReliabilitySequence) -> Result<Self> {
        let n = log2_len(len)?;
        if len > sequence.len() {
            return Err(Error::CodeLength(len));
        }
        if k == 0 || k > len {
            return Err(Error::Dimension { k, len });
        }
        let order: Vec<usize> = sequence.as_slice().iter().copied().filter(|&i| i < len).collect();
        let mut info = vec![false; len];
        for &i in &order[len - k..] {
            info[i] = true;
        }
        Ok(Self { n, info })
    }

    pub fn from_info_set(len: usize, indices: &[usize]) -> Result<Self> {
        let n = log2_len(len)?;
        let mut info = vec![false; len];
        for &i in indices {
            if i >= len {
                return Err(Error::InfoSet(format!("index {i} out of range [0, {len})")));
            }
            if std::mem::replace(&mut info[i], true) {
                return Err(Error::InfoSet(format!("duplicate index {i}")));
            }
        }
        Ok(Self { n, info })
    }

    /// One index per line; blank lines and `#` comments are ignored.
    pub fn parse_info_set(text: &str, len: usize) -> Result<Self> {
        let indices = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<usize>()
                    .map_err(|_| Error::InfoSet(format!("not an integer: {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_info_set(len, &indices)
    }

    /// Reed–Muller code `RM(r, m)`: all monomials of degree at most `r`.
    pub fn reed_muller(r: usize, m: usize) -> Result<Self> {
        let len = 1usize << m;
        log2_len(len)?;
        let idx: Vec<usize> = (0..len)
            .filter(|&i| {
                Monomial::from_row_index(i, m)
                    .map(|g| g.degree() <= r)
                    .unwrap_or(false)
            })
            .collect();
        Self::from_info_set(len, &idx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Block length `N = 2^n`.
    pub fn len(&self) -> usize {
        self.info.len()
    }

    pub fn is_empty(&self) -> bool {
        self.info.is_empty()
    }

    pub fn k(&self) -> usize {
        self.info.iter().filter(|&&b| b).count()
    }

    pub fn info_mask(&self) -> &[bool] {
        &self.info
    }

    pub fn is_info(&self, i: usize) -> bool {
        self.info[i]
    }

    pub fn info_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.info[i]).collect()
    }

    pub fn frozen_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.info[i]).collect()
    }

    pub fn monomial(&self, i: usize) -> Monomial {
        Monomial::from_row_index(i, self.n).expect("index within code length")
    }

    /// Largest degree among information monomials.
    pub fn max_degree(&self) -> Option<usize> {
        self.info_indices()
            .into_iter()
            .map(|i| self.monomial(i).degree())
            .max()
    }

    pub fn profile(&self) -> CodeProfile {
        let tau = (0..self.len()).rev().find(|&i| !self.info[i]);
        let cut = tau.unwrap_or(0);
        let mf_positions = match tau {
            Some(t) => (0..t).filter(|&i| self.info[i]).collect(),
            None => Vec::new(),
        };
        let tail_positions = match tau {
            Some(_) => ((cut + 1)..self.len()).collect(),
            None => (0..self.len()).collect(),
        };
        CodeProfile {
            tau,
            mf_positions,
            tail_positions,
        }
    }

    /// Downward closure under `≼`. Closure under deleting one variable and
    /// under lowering one variable index by one (into an unused index)
    /// generates the whole order.
    pub fn is_decreasing(&self) -> bool {
        let n = self.n;
        self.info_indices().into_iter().all(|i| {
            let h = self.monomial(i);
            let mask = h.mask();
            let ok = h.vars().all(|v| {
                let deleted = mask & !(1 << v);
                if !self.info[Monomial::from_mask(n, deleted).expect("valid").row_index()] {
                    return false;
                }
                if v > 0 && mask >> (v - 1) & 1 == 0 {
                    let lowered = deleted | 1 << (v - 1);
                    if !self.info[Monomial::from_mask(n, lowered).expect("valid").row_index()] {
                        return false;
                    }
                }
                true
            });
            ok
        })
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{})", self.len(), self.k())
    }
}

/// Last frozen index `τ` and the information positions around it. A code
/// without frozen rows has `tau = None` and no mixing-factor positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeProfile {
    pub tau: Option<usize>,
    /// Information indices below `τ`, increasing.
    pub mf_positions: Vec<usize>,
    /// Information indices above `τ`, increasing.
    pub tail_positions: Vec<usize>,
}

impl CodeProfile {
    pub fn mf(&self) -> usize {
        self.mf_positions.len()
    }

    pub fn is_free(&self) -> bool {
        self.tau.is_none()
    }

    /// Length of a coset prefix `u_0..u_τ` (0 for a free code).
    pub fn prefix_len(&self) -> usize {
        self.tau.map_or(0, |t| t + 1)
    }
}

/// Fixed bits `u_0..u_τ` of a polar coset.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CosetPrefix {
    bits: Vec<bool>,
}

impl CosetPrefix {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Plan(format!("bad prefix character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    /// True when no frozen position of `code` is set.
    pub fn respects(&self, code: &CodeSpec) -> bool {
        self.bits.iter().enumerate().all(|(i, &b)| !b || code.is_info(i))
    }
}

impl fmt::Display for CosetPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}
