//! Monomials over `n` Boolean variables and their evaluation vectors.
//!
//! A monomial is stored as a bit mask of the variables it contains. The row of
//! the Kronecker power `F^{⊗n}` (kernel `[[1,0],[1,1]]`) that equals the
//! evaluation vector of a monomial `g` has index
//!
//! ```text
//! [g] = Σ_{j ∉ vars(g)} 2^j
//! ```
//!
//! and column `c` corresponds to the evaluation point `u_j = 1 - bit_j(c)`.
//! Deleting a variable or replacing a variable with a smaller one always
//! increases the row index.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported variable count.
pub const MAX_VARS: usize = 30;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    n: u8,
    mask: u32,
}

impl Monomial {
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, vars: I) -> Result<Self> {
        check_vars(n)?;
        let mut mask = 0u32;
        for v in vars {
            if v >= n {
                return Err(Error::VariableOutOfRange { var: v, n });
            }
            mask |= 1 << v;
        }
        Ok(Self { n: n as u8, mask })
    }

    pub fn from_mask(n: usize, mask: u32) -> Result<Self> {
        check_vars(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::VariableOutOfRange {
                var: 31 - mask.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self { n: n as u8, mask })
    }

    /// The constant monomial `1`.
    pub fn one(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    /// Inverse of [`Monomial::row_index`].
    pub fn from_row_index(index: usize, n: usize) -> Result<Self> {
        check_vars(n)?;
        if index >> n != 0 {
            return Err(Error::IndexOutOfRange { index, len: 1 << n });
        }
        Ok(Self {
            n: n as u8,
            mask: !(index as u32) & full_mask(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, var: usize) -> bool {
        var < 32 && self.mask >> var & 1 == 1
    }

    /// Variable indices in increasing order.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&v| self.contains(v))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn row_index(&self) -> usize {
        (!self.mask & full_mask(self.n())) as usize
    }

    /// Product of two monomials (idempotent variables).
    pub fn times(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n, other.n);
        Monomial {
            n: self.n,
            mask: self.mask | other.mask,
        }
    }

    /// Product of the variables shared by both monomials.
    pub fn common(&self, other: &Monomial) -> Monomial {
        Monomial {
            n: self.n,
            mask: self.mask & other.mask,
        }
    }

    /// Variables of `self` missing from `other`, as a monomial.
    pub fn without(&self, other: &Monomial) -> Monomial {
        Monomial {
            n: self.n,
            mask: self.mask & !other.mask,
        }
    }

    pub fn evaluate(&self) -> EvaluationVector {
        let len = 1usize << self.n;
        let mut bits = EvaluationVector::zeros(len);
        // Support is every column whose bits avoid vars(self), i.e. every
        // submask of the row index.
        let row = self.row_index();
        let mut c = row;
        loop {
            bits.set(c);
            if c == 0 {
                break;
            }
            c = (c - 1) & row;
        }
        bits
    }

    /// `self ≼ other` in the monomial partial order.
    ///
    /// For equal degrees this is componentwise domination of the sorted
    /// indices. For `deg(self) < deg(other)` it suffices to compare against the
    /// divisor made of the `deg(self)` largest variables of `other`, which
    /// dominates every other divisor of that degree.
    pub fn weak_order_leq(&self, other: &Monomial) -> bool {
        let (dg, dh) = (self.degree(), other.degree());
        if dg > dh {
            return false;
        }
        let g: Vec<usize> = self.vars().collect();
        let h: Vec<usize> = other.vars().collect();
        g.iter().zip(&h[dh - dg..]).all(|(a, b)| a <= b)
    }

    /// `self ≺_o g`: `self` is a one-variable descendant of `g`.
    pub fn is_ovd_of(&self, g: &Monomial) -> bool {
        let lost = g.mask & !self.mask;
        let gained = self.mask & !g.mask;
        match (lost.count_ones(), gained.count_ones()) {
            (1, 0) => true,
            (1, 1) => lost > gained,
            _ => false,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mask == 0 {
            return f.write_str("1");
        }
        for v in self.vars() {
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.row_index())
    }
}

fn check_vars(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::VariableCount(n));
    }
    Ok(())
}

pub(crate) fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// All `f` in `info` (given as row indices) with `f ≺_o g` and `lo < [f] < hi`.
pub fn ovd_descendants(g: &Monomial, lo: usize, hi: usize, info: &[bool]) -> Vec<Monomial> {
    let n = g.n();
    let hi = hi.min(info.len());
    if lo + 1 >= hi {
        return Vec::new();
    }
    ((lo + 1)..hi)
        .filter(|&i| info[i])
        .filter_map(|i| {
            let f = Monomial::from_row_index(i, n).ok()?;
            f.is_ovd_of(g).then_some(f)
        })
        .collect()
}

/// Packed binary vector of length `2^n`, bit `c` = value at column `c`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EvaluationVector {
    len: usize,
    words: Vec<u64>,
}

impl EvaluationVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, c: usize) -> bool {
        self.words[c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, c: usize) {
        self.words[c / 64] |= 1 << (c % 64);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &EvaluationVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: usize, vars: &[usize]) -> Monomial {
        Monomial::new(n, vars.iter().copied()).unwrap()
    }

    /// Row `i` of the explicit Kronecker power of `[[1,0],[1,1]]`.
    fn kron_row(n: usize, i: usize) -> Vec<bool> {
        let mut rows = vec![vec![true]];
        for _ in 0..n {
            let size = rows.len();
            let mut next = vec![vec![false; 2 * size]; 2 * size];
            for r in 0..size {
                for c in 0..size {
                    let v = rows[r][c];
                    next[r][c] = v;
                    next[r + size][c] = v;
                    next[r + size][c + size] = v;
                }
            }
            rows = next;
        }
        rows[i].clone()
    }

    /// Literal reading of the partial order: search every divisor.
    fn leq_by_divisors(g: &Monomial, h: &Monomial) -> bool {
        let dg = g.degree();
        if dg > h.degree() {
            return false;
        }
        let gv: Vec<usize> = g.vars().collect();
        let mut sub = h.mask();
        loop {
            if sub.count_ones() as usize == dg {
                let hv: Vec<usize> = (0..32).filter(|v| sub >> v & 1 == 1).collect();
                if gv.iter().zip(&hv).all(|(a, b)| a <= b) {
                    return true;
                }
            }
            if sub == 0 {
                return false;
            }
            sub = (sub - 1) & h.mask();
        }
    }

    #[test]
    fn row_index_examples() {
        assert_eq!(Monomial::one(5).unwrap().row_index(), 31);
        assert_eq!(m(5, &[0, 1, 2, 3, 4]).row_index(), 0);
        assert_eq!(m(5, &[0, 3, 4]).row_index(), 6);
    }

    #[test]
    fn from_row_index_examples() {
        assert_eq!(
            Monomial::from_row_index(31, 5).unwrap(),
            Monomial::one(5).unwrap()
        );
        assert_eq!(Monomial::from_row_index(0, 5).unwrap(), m(5, &[0, 1, 2, 3, 4]));
        assert_eq!(Monomial::from_row_index(9, 5).unwrap(), m(5, &[1, 2, 4]));
        assert!(Monomial::from_row_index(32, 5).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(Monomial::new(3, [3]).is_err());
        assert!(Monomial::new(31, [0]).is_err());
        assert!(Monomial::new(0, []).is_err());
        assert!(Monomial::from_mask(2, 0b100).is_err());
    }

    #[test]
    fn round_trip_exhaustive() {
        for n in 1..=10 {
            for i in 0..1usize << n {
                let g = Monomial::from_row_index(i, n).unwrap();
                assert_eq!(g.row_index(), i);
                assert_eq!(Monomial::from_row_index(g.row_index(), n).unwrap(), g);
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let one = Monomial::one(4).unwrap().evaluate();
        assert_eq!(one.weight(), 16);
        let top = m(4, &[0, 1, 2, 3]).evaluate();
        assert!(top.get(0));
        assert_eq!(top.weight(), 1);
        let x1 = m(2, &[1]).evaluate();
        let bits: Vec<bool> = (0..4).map(|c| x1.get(c)).collect();
        assert_eq!(bits, vec![true, true, false, false]);
    }

    #[test]
    fn evaluate_matches_kronecker_rows() {
        for n in 1..=8 {
            for i in 0..1usize << n {
                let ev = Monomial::from_row_index(i, n).unwrap().evaluate();
                let row = kron_row(n, i);
                for (c, &b) in row.iter().enumerate() {
                    assert_eq!(ev.get(c), b, "n={n} row={i} col={c}");
                }
            }
        }
    }

    #[test]
    fn evaluate_matches_point_product() {
        for n in 1..=6 {
            for mask in 0..1u32 << n {
                let g = Monomial::from_mask(n, mask).unwrap();
                let ev = g.evaluate();
                assert_eq!(ev.weight(), 1 << (n - g.degree()));
                for c in 0..1usize << n {
                    let val = g.vars().all(|j| (c >> j) & 1 == 0);
                    assert_eq!(ev.get(c), val);
                }
            }
        }
    }

    #[test]
    fn weak_order_examples() {
        let g = m(3, &[0, 2]);
        assert!(g.weak_order_leq(&g));
        assert!(m(3, &[0, 1]).weak_order_leq(&m(3, &[0, 2])));
        assert!(!m(3, &[0, 1, 2]).weak_order_leq(&m(3, &[0, 1])));
        assert!(Monomial::one(3).unwrap().weak_order_leq(&m(3, &[1])));
        assert!(!m(3, &[2]).weak_order_leq(&m(3, &[0, 1])));
    }

    #[test]
    fn weak_order_matches_divisor_search() {
        for n in 1..=6 {
            for a in 0..1u32 << n {
                for b in 0..1u32 << n {
                    let g = Monomial::from_mask(n, a).unwrap();
                    let h = Monomial::from_mask(n, b).unwrap();
                    assert_eq!(g.weak_order_leq(&h), leq_by_divisors(&g, &h), "{g} {h}");
                }
            }
        }
    }

    #[test]
    fn ovd_examples() {
        assert!(m(3, &[0, 1]).is_ovd_of(&m(3, &[0, 2])));
        assert!(m(3, &[0, 2]).is_ovd_of(&m(3, &[0, 1, 2])));
        assert!(!m(3, &[0]).is_ovd_of(&m(3, &[0, 1, 2])));
        assert!(!m(3, &[0, 2]).is_ovd_of(&m(3, &[0, 1])));
        let g = m(3, &[1]);
        assert!(!g.is_ovd_of(&g));
    }

    #[test]
    fn ovd_implies_order_and_later_index() {
        for n in 1..=6 {
            for a in 0..1u32 << n {
                for b in 0..1u32 << n {
                    let f = Monomial::from_mask(n, a).unwrap();
                    let g = Monomial::from_mask(n, b).unwrap();
                    if f.is_ovd_of(&g) {
                        assert!(f.weak_order_leq(&g));
                        assert!(f.row_index() > g.row_index());
                    }
                }
            }
        }
    }

    #[test]
    fn ovd_descendants_in_p32_24() {
        // P(32,24): frozen {0,1,2,3,4,5,8,16}.
        let frozen = [0, 1, 2, 3, 4, 5, 8, 16];
        let info: Vec<bool> = (0..32).map(|i| !frozen.contains(&i)).collect();
        let g = m(5, &[0, 3, 4]);
        let idx: Vec<usize> = ovd_descendants(&g, 6, 16, &info)
            .iter()
            .map(Monomial::row_index)
            .collect();
        assert_eq!(idx, vec![7, 10, 12, 14]);
        let x4 = Monomial::from_row_index(15, 5).unwrap();
        assert!(ovd_descendants(&x4, 15, 16, &info).is_empty());
        assert!(ovd_descendants(&g, 10, 11, &info).is_empty());
        assert!(ovd_descendants(&g, 12, 5, &info).is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(m(5, &[0, 3, 4]).to_string(), "x0x3x4");
        assert_eq!(Monomial::one(5).unwrap().to_string(), "1");
    }
}
