//! Lower-triangular affine transformations and the two-monomial subgroups
//! used by the enhanced coset collapse.

use std::fmt;

use serde::Serialize;

use crate::boolean_poly::BooleanPolynomial;
use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// `x ↦ A x + b` with `A` lower unitriangular over F2.
///
/// Row `i` of `A` is stored as a mask whose bit `j` is `a_{i,j}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineTransform {
    n: usize,
    rows: Vec<u32>,
    b: u32,
}

impl AffineTransform {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| 1u32 << i).collect(),
            b: 0,
        }
    }

    pub fn new(rows: Vec<u32>, b: u32) -> Result<Self> {
        let n = rows.len();
        for (i, &r) in rows.iter().enumerate() {
            let allowed = ((1u64 << (i + 1)) - 1) as u32;
            if r >> i & 1 != 1 || r & !allowed != 0 {
                return Err(Error::NotUnitriangular(i));
            }
        }
        if n < 32 && b >> n != 0 {
            return Err(Error::VariableOutOfRange {
                var: 31 - b.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self { n, rows, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn b(&self, i: usize) -> bool {
        self.b >> i & 1 == 1
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn translation(&self) -> u32 {
        self.b
    }

    /// `A u + b` with `u` packed as a bit mask (bit `i` = `u_i`).
    pub fn act_on_point(&self, u: u32) -> u32 {
        let mut out = 0u32;
        for (i, &r) in self.rows.iter().enumerate() {
            let bit = (r & u).count_ones() & 1;
            out |= bit << i;
        }
        out ^ self.b
    }

    /// `self ∘ first`, i.e. apply `first` then `self`.
    pub fn compose(&self, first: &AffineTransform) -> AffineTransform {
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                // row i of A2·A1 = Σ_k a2_{i,k} · row k of A1
                let mut acc = 0u32;
                let mut rest = r;
                while rest != 0 {
                    let k = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    acc ^= first.rows[k];
                }
                acc
            })
            .collect();
        AffineTransform {
            n: self.n,
            rows,
            b: self.act_on_point(first.b),
        }
    }

    /// Substitutes `x_i ← Σ_{j<i} a_{i,j} x_j + x_i + b_i` into `g` and expands.
    pub fn act_on_monomial(&self, g: &Monomial) -> Result<BooleanPolynomial> {
        if g.n() != self.n {
            return Err(Error::VariableMismatch(self.n, g.n()));
        }
        let mut p = BooleanPolynomial::zero(self.n);
        p.toggle(0);
        for i in g.vars() {
            p = p.mul_affine_form(self.rows[i], self.b(i));
        }
        Ok(p)
    }

    pub fn act_on_polynomial(&self, poly: &BooleanPolynomial) -> Result<BooleanPolynomial> {
        let mut out = BooleanPolynomial::zero(self.n);
        for t in poly.terms() {
            for q in self.act_on_monomial(&t)?.terms() {
                out.toggle(q.mask());
            }
        }
        Ok(out)
    }
}

/// `⟨P⟩_f`.
pub fn coefficient(poly: &BooleanPolynomial, f: &Monomial) -> bool {
    poly.coefficient(f)
}

/// Pairs with at most two private variables on each side.
pub fn feasible(h1: &Monomial, h2: &Monomial) -> bool {
    h1.without(h2).degree() <= 2 && h2.without(h1).degree() <= 2
}

/// The O-sets, their complements and the exclusion set `D` for a pair
/// `[h1] < [h2] < τ`. All sets are restricted to information positions and
/// sorted by row index.
#[derive(Clone, Debug)]
pub struct PairContext {
    h1: Monomial,
    h2: Monomial,
    tau: usize,
    info: Vec<bool>,
    o_h1: Vec<Monomial>,
    o_h2: Vec<Monomial>,
    o_h1_comp: Vec<Monomial>,
    o_h2_comp: Vec<Monomial>,
    d: Vec<Monomial>,
}

impl PairContext {
    pub fn h1(&self) -> Monomial {
        self.h1
    }
    pub fn h2(&self) -> Monomial {
        self.h2
    }
    pub fn tau(&self) -> usize {
        self.tau
    }
    pub fn info(&self) -> &[bool] {
        &self.info
    }
    pub fn o_h1(&self) -> &[Monomial] {
        &self.o_h1
    }
    pub fn o_h2(&self) -> &[Monomial] {
        &self.o_h2
    }
    pub fn o_h1_comp(&self) -> &[Monomial] {
        &self.o_h1_comp
    }
    pub fn o_h2_comp(&self) -> &[Monomial] {
        &self.o_h2_comp
    }
    pub fn d(&self) -> &[Monomial] {
        &self.d
    }

    fn in_d(&self, f: &Monomial) -> bool {
        self.d.contains(f)
    }

    /// `O_h1 \ O_h2 \ D`
    pub fn h1_free(&self) -> Vec<Monomial> {
        self.o_h1
            .iter()
            .filter(|f| !self.o_h2.contains(f) && !self.in_d(f))
            .copied()
            .collect()
    }

    /// `O_h2 \ O_h1 \ D`
    pub fn h2_free(&self) -> Vec<Monomial> {
        self.o_h2
            .iter()
            .filter(|f| !self.o_h1.contains(f) && !self.in_d(f))
            .copied()
            .collect()
    }

    /// `(O_h1 \ O_h2) ∩ D`
    pub fn h1_excluded(&self) -> Vec<Monomial> {
        self.o_h1
            .iter()
            .filter(|f| !self.o_h2.contains(f) && self.in_d(f))
            .copied()
            .collect()
    }

    /// `(O_h2 \ O_h1) ∩ D`
    pub fn h2_excluded(&self) -> Vec<Monomial> {
        self.o_h2
            .iter()
            .filter(|f| !self.o_h1.contains(f) && self.in_d(f))
            .copied()
            .collect()
    }

    /// `O_h1 ∩ O_h2`
    pub fn shared(&self) -> Vec<Monomial> {
        self.o_h1
            .iter()
            .filter(|f| self.o_h2.contains(f))
            .copied()
            .collect()
    }

    /// `O_h1ᶜ ∩ O_h2ᶜ`
    pub fn neither(&self) -> Vec<Monomial> {
        self.o_h1_comp
            .iter()
            .filter(|f| self.o_h2_comp.contains(f))
            .copied()
            .collect()
    }

    /// Information positions after `τ`.
    pub fn tail(&self) -> Vec<Monomial> {
        let n = self.h1.n();
        ((self.tau + 1)..self.info.len())
            .filter(|&i| self.info[i])
            .map(|i| Monomial::from_row_index(i, n).expect("in range"))
            .collect()
    }

    /// `B = ((O_h2 \ O_h1) ∩ D) ∪ (O_h1ᶜ ∩ O_h2ᶜ) ∪ tail`.
    pub fn b_set(&self) -> Vec<Monomial> {
        let mut b = self.h2_excluded();
        b.extend(self.neither());
        b.extend(self.tail());
        b.sort_by_key(Monomial::row_index);
        b
    }
}

/// Builds the O-sets and `D` for `h1`, `h2` within `info` (indexed by row).
pub fn pair_context(h1: Monomial, h2: Monomial, info: &[bool], tau: usize) -> Result<PairContext> {
    if h1.n() != h2.n() {
        return Err(Error::VariableMismatch(h1.n(), h2.n()));
    }
    let n = h1.n();
    if info.len() != 1 << n {
        return Err(Error::PairPrecondition(format!(
            "information mask has length {}, expected {}",
            info.len(),
            1usize << n
        )));
    }
    let (i1, i2) = (h1.row_index(), h2.row_index());
    if !(i1 < i2 && i2 < tau && tau < info.len()) {
        return Err(Error::PairPrecondition(format!(
            "need [h1] < [h2] < tau, got {i1}, {i2}, {tau}"
        )));
    }
    if h2.is_ovd_of(&h1) {
        return Err(Error::PairPrecondition(format!("{h2} is an ovd of {h1}")));
    }

    let common = h1.common(&h2);
    let window = |i: usize| i > i2 && i < tau && info[i];
    let monomial = |i: usize| Monomial::from_row_index(i, n).expect("in range");

    let o_h1: Vec<Monomial> = (0..tau)
        .filter(|&i| window(i))
        .map(monomial)
        .filter(|f| f.is_ovd_of(&h1))
        .collect();
    let o_h2: Vec<Monomial> = (0..tau)
        .filter(|&i| info[i])
        .map(monomial)
        .filter(|f| f.is_ovd_of(&h2))
        .collect();
    let o_h1_comp = (0..tau)
        .filter(|&i| window(i))
        .map(monomial)
        .filter(|f| !o_h1.contains(f))
        .collect();
    let o_h2_comp = (0..tau)
        .filter(|&i| window(i))
        .map(monomial)
        .filter(|f| !o_h2.contains(f))
        .collect();
    let mut d: Vec<Monomial> = o_h1
        .iter()
        .chain(&o_h2)
        .filter(|f| !common.divides(f))
        .copied()
        .collect();
    d.sort_by_key(Monomial::row_index);
    d.dedup();

    Ok(PairContext {
        h1,
        h2,
        tau,
        info: info.to_vec(),
        o_h1,
        o_h2,
        o_h1_comp,
        o_h2_comp,
        d,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Slot {
    /// `a_{row,col}` with `col < row`.
    Matrix { row: usize, col: usize },
    /// `b_r`.
    Vector(usize),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Matrix { row, col } => write!(f, "a_{{{row},{col}}}"),
            Slot::Vector(r) => write!(f, "b_{r}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Side {
    H1,
    H2,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FreeSlot {
    pub slot: Slot,
    /// The descendant `f` whose coefficient this slot controls.
    pub source: Monomial,
    pub side: Side,
}

/// Free entries of `LTA(n,2)^{h1}_{h2}`; every other entry is fixed to the
/// identity.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    n: usize,
    slots: Vec<FreeSlot>,
}

impl SubgroupSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[FreeSlot] {
        &self.slots
    }

    pub fn matrix_slots(&self) -> Vec<(usize, usize)> {
        self.slots
            .iter()
            .filter_map(|s| match s.slot {
                Slot::Matrix { row, col } => Some((row, col)),
                Slot::Vector(_) => None,
            })
            .collect()
    }

    pub fn vector_slots(&self) -> Vec<usize> {
        self.slots
            .iter()
            .filter_map(|s| match s.slot {
                Slot::Vector(r) => Some(r),
                Slot::Matrix { .. } => None,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Element whose slot `k` takes bit `k` of `assignment`.
    pub fn element(&self, assignment: u64) -> AffineTransform {
        let mut t = AffineTransform::identity(self.n);
        for (k, s) in self.slots.iter().enumerate() {
            if assignment >> k & 1 == 1 {
                match s.slot {
                    Slot::Matrix { row, col } => t.rows[row] |= 1 << col,
                    Slot::Vector(r) => t.b |= 1 << r,
                }
            }
        }
        t
    }

    /// Mask of the slot positions belonging to `side` within an assignment.
    pub fn side_mask(&self, side: Side) -> u64 {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.side == side)
            .fold(0, |m, (k, _)| m | 1 << k)
    }

    /// Every element, in increasing assignment order.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<AffineTransform>> {
        let bits = self.slots.len();
        if bits >= 64 || (1u64 << bits) > cap {
            return Err(Error::CapExceeded { bits, cap });
        }
        Ok((0..1u64 << bits).map(|a| self.element(a)).collect())
    }
}

fn slot_for(h: &Monomial, f: &Monomial) -> Slot {
    let lost = h.without(f);
    let gained = f.without(h);
    let s = lost.mask().trailing_zeros() as usize;
    if gained.degree() == 0 {
        Slot::Vector(s)
    } else {
        Slot::Matrix {
            row: s,
            col: gained.mask().trailing_zeros() as usize,
        }
    }
}

/// Free slots of `LTA(n,2)^{h1}_{h2}` for a feasible pair.
pub fn subgroup_spec(ctx: &PairContext) -> Result<SubgroupSpec> {
    if !feasible(&ctx.h1, &ctx.h2) {
        return Err(Error::PairPrecondition(format!(
            "({}, {}) is outside the feasible region",
            ctx.h1, ctx.h2
        )));
    }
    let mut slots: Vec<FreeSlot> = Vec::new();
    let sides = [
        (Side::H1, ctx.h1, ctx.h1_free()),
        (Side::H2, ctx.h2, ctx.h2_free()),
    ];
    for (side, h, members) in sides {
        for f in members {
            let slot = slot_for(&h, &f);
            if let Some(prev) = slots.iter().find(|s| s.slot == slot) {
                return Err(Error::SlotCollision {
                    slot: slot.to_string(),
                    first: prev.source.to_string(),
                    second: f.to_string(),
                });
            }
            slots.push(FreeSlot {
                slot,
                source: f,
                side,
            });
        }
    }
    Ok(SubgroupSpec { n: ctx.h1.n(), slots })
}

/// Members `g` of `O_h1ᶜ ∩ O_h2ᶜ` that some subgroup element maps onto a
/// descendant in `O_h1 \ O_h2 \ D`, without the size bound.
pub fn w_candidates(ctx: &PairContext, spec: &SubgroupSpec, cap: u64) -> Result<Vec<Monomial>> {
    let targets = ctx.h1_free();
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    let elements = spec.enumerate(cap)?;
    Ok(ctx
        .neither()
        .into_iter()
        .filter(|g| {
            elements.iter().any(|t| {
                let image = t.act_on_monomial(g).expect("same n");
                targets.iter().any(|p| image.coefficient(p))
            })
        })
        .collect())
}

/// The set `W`; at most one member is expected for feasible pairs and more
/// is reported as an error.
pub fn compute_w(ctx: &PairContext, spec: &SubgroupSpec, cap: u64) -> Result<Vec<Monomial>> {
    let w = w_candidates(ctx, spec, cap)?;
    if w.len() > 1 {
        return Err(Error::WTooLarge {
            h1: ctx.h1.to_string(),
            h2: ctx.h2.to_string(),
            size: w.len(),
        });
    }
    Ok(w)
}
