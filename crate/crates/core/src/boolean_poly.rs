//! Multilinear polynomials over F2 in `n` idempotent variables.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::{EvaluationVector, Monomial};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanPolynomial {
    n: usize,
    terms: BTreeSet<u32>,
}

impl BooleanPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms
            .iter()
            .map(move |&mask| Monomial::from_mask(self.n, mask).expect("valid term"))
    }

    /// Coefficient of `f`, i.e. `⟨P⟩_f`.
    pub fn coefficient(&self, f: &Monomial) -> bool {
        self.terms.contains(&f.mask())
    }

    /// Adds `f` over F2 (toggles its presence).
    pub fn add_term(&mut self, f: &Monomial) -> Result<()> {
        if f.n() != self.n {
            return Err(Error::VariableMismatch(self.n, f.n()));
        }
        self.toggle(f.mask());
        Ok(())
    }

    pub(crate) fn toggle(&mut self, mask: u32) {
        if !self.terms.remove(&mask) {
            self.terms.insert(mask);
        }
    }

    /// Multiplies by the affine form `Σ_{v ∈ vars} x_v + constant`.
    pub(crate) fn mul_affine_form(&self, vars: u32, constant: bool) -> Self {
        let mut out = Self::zero(self.n);
        for &t in &self.terms {
            if constant {
                out.toggle(t);
            }
            let mut rest = vars;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                out.toggle(t | 1 << v);
            }
        }
        out
    }

    pub fn evaluate(&self) -> EvaluationVector {
        let mut ev = EvaluationVector::zeros(1 << self.n);
        for t in self.terms() {
            ev.xor_assign(&t.evaluate());
        }
        ev
    }
}

impl From<Monomial> for BooleanPolynomial {
    fn from(g: Monomial) -> Self {
        let mut p = Self::zero(g.n());
        p.toggle(g.mask());
        p
    }
}

impl fmt::Display for BooleanPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for BooleanPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
