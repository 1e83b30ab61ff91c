//! Representative cosets and multiplicities for the naive, one-variable
//! descendant (ovd), and enhanced two-monomial reductions.
//!
//! Every prefix `u_0..u_τ` with a nonzero mixing-factor part belongs to the
//! class of its leading (lowest) set information bit `g`. Inside that class
//! the ovd descendants `A_g` of `g` before `τ` collapse by a factor
//! `2^{|A_g|}`; the remaining positions `F_g` are enumerated. The enhanced
//! reduction further splits the class by the leading set bit `h2` of `F_g`
//! and, for pairs `(g, h2)` in the feasible region, collapses the
//! descendants of `h2` that carry every variable shared by `g` and `h2`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::code::{CodeProfile, CodeSpec, CosetPrefix};
use crate::error::{Error, Result};
use crate::lta::feasible;

/// Largest mixing factor for which the naive plan is materialized.
pub const NAIVE_MF_CAP: usize = 25;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Ovd,
    Enhanced,
    /// Whole-code brute force; has no coset plan.
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Ovd => "ovd",
            Method::Enhanced => "enhanced",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Method::Naive),
            "ovd" => Ok(Method::Ovd),
            "enhanced" => Ok(Method::Enhanced),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanEntry {
    pub prefix: CosetPrefix,
    /// Multiplicity is `2^mult_exp`.
    pub mult_exp: u32,
    pub leading: Option<usize>,
    pub second: Option<usize>,
    /// Collapsed positions from the leading monomial's descendants.
    pub collapsed_a: Vec<usize>,
    /// Collapsed positions from the second monomial's descendants.
    pub collapsed_k: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PlanCounts {
    pub naive: BigUint,
    pub ovd: BigUint,
    pub enhanced: BigUint,
}

impl PlanCounts {
    pub fn get(&self, method: Method) -> Option<&BigUint> {
        match method {
            Method::Naive => Some(&self.naive),
            Method::Ovd => Some(&self.ovd),
            Method::Enhanced => Some(&self.enhanced),
            Method::Oracle => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionPlan {
    pub method: Method,
    pub entries: Vec<PlanEntry>,
    pub counts: PlanCounts,
}

/// Second-level split of a leading class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SecondClass {
    pub h2: usize,
    pub feasible: bool,
    /// Positions of `F_g` after `h2`.
    pub rest: Vec<usize>,
    /// Collapsed subset of `rest`.
    pub collapsed: Vec<usize>,
}

impl SecondClass {
    pub fn residual(&self) -> Vec<usize> {
        self.rest
            .iter()
            .copied()
            .filter(|i| !self.collapsed.contains(i))
            .collect()
    }
}

/// All prefixes whose leading set information bit is `g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeadingClass {
    pub g: usize,
    /// Ovd descendants of `g` strictly between `[g]` and `τ`.
    pub a: Vec<usize>,
    /// Remaining information positions strictly between `[g]` and `τ`.
    pub f: Vec<usize>,
    pub seconds: Vec<SecondClass>,
}

/// `(A_g, F_g)` for the leading information position `g`.
pub fn leading_sets(code: &CodeSpec, profile: &CodeProfile, g: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if !profile.mf_positions.contains(&g) {
        return Err(Error::Plan(format!("{g} is not a mixing-factor position")));
    }
    let tau = profile.tau.expect("mixing-factor positions imply a frozen row");
    let lead = code.monomial(g);
    let (a, f) = ((g + 1)..tau)
        .filter(|&i| code.is_info(i))
        .partition(|&i| code.monomial(i).is_ovd_of(&lead));
    Ok((a, f))
}

fn second_class(code: &CodeSpec, g: usize, f: &[usize], pos: usize) -> SecondClass {
    let h2 = f[pos];
    let lead = code.monomial(g);
    let second = code.monomial(h2);
    let rest = f[pos + 1..].to_vec();
    let ok = feasible(&lead, &second);
    let collapsed = if ok {
        let common = lead.common(&second);
        rest.iter()
            .copied()
            .filter(|&i| {
                let m = code.monomial(i);
                m.is_ovd_of(&second) && common.divides(&m)
            })
            .collect()
    } else {
        Vec::new()
    };
    SecondClass {
        h2,
        feasible: ok,
        rest,
        collapsed,
    }
}

/// Per-class structure of the ovd and enhanced reductions. The sets are
/// defined for any information set; the collapses they describe are only
/// valid for decreasing codes, which the plan builders enforce.
pub fn class_breakdown(code: &CodeSpec) -> Result<Vec<LeadingClass>> {
    let profile = code.profile();
    profile
        .mf_positions
        .iter()
        .map(|&g| {
            let (a, f) = leading_sets(code, &profile, g)?;
            let seconds = (0..f.len()).map(|p| second_class(code, g, &f, p)).collect();
            Ok(LeadingClass { g, a, f, seconds })
        })
        .collect()
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Exact coset counts for all three methods, without materializing entries.
pub fn count_all(code: &CodeSpec) -> Result<PlanCounts> {
    let classes = class_breakdown(code)?;
    let mut counts = PlanCounts {
        naive: pow2(code.profile().mf()),
        ovd: BigUint::one(),
        enhanced: BigUint::one(),
    };
    for class in &classes {
        counts.ovd += pow2(class.f.len());
        counts.enhanced += BigUint::one();
        for s in &class.seconds {
            counts.enhanced += pow2(s.rest.len() - s.collapsed.len());
        }
    }
    Ok(counts)
}

/// Number of cosets `method` evaluates.
pub fn count_only(code: &CodeSpec, method: Method) -> Result<BigUint> {
    match method {
        Method::Naive => Ok(pow2(code.profile().mf())),
        Method::Ovd => Ok(count_all(code)?.ovd),
        Method::Enhanced => Ok(count_all(code)?.enhanced),
        Method::Oracle => Err(Error::Gate {
            method: "oracle",
            reason: "whole-code enumeration has no coset count".into(),
        }),
    }
}

/// Visits every assignment of `positions` in counter order (bit `j` of the
/// counter drives `positions[j]`).
fn for_each_assignment(base: &CosetPrefix, positions: &[usize], mut visit: impl FnMut(CosetPrefix)) {
    for counter in 0u64..1u64 << positions.len() {
        let mut p = base.clone();
        for (j, &pos) in positions.iter().enumerate() {
            p.set(pos, counter >> j & 1 == 1);
        }
        visit(p);
    }
}

fn zero_entry(profile: &CodeProfile) -> PlanEntry {
    PlanEntry {
        prefix: CosetPrefix::zeros(profile.prefix_len()),
        mult_exp: 0,
        leading: None,
        second: None,
        collapsed_a: Vec::new(),
        collapsed_k: Vec::new(),
    }
}

pub fn plan_naive(code: &CodeSpec) -> Result<ReductionPlan> {
    let profile = code.profile();
    if profile.mf() > NAIVE_MF_CAP {
        return Err(Error::Gate {
            method: "naive",
            reason: format!("mixing factor {} exceeds {NAIVE_MF_CAP}", profile.mf()),
        });
    }
    let mut entries = Vec::with_capacity(1 << profile.mf());
    let base = CosetPrefix::zeros(profile.prefix_len());
    for_each_assignment(&base, &profile.mf_positions, |prefix| {
        let leading = profile.mf_positions.iter().copied().find(|&i| prefix.get(i));
        entries.push(PlanEntry {
            prefix,
            mult_exp: 0,
            leading,
            second: None,
            collapsed_a: Vec::new(),
            collapsed_k: Vec::new(),
        });
    });
    Ok(ReductionPlan {
        method: Method::Naive,
        entries,
        counts: count_all(code)?,
    })
}

fn require_decreasing(code: &CodeSpec) -> Result<()> {
    if code.is_decreasing() {
        Ok(())
    } else {
        Err(Error::NotDecreasing)
    }
}

pub fn plan_ovd(code: &CodeSpec) -> Result<ReductionPlan> {
    require_decreasing(code)?;
    let classes = class_breakdown(code)?;
    let profile = code.profile();
    let mut entries = vec![zero_entry(&profile)];
    for class in &classes {
        let mut base = CosetPrefix::zeros(profile.prefix_len());
        base.set(class.g, true);
        for_each_assignment(&base, &class.f, |prefix| {
            entries.push(PlanEntry {
                prefix,
                mult_exp: class.a.len() as u32,
                leading: Some(class.g),
                second: None,
                collapsed_a: class.a.clone(),
                collapsed_k: Vec::new(),
            });
        });
    }
    Ok(ReductionPlan {
        method: Method::Ovd,
        entries,
        counts: count_all(code)?,
    })
}

pub fn plan_enhanced(code: &CodeSpec) -> Result<ReductionPlan> {
    require_decreasing(code)?;
    let classes = class_breakdown(code)?;
    let profile = code.profile();
    let mut entries = vec![zero_entry(&profile)];
    for class in &classes {
        let mut base = CosetPrefix::zeros(profile.prefix_len());
        base.set(class.g, true);
        entries.push(PlanEntry {
            prefix: base.clone(),
            mult_exp: class.a.len() as u32,
            leading: Some(class.g),
            second: None,
            collapsed_a: class.a.clone(),
            collapsed_k: Vec::new(),
        });
        for s in &class.seconds {
            let mut sub = base.clone();
            sub.set(s.h2, true);
            let mult_exp = (class.a.len() + s.collapsed.len()) as u32;
            for_each_assignment(&sub, &s.residual(), |prefix| {
                entries.push(PlanEntry {
                    prefix,
                    mult_exp,
                    leading: Some(class.g),
                    second: Some(s.h2),
                    collapsed_a: class.a.clone(),
                    collapsed_k: s.collapsed.clone(),
                });
            });
        }
    }
    Ok(ReductionPlan {
        method: Method::Enhanced,
        entries,
        counts: count_all(code)?,
    })
}

pub fn plan(code: &CodeSpec, method: Method) -> Result<ReductionPlan> {
    match method {
        Method::Naive => plan_naive(code),
        Method::Ovd => plan_ovd(code),
        Method::Enhanced => plan_enhanced(code),
        Method::Oracle => Err(Error::Gate {
            method: "oracle",
            reason: "whole-code enumeration has no coset plan".into(),
        }),
    }
}

impl ReductionPlan {
    /// `Σ 2^mult_exp` over entries.
    pub fn total_weight(&self) -> BigUint {
        self.entries.iter().map(|e| pow2(e.mult_exp as usize)).sum()
    }

    /// Checks the structural invariants against `code`: prefixes have length
    /// `τ + 1`, avoid frozen rows and are pairwise distinct, and the
    /// multiplicities partition all `2^MF` prefixes.
    pub fn validate(&self, code: &CodeSpec) -> Result<()> {
        let profile = code.profile();
        let mut seen = HashSet::with_capacity(self.entries.len());
        for e in &self.entries {
            if e.prefix.len() != profile.prefix_len() {
                return Err(Error::Plan(format!(
                    "prefix length {} differs from tau + 1 = {}",
                    e.prefix.len(),
                    profile.prefix_len()
                )));
            }
            if !e.prefix.respects(code) {
                return Err(Error::Plan(format!("prefix {} sets a frozen bit", e.prefix)));
            }
            if e.mult_exp as usize != e.collapsed_a.len() + e.collapsed_k.len() {
                return Err(Error::Plan(format!(
                    "prefix {}: multiplicity exponent {} disagrees with provenance",
                    e.prefix, e.mult_exp
                )));
            }
            if !seen.insert(e.prefix.clone()) {
                return Err(Error::Plan(format!("duplicate prefix {}", e.prefix)));
            }
        }
        let total = self.total_weight();
        if total != pow2(profile.mf()) {
            return Err(Error::Plan(format!(
                "multiplicities sum to {total}, expected 2^{}",
                profile.mf()
            )));
        }
        if let Some(expected) = self.counts.get(self.method) {
            if !expected.is_zero() && *expected != BigUint::from(self.entries.len()) {
                return Err(Error::Plan(format!(
                    "{} entries, count says {expected}",
                    self.entries.len()
                )));
            }
        }
        Ok(())
    }
}
