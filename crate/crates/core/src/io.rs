//! JSON and CSV forms of spectra, plans and verification reports.
//!
//! Counts are written as decimal strings so no reader loses precision.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::code::{CodeSpec, CosetPrefix};
use crate::enumerator::WeightEnumerator;
use crate::error::{Error, Result};
use crate::planner::{Method, PlanCounts, PlanEntry, ReductionPlan};
use crate::spectrum::SpectrumResult;
use crate::verifier::LemmaReport;

/// `log2(x)` for display; exact for powers of two.
pub fn log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = u64::try_from(x >> shift).expect("at most 64 bits after shift");
    (top as f64).log2() + shift as f64
}

/// Nonzero coefficients in increasing weight, as `{"d": "A_d"}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectrumMap(pub Vec<(usize, BigUint)>);

impl SpectrumMap {
    pub fn from_enumerator(w: &WeightEnumerator) -> Self {
        Self(w.nonzero().map(|(d, c)| (d, c.clone())).collect())
    }

    pub fn to_enumerator(&self, len: usize) -> Result<WeightEnumerator> {
        let mut coeffs = vec![BigUint::zero(); len + 1];
        for (d, c) in &self.0 {
            let slot = coeffs
                .get_mut(*d)
                .ok_or_else(|| Error::Plan(format!("weight {d} exceeds block length {len}")))?;
            *slot = c.clone();
        }
        Ok(WeightEnumerator::from_coeffs(coeffs))
    }
}

impl Serialize for SpectrumMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (d, c) in &self.0 {
            map.serialize_entry(&d.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SpectrumMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut out: Vec<(usize, BigUint)> = raw
            .into_iter()
            .map(|(d, c)| {
                let d = d
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad weight {d:?}")))?;
                let c = c
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad count {c:?}")))?;
                Ok((d, c))
            })
            .collect::<std::result::Result<_, D::Error>>()?;
        out.sort_by_key(|(d, _)| *d);
        Ok(Self(out))
    }
}

/// Serialized [`SpectrumResult`]; `n` is the block length.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpectrumDoc {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub tau: Option<usize>,
    pub mf: usize,
    pub cosets_computed: u64,
    pub spectrum: SpectrumMap,
}

impl From<&SpectrumResult> for SpectrumDoc {
    fn from(r: &SpectrumResult) -> Self {
        Self {
            n: r.code.len(),
            k: r.code.k(),
            method: r.method,
            tau: r.tau,
            mf: r.mf,
            cosets_computed: r.cosets_computed,
            spectrum: SpectrumMap::from_enumerator(&r.spectrum),
        }
    }
}

pub fn spectrum_json(r: &SpectrumResult) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SpectrumDoc::from(r))?)
}

/// `d,count` rows for every nonzero coefficient.
pub fn spectrum_csv(w: &WeightEnumerator) -> String {
    let mut out = String::from("d,count\n");
    for (d, c) in w.nonzero() {
        out.push_str(&format!("{d},{c}\n"));
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CountsDoc {
    pub naive: String,
    pub ovd: String,
    pub enhanced: String,
}

impl From<&PlanCounts> for CountsDoc {
    fn from(c: &PlanCounts) -> Self {
        Self {
            naive: c.naive.to_string(),
            ovd: c.ovd.to_string(),
            enhanced: c.enhanced.to_string(),
        }
    }
}

impl CountsDoc {
    fn parse(&self) -> Result<PlanCounts> {
        let p = |s: &str| {
            s.parse::<BigUint>()
                .map_err(|_| Error::Plan(format!("bad count {s:?}")))
        };
        Ok(PlanCounts {
            naive: p(&self.naive)?,
            ovd: p(&self.ovd)?,
            enhanced: p(&self.enhanced)?,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EntryDoc {
    /// Bits of positions `0..=τ`.
    pub prefix: String,
    pub mult_exp: u32,
    pub leading: Option<usize>,
    pub second: Option<usize>,
    pub collapsed_a: Vec<usize>,
    pub collapsed_k: Vec<usize>,
}

/// A self-contained plan: the information set travels with the entries so
/// the plan can be evaluated without rebuilding the code.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PlanDoc {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub tau: Option<usize>,
    pub mf: usize,
    pub info: Vec<usize>,
    pub counts: CountsDoc,
    pub entries: Vec<EntryDoc>,
}

impl PlanDoc {
    pub fn new(code: &CodeSpec, plan: &ReductionPlan) -> Self {
        let profile = code.profile();
        Self {
            n: code.len(),
            k: code.k(),
            method: plan.method,
            tau: profile.tau,
            mf: profile.mf(),
            info: code.info_indices(),
            counts: CountsDoc::from(&plan.counts),
            entries: plan
                .entries
                .iter()
                .map(|e| EntryDoc {
                    prefix: e.prefix.to_string(),
                    mult_exp: e.mult_exp,
                    leading: e.leading,
                    second: e.second,
                    collapsed_a: e.collapsed_a.clone(),
                    collapsed_k: e.collapsed_k.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the code and plan, checking the plan's invariants.
    pub fn into_plan(self) -> Result<(CodeSpec, ReductionPlan)> {
        let code = CodeSpec::from_info_set(self.n, &self.info)?;
        if code.k() != self.k {
            return Err(Error::Plan(format!(
                "k = {} but {} information indices",
                self.k,
                code.k()
            )));
        }
        let entries = self
            .entries
            .into_iter()
            .map(|e| {
                Ok(PlanEntry {
                    prefix: CosetPrefix::parse(&e.prefix)?,
                    mult_exp: e.mult_exp,
                    leading: e.leading,
                    second: e.second,
                    collapsed_a: e.collapsed_a,
                    collapsed_k: e.collapsed_k,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let plan = ReductionPlan {
            method: self.method,
            entries,
            counts: self.counts.parse()?,
        };
        plan.validate(&code)?;
        Ok((code, plan))
    }
}

pub fn plan_json(code: &CodeSpec, plan: &ReductionPlan) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PlanDoc::new(code, plan))?)
}

pub fn read_plan_json(text: &str) -> Result<(CodeSpec, ReductionPlan)> {
    serde_json::from_str::<PlanDoc>(text)?.into_plan()
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc<'a> {
    pub n: usize,
    pub k: usize,
    pub passed: bool,
    pub violation_count: u64,
    pub reports: &'a [LemmaReport],
}

pub fn report_json(code: &CodeSpec, reports: &[LemmaReport]) -> Result<String> {
    let doc = ReportDoc {
        n: code.len(),
        k: code.k(),
        passed: reports.iter().all(LemmaReport::passed),
        violation_count: reports.iter().map(|r| r.violation_count).sum(),
        reports,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}
