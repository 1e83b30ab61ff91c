//! Empirical checks of the group-action lemmas behind the reductions and of
//! the equal-weight-distribution claims they support.
//!
//! Lemma checks enumerate `LTA(n,2)^{h1}_{h2}` (or sample it above a cap)
//! and test coefficient identities end to end on the expanded images.
//! Weight-distribution checks compare collapsed-bit patterns against the
//! plan representative by brute force.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::CodeSpec;
use crate::enumerator::{
    generator_rows, sweep_affine_span, CosetEnumerator, WeightEnumerator, DEFAULT_BRUTE_CAP,
};
use crate::error::{Error, Result};
use crate::lta::{feasible, pair_context, subgroup_spec, AffineTransform, PairContext, Side, SubgroupSpec};
use crate::monomial::{EvaluationVector, Monomial};
use crate::planner::{class_breakdown, LeadingClass};

/// Default subgroup enumeration cap.
pub const DEFAULT_GROUP_CAP: u64 = 1 << 14;

/// Counterexamples kept per report; the count covers all of them.
const KEPT_VIOLATIONS: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    ActionOnH1,
    ActionOnH2,
    ActionOnO2,
    ActionOnNeither,
    WUnique,
    SubcodeInvariance,
    WdLeading,
    WdPair,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LemmaId::ActionOnH1 => "action_on_h1",
            LemmaId::ActionOnH2 => "action_on_h2",
            LemmaId::ActionOnO2 => "action_on_o2",
            LemmaId::ActionOnNeither => "action_on_neither",
            LemmaId::WUnique => "w_unique",
            LemmaId::SubcodeInvariance => "subcode_invariance",
            LemmaId::WdLeading => "wd_leading",
            LemmaId::WdPair => "wd_pair",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    /// `(h1, h2)` for pair lemmas, the leading monomial for class checks.
    pub subject: String,
    pub elements_tested: u64,
    /// Seed used when the group or pattern space was sampled.
    pub sampled_seed: Option<u64>,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

impl LemmaReport {
    fn new(lemma: LemmaId, subject: String) -> Self {
        Self {
            lemma,
            subject,
            elements_tested: 0,
            sampled_seed: None,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn violate(&mut self, msg: impl FnOnce() -> String) {
        self.violation_count += 1;
        if self.violations.len() < KEPT_VIOLATIONS {
            self.violations.push(msg());
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub group_cap: u64,
    pub samples: usize,
    pub seed: u64,
    /// Largest number of free generator rows swept by brute force; larger
    /// unions fall back to summing recursive coset enumerators.
    pub brute_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            group_cap: DEFAULT_GROUP_CAP,
            samples: 50,
            seed: 0x5eed,
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

/// Subgroup elements to test: all of them within `cap`, otherwise `cap`
/// seeded random samples. Returns `(assignment, element)` pairs.
fn elements(spec: &SubgroupSpec, cap: u64, seed: u64) -> (Vec<(u64, AffineTransform)>, Option<u64>) {
    let bits = spec.len();
    if bits < 64 && (1u64 << bits) <= cap {
        let all = (0..1u64 << bits).map(|a| (a, spec.element(a))).collect();
        return (all, None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let sample = (0..cap)
        .map(|_| {
            let a = rng.gen::<u64>() & mask;
            (a, spec.element(a))
        })
        .collect();
    (sample, Some(seed))
}

fn pair_name(ctx: &PairContext) -> String {
    format!("({}, {})", ctx.h1(), ctx.h2())
}

/// Coefficients that must be constant among elements sharing the same
/// h2-side assignment.
struct Grouped {
    seen: HashMap<(u64, Monomial, Monomial), bool>,
}

impl Grouped {
    fn new() -> Self {
        Self { seen: HashMap::new() }
    }

    /// Returns false when `value` contradicts an earlier element of the group.
    fn record(&mut self, key: u64, source: Monomial, target: Monomial, value: bool) -> bool {
        *self.seen.entry((key, source, target)).or_insert(value) == value
    }
}

/// `W` as seen by the tested elements; exact when the subgroup was
/// enumerated exhaustively.
fn w_among(ctx: &PairContext, elems: &[(u64, AffineTransform)]) -> Vec<Monomial> {
    let targets = ctx.h1_free();
    ctx.neither()
        .into_iter()
        .filter(|g| {
            elems.iter().any(|(_, t)| {
                let image = act(t, g);
                targets.iter().any(|p| image.coefficient(p))
            })
        })
        .collect()
}

fn act(t: &AffineTransform, f: &Monomial) -> crate::boolean_poly::BooleanPolynomial {
    t.act_on_monomial(f).expect("monomials share n with the group")
}

/// Coefficient identities of the subgroup action on `h1`, `h2`, the
/// descendants of `h2`, the monomials in neither O-set, and `W`.
pub fn verify_action_lemmas(ctx: &PairContext, cap: u64, seed: u64) -> Result<Vec<LemmaReport>> {
    let spec = subgroup_spec(ctx)?;
    let name = pair_name(ctx);
    let (elems, sampled) = elements(&spec, cap, seed);
    let (h1, h2) = (ctx.h1(), ctx.h2());
    let h1_free = ctx.h1_free();
    let h2_free = ctx.h2_free();
    let h1_excluded = ctx.h1_excluded();
    let h2_excluded = ctx.h2_excluded();
    let shared = ctx.shared();
    let neither = ctx.neither();
    let slot_of = |f: &Monomial| spec.slots().iter().position(|s| s.source == *f);
    let h2_mask = spec.side_mask(Side::H2);

    let mut r1 = LemmaReport::new(LemmaId::ActionOnH1, name.clone());
    let mut r2 = LemmaReport::new(LemmaId::ActionOnH2, name.clone());
    let mut r3 = LemmaReport::new(LemmaId::ActionOnO2, name.clone());
    let mut r4 = LemmaReport::new(LemmaId::ActionOnNeither, name.clone());
    let mut r5 = LemmaReport::new(LemmaId::WUnique, name);

    let w = w_among(ctx, &elems);
    if w.len() > 1 {
        let names: Vec<String> = w.iter().map(Monomial::to_string).collect();
        r5.violate(|| format!("|W| = {}: {{{}}}", w.len(), names.join(", ")));
    }

    let mut groups2 = Grouped::new();
    let mut groups4 = Grouped::new();
    for (a, t) in &elems {
        let key = a & h2_mask;
        let tag = || format!("element {a:#b}");

        let p1 = act(t, &h1);
        for f in &h1_free {
            let expected = a >> slot_of(f).expect("h1-side slot") & 1 == 1;
            if p1.coefficient(f) != expected {
                r1.violate(|| format!("{}: <T·h1>_{f} != its parameter", tag()));
            }
        }
        for f in shared
            .iter()
            .chain(&h1_excluded)
            .chain(std::iter::once(&h2))
            .chain(&h2_free)
        {
            if p1.coefficient(f) {
                r1.violate(|| format!("{}: <T·h1>_{f} = 1", tag()));
            }
        }

        let p2 = act(t, &h2);
        for f in &h2_free {
            let expected = a >> slot_of(f).expect("h2-side slot") & 1 == 1;
            if p2.coefficient(f) != expected {
                r2.violate(|| format!("{}: <T·h2>_{f} != its parameter", tag()));
            }
        }
        for f in h1_excluded.iter().chain(&h2_excluded).chain(&shared) {
            if p2.coefficient(f) {
                r2.violate(|| format!("{}: <T·h2>_{f} = 1", tag()));
            }
        }
        for f in &h1_free {
            if !groups2.record(key, h2, *f, p2.coefficient(f)) {
                r2.violate(|| format!("{}: <T·h2>_{f} depends on h1-side parameters", tag()));
            }
        }

        for f in ctx.o_h2() {
            let p = act(t, f);
            for q in ctx.o_h2().iter().filter(|q| *q != f) {
                if p.coefficient(q) {
                    r3.violate(|| format!("{}: <T·{f}>_{q} = 1", tag()));
                }
            }
        }
        for f in &h2_excluded {
            let p = act(t, f);
            for q in h1_free.iter().chain(&h1_excluded) {
                if p.coefficient(q) {
                    r3.violate(|| format!("{}: <T·{f}>_{q} = 1", tag()));
                }
            }
            for g in &w {
                if p.coefficient(g) {
                    r5.violate(|| format!("{}: <T·{f}>_{g} = 1 for g in W", tag()));
                }
            }
        }

        for f in &neither {
            let p = act(t, f);
            for q in shared.iter().chain(&h2_free).chain(&h1_excluded) {
                if p.coefficient(q) {
                    r4.violate(|| format!("{}: <T·{f}>_{q} = 1", tag()));
                }
            }
            for q in &h1_free {
                if !groups4.record(key, *f, *q, p.coefficient(q)) {
                    r4.violate(|| format!("{}: <T·{f}>_{q} depends on h1-side parameters", tag()));
                }
            }
            if !w.contains(f) {
                for g in &w {
                    if p.coefficient(g) {
                        r5.violate(|| format!("{}: <T·{f}>_{g} = 1 for g in W", tag()));
                    }
                }
            }
        }

        for g in &w {
            if p1.coefficient(g) || p2.coefficient(g) {
                r5.violate(|| format!("{}: T·h1 or T·h2 reaches {g} in W", tag()));
            }
        }
    }

    let tested = elems.len() as u64;
    let mut out = vec![r1, r2, r3, r4, r5];
    for r in &mut out {
        r.elements_tested = tested;
        r.sampled_seed = sampled;
    }
    Ok(out)
}

/// Row-reduced basis over F2 for membership tests.
struct Span {
    basis: Vec<(usize, EvaluationVector)>,
}

impl Span {
    fn new(vectors: impl IntoIterator<Item = EvaluationVector>) -> Self {
        let mut span = Span { basis: Vec::new() };
        for v in vectors {
            let r = span.reduce(v);
            if let Some(pivot) = leading_bit(&r) {
                span.basis.push((pivot, r));
            }
        }
        span
    }

    fn reduce(&self, mut v: EvaluationVector) -> EvaluationVector {
        for (pivot, b) in &self.basis {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        v
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    fn contains(&self, v: EvaluationVector) -> bool {
        leading_bit(&self.reduce(v)).is_none()
    }
}

fn leading_bit(v: &EvaluationVector) -> Option<usize> {
    v.words()
        .iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// The subcode spanned by `B \ W` is mapped into itself by every element.
pub fn verify_subcode_invariance(ctx: &PairContext, cap: u64, seed: u64) -> Result<LemmaReport> {
    let spec = subgroup_spec(ctx)?;
    let (elems, sampled) = elements(&spec, cap, seed);
    // With |W| > 1 (reported by the W lemma) all candidates are removed.
    let w = w_among(ctx, &elems);
    let gens: Vec<Monomial> = ctx.b_set().into_iter().filter(|g| !w.contains(g)).collect();
    let span = Span::new(gens.iter().map(Monomial::evaluate));
    let mut report = LemmaReport::new(LemmaId::SubcodeInvariance, pair_name(ctx));
    if span.rank() != gens.len() {
        report.violate(|| format!("generators of B \\ W have rank {} < {}", span.rank(), gens.len()));
    }
    for (a, t) in &elems {
        for g in &gens {
            if !span.contains(act(t, g).evaluate()) {
                report.violate(|| format!("element {a:#b}: T·{g} leaves the subcode"));
            }
        }
    }
    report.elements_tested = elems.len() as u64;
    report.sampled_seed = sampled;
    Ok(report)
}

/// Whether weight distributions are compared per coset of the prefix or for
/// the union over the residual (non-collapsed) prefix bits.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Union,
    Coset,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WdLevel {
    /// Collapse of the descendants of one leading monomial.
    Leading,
    /// Collapse of the private descendants of a monomial pair.
    Pair,
}

/// Weight distribution of `{Σ_{i∈ones} ev(i) + span(free rows ∪ tail)}`.
struct UnionWd<'a> {
    code: &'a CodeSpec,
    rows: Vec<Vec<u64>>,
    tail: Vec<usize>,
    brute_cap: usize,
    enumerator: CosetEnumerator,
}

impl<'a> UnionWd<'a> {
    fn new(code: &'a CodeSpec, brute_cap: usize) -> Self {
        Self {
            code,
            rows: generator_rows(code.n()),
            tail: code.profile().tail_positions,
            brute_cap,
            enumerator: CosetEnumerator::new(),
        }
    }

    fn compute(&mut self, ones: &[usize], free_prefix: &[usize]) -> WeightEnumerator {
        let len = self.code.len();
        let free = free_prefix.len() + self.tail.len();
        if free <= self.brute_cap {
            let mut base = vec![0u64; len.div_ceil(64)];
            for &i in ones {
                for (a, b) in base.iter_mut().zip(&self.rows[i]) {
                    *a ^= b;
                }
            }
            let free_rows: Vec<&[u64]> = free_prefix
                .iter()
                .chain(&self.tail)
                .map(|&i| self.rows[i].as_slice())
                .collect();
            return sweep_affine_span(len, &base, &free_rows);
        }
        // Too many free rows: sum recursive coset enumerators over the prefix bits.
        let prefix_len = self.code.profile().prefix_len();
        let mut acc = WeightEnumerator::zero(len);
        for counter in 0u64..1 << free_prefix.len() {
            let mut prefix = vec![false; prefix_len];
            for &i in ones {
                prefix[i] = true;
            }
            for (j, &i) in free_prefix.iter().enumerate() {
                prefix[i] ^= counter >> j & 1 == 1;
            }
            let coset = self
                .enumerator
                .enumerate(&prefix, self.code.n())
                .expect("prefix fits");
            acc += &coset;
        }
        acc
    }
}

/// Patterns over `bits` positions: every pattern when there are at most
/// `samples` of them, otherwise `samples` seeded random ones.
fn patterns(bits: usize, samples: usize, rng: &mut ChaCha8Rng) -> (Vec<u64>, bool) {
    if bits < 63 && (1u64 << bits) <= samples as u64 {
        ((0..1u64 << bits).collect(), false)
    } else {
        let mask = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
        ((0..samples).map(|_| rng.gen::<u64>() & mask).collect(), true)
    }
}

struct WdCase {
    lemma: LemmaId,
    subject: String,
    /// Bits set in every coset.
    base: Vec<usize>,
    /// Collapsed positions whose pattern varies.
    collapsed: Vec<usize>,
    /// Positions enumerated inside the compared set.
    residual: Vec<usize>,
}

fn wd_cases(code: &CodeSpec, classes: &[LeadingClass], level: WdLevel) -> Result<Vec<WdCase>> {
    let mut out = Vec::new();
    let tau = code.profile().tau;
    for class in classes {
        let g = code.monomial(class.g);
        match level {
            WdLevel::Leading => out.push(WdCase {
                lemma: LemmaId::WdLeading,
                subject: g.to_string(),
                base: vec![class.g],
                collapsed: class.a.clone(),
                residual: class.f.clone(),
            }),
            WdLevel::Pair => {
                let tau = tau.expect("classes imply a frozen row");
                for s in class.seconds.iter().filter(|s| s.feasible) {
                    let h2 = code.monomial(s.h2);
                    let ctx = pair_context(g, h2, code.info_mask(), tau)?;
                    let mut collapsed: Vec<usize> = ctx
                        .h1_free()
                        .iter()
                        .chain(&ctx.h2_free())
                        .map(Monomial::row_index)
                        .collect();
                    collapsed.sort_unstable();
                    out.push(WdCase {
                        lemma: LemmaId::WdPair,
                        subject: pair_name(&ctx),
                        base: vec![class.g, s.h2],
                        collapsed,
                        residual: s.residual(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Compares brute-force weight distributions of collapsed-bit patterns with
/// the all-zero representative, one report per class (or per pair at the
/// two-monomial level). Requires a decreasing code with `n ≤ 6`.
pub fn verify_wd_equality(
    code: &CodeSpec,
    level: WdLevel,
    granularity: Granularity,
    opts: &VerifyOptions,
) -> Result<Vec<LemmaReport>> {
    if code.n() > 6 {
        return Err(Error::Gate {
            method: "verify",
            reason: format!("weight-distribution checks need n <= 6, got {}", code.n()),
        });
    }
    if !code.is_decreasing() {
        return Err(Error::NotDecreasing);
    }
    let classes = class_breakdown(code)?;
    let cases = wd_cases(code, &classes, level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut union = UnionWd::new(code, opts.brute_cap);
    let mut reports = Vec::with_capacity(cases.len());
    for case in cases {
        let mut report = LemmaReport::new(case.lemma, case.subject.clone());
        let (pats, sampled) = patterns(case.collapsed.len(), opts.samples, &mut rng);
        if sampled {
            report.sampled_seed = Some(opts.seed);
        }
        // Per-coset mode pins the residual bits to one random assignment
        // per pattern and compares against the representative with the
        // same residual bits.
        for pat in pats {
            let mut ones = case.base.clone();
            let mut rep = case.base.clone();
            for (j, &i) in case.collapsed.iter().enumerate() {
                if pat >> j & 1 == 1 {
                    ones.push(i);
                }
            }
            let (lhs, rhs) = match granularity {
                Granularity::Union => (
                    union.compute(&ones, &case.residual),
                    union.compute(&rep, &case.residual),
                ),
                Granularity::Coset => {
                    for &i in &case.residual {
                        if rng.gen::<bool>() {
                            ones.push(i);
                            rep.push(i);
                        }
                    }
                    (union.compute(&ones, &[]), union.compute(&rep, &[]))
                }
            };
            report.elements_tested += 1;
            if lhs != rhs {
                let bits: Vec<String> = case
                    .collapsed
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| pat >> j & 1 == 1)
                    .map(|(_, &i)| code.monomial(i).to_string())
                    .collect();
                report.violate(|| format!("pattern {{{}}} changes the weight distribution", bits.join(", ")));
            }
        }
        reports.push(report);
    }
    Ok(reports)
}

/// Pairs `(g, h2)` the enhanced planner collapses: every leading `g` and
/// every feasible `h2 ∈ F_g`.
pub fn eligible_pairs(code: &CodeSpec) -> Result<Vec<PairContext>> {
    let Some(tau) = code.profile().tau else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for class in class_breakdown(code)? {
        let g = code.monomial(class.g);
        for s in &class.seconds {
            let h2 = code.monomial(s.h2);
            if feasible(&g, &h2) {
                out.push(pair_context(g, h2, code.info_mask(), tau)?);
            }
        }
    }
    Ok(out)
}

/// Every lemma check over every eligible pair of `code`, plus the
/// weight-distribution checks at both levels when `n ≤ 5`.
pub fn verify_code(code: &CodeSpec, opts: &VerifyOptions) -> Result<Vec<LemmaReport>> {
    if !code.is_decreasing() {
        return Err(Error::NotDecreasing);
    }
    let pairs = eligible_pairs(code)?;
    let per_pair: Vec<Result<Vec<LemmaReport>>> = pairs
        .par_iter()
        .map(|ctx| {
            let mut r = verify_action_lemmas(ctx, opts.group_cap, opts.seed)?;
            r.push(verify_subcode_invariance(ctx, opts.group_cap, opts.seed)?);
            Ok(r)
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_pair {
        reports.extend(r?);
    }
    if code.n() <= 5 {
        for level in [WdLevel::Leading, WdLevel::Pair] {
            reports.extend(verify_wd_equality(code, level, Granularity::Union, opts)?);
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ReliabilitySequence;

    fn nr(len: usize, k: usize) -> CodeSpec {
        CodeSpec::construct_5g(len, k, &ReliabilitySequence::nr()).unwrap()
    }

    fn m(n: usize, vars: &[usize]) -> Monomial {
        Monomial::new(n, vars.iter().copied()).unwrap()
    }

    fn worked_pair() -> PairContext {
        let code = nr(32, 24);
        pair_context(m(5, &[0, 3, 4]), m(5, &[1, 2, 4]), code.info_mask(), 16).unwrap()
    }

    #[test]
    fn worked_pair_expansion() {
        let ctx = worked_pair();
        let spec = subgroup_spec(&ctx).unwrap();
        // All three parameters on: b_1, b_2 from h2 and b_3 from h1.
        let t = spec.element(0b111);
        let sum = act(&t, &ctx.h1()).to_string() + " | " + &act(&t, &ctx.h2()).to_string();
        assert!(sum.contains("x0x4"), "{sum}");
        assert!(sum.contains("x2x4") && sum.contains("x1x4"), "{sum}");
        for r in verify_action_lemmas(&ctx, DEFAULT_GROUP_CAP, 1).unwrap() {
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.elements_tested, 8);
        }
        assert!(verify_subcode_invariance(&ctx, DEFAULT_GROUP_CAP, 1)
            .unwrap()
            .passed());
    }

    #[test]
    fn sampled_mode_records_seed() {
        let ctx = worked_pair();
        let r = verify_action_lemmas(&ctx, 4, 99).unwrap();
        assert!(r
            .iter()
            .all(|r| r.sampled_seed == Some(99) && r.elements_tested == 4 && r.passed()));
    }

    #[test]
    fn span_membership() {
        let a = m(3, &[0]).evaluate();
        let b = m(3, &[1]).evaluate();
        let span = Span::new([a.clone(), b.clone(), a.clone()]);
        assert_eq!(span.rank(), 2);
        let mut ab = a.clone();
        ab.xor_assign(&b);
        assert!(span.contains(ab));
        assert!(!span.contains(m(3, &[2]).evaluate()));
    }

    #[test]
    fn subcode_check_catches_a_missing_generator() {
        let ctx = worked_pair();
        let gens: Vec<Monomial> = ctx.b_set();
        assert!(gens.contains(&m(5, &[4])));
        let span = Span::new(gens.iter().filter(|g| **g != m(5, &[4])).map(Monomial::evaluate));
        assert!(!span.contains(m(5, &[4]).evaluate()));
    }

    #[test]
    fn wd_worked_example() {
        let code = nr(32, 24);
        let opts = VerifyOptions::default();
        let t1 = verify_wd_equality(&code, WdLevel::Leading, Granularity::Union, &opts).unwrap();
        let lead = t1.iter().find(|r| r.subject == "x0x3x4").unwrap();
        assert!(lead.passed());
        assert_eq!(lead.elements_tested, 16);
        let t3 = verify_wd_equality(&code, WdLevel::Pair, Granularity::Union, &opts).unwrap();
        let pair = t3.iter().find(|r| r.subject == "(x0x3x4, x1x2x4)").unwrap();
        // b_1, b_2 on the h2 side and b_3 on the h1 side.
        assert_eq!(pair.elements_tested, 8);
        assert!(t3.iter().all(LemmaReport::passed));
    }

    #[test]
    fn wd_gates() {
        assert!(matches!(
            verify_wd_equality(
                &nr(128, 32),
                WdLevel::Leading,
                Granularity::Union,
                &VerifyOptions::default()
            ),
            Err(Error::Gate { .. })
        ));
        assert!(matches!(
            verify_wd_equality(
                &nr(32, 8),
                WdLevel::Leading,
                Granularity::Union,
                &VerifyOptions::default()
            ),
            Err(Error::NotDecreasing)
        ));
    }

    #[test]
    fn single_cosets_are_stricter_than_the_claim() {
        // Individual cosets of one class can differ even though the unions
        // over the residual bits agree.
        let code = nr(32, 13);
        let opts = VerifyOptions::default();
        let by_coset = verify_wd_equality(&code, WdLevel::Leading, Granularity::Coset, &opts).unwrap();
        assert!(by_coset.iter().any(|r| r.subject == "x1x4" && !r.passed()));
        let by_union = verify_wd_equality(&code, WdLevel::Leading, Granularity::Union, &opts).unwrap();
        assert!(by_union.iter().all(LemmaReport::passed));
    }

    #[test]
    fn union_wd_paths_agree() {
        let code = nr(32, 20);
        let class = &class_breakdown(&code).unwrap()[0];
        let mut brute = UnionWd::new(&code, 32);
        let mut recursive = UnionWd::new(&code, 0);
        let ones = vec![class.g];
        assert_eq!(brute.compute(&ones, &class.f), recursive.compute(&ones, &class.f));
    }
}
