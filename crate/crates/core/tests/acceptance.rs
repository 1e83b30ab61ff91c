//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use polar_spectrum::code::{CodeSpec, ReliabilitySequence};
use polar_spectrum::enumerator::{
    enumerate_bruteforce_with, generator_rows, CosetEnumerator, WeightEnumerator,
};
use polar_spectrum::io::log2;
use polar_spectrum::monomial::Monomial;
use polar_spectrum::planner::{class_breakdown, count_all, plan, Method, ReductionPlan};
use polar_spectrum::spectrum::{compute_from_plan, oracle_spectrum, sanity_check, SpectrumOptions};
use polar_spectrum::verifier::{
    eligible_pairs, verify_action_lemmas, verify_subcode_invariance, verify_wd_equality, Granularity,
    VerifyOptions, WdLevel, DEFAULT_GROUP_CAP,
};
use polar_spectrum::Error;

const SEED: u64 = 0x5eed;

fn nr(len: usize, k: usize) -> CodeSpec {
    CodeSpec::construct_5g(len, k, &ReliabilitySequence::nr()).unwrap()
}

/// Plans and spectra produced while checking criteria 1-5, audited by 7 and 9.
#[derive(Default)]
struct Audit {
    plans: usize,
    plan_failures: Vec<String>,
    spectra: usize,
    sanity_failures: Vec<String>,
}

impl Audit {
    fn plan(&mut self, label: &str, code: &CodeSpec, p: &ReductionPlan) {
        self.plans += 1;
        let mf = code.profile().mf();
        if p.total_weight() != BigUint::one() << mf {
            self.plan_failures
                .push(format!("{label} {}: weight != 2^{mf}", p.method));
        } else if let Err(e) = p.validate(code) {
            self.plan_failures.push(format!("{label} {}: {e}", p.method));
        }
    }

    fn spectrum(&mut self, label: &str, code: &CodeSpec, w: &WeightEnumerator) {
        self.spectra += 1;
        for v in sanity_check(code, w) {
            self.sanity_failures.push(format!("{label}: {v}"));
        }
    }

    fn planned_spectrum(
        &mut self,
        label: &str,
        code: &CodeSpec,
        method: Method,
    ) -> Result<WeightEnumerator, String> {
        let p = plan(code, method).map_err(|e| format!("{label} {method}: {e}"))?;
        self.plan(label, code, &p);
        let r =
            compute_from_plan(code, &p, &SpectrumOptions::default()).map_err(|e| format!("{label}: {e}"))?;
        self.spectrum(&format!("{label} {method}"), code, &r.spectrum);
        Ok(r.spectrum)
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worked_example(audit: &mut Audit) -> Outcome {
    let start = Instant::now();
    let code = nr(32, 24);
    let ovd = plan(&code, Method::Ovd).map_err(|e| e.to_string())?;
    let enhanced = plan(&code, Method::Enhanced).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    audit.plan("P(32,24)", &code, &ovd);
    audit.plan("P(32,24)", &code, &enhanced);

    let x034 = Monomial::new(5, [0, 3, 4]).unwrap().row_index();
    let x124 = Monomial::new(5, [1, 2, 4]).unwrap().row_index();
    let x4 = Monomial::new(5, [4]).unwrap();
    let in_class = |p: &ReductionPlan| p.entries.iter().filter(|e| e.leading == Some(x034)).count();
    ensure(ovd.entries.len() == 40, || {
        format!("ovd has {} entries", ovd.entries.len())
    })?;
    ensure(enhanced.entries.len() == 24, || {
        format!("enhanced has {} entries", enhanced.entries.len())
    })?;
    ensure(in_class(&ovd) == 16, || {
        format!("ovd class x0x3x4 has {}", in_class(&ovd))
    })?;
    ensure(in_class(&enhanced) == 6, || {
        format!("enhanced class x0x3x4 has {}", in_class(&enhanced))
    })?;

    let classes = class_breakdown(&code).map_err(|e| e.to_string())?;
    let sub = classes
        .iter()
        .find(|c| c.g == x034)
        .and_then(|c| c.seconds.iter().find(|s| s.h2 == x124))
        .ok_or("no x1x2x4 subclass")?;
    let residual: Vec<Monomial> = sub.residual().into_iter().map(|i| code.monomial(i)).collect();
    ensure(sub.collapsed.len() == 2 && residual == [x4], || {
        format!(
            "subclass collapses {} bits, residual {residual:?}",
            sub.collapsed.len()
        )
    })?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;

    let w = audit.planned_spectrum("P(32,24)", &code, Method::Enhanced)?;
    let oracle = oracle_spectrum(&code, 0).map_err(|e| e.to_string())?;
    ensure(w == oracle, || "enhanced spectrum differs from oracle".into())?;
    Ok(format!(
        "40 -> 24 cosets, class x0x3x4 16 -> 6, planned in {elapsed:.2?}"
    ))
}

/// `(K, MF, N_ovd, N_enhanced)`; counts are log2 values unless `exact`.
struct Row {
    k: usize,
    mf: usize,
    ovd: f64,
    enhanced: f64,
    exact: Option<(u64, u64)>,
}

const fn exact(k: usize, mf: usize, ovd: u64, enhanced: u64) -> Row {
    Row {
        k,
        mf,
        ovd: 0.0,
        enhanced: 0.0,
        exact: Some((ovd, enhanced)),
    }
}

const fn approx(k: usize, mf: usize, ovd: f64, enhanced: f64) -> Row {
    Row {
        k,
        mf,
        ovd,
        enhanced,
        exact: None,
    }
}

const TABLE_128: [Row; 13] = [
    exact(21, 14, 1446, 235),
    exact(32, 17, 5292, 464),
    exact(35, 20, 21336, 3118),
    approx(41, 26, 19.38, 17.26),
    approx(50, 27, 20.54, 19.78),
    approx(57, 30, 23.02, 20.75),
    approx(64, 34, 25.23, 22.51),
    approx(69, 38, 27.05, 23.86),
    approx(73, 42, 30.22, 27.79),
    approx(82, 51, 38.42, 37.41),
    approx(90, 43, 33.76, 32.81),
    approx(98, 39, 30.00, 28.11),
    approx(107, 45, 34.25, 31.53),
];

const TABLE_256: [Row; 10] = [
    approx(44, 29, 23.35, 17.88),
    approx(64, 37, 29.48, 28.62),
    approx(85, 54, 44.67, 42.19),
    approx(107, 76, 62.72, 59.08),
    approx(126, 79, 64.74, 61.83),
    approx(157, 95, 79.25, 78.02),
    approx(172, 109, 92.63, 89.99),
    approx(179, 116, 99.36, 95.58),
    approx(185, 122, 104.77, 100.28),
    approx(192, 129, 111.16, 107.73),
];

fn count_table(len: usize, rows: &[Row]) -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    for row in rows {
        let code = nr(len, row.k);
        let label = format!("P({len},{})", row.k);
        let mf = code.profile().mf();
        ensure(mf == row.mf, || format!("{label}: MF {mf}, expected {}", row.mf))?;
        let c = count_all(&code).map_err(|e| format!("{label}: {e}"))?;
        ensure(c.naive == BigUint::one() << mf, || {
            format!("{label}: naive count {}", c.naive)
        })?;
        match row.exact {
            Some((ovd, enhanced)) => ensure(c.ovd == ovd.into() && c.enhanced == enhanced.into(), || {
                format!("{label}: {}/{} expected {ovd}/{enhanced}", c.ovd, c.enhanced)
            })?,
            None => {
                let (o, e) = (log2(&c.ovd), log2(&c.enhanced));
                let dev = (o - row.ovd).abs().max((e - row.enhanced).abs());
                worst = worst.max(dev);
                ensure(dev <= 0.02, || {
                    format!(
                        "{label}: log2 {o:.2}/{e:.2} expected {:.2}/{:.2}",
                        row.ovd, row.enhanced
                    )
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} rows, worst log2 deviation {worst:.3}, {elapsed:.2?}",
        rows.len()
    ))
}

fn table3(audit: &mut Audit) -> Outcome {
    const EXPECTED: [(usize, u64); 10] = [
        (0, 1),
        (16, 152),
        (24, 384),
        (32, 40540),
        (40, 824192),
        (48, 33530152),
        (52, 88080384),
        (56, 579218176),
        (60, 616562688),
        (64, 1658453958),
    ];
    let code = nr(128, 32);
    let p = plan(&code, Method::Enhanced).map_err(|e| e.to_string())?;
    audit.plan("P(128,32)", &code, &p);
    let r = compute_from_plan(&code, &p, &SpectrumOptions { workers: 1 }).map_err(|e| e.to_string())?;
    audit.spectrum("P(128,32) enhanced", &code, &r.spectrum);
    let mut listed = 0;
    for (d, a) in EXPECTED {
        for d in [d, 128 - d] {
            ensure(*r.spectrum.coeff(d) == BigUint::from(a), || {
                format!("A_{d} = {}, expected {a}", r.spectrum.coeff(d))
            })?;
        }
        listed += if d == 64 { 1 } else { 2 };
    }
    let support = r.spectrum.nonzero().count();
    ensure(support == listed, || {
        format!("{support} nonzero weights, expected {listed}")
    })?;
    Ok(format!(
        "{listed} (d, A_d) pairs exact, {} cosets, single worker {:.2?}",
        r.cosets_computed, r.elapsed
    ))
}

/// Downward closure under the monomial order of a few random monomials.
fn random_decreasing(n: usize, rng: &mut ChaCha8Rng) -> CodeSpec {
    let len = 1usize << n;
    let all: Vec<Monomial> = (0..len)
        .map(|i| Monomial::from_row_index(i, n).unwrap())
        .collect();
    loop {
        let tops: Vec<&Monomial> = (0..rng.gen_range(1..=3))
            .map(|_| &all[rng.gen_range(0..len)])
            .collect();
        let info: Vec<usize> = all
            .iter()
            .filter(|m| tops.iter().any(|t| m.weak_order_leq(t)))
            .map(Monomial::row_index)
            .collect();
        if info.len() <= 26 {
            let code = CodeSpec::from_info_set(len, &info).unwrap();
            assert!(code.is_decreasing());
            return code;
        }
    }
}

fn agreement(label: &str, code: &CodeSpec, audit: &mut Audit) -> Result<bool, String> {
    let oracle = oracle_spectrum(code, 0).map_err(|e| format!("{label}: {e}"))?;
    audit.spectrum(&format!("{label} oracle"), code, &oracle);
    let naive = audit.planned_spectrum(label, code, Method::Naive)?;
    ensure(naive == oracle, || format!("{label}: naive differs from oracle"))?;
    if !code.is_decreasing() {
        for m in [Method::Ovd, Method::Enhanced] {
            ensure(matches!(plan(code, m), Err(Error::NotDecreasing)), || {
                format!("{label}: {m} accepted a non-decreasing code")
            })?;
        }
        return Ok(false);
    }
    for m in [Method::Ovd, Method::Enhanced] {
        let w = audit.planned_spectrum(label, code, m)?;
        ensure(w == oracle, || format!("{label}: {m} differs from oracle"))?;
    }
    Ok(true)
}

fn oracle_equivalence(audit: &mut Audit) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut full, mut refused, mut random) = (0, Vec::new(), 0);
    for n in 3..=5 {
        let len = 1usize << n;
        for k in 1..=len.min(26) {
            let label = format!("P({len},{k})");
            if agreement(&label, &nr(len, k), audit)? {
                full += 1;
            } else {
                refused.push(label);
            }
        }
        for i in 0..20 {
            let code = random_decreasing(n, &mut rng);
            agreement(&format!("random N={len} #{i} K={}", code.k()), &code, audit)?;
            random += 1;
        }
    }
    Ok(format!(
        "{full} 5G codes and {random} random decreasing codes agree on all four methods; \
         naive == oracle and reduced methods refuse for non-decreasing {}",
        refused.join(" ")
    ))
}

fn enumerator_cross_check() -> Outcome {
    const MAX_FREE: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut calls = 0;
    for n in 1..=6 {
        let len = 1usize << n;
        let rows = generator_rows(n);
        let mut enumerator = CosetEnumerator::new();
        for _ in 0..100 {
            let prefix_len = rng.gen_range(len.saturating_sub(MAX_FREE)..=len);
            let prefix: Vec<bool> = (0..prefix_len).map(|_| rng.gen()).collect();
            let fast = enumerator.enumerate(&prefix, n).map_err(|e| e.to_string())?;
            let slow = enumerate_bruteforce_with(&prefix, &rows, MAX_FREE).map_err(|e| e.to_string())?;
            let mass = BigUint::one() << (len - prefix_len);
            ensure(fast == slow, || {
                format!("N={len} prefix {prefix:?}: recursive != brute force")
            })?;
            ensure(fast.mass() == mass, || {
                format!("N={len} prefix {prefix:?}: mass {}", fast.mass())
            })?;
            calls += 1;
        }
    }
    Ok(format!(
        "{calls} random prefixes over N = 2..64 (at most {MAX_FREE} free bits), mass exact"
    ))
}

fn lemma_suite() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = false;
    for n in 4..=6 {
        let len = 1usize << n;
        let codes: Vec<CodeSpec> = (1..len)
            .map(|k| nr(len, k))
            .filter(CodeSpec::is_decreasing)
            .collect();
        let mut contexts = Vec::new();
        for code in &codes {
            contexts.extend(eligible_pairs(code).map_err(|e| e.to_string())?);
        }
        let reports = contexts
            .par_iter()
            .map(|ctx| {
                let mut r = verify_action_lemmas(ctx, DEFAULT_GROUP_CAP, SEED)?;
                r.push(verify_subcode_invariance(ctx, DEFAULT_GROUP_CAP, SEED)?);
                Ok(r)
            })
            .collect::<Result<Vec<_>, Error>>()
            .map_err(|e| e.to_string())?;
        let reports: Vec<_> = reports.into_iter().flatten().collect();
        let sampled = reports.iter().filter(|r| r.sampled_seed.is_some()).count();
        let mut by_lemma: Vec<(String, u64)> = Vec::new();
        for r in reports.iter().filter(|r| !r.passed()) {
            let name = r.lemma.to_string();
            match by_lemma.iter_mut().find(|(l, _)| *l == name) {
                Some((_, c)) => *c += r.violation_count,
                None => by_lemma.push((name, r.violation_count)),
            }
        }
        let bad_pairs: std::collections::BTreeSet<&str> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.subject.as_str())
            .collect();
        let mut line = format!("n={n}: {} pairs, {sampled} sampled groups", contexts.len());
        if by_lemma.is_empty() {
            line.push_str(", 0 violations");
        } else {
            failed = true;
            let summary: Vec<String> = by_lemma.iter().map(|(l, c)| format!("{l} {c}")).collect();
            line.push_str(&format!(
                ", violations at {} pairs: {}",
                bad_pairs.len(),
                summary.join(", ")
            ));
        }

        if n <= 5 {
            let opts = VerifyOptions::default();
            let mut classes = 0;
            let mut violations = 0;
            for code in &codes {
                for level in [WdLevel::Leading, WdLevel::Pair] {
                    let r = verify_wd_equality(code, level, Granularity::Union, &opts)
                        .map_err(|e| e.to_string())?;
                    classes += r.len();
                    violations += r.iter().map(|r| r.violation_count).sum::<u64>();
                }
            }
            failed |= violations > 0;
            line.push_str(&format!(
                "; WD union checks {classes} classes, {violations} violations"
            ));
        }
        lines.push(line);
    }
    let detail = lines.join("; ");
    if failed {
        Err(detail)
    } else {
        Ok(detail)
    }
}

type Results = Vec<(u8, Outcome)>;

fn run(results: &mut Results, id: u8, name: &str, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = f();
    let (status, detail) = match &outcome {
        Ok(s) => ("PASS", s),
        Err(s) => ("FAIL", s),
    };
    println!(
        "criterion {id} {status}: {name} [{:.1?}] {detail}",
        start.elapsed()
    );
    results.push((id, outcome));
}

fn main() -> ExitCode {
    let mut audit = Audit::default();
    let mut results = Results::new();

    run(&mut results, 1, "worked example P(32,24)", || {
        worked_example(&mut audit)
    });
    run(&mut results, 2, "N=128 coset counts", || {
        count_table(128, &TABLE_128)
    });
    run(&mut results, 3, "N=256 coset counts", || {
        count_table(256, &TABLE_256)
    });
    run(&mut results, 4, "P(128,32) weight distribution", || {
        table3(&mut audit)
    });
    run(&mut results, 5, "method and oracle agreement", || {
        oracle_equivalence(&mut audit)
    });
    run(
        &mut results,
        6,
        "recursive vs brute-force cosets",
        enumerator_cross_check,
    );
    run(&mut results, 7, "plan partition", || {
        let (plans, failures) = (audit.plans, &audit.plan_failures);
        if failures.is_empty() {
            Ok(format!("{plans} plans sum to 2^MF and validate"))
        } else {
            Err(format!(
                "{} of {plans} plans: {}",
                failures.len(),
                failures.join("; ")
            ))
        }
    });
    run(&mut results, 8, "lemma suite n = 4..6", lemma_suite);
    run(&mut results, 9, "spectrum sanity", || {
        let (spectra, failures) = (audit.spectra, &audit.sanity_failures);
        if failures.is_empty() {
            Ok(format!("{spectra} spectra pass"))
        } else {
            Err(format!(
                "{} violations over {spectra} spectra: {}",
                failures.len(),
                failures.join("; ")
            ))
        }
    });

    let failed: Vec<String> = results
        .iter()
        .filter(|r| r.1.is_err())
        .map(|r| r.0.to_string())
        .collect();
    println!(
        "{} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
