//! Complete weight distributions from coset plans, plus the whole-code
//! brute-force path and coding-theory sanity guards.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::code::CodeSpec;
use crate::enumerator::{generator_rows, sweep_affine_span, CosetEnumerator, WeightEnumerator};
use crate::error::{Error, Result};
use crate::planner::{self, Method, PlanEntry, ReductionPlan};

/// Largest dimension the whole-code oracle accepts.
pub const ORACLE_K_CAP: usize = 26;

#[derive(Clone, Copy, Debug, Default)]
pub struct SpectrumOptions {
    /// Worker threads; `0` uses the global rayon pool.
    pub workers: usize,
}

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub code: CodeSpec,
    pub method: Method,
    pub tau: Option<usize>,
    pub mf: usize,
    pub spectrum: WeightEnumerator,
    /// Coset enumerators evaluated; zero for the oracle.
    pub cosets_computed: u64,
    pub elapsed: Duration,
}

fn with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Plan(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

fn weighted_sum(code: &CodeSpec, entries: &[PlanEntry], workers: usize) -> Result<WeightEnumerator> {
    let n = code.n();
    let len = code.len();
    let threads = if workers == 0 {
        rayon::current_num_threads()
    } else {
        workers
    };
    let chunk = entries.len().div_ceil(threads * 4).max(1);
    with_workers(workers, || {
        entries
            .par_chunks(chunk)
            .map(|part| {
                let mut enumerator = CosetEnumerator::new();
                let mut acc = WeightEnumerator::zero(len);
                for e in part {
                    let coset = enumerator.enumerate(e.prefix.bits(), n)?;
                    acc.add_scaled_pow2(&coset, e.mult_exp);
                }
                Ok(acc)
            })
            .try_reduce(
                || WeightEnumerator::zero(len),
                |mut a, b| {
                    a += &b;
                    Ok(a)
                },
            )
    })?
}

/// Evaluates an existing plan (built here or read back from disk).
pub fn compute_from_plan(
    code: &CodeSpec,
    plan: &ReductionPlan,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult> {
    let start = Instant::now();
    plan.validate(code)?;
    let spectrum = weighted_sum(code, &plan.entries, opts.workers)?;
    let profile = code.profile();
    Ok(SpectrumResult {
        code: code.clone(),
        method: plan.method,
        tau: profile.tau,
        mf: profile.mf(),
        spectrum,
        cosets_computed: plan.entries.len() as u64,
        elapsed: start.elapsed(),
    })
}

/// Weight distribution of the whole code by iterating all `2^K` messages.
pub fn oracle_spectrum(code: &CodeSpec, workers: usize) -> Result<WeightEnumerator> {
    let k = code.k();
    if k > ORACLE_K_CAP {
        return Err(Error::Gate {
            method: "oracle",
            reason: format!("dimension {k} exceeds {ORACLE_K_CAP}"),
        });
    }
    let len = code.len();
    let all = generator_rows(code.n());
    let rows: Vec<&[u64]> = code
        .info_indices()
        .into_iter()
        .map(|i| all[i].as_slice())
        .collect();
    // Split on the first few rows so the sweep parallelizes.
    let split = k.min(6);
    let (outer, inner) = rows.split_at(split);
    let words = len.div_ceil(64);
    with_workers(workers, || {
        (0u64..1 << split)
            .into_par_iter()
            .map(|pattern| {
                let mut base = vec![0u64; words];
                for (j, row) in outer.iter().enumerate() {
                    if pattern >> j & 1 == 1 {
                        for (a, b) in base.iter_mut().zip(row.iter()) {
                            *a ^= b;
                        }
                    }
                }
                sweep_affine_span(len, &base, inner)
            })
            .reduce(
                || WeightEnumerator::zero(len),
                |mut a, b| {
                    a += &b;
                    a
                },
            )
    })
}

/// Complete weight distribution of `code` using `method`.
pub fn compute_spectrum(code: &CodeSpec, method: Method, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    if method == Method::Oracle {
        let start = Instant::now();
        let spectrum = oracle_spectrum(code, opts.workers)?;
        let profile = code.profile();
        return Ok(SpectrumResult {
            code: code.clone(),
            method,
            tau: profile.tau,
            mf: profile.mf(),
            spectrum,
            cosets_computed: 0,
            elapsed: start.elapsed(),
        });
    }
    let plan = planner::plan(code, method)?;
    compute_from_plan(code, &plan, opts)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SanityViolation {
    WrongLength { found: usize, expected: usize },
    ZeroWeight(BigUint),
    Mass { found: BigUint, k: usize },
    Asymmetric { d: usize },
    MinWeight { found: Option<usize>, expected: usize },
}

impl fmt::Display for SanityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SanityViolation::WrongLength { found, expected } => {
                write!(f, "distribution has length {found}, expected {expected}")
            }
            SanityViolation::ZeroWeight(a0) => write!(f, "A_0 = {a0}, expected 1"),
            SanityViolation::Mass { found, k } => write!(f, "coefficients sum to {found}, expected 2^{k}"),
            SanityViolation::Asymmetric { d } => write!(f, "A_{d} differs from its mirror coefficient"),
            SanityViolation::MinWeight { found, expected } => match found {
                Some(d) => write!(f, "minimum nonzero weight {d}, expected {expected}"),
                None => write!(f, "no nonzero weight, expected minimum {expected}"),
            },
        }
    }
}

/// Standard identities every complete distribution of `code` must satisfy.
/// The minimum-distance identity `2^{n-r}` is checked for decreasing codes
/// only, where it is a theorem.
pub fn sanity_check(code: &CodeSpec, spectrum: &WeightEnumerator) -> Vec<SanityViolation> {
    let len = code.len();
    let mut out = Vec::new();
    if spectrum.len() != len {
        out.push(SanityViolation::WrongLength {
            found: spectrum.len(),
            expected: len,
        });
        return out;
    }
    if !spectrum.coeff(0).is_one() {
        out.push(SanityViolation::ZeroWeight(spectrum.coeff(0).clone()));
    }
    let mass = spectrum.mass();
    if mass != BigUint::one() << code.k() {
        out.push(SanityViolation::Mass {
            found: mass,
            k: code.k(),
        });
    }
    if code.is_info(len - 1) {
        if let Some(d) = (0..=len).find(|&d| spectrum.coeff(d) != spectrum.coeff(len - d)) {
            out.push(SanityViolation::Asymmetric { d });
        }
    }
    if let (Some(r), true) = (code.max_degree(), code.is_decreasing()) {
        let expected = 1usize << (code.n() - r);
        let found = (1..=len).find(|&d| !spectrum.coeff(d).is_zero());
        if found != Some(expected) {
            out.push(SanityViolation::MinWeight { found, expected });
        }
    }
    out
}
