//! Named batch checks over a range of `d`.
//!
//! Each suite decides one verdict per square-free `d`. Failures carry the
//! field's full output record. Checks that only need to know whether `κ`
//! exceeds a threshold count reduced forms up to that threshold only.

use std::fmt;

use caliber_core::arith::{square_free_block, Discriminant, FieldSpec};
use caliber_core::classify::{caliber_one_shape, caliber_two_shape, fixtures, special_family};
use caliber_core::forms::{count_reduced_with, decompose, enumerate_reduced_with};
use caliber_core::ideals::{ideal_count, rho, rho_by_formula_with, rho_prime_power};
use caliber_core::scan::{build_record, ScanContext, SPLIT_PRIME_CUTOFF};
use caliber_core::theorems::{sandwich_sums_with, split_exponent, split_prime_below_sqrt_d};
use rayon::prelude::*;

use crate::output::OutputRecord;
use crate::runner::{blocks, check_range, pool};
use crate::RunError;

/// `ρ(nm) = ρ(n)ρ(m)` is checked for coprime `n, m ≤ MULT_GRID`.
pub const MULT_GRID: i64 = 32;
/// Prime powers, the formula, and the convolution identity are checked up to this norm.
pub const NORM_LIMIT: i64 = MULT_GRID * MULT_GRID;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Sandwich,
    Lowerbound,
    Pow2,
    Multiplicativity,
    Convolution,
    Kappa1Shape,
    Kappa2Shape,
    CorollarySplitprime,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Sandwich,
        Suite::Lowerbound,
        Suite::Pow2,
        Suite::Multiplicativity,
        Suite::Convolution,
        Suite::Kappa1Shape,
        Suite::Kappa2Shape,
        Suite::CorollarySplitprime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sandwich => "sandwich",
            Suite::Lowerbound => "lowerbound",
            Suite::Pow2 => "pow2",
            Suite::Multiplicativity => "multiplicativity",
            Suite::Convolution => "convolution",
            Suite::Kappa1Shape => "kappa1-shape",
            Suite::Kappa2Shape => "kappa2-shape",
            Suite::CorollarySplitprime => "corollary-splitprime",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail(String),
    Vacuous,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteFailure {
    pub d: i64,
    pub detail: String,
    pub record: OutputRecord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub lo: i64,
    pub hi: i64,
    pub pass: u64,
    pub vacuous: u64,
    pub not_applicable: u64,
    /// In increasing `d`.
    pub failures: Vec<SuiteFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fields(&self) -> u64 {
        self.pass + self.vacuous + self.not_applicable + self.failures.len() as u64
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite {} d in [{}, {}]: {} fields, {} pass, {} fail, {} vacuous, {} n/a",
            self.suite,
            self.lo,
            self.hi,
            self.fields(),
            self.pass,
            self.failures.len(),
            self.vacuous,
            self.not_applicable
        )
    }
}

/// Runs `suite` on every square-free `d ∈ [lo, hi]`.
pub fn verify_suite(suite: Suite, lo: i64, hi: i64, jobs: usize) -> Result<SuiteReport, RunError> {
    check_range(lo, hi)?;
    let pool = pool(jobs)?;
    let ctx = ScanContext::new(hi)?;
    let per_block: Vec<Result<Vec<(i64, Outcome)>, RunError>> = pool.install(|| {
        blocks(lo, hi)
            .into_par_iter()
            .map(|(a, b)| {
                let flags = square_free_block(a as u64, b as u64);
                (a..=b)
                    .zip(flags)
                    .filter(|&(_, sf)| sf)
                    .map(|(d, _)| Ok((d, check(suite, &FieldSpec::new(d)?, &ctx))))
                    .collect()
            })
            .collect()
    });
    let mut report = SuiteReport {
        suite,
        lo,
        hi,
        pass: 0,
        vacuous: 0,
        not_applicable: 0,
        failures: Vec::new(),
    };
    for block in per_block {
        for (d, outcome) in block? {
            match outcome {
                Outcome::Pass => report.pass += 1,
                Outcome::Vacuous => report.vacuous += 1,
                Outcome::NotApplicable => report.not_applicable += 1,
                Outcome::Fail(detail) => {
                    let record = OutputRecord::from(&build_record(&FieldSpec::new(d)?, &ctx)?);
                    report.failures.push(SuiteFailure { d, detail, record });
                }
            }
        }
    }
    Ok(report)
}

fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(detail())
    }
}

/// Smallest `k` with `2^{k+4} > d`.
fn pow2_threshold(d: i64) -> usize {
    let bits = 64 - d.leading_zeros() as usize;
    bits.saturating_sub(4)
}

fn check(suite: Suite, spec: &FieldSpec, ctx: &ScanContext) -> Outcome {
    let d = spec.d();
    let disc = spec.disc();
    let spf = ctx.factorizer();
    match suite {
        Suite::Sandwich => {
            let kappa = count_reduced_with(disc, spf, usize::MAX) as u64;
            let (lower, upper) = sandwich_sums_with(disc, spf);
            from_bool(lower <= kappa && kappa <= upper, || {
                format!("lower {lower}, kappa {kappa}, upper {upper}")
            })
        }
        Suite::Lowerbound => {
            let bound = (2..SPLIT_PRIME_CUTOFF)
                .filter(|&p| spf.is_prime(p) && disc.chi(p) == 1)
                .map(|p| (2 * split_exponent(disc, p) as usize, p))
                .max();
            match bound {
                None => Outcome::NotApplicable,
                Some((bound, p)) => {
                    let kappa = count_reduced_with(disc, spf, bound + 1);
                    from_bool(kappa > bound, || {
                        format!("kappa {kappa} <= {bound} from split prime {p}")
                    })
                }
            }
        }
        Suite::Pow2 => {
            if d % 8 != 1 {
                return Outcome::NotApplicable;
            }
            let need = pow2_threshold(d);
            let kappa = count_reduced_with(disc, spf, need);
            from_bool(kappa >= need, || {
                format!("kappa {kappa}: 2^(kappa+4) <= {d}")
            })
        }
        Suite::Multiplicativity => multiplicativity(disc, ctx),
        Suite::Convolution => convolution(disc),
        Suite::Kappa1Shape => {
            if count_reduced_with(disc, spf, 2) != 1 {
                return Outcome::Vacuous;
            }
            let cycles = match decompose(disc, enumerate_reduced_with(disc, spf)) {
                Ok(c) => c,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            let families = special_family(d);
            match caliber_one_shape(cycles.caliber(), cycles.class_number(), families) {
                caliber_core::Verdict::Fail => Outcome::Fail(format!(
                    "kappa 1 with h {} and family {families}",
                    cycles.class_number()
                )),
                _ => Outcome::Pass,
            }
        }
        Suite::Kappa2Shape => {
            if d % 8 == 5 {
                return Outcome::NotApplicable;
            }
            if count_reduced_with(disc, spf, 3) != 2 {
                return Outcome::Vacuous;
            }
            let cycles = match decompose(disc, enumerate_reduced_with(disc, spf)) {
                Ok(c) => c,
                Err(e) => return Outcome::Fail(e.to_string()),
            };
            match caliber_two_shape(d, cycles.caliber(), cycles.class_number()) {
                caliber_core::Verdict::Fail => Outcome::Fail(format!(
                    "kappa 2 with h {} and no RD representation",
                    cycles.class_number()
                )),
                _ => Outcome::Pass,
            }
        }
        Suite::CorollarySplitprime => {
            if !spf.is_prime(d as u64) || fixtures::KAPPA1.contains(&d) {
                return Outcome::NotApplicable;
            }
            match split_prime_below_sqrt_d(d, fixtures::KAPPA1) {
                Ok(found) => from_bool(found.is_some(), || {
                    format!("no split prime p with p^2 <= D = {disc}")
                }),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        }
    }
}

fn direct_rho_table(disc: Discriminant, limit: i64) -> Vec<u64> {
    // index 0 unused
    let mut table = vec![0];
    table.extend((1..=limit).map(|a| rho(a, disc)));
    table
}

fn coprime(a: i64, b: i64) -> bool {
    caliber_core::arith::gcd(a as u64, b as u64) == 1
}

/// Direct `ρ` against the local-factor formula, prime-power values and
/// multiplicativity on the grid.
fn multiplicativity(disc: Discriminant, ctx: &ScanContext) -> Outcome {
    let table = direct_rho_table(disc, NORM_LIMIT);
    let spf = ctx.factorizer();
    for a in 1..=NORM_LIMIT {
        let formula = rho_by_formula_with(a, disc, spf);
        if table[a as usize] != formula {
            return Outcome::Fail(format!(
                "rho({a}) = {} but the formula gives {formula}",
                table[a as usize]
            ));
        }
    }
    for p in (2..=NORM_LIMIT).filter(|&p| spf.is_prime(p as u64)) {
        let (mut q, mut alpha) = (p, 1);
        while q <= NORM_LIMIT {
            let expected = rho_prime_power(p as u64, alpha, disc);
            if table[q as usize] != expected {
                return Outcome::Fail(format!(
                    "rho({p}^{alpha}) = {} but expected {expected}",
                    table[q as usize]
                ));
            }
            q *= p;
            alpha += 1;
        }
    }
    for n in 1..=MULT_GRID {
        for m in (1..=MULT_GRID).filter(|&m| coprime(n, m)) {
            let (rn, rm, rnm) = (
                table[n as usize],
                table[m as usize],
                table[(n * m) as usize],
            );
            if rnm != rn * rm {
                return Outcome::Fail(format!(
                    "rho({n}*{m}) = {rnm} but rho({n}) rho({m}) = {}",
                    rn * rm
                ));
            }
        }
    }
    Outcome::Pass
}

/// `r_K(N) = Σ_{f² | N} ρ(N/f²)` for `N ≤ NORM_LIMIT`.
fn convolution(disc: Discriminant) -> Outcome {
    let table = direct_rho_table(disc, NORM_LIMIT);
    for n in 1..=NORM_LIMIT {
        let lhs = ideal_count(n, disc);
        let rhs: u64 = (1..)
            .take_while(|f| f * f <= n)
            .filter(|f| n % (f * f) == 0)
            .map(|f| table[(n / (f * f)) as usize])
            .sum();
        if lhs != rhs {
            return Outcome::Fail(format!("r_K({n}) = {lhs} but the primitive sum is {rhs}"));
        }
    }
    Outcome::Pass
}
