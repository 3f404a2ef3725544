//! Exact checks of the caliber bounds.
//!
//! * sandwich: `Σ_{A<√D/2} ρ_D(A) ≤ κ ≤ Σ_{A<√D} ρ_D(A)`
//! * split-prime bound: `κ > 2e` where `e = max{α : 4p^{2α} < D}` for split `p`
//! * power of two: `2^{κ+4} > d` when `d ≡ 1 (mod 8)`
//! * for prime `d` outside the caliber-one list, some split prime `p ≤ √D`
//!
//! Logarithms never appear: `⌊log(√D/2)/log p⌋` is the exponent `e` above.

use alloc::vec::Vec;

use crate::arith::{is_prime, primes_up_to, Discriminant, Factorizer, FieldSpec, TrialDivision};
use crate::forms::count_reduced_with;
use crate::ideals::rho_by_formula_with;
use crate::{Error, Result};

/// Outcome of one named check on one field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// The implication's premise is false for this field.
    Vacuous,
    /// The field is outside the check's hypothesis (residue class, primality, ...).
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
            Verdict::NotApplicable => "n/a",
        }
    }

    /// Inverse of [`Verdict::as_str`].
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "pass" => Verdict::Pass,
            "fail" => Verdict::Fail,
            "vacuous" => Verdict::Vacuous,
            "n/a" => Verdict::NotApplicable,
            _ => return None,
        })
    }
}

/// Split-prime bound for one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitPrimeBound {
    pub p: u64,
    /// Largest `e` with `4p^{2e} < D`.
    pub exponent: u32,
    /// `2e`; the claim is `κ > 2e`.
    pub bound: u64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub d: i64,
    pub disc: Discriminant,
    /// `Σ_{4A² < D} ρ_D(A)`
    pub lower_sum: u64,
    /// `Σ_{A² < D} ρ_D(A)`
    pub upper_sum: u64,
    pub kappa: u64,
    pub per_prime: Vec<SplitPrimeBound>,
}

impl BoundReport {
    pub fn sandwich_holds(&self) -> bool {
        self.lower_sum <= self.kappa && self.kappa <= self.upper_sum
    }

    pub fn split_bounds_hold(&self) -> bool {
        self.per_prime.iter().all(|b| b.holds)
    }
}

/// Both sandwich sums, evaluating `ρ` multiplicatively.
pub fn sandwich_sums_with<F: Factorizer + ?Sized>(disc: Discriminant, fac: &F) -> (u64, u64) {
    let d = disc.get();
    let mut lower = 0;
    let mut upper = 0;
    let mut a = 1i64;
    while a * a < d {
        let r = rho_by_formula_with(a, disc, fac);
        upper += r;
        if 4 * a * a < d {
            lower += r;
        }
        a += 1;
    }
    (lower, upper)
}

/// `max{α ≥ 0 : 4p^{2α} < D}`.
pub fn split_exponent(disc: Discriminant, p: u64) -> u32 {
    assert!(p >= 2);
    let d = disc.get() as u128;
    let p2 = (p as u128) * (p as u128);
    let mut e = 0;
    let mut value = 4u128 * p2;
    while value < d {
        e += 1;
        value *= p2;
    }
    e
}

/// `2·max{α : 4p^{2α} < D}` for a prime `p` that splits in `Q(√d)`.
pub fn split_lower_bound(d: i64, p: u64) -> Result<u64> {
    let spec = FieldSpec::new(d)?;
    if !is_prime(p) || spec.disc().chi(p) != 1 {
        return Err(Error::NotSplit {
            p: p as i64,
            disc: spec.disc().get(),
        });
    }
    Ok(2 * split_exponent(spec.disc(), p) as u64)
}

/// Sandwich sums and split-prime bounds for every split prime `p < prime_cutoff`.
pub fn bound_report(d: i64, prime_cutoff: u64) -> Result<BoundReport> {
    let spec = FieldSpec::new(d)?;
    let disc = spec.disc();
    let kappa = count_reduced_with(disc, &TrialDivision, usize::MAX) as u64;
    let (lower_sum, upper_sum) = sandwich_sums_with(disc, &TrialDivision);
    let primes = primes_up_to(prime_cutoff.saturating_sub(1));
    Ok(BoundReport {
        d,
        disc,
        lower_sum,
        upper_sum,
        kappa,
        per_prime: split_bounds(disc, kappa, &primes),
    })
}

pub(crate) fn split_bounds(disc: Discriminant, kappa: u64, primes: &[u64]) -> Vec<SplitPrimeBound> {
    primes
        .iter()
        .filter(|&&p| disc.chi(p) == 1)
        .map(|&p| {
            let exponent = split_exponent(disc, p);
            let bound = 2 * exponent as u64;
            SplitPrimeBound {
                p,
                exponent,
                bound,
                holds: kappa > bound,
            }
        })
        .collect()
}

/// `2^{κ+4} > d`, without overflow.
pub fn pow2_bound_holds(kappa: u64, d: i64) -> bool {
    let shift = kappa.saturating_add(4);
    shift >= 63 || (1i64 << shift) > d
}

/// Power-of-two check for `d ≡ 1 (mod 8)`.
pub fn check_pow2_corollary(d: i64) -> Result<Verdict> {
    let spec = FieldSpec::new(d)?;
    if d % 8 != 1 {
        return Err(Error::Hypothesis("d must be 1 mod 8"));
    }
    let kappa = count_reduced_with(spec.disc(), &TrialDivision, usize::MAX) as u64;
    Ok(Verdict::from_bool(pow2_bound_holds(kappa, d)))
}

/// Smallest split prime `p` with `p² ≤ D`, for prime `d` outside `exclusion`.
///
/// `None` is a counterexample to the existence claim and is returned as data.
pub fn split_prime_below_sqrt_d(d: i64, exclusion: &[i64]) -> Result<Option<u64>> {
    if d < 2 || !is_prime(d as u64) {
        return Err(Error::Hypothesis("d must be prime"));
    }
    if exclusion.contains(&d) {
        return Err(Error::Hypothesis("d is in the exclusion set"));
    }
    let disc = FieldSpec::new(d)?.disc();
    Ok(smallest_split_prime_below_root(disc, is_prime))
}

pub(crate) fn smallest_split_prime_below_root(
    disc: Discriminant,
    is_prime: impl Fn(u64) -> bool,
) -> Option<u64> {
    let limit = disc.isqrt() as u64;
    (2..=limit).find(|&p| is_prime(p) && disc.chi(p) == 1)
}
