//! Per-field scan records and single-block scanning.
//!
//! A [`ScanRecord`] is a pure function of `d`. [`scan_block`] produces the
//! records of one contiguous block in increasing `d`; parallel drivers split a
//! range into blocks and concatenate the results in block order.

use alloc::vec::Vec;

use crate::arith::{square_free_block, FieldSpec, SpfTable};
use crate::classify::{
    caliber_one_shape, caliber_two_shape, fixture_verdict, fixtures, minimal_rd, special_family,
};
use crate::classify::{Families, Family, RdRepresentation};
use crate::contfrac::omega;
use crate::forms::{count_reduced_with, decompose, enumerate_reduced_with, QuadForm};
use crate::theorems::{
    pow2_bound_holds, sandwich_sums_with, smallest_split_prime_below_root, split_bounds,
};
use crate::{Discriminant, Error, Result, Verdict};

/// Largest `d` a scan may reach. The factor table then covers `N = (D − B²)/4 ≤ d`.
pub const SCAN_MAX_D: i64 = 10_000_000;

/// Split primes are searched, and split-prime bounds checked, below this.
pub const SPLIT_PRIME_CUTOFF: u64 = 100;

/// Shared read-only tables for scanning `d ≤ max_d`.
#[derive(Debug, Clone)]
pub struct ScanContext {
    spf: SpfTable,
    small_primes: Vec<u64>,
    max_d: i64,
}

impl ScanContext {
    pub fn new(max_d: i64) -> Result<Self> {
        if max_d > SCAN_MAX_D {
            return Err(Error::OutOfRange {
                what: "scan upper bound",
                value: max_d as i128,
            });
        }
        let spf = SpfTable::new(max_d.max(64) as u64);
        let small_primes = (2..SPLIT_PRIME_CUTOFF)
            .filter(|&p| spf.is_prime(p))
            .collect();
        Ok(Self {
            spf,
            small_primes,
            max_d,
        })
    }

    pub fn max_d(&self) -> i64 {
        self.max_d
    }

    pub fn factorizer(&self) -> &SpfTable {
        &self.spf
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mod8Filter {
    Residue(u8),
    /// `d ≢ 5 (mod 8)`.
    Not5,
}

impl Mod8Filter {
    pub fn matches(self, d: i64) -> bool {
        match self {
            Mod8Filter::Residue(r) => d.rem_euclid(8) == r as i64,
            Mod8Filter::Not5 => d.rem_euclid(8) != 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyFilter {
    Is(Family),
    /// None of the special shapes.
    None,
}

impl FamilyFilter {
    pub fn matches(self, families: Families) -> bool {
        match self {
            FamilyFilter::Is(f) => families.contains(f),
            FamilyFilter::None => families.is_empty(),
        }
    }
}

/// Conjunction of optional per-field predicates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanFilter {
    pub kappa: Option<usize>,
    pub h: Option<usize>,
    pub mod8: Option<Mod8Filter>,
    pub family: Option<FamilyFilter>,
}

/// Named check results carried by every record, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Verdicts {
    pub sandwich: Verdict,
    pub lowerbound: Verdict,
    pub pow2: Verdict,
    pub kappa1_shape: Verdict,
    pub kappa2_shape: Verdict,
    pub splitprime: Verdict,
    pub fixtures: Verdict,
}

impl Verdicts {
    pub const NAMES: [&'static str; 7] = [
        "sandwich",
        "lowerbound",
        "pow2",
        "kappa1_shape",
        "kappa2_shape",
        "splitprime",
        "fixtures",
    ];

    pub fn as_array(&self) -> [Verdict; 7] {
        [
            self.sandwich,
            self.lowerbound,
            self.pow2,
            self.kappa1_shape,
            self.kappa2_shape,
            self.splitprime,
            self.fixtures,
        ]
    }

    pub fn any_fail(&self) -> bool {
        self.as_array().iter().any(|v| v.is_fail())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub d: i64,
    pub disc: Discriminant,
    pub kappa: usize,
    pub h: usize,
    pub cycle_sizes: Vec<usize>,
    /// Reduced forms in `(A, B)` order.
    pub forms: Vec<QuadForm>,
    /// Smallest split prime below [`SPLIT_PRIME_CUTOFF`].
    pub smallest_split_prime: Option<u64>,
    pub rd: Option<RdRepresentation>,
    pub families: Families,
    pub verdicts: Verdicts,
    /// Some check failed: a counterexample or a fixture mismatch.
    pub anomaly: bool,
}

/// Builds the full record for one field.
pub fn build_record(spec: &FieldSpec, ctx: &ScanContext) -> Result<ScanRecord> {
    let d = spec.d();
    if d > ctx.max_d {
        return Err(Error::OutOfRange {
            what: "d beyond scan context",
            value: d as i128,
        });
    }
    let disc = spec.disc();
    let forms = enumerate_reduced_with(disc, &ctx.spf);
    let cycles = decompose(disc, forms)?;
    let kappa = cycles.caliber();
    let h = cycles.class_number();
    let families = special_family(d);

    let (lower, upper) = sandwich_sums_with(disc, &ctx.spf);
    let split = split_bounds(disc, kappa as u64, &ctx.small_primes);
    let lowerbound = if split.is_empty() {
        Verdict::NotApplicable
    } else {
        Verdict::from_bool(split.iter().all(|b| b.holds))
    };
    let pow2 = if d % 8 == 1 {
        Verdict::from_bool(pow2_bound_holds(kappa as u64, d))
    } else {
        Verdict::NotApplicable
    };
    let splitprime = if ctx.spf.is_prime(d as u64) && !fixtures::KAPPA1.contains(&d) {
        Verdict::from_bool(smallest_split_prime_below_root(disc, |p| ctx.spf.is_prime(p)).is_some())
    } else {
        Verdict::NotApplicable
    };
    let verdicts = Verdicts {
        sandwich: Verdict::from_bool(lower <= kappa as u64 && kappa as u64 <= upper),
        lowerbound,
        pow2,
        kappa1_shape: caliber_one_shape(kappa, h, families),
        kappa2_shape: caliber_two_shape(d, kappa, h),
        splitprime,
        fixtures: fixture_verdict(d, kappa, h, families),
    };
    Ok(ScanRecord {
        d,
        disc,
        kappa,
        h,
        cycle_sizes: cycles.cycle_sizes(),
        forms: cycles.forms(),
        smallest_split_prime: split.first().map(|b| b.p),
        rd: minimal_rd(d),
        families,
        verdicts,
        anomaly: verdicts.any_fail(),
    })
}

/// `κ(d) == k`, decided without a full enumeration when possible.
///
/// The principal cycle is part of the reduced set, so a principal period
/// above `k` already rules the field out.
fn caliber_equals(spec: &FieldSpec, k: usize, ctx: &ScanContext) -> bool {
    let tail = omega(spec).step().1;
    if tail.reduced_period_within(k).is_none() {
        return false;
    }
    count_reduced_with(spec.disc(), &ctx.spf, k + 1) == k
}

/// Records for the square-free `d ∈ [lo, hi]` passing `filter`, in increasing `d`.
pub fn scan_block(
    lo: i64,
    hi: i64,
    filter: &ScanFilter,
    ctx: &ScanContext,
) -> Result<Vec<ScanRecord>> {
    if lo < 2 || lo > hi {
        return Err(Error::OutOfRange {
            what: "scan lower bound",
            value: lo as i128,
        });
    }
    if hi > ctx.max_d {
        return Err(Error::OutOfRange {
            what: "scan upper bound",
            value: hi as i128,
        });
    }
    let flags = square_free_block(lo as u64, hi as u64);
    let mut out = Vec::new();
    for (d, _) in (lo..=hi).zip(flags).filter(|(_, sf)| *sf) {
        if filter.mod8.is_some_and(|m| !m.matches(d)) {
            continue;
        }
        if filter.family.is_some_and(|f| !f.matches(special_family(d))) {
            continue;
        }
        let spec = FieldSpec::new_unchecked(d);
        if filter.kappa.is_some_and(|k| !caliber_equals(&spec, k, ctx)) {
            continue;
        }
        let record = build_record(&spec, ctx)?;
        if filter.h.is_some_and(|h| h != record.h) {
            continue;
        }
        out.push(record);
    }
    Ok(out)
}
