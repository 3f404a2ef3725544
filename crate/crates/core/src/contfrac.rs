//! Exact continued fractions of quadratic irrationals `(P + √R) / Q`.
//!
//! A state is kept canonical (`Q | R − P²`), which makes one expansion step
//! `x ↦ 1 / (x − ⌊x⌋)` stay inside integers:
//!
//! ```text
//! a = ⌊x⌋,  P' = aQ − P,  Q' = (R − P'²) / Q
//! ```
//!
//! Periods are found by watching for a repeated `(P, Q)` state.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arith::{div_floor, is_square, isqrt_i64, FieldSpec, OmegaKind};
use crate::{Error, Result};

/// Bound on `|P|`, `|Q|` after canonicalization.
const COEFF_LIMIT: i64 = 1 << 30;
/// Bound on the radicand after canonicalization.
const RADICAND_LIMIT: i64 = 1 << 60;

/// The real number `(p + √radicand) / q`, with `q | radicand − p²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticIrrational {
    p: i64,
    q: i64,
    radicand: i64,
}

/// `preperiod` digits followed by `period` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub preperiod: Vec<i64>,
    pub period: Vec<i64>,
}

impl CfExpansion {
    #[inline]
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }
}

/// Sign of `u + √r` (`r > 0` not a square).
#[inline]
fn sign_plus_root(u: i64, r: i64) -> i32 {
    if u >= 0 || (u as i128) * (u as i128) < r as i128 {
        1
    } else {
        -1
    }
}

/// Sign of `u − √r` (`r > 0` not a square).
#[inline]
fn sign_minus_root(u: i64, r: i64) -> i32 {
    -sign_plus_root(-u, r)
}

impl QuadraticIrrational {
    /// Builds `(p + √radicand) / q`, rescaling to `(p|q| + √(radicand·q²)) / (q|q|)`
    /// when `q ∤ radicand − p²`.
    pub fn new(p: i64, q: i64, radicand: i64) -> Result<Self> {
        let invalid = Error::InvalidIrrational { p, q, radicand };
        if q == 0 || radicand <= 0 || is_square(radicand) {
            return Err(invalid);
        }
        let rem = (radicand as i128 - (p as i128) * (p as i128)).rem_euclid(q as i128);
        let (p, q, radicand) = if rem == 0 {
            (p as i128, q as i128, radicand as i128)
        } else {
            let aq = (q as i128).abs();
            (p as i128 * aq, q as i128 * aq, radicand as i128 * aq * aq)
        };
        let fits = |v: i128, limit: i64| v.abs() <= limit as i128;
        if !(fits(p, COEFF_LIMIT) && fits(q, COEFF_LIMIT) && fits(radicand, RADICAND_LIMIT)) {
            return Err(Error::OutOfRange {
                what: "quadratic irrational coefficient",
                value: radicand.max(p.abs()).max(q.abs()),
            });
        }
        Ok(Self {
            p: p as i64,
            q: q as i64,
            radicand: radicand as i64,
        })
    }

    #[inline]
    pub fn p(&self) -> i64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> i64 {
        self.q
    }

    #[inline]
    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    /// `⌊x⌋`, exact: `√R` is irrational so `⌊P + √R⌋ = P + isqrt(R)`.
    pub fn floor(&self) -> i64 {
        let s = isqrt_i64(self.radicand);
        if self.q > 0 {
            div_floor(self.p + s, self.q)
        } else {
            div_floor(-self.p - s - 1, -self.q)
        }
    }

    /// `x > 1` and `−1 < x' < 0`, where `x' = (P − √R) / Q`.
    pub fn is_reduced(&self) -> bool {
        let (p, q, r) = (self.p, self.q, self.radicand);
        let sq = q.signum() as i32;
        sign_plus_root(p - q, r) * sq > 0
            && sign_minus_root(p, r) * sq < 0
            && sign_minus_root(p + q, r) * sq > 0
    }

    /// One expansion step: `(⌊x⌋, 1 / (x − ⌊x⌋))`.
    pub fn step(&self) -> (i64, QuadraticIrrational) {
        let a = self.floor();
        let p = a as i128 * self.q as i128 - self.p as i128;
        let num = self.radicand as i128 - p * p;
        debug_assert_eq!(num % self.q as i128, 0);
        let q = num / self.q as i128;
        let next = QuadraticIrrational {
            p: i64::try_from(p).expect("continued-fraction state left the i64 range"),
            q: i64::try_from(q).expect("continued-fraction state left the i64 range"),
            radicand: self.radicand,
        };
        (a, next)
    }

    /// Full expansion with minimal preperiod and period.
    pub fn expand(&self) -> CfExpansion {
        let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        let mut digits = Vec::new();
        let mut x = *self;
        loop {
            if let Some(&start) = seen.get(&(x.p, x.q)) {
                let period = digits.split_off(start);
                return CfExpansion {
                    preperiod: digits,
                    period,
                };
            }
            seen.insert((x.p, x.q), digits.len());
            let (a, next) = x.step();
            digits.push(a);
            x = next;
        }
    }

    /// Period length `m(x)`.
    pub fn caliber(&self) -> usize {
        self.expand().period_len()
    }

    /// Period of a reduced `x` if it is at most `limit`, found by stepping
    /// until `x` recurs. `None` means the period exceeds `limit`.
    pub fn reduced_period_within(&self, limit: usize) -> Option<usize> {
        debug_assert!(self.is_reduced());
        let mut y = *self;
        for len in 1..=limit {
            y = y.step().1;
            if y == *self {
                return Some(len);
            }
        }
        None
    }
}

impl core::fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({} + sqrt({}))/{}", self.p, self.radicand, self.q)
    }
}

/// The canonical generator `ω_D`, kept over the radicand `D` itself.
pub fn omega(spec: &FieldSpec) -> QuadraticIrrational {
    let disc = spec.disc().get();
    let p = match spec.omega_kind() {
        OmegaKind::HalfRoot => 0,
        OmegaKind::HalfOnePlusRoot => 1,
    };
    QuadraticIrrational::new(p, 2, disc).expect("omega is canonical for every field discriminant")
}
