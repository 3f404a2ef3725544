//! Indefinite binary quadratic forms `[A, B, C] = AX² + BXY + CY²`.
//!
//! A form of discriminant `D` is reduced when
//! `A > 0, B < 0, C < 0, B² < D` and `√D − |B| < 2A < √D + |B|`, which is the
//! same as saying its first root `w = (−B + √D) / 2A` is a reduced quadratic
//! irrational. One continued-fraction step on `w` lands on the first root of
//! another reduced form (the neighbor); the resulting permutation of the
//! reduced set has one cycle per form class.

use alloc::vec::Vec;

use crate::arith::{divisors_into, gcd, Discriminant, Factorizer, FieldSpec, TrialDivision};
use crate::contfrac::{omega, QuadraticIrrational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        (self.b as i128).pow(2) - 4 * self.a as i128 * self.c as i128
    }

    pub fn is_primitive(&self) -> bool {
        gcd(
            gcd(self.a.unsigned_abs(), self.b.unsigned_abs()),
            self.c.unsigned_abs(),
        ) == 1
    }

    pub fn coefficients(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    fn check_disc(&self, disc: Discriminant) -> Result<()> {
        if self.discriminant() != disc.get() as i128 {
            return Err(Error::DiscriminantMismatch {
                form: self.coefficients(),
                expected: disc.get(),
            });
        }
        Ok(())
    }

    /// Reduced test with exact integer comparisons against `√D`.
    pub fn is_reduced(&self, disc: Discriminant) -> Result<bool> {
        self.check_disc(disc)?;
        let d = disc.get() as i128;
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        if a <= 0 || b >= 0 || c >= 0 || b * b >= d {
            return Ok(false);
        }
        let bb = -b;
        // √D − |B| < 2A  ⟺  D < (2A + |B|)²
        let lower = (2 * a + bb).pow(2) > d;
        // 2A < √D + |B|  ⟺  2A − |B| < √D
        let upper = 2 * a - bb <= 0 || (2 * a - bb).pow(2) < d;
        Ok(lower && upper && self.is_primitive())
    }

    fn ensure_reduced(&self, disc: Discriminant) -> Result<()> {
        if self.is_reduced(disc)? {
            Ok(())
        } else {
            Err(Error::NotReduced(self.coefficients()))
        }
    }

    /// `w = (−B + √D) / 2A`; for reduced forms `w > 1` and `−1 < w' < 0`.
    pub fn first_root(&self, disc: Discriminant) -> Result<QuadraticIrrational> {
        self.ensure_reduced(disc)?;
        Ok(self.root_unchecked(disc))
    }

    fn root_unchecked(&self, disc: Discriminant) -> QuadraticIrrational {
        QuadraticIrrational::new(-self.b, 2 * self.a, disc.get()).expect("2A divides D - B^2")
    }

    /// Inverse of [`QuadForm::first_root`]: reads `(P + √D) / Q` back as `[Q/2, −P, (P² − D)/2Q]`.
    pub fn from_first_root(x: &QuadraticIrrational, disc: Discriminant) -> Result<Self> {
        let (p, q, r) = (x.p(), x.q(), x.radicand());
        let bad = Error::NotAFormRoot { p, q, radicand: r };
        if r != disc.get() || q <= 0 || q % 2 != 0 {
            return Err(bad);
        }
        let num = p as i128 * p as i128 - r as i128;
        if num % (2 * q as i128) != 0 {
            return Err(bad);
        }
        Ok(Self::new(q / 2, -p, (num / (2 * q as i128)) as i64))
    }

    /// The reduced form whose first root is `1 / (w − ⌊w⌋)`.
    pub fn neighbor(&self, disc: Discriminant) -> Result<Self> {
        self.ensure_reduced(disc)?;
        self.neighbor_unchecked(disc)
    }

    fn neighbor_unchecked(&self, disc: Discriminant) -> Result<Self> {
        let (_, next) = self.root_unchecked(disc).step();
        Self::from_first_root(&next, disc)
    }
}

impl core::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Calls `visit` on each reduced form; stops early when it returns `false`.
///
/// For each `b = |B| < √D` with `b ≡ D (mod 2)`, `N = AC' = (D − b²)/4` and the
/// admissible `A` lie in `(√D − b)/2 < A < (√D + b)/2`, i.e. the integer range
/// `⌈(s − b + 1)/2⌉ ..= ⌊(s + b)/2⌋` with `s = isqrt(D)`. Candidates are the
/// divisors of `N` in that range, or the range itself when it is short.
fn for_each_reduced<F: Factorizer + ?Sized>(
    disc: Discriminant,
    fac: &F,
    mut visit: impl FnMut(QuadForm) -> bool,
) {
    let d = disc.get();
    let s = disc.isqrt();
    let mut factors = Vec::new();
    let mut divisors = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (d - b * b) / 4;
        let a_min = (s - b + 2) / 2;
        let a_max = (s + b) / 2;
        let mut emit = |a: i64| {
            let f = QuadForm::new(a, -b, -(n / a));
            !f.is_primitive() || visit(f)
        };
        if ((a_max - a_min + 1) as u64) <= fac.cost_hint(n as u64) {
            for a in a_min..=a_max {
                if n % a == 0 && !emit(a) {
                    return;
                }
            }
        } else {
            fac.factor_into(n as u64, &mut factors);
            divisors_into(&factors, &mut divisors);
            for &a in &divisors {
                let a = a as i64;
                if (a_min..=a_max).contains(&a) && !emit(a) {
                    return;
                }
            }
        }
        b += 2;
    }
}

/// All reduced forms of discriminant `D`, sorted by `(A, B)`.
pub fn enumerate_reduced(disc: Discriminant) -> Vec<QuadForm> {
    enumerate_reduced_with(disc, &TrialDivision)
}

pub fn enumerate_reduced_with<F: Factorizer + ?Sized>(
    disc: Discriminant,
    fac: &F,
) -> Vec<QuadForm> {
    let mut out = Vec::new();
    for_each_reduced(disc, fac, |f| {
        out.push(f);
        true
    });
    out.sort_unstable();
    out
}

/// `min(κ(D), cap)`, stopping as soon as `cap` reduced forms are seen.
pub fn count_reduced_with<F: Factorizer + ?Sized>(
    disc: Discriminant,
    fac: &F,
    cap: usize,
) -> usize {
    let mut count = 0;
    if cap == 0 {
        return 0;
    }
    for_each_reduced(disc, fac, |_| {
        count += 1;
        count < cap
    });
    count
}

/// Caliber number `κ(d)`: the number of reduced forms of the field discriminant.
pub fn caliber(d: i64) -> Result<usize> {
    let spec = FieldSpec::new(d)?;
    Ok(count_reduced_with(spec.disc(), &TrialDivision, usize::MAX))
}

/// The unique reduced `[A, B, C]` with `B ≡ b0 (mod 2A)`, for `4A² < D` and
/// `b0² ≡ D (mod 4A)`.
///
/// `B` is the unique member of the class in `(−√D, 2A − √D)`; the largest
/// integer below `2A − √D` is `2A − isqrt(D) − 1`.
pub fn lift_to_reduced(a: i64, b0: i64, disc: Discriminant) -> Result<QuadForm> {
    let d = disc.get();
    if a < 1 {
        return Err(Error::LiftOutOfRange { a, disc: d });
    }
    if ((b0 as i128).pow(2) - d as i128).rem_euclid(4 * a as i128) != 0 {
        return Err(Error::NotAResidue { a, b0, disc: d });
    }
    if 4 * (a as i128).pow(2) >= d as i128 {
        return Err(Error::LiftOutOfRange { a, disc: d });
    }
    let top = 2 * a - disc.isqrt() - 1;
    let b = top - (top - b0).rem_euclid(2 * a);
    let c = (b * b - d) / (4 * a);
    let f = QuadForm::new(a, b, c);
    debug_assert!(b * b < d && f.is_reduced(disc) == Ok(true));
    Ok(f)
}

/// The form attached to `1 / (ω − ⌊ω⌋)`; its cycle is the principal class.
pub fn principal_seed(spec: &FieldSpec) -> QuadForm {
    let (_, tail) = omega(spec).step();
    QuadForm::from_first_root(&tail, spec.disc()).expect("tail of omega is a first root")
}

/// Reduced forms of one discriminant split into neighbor orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub discriminant: Discriminant,
    /// Each cycle starts at its smallest form and follows the neighbor map;
    /// cycles are ordered by their smallest form.
    pub cycles: Vec<Vec<QuadForm>>,
    /// Index into `cycles` of the class of the principal seed.
    pub principal: usize,
}

impl CycleDecomposition {
    /// Number of cycles, `h(D)`.
    pub fn class_number(&self) -> usize {
        self.cycles.len()
    }

    /// Total number of reduced forms, `κ(D)`.
    pub fn caliber(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    /// Cycle lengths in increasing order.
    pub fn cycle_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    pub fn principal_cycle(&self) -> &[QuadForm] {
        &self.cycles[self.principal]
    }

    /// All forms in `(A, B)` order.
    pub fn forms(&self) -> Vec<QuadForm> {
        let mut all: Vec<QuadForm> = self.cycles.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

pub fn cycle_decomposition(disc: Discriminant) -> Result<CycleDecomposition> {
    decompose(disc, enumerate_reduced(disc))
}

/// Splits a sorted reduced set into neighbor orbits. Fails loudly if the
/// neighbor map leaves the set or is not injective on it.
pub fn decompose(disc: Discriminant, forms: Vec<QuadForm>) -> Result<CycleDecomposition> {
    const UNSEEN: usize = usize::MAX;
    debug_assert!(forms.windows(2).all(|w| w[0] < w[1]));
    let spec = FieldSpec::from_discriminant(disc.get())?;
    let index_of = |f: &QuadForm| {
        forms
            .binary_search(f)
            .map_err(|_| Error::Internal("neighbor left the reduced set"))
    };
    let mut cycle_of = alloc::vec![UNSEEN; forms.len()];
    let mut cycles = Vec::new();
    for start in 0..forms.len() {
        if cycle_of[start] != UNSEEN {
            continue;
        }
        let k = cycles.len();
        let mut cycle = Vec::new();
        let mut j = start;
        loop {
            cycle_of[j] = k;
            cycle.push(forms[j]);
            let next = index_of(&forms[j].neighbor_unchecked(disc)?)?;
            if next == start {
                break;
            }
            if cycle_of[next] != UNSEEN {
                return Err(Error::Internal(
                    "neighbor is not a permutation of the reduced forms",
                ));
            }
            j = next;
        }
        cycles.push(cycle);
    }
    let principal = cycle_of[index_of(&principal_seed(&spec))?];
    Ok(CycleDecomposition {
        discriminant: disc,
        cycles,
        principal,
    })
}
