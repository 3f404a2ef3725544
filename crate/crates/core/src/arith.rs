//! Exact integer utilities: square roots, square-freeness, primes,
//! factorization, the Kronecker symbol and field discriminants.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest `d` accepted by [`FieldSpec::new`].
///
/// With `D ≤ 4·10^12` every intermediate of the form enumeration
/// (`B²`, `(2A ± B)²`, `4AC`) stays below `2^45`, far inside `i64`.
pub const MAX_FIELD_D: i64 = 1_000_000_000_000;

/// Largest integer `t` with `t² ≤ n`.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

#[inline]
pub(crate) fn isqrt_i64(n: i64) -> i64 {
    debug_assert!(n >= 0);
    (n as u64).isqrt() as i64
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let s = isqrt_i64(n);
        s * s == n
    }
}

/// True iff no prime square divides `n`. Trial division up to `isqrt(n)`.
pub fn is_square_free(n: u64) -> bool {
    assert!(n >= 1, "square-freeness is defined for n >= 1");
    let mut n = n;
    if n % 4 == 0 {
        return false;
    }
    if n % 2 == 0 {
        n /= 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 2;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 2;
    }
    true
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = alloc::vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floor division for a positive divisor.
#[inline]
pub(crate) fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Kronecker symbol `(a/n)` for `n ≥ 0`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    // (a/2) for odd a, indexed by a mod 8.
    const TWO: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let v = n.trailing_zeros();
    let m = n >> v;
    let mut k = if v % 2 == 0 { 1 } else { TWO[(a & 7) as usize] };
    // (a/m) with m odd depends on a mod m only.
    let a_mod = a.rem_euclid(m as i64) as u64;
    k *= jacobi(a_mod, m);
    k
}

/// Jacobi symbol `(a/m)` for odd `m ≥ 1` and `0 ≤ a < m`.
fn jacobi(mut a: u64, mut m: u64) -> i8 {
    debug_assert!(m % 2 == 1);
    let mut k = 1i8;
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 && (m % 8 == 3 || m % 8 == 5) {
            k = -k;
        }
        if a % 4 == 3 && m % 4 == 3 {
            k = -k;
        }
        (a, m) = (m % a, a);
    }
    if m == 1 {
        k
    } else {
        0
    }
}

/// Which of the two canonical generators `ω_D` the field uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    /// `D ≡ 0 (mod 4)`, `ω = √D / 2`.
    HalfRoot,
    /// `D ≡ 1 (mod 4)`, `ω = (1 + √D) / 2`.
    HalfOnePlusRoot,
}

/// Discriminant of a real quadratic field: `d` when `d ≡ 1 (mod 4)`,
/// otherwise `4d`, with `d > 1` square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Discriminant(i64);

impl Discriminant {
    /// Validates that `disc` is the discriminant of some `Q(√d)`.
    pub fn fundamental(disc: i64) -> Result<Self> {
        FieldSpec::from_discriminant(disc).map(|s| s.disc)
    }

    #[inline]
    pub fn get(self) -> i64 {
        self.0
    }

    /// `isqrt(D)`; since `D` is not a square, `x < √D ⟺ x ≤ isqrt(D)` for integers.
    #[inline]
    pub fn isqrt(self) -> i64 {
        isqrt_i64(self.0)
    }

    pub fn omega_kind(self) -> OmegaKind {
        if self.0 % 4 == 0 {
            OmegaKind::HalfRoot
        } else {
            OmegaKind::HalfOnePlusRoot
        }
    }

    /// `χ_D(n)`.
    #[inline]
    pub fn chi(self, n: u64) -> i8 {
        kronecker(self.0, n)
    }
}

impl core::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.0.fmt(f)
    }
}

/// A real quadratic field `Q(√d)` with its discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    d: i64,
    disc: Discriminant,
}

impl FieldSpec {
    pub fn new(d: i64) -> Result<Self> {
        if d > MAX_FIELD_D {
            return Err(Error::OutOfRange {
                what: "d",
                value: d as i128,
            });
        }
        if d < 2 || !is_square_free(d as u64) {
            return Err(Error::NotSquareFree(d));
        }
        Ok(Self::new_unchecked(d))
    }

    /// Caller guarantees `2 ≤ d ≤ MAX_FIELD_D` square-free (e.g. from a sieve).
    pub(crate) fn new_unchecked(d: i64) -> Self {
        let disc = if d % 4 == 1 { d } else { 4 * d };
        Self {
            d,
            disc: Discriminant(disc),
        }
    }

    pub fn from_discriminant(disc: i64) -> Result<Self> {
        let d = match disc.rem_euclid(4) {
            1 => disc,
            0 if matches!((disc / 4).rem_euclid(4), 2 | 3) => disc / 4,
            _ => return Err(Error::NotFundamental(disc)),
        };
        Self::new(d).map_err(|_| Error::NotFundamental(disc))
    }

    #[inline]
    pub fn d(&self) -> i64 {
        self.d
    }

    #[inline]
    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.disc.omega_kind()
    }
}

/// Smallest prime `p ≤ bound` with `χ_D(p) = 1`.
pub fn smallest_split_prime(spec: &FieldSpec, bound: u64) -> Option<u64> {
    primes_up_to(bound)
        .into_iter()
        .find(|&p| spec.disc.chi(p) == 1)
}

/// Prime factorization into `(p, α)` pairs with increasing `p`.
pub trait Factorizer {
    fn factor_into(&self, n: u64, out: &mut Vec<(u64, u32)>);

    /// Rough cost of one factorization, in units of one trial division.
    fn cost_hint(&self, _n: u64) -> u64 {
        32
    }

    fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        self.factor_into(n, &mut out);
        out
    }
}

/// Factorization by trial division; fine for single queries at desk scale.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrialDivision;

impl Factorizer for TrialDivision {
    fn cost_hint(&self, n: u64) -> u64 {
        isqrt(n) / 2 + 1
    }

    fn factor_into(&self, mut n: u64, out: &mut Vec<(u64, u32)>) {
        out.clear();
        let mut push = |n: &mut u64, p: u64| {
            let mut e = 0;
            while *n % p == 0 {
                *n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        };
        push(&mut n, 2);
        let mut p = 3;
        while p * p <= n {
            push(&mut n, p);
            p += 2;
        }
        if n > 1 {
            out.push((n, 1));
        }
    }
}

/// Smallest-prime-factor table for every `n ≤ limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Self {
        assert!(limit < u32::MAX as u64, "SpfTable limit must fit in u32");
        let n = limit as usize;
        let mut spf = alloc::vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] != 0 {
                continue;
            }
            spf[i] = i as u32;
            let mut j = i.saturating_mul(i);
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Table lookup, trial division above the limit.
    pub fn is_prime(&self, n: u64) -> bool {
        match self.spf.get(n as usize) {
            Some(&p) => n >= 2 && p as u64 == n,
            None => is_prime(n),
        }
    }
}

impl Factorizer for SpfTable {
    fn factor_into(&self, mut n: u64, out: &mut Vec<(u64, u32)>) {
        if n > self.limit() {
            return TrialDivision.factor_into(n, out);
        }
        out.clear();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
}

/// Appends every divisor of the factored number to `out` (unsorted).
pub(crate) fn divisors_into(factors: &[(u64, u32)], out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    for &(p, e) in factors {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
}

/// Square-free flags for `lo..=hi`, sieving by `p²` for every prime `p ≤ isqrt(hi)`.
pub fn square_free_block(lo: u64, hi: u64) -> Vec<bool> {
    assert!(1 <= lo && lo <= hi);
    let mut flags = alloc::vec![true; (hi - lo + 1) as usize];
    for p in primes_up_to(isqrt(hi)) {
        let sq = p * p;
        let mut m = lo.div_ceil(sq) * sq;
        while m <= hi {
            flags[(m - lo) as usize] = false;
            m += sq;
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `χ_D(p)` for a prime `p` by counting square roots of `D` mod `4p`:
    /// there are `1 + χ_D(p)` residues `B mod 2p` with `B² ≡ D (mod 4p)`.
    fn chi_prime_by_residues(disc: i64, p: i64) -> i8 {
        let count = (0..2 * p)
            .filter(|b| (b * b - disc).rem_euclid(4 * p) == 0)
            .count();
        if disc % p == 0 {
            0
        } else {
            count as i8 - 1
        }
    }

    fn fundamental_discs(limit: i64) -> impl Iterator<Item = i64> {
        (2..=limit)
            .filter_map(|d| FieldSpec::new(d).ok())
            .map(|s| s.disc().get())
    }

    #[test]
    fn square_free_examples() {
        assert!(is_square_free(1));
        assert!(!is_square_free(12));
        assert!(is_square_free(293));
        assert!(!is_square_free(49));
        assert!(is_square_free(2 * 3 * 5 * 7 * 11));
    }

    #[test]
    fn field_spec_examples() {
        assert_eq!(FieldSpec::new(13).unwrap().disc().get(), 13);
        assert_eq!(FieldSpec::new(3).unwrap().disc().get(), 12);
        assert_eq!(FieldSpec::new(2).unwrap().disc().get(), 8);
        assert_eq!(
            FieldSpec::new(13).unwrap().omega_kind(),
            OmegaKind::HalfOnePlusRoot
        );
        assert_eq!(FieldSpec::new(3).unwrap().omega_kind(), OmegaKind::HalfRoot);
        assert_eq!(FieldSpec::new(12), Err(Error::NotSquareFree(12)));
        assert_eq!(FieldSpec::new(1), Err(Error::NotSquareFree(1)));
        assert!(matches!(
            FieldSpec::new(MAX_FIELD_D + 1),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn discriminant_validation() {
        for disc in [5, 8, 12, 13, 17, 40, 44] {
            assert_eq!(Discriminant::fundamental(disc).unwrap().get(), disc);
        }
        for disc in [4, 9, 16, 20, 25, 45, 36, 7, 3, -3, 0] {
            assert_eq!(
                Discriminant::fundamental(disc),
                Err(Error::NotFundamental(disc))
            );
        }
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(12), 3);
        assert_eq!(isqrt(293), 17);
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(13, 3), 1);
        assert_eq!(chi_prime_by_residues(13, 3), 1);
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(chi_prime_by_residues(17, 2), 1);
        assert_eq!(kronecker(13, 2), -1);
        assert_eq!(kronecker(5, 1), 1);
    }

    #[test]
    fn kronecker_matches_residue_count_on_primes() {
        let primes = primes_up_to(100);
        for disc in fundamental_discs(2500) {
            for &p in &primes {
                assert_eq!(
                    kronecker(disc, p),
                    chi_prime_by_residues(disc, p as i64),
                    "D={disc} p={p}"
                );
            }
        }
    }

    #[test]
    fn chi_vanishes_exactly_on_ramified_primes() {
        let primes = primes_up_to(100);
        for disc in (5..=10_000).filter(|&x| Discriminant::fundamental(x).is_ok()) {
            for &p in &primes {
                assert_eq!(
                    kronecker(disc, p) == 0,
                    disc % p as i64 == 0,
                    "D={disc} p={p}"
                );
            }
        }
    }

    #[test]
    fn smallest_split_prime_examples() {
        let f = |d| FieldSpec::new(d).unwrap();
        assert_eq!(smallest_split_prime(&f(13), 100), Some(3));
        assert_eq!(smallest_split_prime(&f(17), 100), Some(2));
        assert_eq!(smallest_split_prime(&f(2), 5), None);
    }

    #[test]
    fn spf_agrees_with_trial_division() {
        let table = SpfTable::new(5000);
        for n in 1..=6000u64 {
            assert_eq!(table.factor(n), TrialDivision.factor(n), "n={n}");
        }
        for n in 0..=6000 {
            assert_eq!(table.is_prime(n), is_prime(n));
        }
    }

    #[test]
    fn divisors_of_360() {
        let mut divs = Vec::new();
        divisors_into(&TrialDivision.factor(360), &mut divs);
        divs.sort_unstable();
        let expected: Vec<u64> = (1..=360).filter(|k| 360 % k == 0).collect();
        assert_eq!(divs, expected);
    }

    #[test]
    fn block_sieve_counts() {
        let flags = square_free_block(2, 50);
        assert_eq!(flags.iter().filter(|&&f| f).count(), 30);
        let flags = square_free_block(1000, 3000);
        for (i, f) in flags.iter().enumerate() {
            assert_eq!(*f, is_square_free(1000 + i as u64));
        }
    }

    proptest! {
        #[test]
        fn isqrt_brackets(n in any::<u64>()) {
            let t = isqrt(n) as u128;
            prop_assert!(t * t <= n as u128);
            prop_assert!((t + 1) * (t + 1) > n as u128);
        }

        #[test]
        fn chi_is_completely_multiplicative(d in 2i64..10_000, n in 1u64..2000, m in 1u64..2000) {
            prop_assume!(is_square_free(d as u64));
            let disc = FieldSpec::new(d).unwrap().disc();
            prop_assert_eq!(disc.chi(n * m), disc.chi(n) * disc.chi(m));
        }

        #[test]
        fn field_disc_is_never_square(d in 2i64..1_000_000) {
            prop_assume!(is_square_free(d as u64));
            let spec = FieldSpec::new(d).unwrap();
            prop_assert!(!is_square(spec.disc().get()));
            prop_assert_eq!(spec.disc().get() == d, d % 4 == 1);
        }
    }
}
