//! The counting function `ρ_D(A) = #{B mod 2A : B² ≡ D (mod 4A)}` and the
//! primitive ideals `[A, (B + √D)/2]` it counts.
//!
//! Two independent routes are provided: [`solve_sd`]/[`rho`] scan residues
//! directly, [`rho_by_formula`] multiplies the local factors
//! `1 + χ_D(p)` (for `p ∤ D`), `1` (for `p ∥ A`, `p | D`) and `0` otherwise.

use alloc::vec::Vec;

use crate::arith::{Discriminant, Factorizer, OmegaKind, TrialDivision};
use crate::{Error, Result};

/// `S_D(A)`: residues in `[0, 2A)` with `B² ≡ D (mod 4A)`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSolutionSet {
    pub a: i64,
    pub disc: Discriminant,
    pub residues: Vec<i64>,
}

impl ResidueSolutionSet {
    /// `ρ_D(A)`.
    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

/// Walks `B = D mod 2, D mod 2 + 2, … < 2A` keeping `B² mod 4A` incrementally.
fn scan_residues(a: i64, disc: Discriminant, mut hit: impl FnMut(i64)) {
    assert!(
        (1..=1 << 58).contains(&a),
        "modulus parameter A out of range"
    );
    let m = 4 * a as u64;
    let target = disc.get().rem_euclid(m as i64) as u64;
    let mut b = (disc.get() & 1) as u64;
    let mut sq = (b * b) % m;
    while b < 2 * a as u64 {
        if sq == target {
            hit(b as i64);
        }
        // (B + 2)² = B² + 4B + 4, with 4B + 4 ≤ 2m
        sq += 4 * b + 4;
        while sq >= m {
            sq -= m;
        }
        b += 2;
    }
}

/// `S_D(A)` by direct residue scan, `O(A)`.
pub fn solve_sd(a: i64, disc: Discriminant) -> ResidueSolutionSet {
    let mut residues = Vec::new();
    scan_residues(a, disc, |b| residues.push(b));
    ResidueSolutionSet { a, disc, residues }
}

/// `ρ_D(A)` by direct residue scan.
pub fn rho(a: i64, disc: Discriminant) -> u64 {
    let mut n = 0;
    scan_residues(a, disc, |_| n += 1);
    n
}

/// `ρ_D(p^α)` from the splitting type of `p`.
#[inline]
pub fn rho_prime_power(p: u64, alpha: u32, disc: Discriminant) -> u64 {
    debug_assert!(alpha >= 1);
    match disc.chi(p) {
        0 if alpha == 1 => 1,
        0 => 0,
        chi => (1 + chi) as u64,
    }
}

/// `ρ_D(A)` as a product of local factors over the factorization of `A`.
pub fn rho_by_formula(a: i64, disc: Discriminant) -> u64 {
    rho_by_formula_with(a, disc, &TrialDivision)
}

pub fn rho_by_formula_with<F: Factorizer + ?Sized>(a: i64, disc: Discriminant, fac: &F) -> u64 {
    assert!(a >= 1);
    fac.factor(a as u64)
        .into_iter()
        .map(|(p, e)| rho_prime_power(p, e, disc))
        .product()
}

/// Number of integral ideals of norm `n`: `α + 1` for split `p`, `1` or `0`
/// for inert `p` with `α` even or odd, `1` for ramified `p`.
pub fn ideal_count(n: i64, disc: Discriminant) -> u64 {
    assert!(n >= 1);
    TrialDivision
        .factor(n as u64)
        .into_iter()
        .map(|(p, e)| match disc.chi(p) {
            1 => e as u64 + 1,
            -1 => u64::from(e % 2 == 0),
            _ => 1,
        })
        .product()
}

/// The ideal `[a, b + c·ω_D] = aZ + (b + cω_D)Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealBasis {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl IdealBasis {
    /// Equality as lattices: `aZ ∩ Z`, the `ω`-content `c`, and `b mod a` determine it.
    pub fn same_lattice(&self, other: &IdealBasis) -> bool {
        self.a == other.a && self.c == other.c && (self.b - other.b).rem_euclid(self.a) == 0
    }
}

/// Primitive ideal `[A, (B + √D)/2]` with `B² ≡ D (mod 4A)` and `0 ≤ B < 2A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimitiveIdeal {
    a: i64,
    b: i64,
    disc: Discriminant,
}

impl PrimitiveIdeal {
    pub fn new(a: i64, b: i64, disc: Discriminant) -> Result<Self> {
        if a < 1 || ((b as i128).pow(2) - disc.get() as i128).rem_euclid(4 * a as i128) != 0 {
            return Err(Error::NotAResidue {
                a,
                b0: b,
                disc: disc.get(),
            });
        }
        Ok(Self {
            a,
            b: b.rem_euclid(2 * a),
            disc,
        })
    }

    pub fn norm(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    /// `f · [A, (B + √D)/2]` written in the `[a, b + cω]` basis.
    pub fn scaled(&self, f: i64) -> IdealBasis {
        let b_omega = match self.disc.omega_kind() {
            OmegaKind::HalfRoot => self.b / 2,
            OmegaKind::HalfOnePlusRoot => (self.b - 1) / 2,
        };
        IdealBasis {
            a: f * self.a,
            b: f * b_omega,
            c: f,
        }
    }
}

impl core::fmt::Display for PrimitiveIdeal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}, ({} + sqrt({}))/2]", self.a, self.b, self.disc)
    }
}

/// One primitive ideal per residue in `S_D(A)`.
pub fn primitive_ideals_with_norm(a: i64, disc: Discriminant) -> Vec<PrimitiveIdeal> {
    solve_sd(a, disc)
        .residues
        .into_iter()
        .map(|b| PrimitiveIdeal { a, b, disc })
        .collect()
}

/// Writes the integral ideal `[a, b + cω]` as `f · [A, (B + √D)/2]`.
///
/// Requires `c | a`, `c | b` and `ac | N(b + cω)`; then `f = c`, `A = a/c`
/// and `B` comes from `b/c + ω = (B + √D)/2`.
pub fn canonicalize_ideal(
    a: i64,
    b: i64,
    c: i64,
    disc: Discriminant,
) -> Result<(i64, PrimitiveIdeal)> {
    let bad = Error::NotAnIdeal { a, b, c };
    if a < 1 || b < 0 || c < 1 || a % c != 0 || b % c != 0 {
        return Err(bad);
    }
    let (bi, ci, d) = (b as i128, c as i128, disc.get() as i128);
    let norm = match disc.omega_kind() {
        OmegaKind::HalfRoot => bi * bi - ci * ci * d / 4,
        OmegaKind::HalfOnePlusRoot => bi * bi + bi * ci + ci * ci * (1 - d) / 4,
    };
    if norm % (a as i128 * ci) != 0 {
        return Err(bad);
    }
    let big_a = a / c;
    let big_b = match disc.omega_kind() {
        OmegaKind::HalfRoot => 2 * (b / c),
        OmegaKind::HalfOnePlusRoot => 2 * (b / c) + 1,
    };
    let prim = PrimitiveIdeal::new(big_a, big_b, disc).map_err(|_| bad)?;
    Ok((c, prim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{primes_up_to, FieldSpec};
    use alloc::vec;

    fn disc(x: i64) -> Discriminant {
        Discriminant::fundamental(x).unwrap()
    }

    fn field_discs(limit: i64) -> Vec<Discriminant> {
        (2..=limit)
            .filter_map(|d| FieldSpec::new(d).ok())
            .map(|s| s.disc())
            .collect()
    }

    /// `ρ` straight from the definition, with no incremental tricks.
    fn rho_naive(a: i64, d: i64) -> u64 {
        (0..2 * a)
            .filter(|b| (b * b - d).rem_euclid(4 * a) == 0)
            .count() as u64
    }

    #[test]
    fn solve_sd_examples() {
        assert_eq!(solve_sd(1, disc(13)).residues, vec![1]);
        assert_eq!(solve_sd(2, disc(17)).residues, vec![1, 3]);
        assert_eq!(solve_sd(3, disc(12)).residues, vec![0]);
        assert!(solve_sd(2, disc(13)).is_empty());
    }

    #[test]
    fn rho_examples() {
        for d in field_discs(200) {
            assert_eq!(rho(1, d), 1);
        }
        assert_eq!(rho(2, disc(13)), 0);
        // 3 is inert for D = 17, so there is nothing to lift mod 9
        assert_eq!(rho(9, disc(17)), 0);
        assert_eq!(rho_naive(9, 17), 0);
        assert_eq!(rho(9, disc(13)), 2);
    }

    #[test]
    fn rho_formula_examples() {
        // 17 ≡ 1 mod 8 splits 2, but (17/3) = (2/3) = −1 keeps 3 inert
        assert_eq!(disc(17).chi(2), 1);
        assert_eq!(disc(17).chi(3), -1);
        assert_eq!(rho_by_formula(6, disc(17)), 0);
        assert_eq!(rho(6, disc(17)), 0);
        assert_eq!(rho_by_formula(4, disc(12)), 0);
        assert_eq!(rho_by_formula(3, disc(13)), 2);
        assert_eq!(rho_by_formula(8, disc(17)), 2);
        assert_eq!(rho_by_formula(26, disc(17)), rho(26, disc(17)));
    }

    #[test]
    fn incremental_scan_matches_definition() {
        for d in field_discs(300) {
            for a in 1..300 {
                assert_eq!(rho(a, d), rho_naive(a, d.get()), "A={a} D={d}");
            }
        }
    }

    #[test]
    fn scan_and_formula_agree() {
        for d in field_discs(500) {
            for a in 1..=1500 {
                assert_eq!(rho(a, d), rho_by_formula(a, d), "A={a} D={d}");
            }
        }
    }

    #[test]
    fn split_prime_powers_have_two_roots() {
        for d in field_discs(500) {
            for p in primes_up_to(50).into_iter().filter(|&p| d.chi(p) == 1) {
                let mut pk = 1i64;
                for alpha in 1..=5u32 {
                    pk *= p as i64;
                    if pk > 200_000 {
                        break;
                    }
                    assert_eq!(rho(pk, d), 2, "p={p} alpha={alpha} D={d}");
                }
            }
        }
    }

    #[test]
    fn primitive_ideal_examples() {
        let ideals = primitive_ideals_with_norm(2, disc(17));
        assert_eq!(ideals.len(), 2);
        assert_eq!((ideals[0].norm(), ideals[0].b()), (2, 1));
        assert_eq!((ideals[1].norm(), ideals[1].b()), (2, 3));
        assert!(primitive_ideals_with_norm(2, disc(13)).is_empty());
        let unit = primitive_ideals_with_norm(1, disc(13));
        assert_eq!(unit.len(), 1);
        assert_eq!((unit[0].norm(), unit[0].b()), (1, 1));
    }

    #[test]
    fn canonicalize_examples() {
        let (f, p) = canonicalize_ideal(2, 1, 1, disc(17)).unwrap();
        assert_eq!((f, p.norm(), p.b()), (1, 2, 3));
        let (f, p) = canonicalize_ideal(2, 2, 2, disc(8)).unwrap();
        assert_eq!((f, p.norm(), p.b()), (2, 1, 0));
        let (f, p) = canonicalize_ideal(3, 0, 1, disc(12)).unwrap();
        assert_eq!((f, p.norm(), p.b()), (1, 3, 0));
        // N(1 + ω) = 1 + 1 − 4 = −2 for D = 17 is not divisible by 3
        assert!(canonicalize_ideal(3, 1, 1, disc(17)).is_err());
        assert!(canonicalize_ideal(3, 1, 2, disc(17)).is_err());
    }

    #[test]
    fn canonicalize_reconstructs_input() {
        for d in field_discs(200) {
            for a in 1..60 {
                for c in (1..=a).filter(|c| a % c == 0) {
                    for b in (0..2 * a).step_by(c as usize) {
                        if let Ok((f, prim)) = canonicalize_ideal(a, b, c, d) {
                            assert!(
                                prim.scaled(f).same_lattice(&IdealBasis { a, b, c }),
                                "{a} {b} {c} D={d}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_ideals_round_trip_with_unit_scale() {
        for d in field_discs(300) {
            for a in 1..200 {
                for ideal in primitive_ideals_with_norm(a, d) {
                    let basis = ideal.scaled(1);
                    let (f, back) = canonicalize_ideal(basis.a, basis.b, basis.c, d).unwrap();
                    assert_eq!((f, back), (1, ideal));
                }
            }
        }
    }

    #[test]
    fn ideal_count_examples() {
        assert_eq!(ideal_count(1, disc(13)), 1);
        assert_eq!(ideal_count(9, disc(13)), 3);
        assert_eq!(ideal_count(4, disc(40)), 1);
        // 2 is inert for D = 13
        assert_eq!(ideal_count(2, disc(13)), 0);
        assert_eq!(ideal_count(4, disc(13)), 1);
    }

    #[test]
    fn ideal_count_is_rho_convolved_with_squares() {
        for d in field_discs(400) {
            for n in 1..2000i64 {
                let conv: u64 = (1..)
                    .take_while(|f| f * f <= n)
                    .filter(|f| n % (f * f) == 0)
                    .map(|f| rho(n / (f * f), d))
                    .sum();
                assert_eq!(ideal_count(n, d), conv, "N={n} D={d}");
            }
        }
    }
}
