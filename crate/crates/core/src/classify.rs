//! Richaud–Degert representations, the special families `n² + 1`, `n² + 4`,
//! `n² ± 2`, and the shape checks on fields of caliber one and two.

use alloc::vec::Vec;

use crate::arith::{is_square, isqrt_i64, FieldSpec};
use crate::forms::cycle_decomposition;
use crate::theorems::Verdict;
use crate::Result;

/// Published lists used as fixtures. Scans compare against them; they are
/// never used to decide anything.
pub mod fixtures {
    /// Fields claimed to have caliber one.
    pub const KAPPA1: &[i64] = &[2, 13, 29, 53, 173, 293];
    /// Fields with `d ≢ 5 (mod 8)` claimed to have caliber two.
    pub const KAPPA2_NOT5MOD8: &[i64] = &[3, 6, 11, 38, 83, 227];
    /// Cited class-number-one list for square-free `d = n² + 4`, as printed.
    pub const N2P4_CLASS_ONE: &[i64] = &[13, 19, 53, 173, 293];
    /// Cited class-number-one list for square-free `d = n² + 1`.
    pub const N2P1_CLASS_ONE: &[i64] = &[2, 17, 37, 101, 197, 677];
    /// Cited class-number-one list for square-free `d = n² ± 2`.
    pub const N2PM2_CLASS_ONE: &[i64] = &[3, 6, 7, 11, 14, 23, 38, 47, 62, 83, 167, 227, 398];
    /// Exceptions in the class-number-one criterion for Richaud–Degert fields
    /// with `d ≢ 5 (mod 8)` and `r ≠ ±2`.
    pub const RD_CLASS_ONE_EXCEPTIONS: &[i64] = &[2, 3, 17, 33];
}

/// `d = n² + r` with `r | 4n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RdRepresentation {
    pub n: i64,
    pub r: i64,
}

impl RdRepresentation {
    /// `−n < r ≤ n`, the range in which the representation is unique.
    pub fn in_standard_range(&self) -> bool {
        -self.n < self.r && self.r <= self.n
    }

    /// The stronger divisibility `r | 2n`.
    pub fn divides_two_n(&self) -> bool {
        (2 * self.n) % self.r == 0
    }
}

/// Every `(n, r)` with `n ≥ 1`, `r ≠ 0`, `d = n² + r` and `r | 4n`, by increasing `n`.
///
/// `r | 4n` forces `|r| ≤ 4n`, so `n² − 4n ≤ d ≤ n² + 4n` and only
/// `n` within a few units of `isqrt(d)` can qualify.
pub fn rd_representations(d: i64) -> Vec<RdRepresentation> {
    let s = isqrt_i64(d);
    ((s - 3).max(1)..=s + 4)
        .map(|n| RdRepresentation { n, r: d - n * n })
        .filter(|rep| rep.r != 0 && (4 * rep.n) % rep.r == 0)
        .collect()
}

/// The representation with the smallest `|r|` (then smallest `n`).
pub fn minimal_rd(d: i64) -> Option<RdRepresentation> {
    rd_representations(d)
        .into_iter()
        .min_by_key(|rep| (rep.r.abs(), rep.n))
}

/// One of the four special shapes `d = n² + r`, `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    N2P1,
    N2P4,
    N2P2,
    N2M2,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::N2P1, Family::N2P4, Family::N2P2, Family::N2M2];

    pub fn offset(self) -> i64 {
        match self {
            Family::N2P1 => 1,
            Family::N2P4 => 4,
            Family::N2P2 => 2,
            Family::N2M2 => -2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::N2P1 => "N2P1",
            Family::N2P4 => "N2P4",
            Family::N2P2 => "N2P2",
            Family::N2M2 => "N2M2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Set of matching [`Family`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Families(u8);

impl Families {
    pub fn contains(self, f: Family) -> bool {
        self.0 & f.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Family> {
        Family::ALL.into_iter().filter(move |&f| self.contains(f))
    }

    pub fn insert(&mut self, f: Family) {
        self.0 |= f.bit();
    }

    /// Parses the [`core::fmt::Display`] form.
    pub fn parse(s: &str) -> Option<Self> {
        if s == "NONE" {
            return Some(Families::default());
        }
        let mut set = Families::default();
        for part in s.split('|') {
            set.insert(Family::parse(part)?);
        }
        Some(set)
    }
}

/// `NONE`, a single name, or names joined by `|` when several shapes match.
impl core::fmt::Display for Families {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_empty() {
            return f.write_str("NONE");
        }
        for (i, fam) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str(fam.name())?;
        }
        Ok(())
    }
}

pub fn special_family(d: i64) -> Families {
    let mut set = Families::default();
    for fam in Family::ALL {
        let sq = d - fam.offset();
        if sq >= 1 && is_square(sq) {
            set.insert(fam);
        }
    }
    set
}

/// Caliber one forces class number one and `d = n² + 1` or `n² + 4`.
pub fn caliber_one_shape(kappa: usize, h: usize, families: Families) -> Verdict {
    if kappa != 1 {
        return Verdict::Vacuous;
    }
    Verdict::from_bool(
        h == 1 && (families.contains(Family::N2P1) || families.contains(Family::N2P4)),
    )
}

/// Caliber two with `d ≢ 5 (mod 8)` forces class number one and a
/// Richaud–Degert representation.
pub fn caliber_two_shape(d: i64, kappa: usize, h: usize) -> Verdict {
    if d % 8 == 5 {
        return Verdict::NotApplicable;
    }
    if kappa != 2 {
        return Verdict::Vacuous;
    }
    Verdict::from_bool(h == 1 && !rd_representations(d).is_empty())
}

pub fn check_caliber_one_shape(d: i64) -> Result<Verdict> {
    let spec = FieldSpec::new(d)?;
    let cycles = cycle_decomposition(spec.disc())?;
    Ok(caliber_one_shape(
        cycles.caliber(),
        cycles.class_number(),
        special_family(d),
    ))
}

pub fn check_caliber_two_shape(d: i64) -> Result<Verdict> {
    let spec = FieldSpec::new(d)?;
    if d % 8 == 5 {
        return Err(crate::Error::Hypothesis("d must not be 5 mod 8"));
    }
    let cycles = cycle_decomposition(spec.disc())?;
    Ok(caliber_two_shape(
        d,
        cycles.caliber(),
        cycles.class_number(),
    ))
}

/// Agreement of one field with every fixture list.
///
/// * `κ = 1` exactly for the members of [`fixtures::KAPPA1`];
/// * `κ = 2` with `d ≢ 5 (mod 8)` exactly for [`fixtures::KAPPA2_NOT5MOD8`];
/// * each member of a class-number-one list has `h = 1` and the list's shape;
/// * a standard-range Richaud–Degert field with `d ≢ 5 (mod 8)` and `h = 1`
///   has `r = ±2` or is one of [`fixtures::RD_CLASS_ONE_EXCEPTIONS`].
pub fn fixture_verdict(d: i64, kappa: usize, h: usize, families: Families) -> Verdict {
    use fixtures::*;
    let in_list = |list: &[i64]| list.contains(&d);
    let mut ok = (kappa == 1) == in_list(KAPPA1);
    ok &= (kappa == 2 && d % 8 != 5) == in_list(KAPPA2_NOT5MOD8);
    if in_list(N2P4_CLASS_ONE) {
        ok &= h == 1 && families.contains(Family::N2P4);
    }
    if in_list(N2P1_CLASS_ONE) {
        ok &= h == 1 && families.contains(Family::N2P1);
    }
    if in_list(N2PM2_CLASS_ONE) {
        ok &= h == 1 && (families.contains(Family::N2P2) || families.contains(Family::N2M2));
    }
    if d % 8 != 5 && h == 1 {
        if let Some(rep) = rd_representations(d)
            .into_iter()
            .find(RdRepresentation::in_standard_range)
        {
            ok &= rep.r.abs() == 2 || in_list(RD_CLASS_ONE_EXCEPTIONS);
        }
    }
    Verdict::from_bool(ok)
}
