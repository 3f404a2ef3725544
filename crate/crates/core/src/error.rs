use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `d` is below 2 or has a square factor.
    NotSquareFree(i64),
    /// `d` or a derived quantity exceeds the supported range.
    OutOfRange { what: &'static str, value: i128 },
    /// Not the discriminant of a real quadratic field.
    NotFundamental(i64),
    /// A form was paired with a discriminant it does not have.
    DiscriminantMismatch { form: [i64; 3], expected: i64 },
    /// The form does not satisfy the reduced inequalities.
    NotReduced([i64; 3]),
    /// Reduced lift requested with `4A² ≥ D`.
    LiftOutOfRange { a: i64, disc: i64 },
    /// `b0² ≢ D (mod 4A)`.
    NotAResidue { a: i64, b0: i64, disc: i64 },
    /// Quadratic irrational with a square radicand or zero denominator.
    InvalidIrrational { p: i64, q: i64, radicand: i64 },
    /// A continued-fraction state cannot be read back as a form of the discriminant.
    NotAFormRoot { p: i64, q: i64, radicand: i64 },
    /// `(a, b, c)` does not describe an integral ideal `[a, b + cω]`.
    NotAnIdeal { a: i64, b: i64, c: i64 },
    /// The prime is not split in the field.
    NotSplit { p: i64, disc: i64 },
    /// A check was requested outside its hypothesis (residue class, primality, exclusion set).
    Hypothesis(&'static str),
    /// The neighbor map failed to permute the reduced set. Always a bug.
    Internal(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquareFree(d) => write!(f, "{d} is not a square-free integer >= 2"),
            Error::OutOfRange { what, value } => {
                write!(f, "{what} = {value} is outside the supported range")
            }
            Error::NotFundamental(d) => write!(f, "{d} is not a real quadratic field discriminant"),
            Error::DiscriminantMismatch { form, expected } => write!(
                f,
                "form [{}, {}, {}] does not have discriminant {expected}",
                form[0], form[1], form[2]
            ),
            Error::NotReduced(form) => write!(
                f,
                "form [{}, {}, {}] is not reduced",
                form[0], form[1], form[2]
            ),
            Error::LiftOutOfRange { a, disc } => {
                write!(f, "A = {a} does not satisfy 4A^2 < D = {disc}")
            }
            Error::NotAResidue { a, b0, disc } => {
                write!(f, "{b0}^2 is not congruent to {disc} mod {}", 4 * a)
            }
            Error::InvalidIrrational { p, q, radicand } => {
                write!(
                    f,
                    "({p} + sqrt({radicand}))/{q} is not a quadratic irrational"
                )
            }
            Error::NotAFormRoot { p, q, radicand } => {
                write!(
                    f,
                    "({p} + sqrt({radicand}))/{q} is not the first root of a form"
                )
            }
            Error::NotAnIdeal { a, b, c } => {
                write!(f, "[{a}, {b} + {c}w] is not an integral ideal")
            }
            Error::NotSplit { p, disc } => write!(f, "{p} does not split for discriminant {disc}"),
            Error::Hypothesis(msg) => write!(f, "hypothesis not met: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
