//! Command-line front end.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage error, 3 bad input
//! (not square-free, out of range, ...), 4 I/O or internal failure.

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use caliber_core::classify::Family;
use caliber_core::contfrac::omega;
use caliber_core::forms::{caliber, cycle_decomposition};
use caliber_core::ideals::{rho_by_formula, solve_sd};
use caliber_core::scan::{FamilyFilter, Mod8Filter, SPLIT_PRIME_CUTOFF};
use caliber_core::theorems::bound_report;
use caliber_core::{FieldSpec, QuadraticIrrational, ScanFilter};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::{Format, OutputRecord, RecordWriter};
use crate::runner::{default_jobs, scan_range};
use crate::suites::{verify_suite, Suite};
use crate::RunError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

/// `rho` scans all residues, so `A` is kept to about a second of work.
const MAX_RHO_A: i64 = 100_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "caliber",
    version,
    about = "Calibers, reduced forms and class numbers of real quadratic fields"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the caliber κ(d), the number of reduced forms of Q(√d)
    Caliber { d: i64 },
    /// List the reduced forms of Q(√d) grouped into cycles
    Forms {
        d: i64,
        #[arg(long)]
        json: bool,
    },
    /// Continued fraction of ω for Q(√d), or of (P + √D)/Q
    Cf(CfArgs),
    /// Residues B mod 2A with B² ≡ D (mod 4A)
    Rho { d: i64, a: i64 },
    /// Sandwich sums and split-prime lower bounds for Q(√d)
    Bounds { d: i64 },
    /// Scan square-free d in a range and emit one record per field
    Scan(ScanArgs),
    /// Run a named check over a range of d
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CfArgs {
    /// Square-free d; expands ω of Q(√d)
    #[arg(conflicts_with_all = ["p", "q", "disc"], required_unless_present = "disc")]
    d: Option<i64>,
    #[arg(
        long,
        allow_negative_numbers = true,
        requires = "disc",
        default_value_t = 0
    )]
    p: i64,
    #[arg(
        long,
        allow_negative_numbers = true,
        requires = "disc",
        default_value_t = 1
    )]
    q: i64,
    /// Positive non-square radicand
    #[arg(long)]
    disc: Option<i64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    from: i64,
    #[arg(long)]
    to: i64,
    /// Keep fields with this caliber
    #[arg(long)]
    kappa: Option<usize>,
    /// Keep fields with this class number
    #[arg(long = "h")]
    class_number: Option<usize>,
    /// Residue of d mod 8, or `not5`
    #[arg(long, value_parser = parse_mod8)]
    mod8: Option<Mod8Filter>,
    /// N2P1, N2P4, N2P2, N2M2 or NONE
    #[arg(long, value_parser = parse_family)]
    family: Option<FamilyFilter>,
    /// Worker threads [default: available cores]
    #[arg(long, env = "CALIBER_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: FormatArg,
    /// Write here (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    #[arg(long)]
    from: i64,
    #[arg(long)]
    to: i64,
    #[arg(long, env = "CALIBER_JOBS")]
    jobs: Option<usize>,
}

fn parse_mod8(s: &str) -> Result<Mod8Filter, String> {
    if s.eq_ignore_ascii_case("not5") {
        return Ok(Mod8Filter::Not5);
    }
    match s.parse::<u8>() {
        Ok(r) if r < 8 => Ok(Mod8Filter::Residue(r)),
        _ => Err(format!("expected a residue 0..7 or `not5`, got {s:?}")),
    }
}

fn parse_family(s: &str) -> Result<FamilyFilter, String> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(FamilyFilter::None);
    }
    Family::parse(s)
        .map(FamilyFilter::Is)
        .ok_or_else(|| format!("unknown family {s:?}"))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

/// An error attributed to the command line that caused it.
struct Failure {
    input: String,
    error: RunError,
}

trait Context<T> {
    fn input(self, input: impl FnOnce() -> String) -> Result<T, Failure>;
}

impl<T, E: Into<RunError>> Context<T> for Result<T, E> {
    fn input(self, input: impl FnOnce() -> String) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            input: input(),
            error: e.into(),
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure {
            error: RunError::Io(e),
            ..
        }) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure { input, error }) => {
            let _ = writeln!(stderr, "caliber: error: {input}: {error}");
            if error.is_domain() {
                EXIT_DOMAIN
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn field(d: i64, cmd: &str) -> Result<FieldSpec, Failure> {
    FieldSpec::new(d).input(|| format!("{cmd} {d}"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io_err = |cmd: &'static str| move || cmd.to_string();
    match command {
        Command::Caliber { d } => {
            let kappa = caliber(d).input(|| format!("caliber {d}"))?;
            writeln!(out, "{kappa}").input(io_err("caliber"))?;
        }
        Command::Forms { d, json } => forms(d, json, out)?,
        Command::Cf(args) => cf(args, out)?,
        Command::Rho { d, a } => {
            let spec = FieldSpec::new(d).input(|| format!("rho {d} {a}"))?;
            if !(1..=MAX_RHO_A).contains(&a) {
                let e = caliber_core::Error::OutOfRange {
                    what: "A",
                    value: a as i128,
                };
                return Err(e).input(|| format!("rho {d} {a}"));
            }
            let set = solve_sd(a, spec.disc());
            writeln!(out, "d = {d}, D = {}, A = {a}", spec.disc()).input(io_err("rho"))?;
            writeln!(
                out,
                "rho = {} (formula {})",
                set.len(),
                rho_by_formula(a, spec.disc())
            )
            .input(io_err("rho"))?;
            writeln!(out, "residues = {:?}", set.residues).input(io_err("rho"))?;
        }
        Command::Bounds { d } => {
            let r = bound_report(d, SPLIT_PRIME_CUTOFF).input(|| format!("bounds {d}"))?;
            let mut text = format!("d = {d}, D = {}\n", r.disc);
            text += &format!(
                "sandwich: {} <= kappa = {} <= {}: {}\n",
                r.lower_sum,
                r.kappa,
                r.upper_sum,
                holds(r.sandwich_holds())
            );
            if r.per_prime.is_empty() {
                text += &format!("no split prime below {SPLIT_PRIME_CUTOFF}\n");
            }
            for b in &r.per_prime {
                text += &format!(
                    "split p = {}: e = {}, kappa > {}: {}\n",
                    b.p,
                    b.exponent,
                    b.bound,
                    holds(b.holds)
                );
            }
            out.write_all(text.as_bytes()).input(io_err("bounds"))?;
        }
        Command::Scan(args) => scan(args, out)?,
        Command::Verify(args) => return verify(args, out),
    }
    Ok(EXIT_OK)
}

fn holds(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

#[derive(Serialize)]
struct FormsJson {
    d: i64,
    #[serde(rename = "D")]
    disc: i64,
    kappa: usize,
    h: usize,
    principal: usize,
    cycles: Vec<Vec<[i64; 3]>>,
}

fn forms(d: i64, json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = field(d, "forms")?;
    let c = cycle_decomposition(spec.disc()).input(|| format!("forms {d}"))?;
    let text = if json {
        let doc = FormsJson {
            d,
            disc: spec.disc().get(),
            kappa: c.caliber(),
            h: c.class_number(),
            principal: c.principal,
            cycles: c
                .cycles
                .iter()
                .map(|cy| cy.iter().map(|f| f.coefficients()).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable") + "\n"
    } else {
        let mut text = format!(
            "d = {d}, D = {}, kappa = {}, h = {}\n",
            spec.disc(),
            c.caliber(),
            c.class_number()
        );
        for (i, cycle) in c.cycles.iter().enumerate() {
            let tag = if i == c.principal { ", principal" } else { "" };
            let forms: Vec<_> = cycle.iter().map(|f| f.to_string()).collect();
            text += &format!(
                "cycle {} (length {}{tag}): {}\n",
                i + 1,
                cycle.len(),
                forms.join(" -> ")
            );
        }
        text
    };
    out.write_all(text.as_bytes()).input(|| "forms".into())
}

fn cf(args: CfArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (x, input) = match (args.d, args.disc) {
        (Some(d), _) => (omega(&field(d, "cf")?), format!("cf {d}")),
        (None, Some(r)) => {
            let input = format!("cf --p {} --q {} --disc {r}", args.p, args.q);
            let checked = if !(2..=1 << 60).contains(&r) {
                Err(caliber_core::Error::InvalidIrrational {
                    p: args.p,
                    q: args.q,
                    radicand: r,
                })
            } else {
                QuadraticIrrational::new(args.p, args.q, r)
            };
            (checked.input(|| input.clone())?, input)
        }
        (None, None) => unreachable!("clap requires d or --disc"),
    };
    let e = x.expand();
    let text = format!(
        "x = {x}\nreduced = {}\npreperiod = {:?}\nperiod = {:?}\nperiod length = {}\n",
        x.is_reduced(),
        e.preperiod,
        e.period,
        e.period_len()
    );
    out.write_all(text.as_bytes()).input(|| input)
}

fn filter_of(args: &ScanArgs) -> ScanFilter {
    ScanFilter {
        kappa: args.kappa,
        h: args.class_number,
        mod8: args.mod8,
        family: args.family,
    }
}

fn scan(args: ScanArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let input = || format!("scan --from {} --to {}", args.from, args.to);
    let filter = filter_of(&args);
    let jobs = args.jobs.unwrap_or_else(default_jobs);
    let format = match args.format {
        FormatArg::Jsonl => Format::Jsonl,
        FormatArg::Csv => Format::Csv,
    };
    match &args.out {
        None => {
            let mut w = RecordWriter::new(format, BufWriter::new(stdout)).input(input)?;
            scan_range(args.from, args.to, &filter, jobs, |r| {
                Ok(w.write(&OutputRecord::from(r))?)
            })
            .input(input)?;
            w.finish().input(input)?;
        }
        Some(path) => write_atomically(path, |file| {
            let mut w = RecordWriter::new(format, BufWriter::new(file))?;
            scan_range(args.from, args.to, &filter, jobs, |r| {
                Ok(w.write(&OutputRecord::from(r))?)
            })?;
            w.finish()?;
            Ok(())
        })
        .input(|| format!("{} --out {}", input(), path.display()))?,
    }
    Ok(())
}

/// Writes through a temporary file in the target directory, then renames it over `path`.
fn write_atomically(
    path: &Path,
    body: impl FnOnce(&mut tempfile::NamedTempFile) -> Result<(), RunError>,
) -> Result<(), RunError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    body(&mut tmp)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let input = || {
        format!(
            "verify --suite {} --from {} --to {}",
            args.suite, args.from, args.to
        )
    };
    let jobs = args.jobs.unwrap_or_else(default_jobs);
    let report = verify_suite(args.suite, args.from, args.to, jobs).input(input)?;
    let mut text = format!("{report}\n");
    for f in &report.failures {
        text += &format!(
            "FAIL d = {}: {}\n{}\n",
            f.d,
            f.detail,
            f.record.to_json_line()
        );
    }
    out.write_all(text.as_bytes()).input(input)?;
    Ok(if report.ok() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
