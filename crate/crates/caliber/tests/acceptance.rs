//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Ranges and limits are fixed here; nothing is sampled without a seed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use caliber::output::{Format, RecordWriter};
use caliber::runner::default_jobs;
use caliber::{scan_range, scan_range_vec, verify_suite, OutputRecord, Suite};
use caliber_core::arith::{is_square_free, SpfTable};
use caliber_core::classify::fixtures;
use caliber_core::contfrac::omega;
use caliber_core::forms::{
    count_reduced_with, cycle_decomposition, decompose, enumerate_reduced_with, lift_to_reduced,
};
use caliber_core::ideals::{ideal_count, rho, rho_by_formula_with, solve_sd};
use caliber_core::scan::{Mod8Filter, SPLIT_PRIME_CUTOFF};
use caliber_core::theorems::{bound_report, pow2_bound_holds, sandwich_sums_with};
use caliber_core::{FieldSpec, ScanFilter, Verdict};
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CENSUS_MAX: i64 = 1_000_000;
const CENSUS_TIME_LIMIT: Duration = Duration::from_secs(15 * 60);
const SMALL_MAX: i64 = 10_000;
const SANDWICH_TIME_LIMIT: Duration = Duration::from_secs(60);
const RHO_MAX_A: i64 = 10_000;
const RHO_SAMPLES: usize = 50;
const CONV_MAX_N: i64 = 10_000;
const CONV_SAMPLES: usize = 20;
const SAMPLE_POOL_MAX: i64 = 1_000_000;
const SEED: u64 = 20_240_601;
const DETERMINISM_MAX: i64 = 100_000;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

fn square_free(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    (lo..=hi).filter(|&d| is_square_free(d as u64))
}

fn set_string(s: &BTreeSet<i64>) -> String {
    format!("{s:?}")
}

/// Unpruned census: every square-free `d ≤ max` counted with cap `k + 1`.
fn census_without_pruning(max: i64, k: usize, keep: impl Fn(i64) -> bool) -> BTreeSet<i64> {
    let spf = SpfTable::new(max as u64);
    square_free(2, max)
        .filter(|&d| keep(d))
        .filter(|&d| count_reduced_with(FieldSpec::new(d).unwrap().disc(), &spf, k + 1) == k)
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let filter = ScanFilter {
        kappa: Some(1),
        ..Default::default()
    };
    let records = scan_range_vec(2, CENSUS_MAX, &filter, default_jobs()).unwrap();
    let elapsed = start.elapsed();
    let found: BTreeSet<i64> = records.iter().map(|r| r.d).collect();
    let listed: BTreeSet<i64> = fixtures::KAPPA1.iter().copied().collect();
    let extra: BTreeSet<i64> = found.difference(&listed).copied().collect();
    let missing: BTreeSet<i64> = listed.difference(&found).copied().collect();
    let five_flagged = records
        .iter()
        .find(|r| r.d == 5)
        .is_none_or(|r| r.anomaly && r.verdicts.fixtures == Verdict::Fail);
    let unlisted_flagged = records
        .iter()
        .filter(|r| !listed.contains(&r.d))
        .all(|r| r.anomaly);
    let unpruned = census_without_pruning(CENSUS_MAX, 1, |_| true);
    let pass = missing.is_empty()
        && extra.iter().all(|&d| d == 5)
        && five_flagged
        && unlisted_flagged
        && unpruned == found
        && elapsed <= CENSUS_TIME_LIMIT;
    outcome(
        pass,
        format!(
            "kappa=1 census d <= {CENSUS_MAX}: {} (listed {}, extra {}, missing {}; d=5 flagged: {five_flagged}; \
             unpruned recount agrees: {}; {:.1?} of {:?} budget)",
            set_string(&found),
            listed.len(),
            set_string(&extra),
            set_string(&missing),
            unpruned == found,
            elapsed,
            CENSUS_TIME_LIMIT
        ),
    )
}

fn criterion_2() -> Outcome {
    let filter = ScanFilter {
        kappa: Some(2),
        mod8: Some(Mod8Filter::Not5),
        ..Default::default()
    };
    let found: BTreeSet<i64> = scan_range_vec(2, CENSUS_MAX, &filter, default_jobs())
        .unwrap()
        .iter()
        .map(|r| r.d)
        .collect();
    let listed: BTreeSet<i64> = fixtures::KAPPA2_NOT5MOD8.iter().copied().collect();
    let unpruned = census_without_pruning(CENSUS_MAX, 2, |d| d % 8 != 5);
    outcome(
        found == listed && unpruned == found,
        format!(
            "kappa=2, d != 5 mod 8 census d <= {CENSUS_MAX}: {} vs listed {}; unpruned recount agrees: {}",
            set_string(&found),
            set_string(&listed),
            unpruned == found
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let lists = [fixtures::N2P1_CLASS_ONE, fixtures::N2PM2_CLASS_ONE];
    let total: usize = lists.iter().map(|l| l.len()).sum();
    for &d in lists.iter().flat_map(|l| l.iter()) {
        let h = cycle_decomposition(FieldSpec::new(d).unwrap().disc())
            .unwrap()
            .class_number();
        if h != 1 {
            bad.push((d, h));
        }
    }
    outcome(
        bad.is_empty(),
        format!("class number one for {total} listed fields; exceptions (d, h): {bad:?}"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let report = verify_suite(Suite::Sandwich, 2, SMALL_MAX, default_jobs()).unwrap();
    let elapsed = start.elapsed();
    let failing: Vec<i64> = report.failures.iter().map(|f| f.d).collect();
    outcome(
        report.ok() && report.pass == report.fields() && elapsed <= SANDWICH_TIME_LIMIT,
        format!(
            "sandwich for {} fields d <= {SMALL_MAX}: failures {failing:?} ({elapsed:.1?})",
            report.fields()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut checks = 0;
    let mut failing = Vec::new();
    for d in square_free(2, SMALL_MAX) {
        let r = bound_report(d, SPLIT_PRIME_CUTOFF).unwrap();
        for b in &r.per_prime {
            checks += 1;
            if r.kappa <= b.bound {
                failing.push((d, b.p));
            }
        }
    }
    let suite = verify_suite(Suite::Lowerbound, 2, SMALL_MAX, default_jobs()).unwrap();
    outcome(
        failing.is_empty() && suite.ok(),
        format!(
            "kappa > 2e for {checks} (d, split p < {SPLIT_PRIME_CUTOFF}) pairs, d <= {SMALL_MAX}: \
             failures {failing:?}; suite: {suite}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let report = verify_suite(Suite::Pow2, 2, CENSUS_MAX, default_jobs()).unwrap();
    // uncapped counts on a sub-range as a cross-check of the capped suite
    let spf = SpfTable::new(200_000);
    let mut full_failures = Vec::new();
    for d in square_free(100_000, 200_000).filter(|d| d % 8 == 1) {
        let kappa = count_reduced_with(FieldSpec::new(d).unwrap().disc(), &spf, usize::MAX);
        if !pow2_bound_holds(kappa as u64, d) {
            full_failures.push(d);
        }
    }
    let failing: Vec<i64> = report.failures.iter().map(|f| f.d).collect();
    outcome(
        report.ok() && full_failures.is_empty(),
        format!(
            "2^(kappa+4) > d for {} fields d = 1 mod 8, d <= {CENSUS_MAX}: failures {failing:?}; \
             uncapped recount on [100000, 200000]: failures {full_failures:?}",
            report.pass + report.failures.len() as u64
        ),
    )
}

fn sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut picked = square_free(2, SAMPLE_POOL_MAX).choose_multiple(rng, n);
    picked.sort_unstable();
    picked
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fac = SpfTable::new(RHO_MAX_A.max(CONV_MAX_N) as u64);
    let mut rho_failures = Vec::new();
    let rho_ds = sample(&mut rng, RHO_SAMPLES);
    for &d in &rho_ds {
        let disc = FieldSpec::new(d).unwrap().disc();
        for a in 1..=RHO_MAX_A {
            if rho(a, disc) != rho_by_formula_with(a, disc, &fac) {
                rho_failures.push((d, a));
            }
        }
    }
    let mut conv_failures = Vec::new();
    let conv_ds = sample(&mut rng, CONV_SAMPLES);
    for &d in &conv_ds {
        let disc = FieldSpec::new(d).unwrap().disc();
        let table: Vec<u64> = (0..=CONV_MAX_N)
            .map(|a| if a == 0 { 0 } else { rho(a, disc) })
            .collect();
        for n in 1..=CONV_MAX_N {
            let primitive: u64 = (1..)
                .take_while(|f| f * f <= n)
                .filter(|f| n % (f * f) == 0)
                .map(|f| table[(n / (f * f)) as usize])
                .sum();
            if ideal_count(n, disc) != primitive {
                conv_failures.push((d, n));
            }
        }
    }
    let suites_ok = [Suite::Multiplicativity, Suite::Convolution]
        .into_iter()
        .all(|s| verify_suite(s, 2, 2_000, default_jobs()).unwrap().ok());
    outcome(
        rho_failures.is_empty() && conv_failures.is_empty() && suites_ok,
        format!(
            "direct rho = formula for A <= {RHO_MAX_A} on {} sampled d (seed {SEED}, d <= {SAMPLE_POOL_MAX}): \
             failures {rho_failures:?}; convolution N <= {CONV_MAX_N} on {} sampled d: failures {conv_failures:?}; \
             grid suites d <= 2000 pass: {suites_ok}",
            rho_ds.len(),
            conv_ds.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let spf = SpfTable::new(4 * SMALL_MAX as u64);
    let mut failures: Vec<(i64, &str)> = Vec::new();
    let mut fields = 0;
    for d in square_free(2, SMALL_MAX) {
        fields += 1;
        let spec = FieldSpec::new(d).unwrap();
        let disc = spec.disc();
        let forms = enumerate_reduced_with(disc, &spf);
        let set: BTreeSet<_> = forms.iter().copied().collect();
        let images: BTreeSet<_> = forms.iter().map(|f| f.neighbor(disc).unwrap()).collect();
        if images != set {
            failures.push((d, "neighbor is not a permutation"));
        }
        match decompose(disc, forms.clone()) {
            Ok(c) => {
                if c.cycle_sizes().iter().sum::<usize>() != forms.len() {
                    failures.push((d, "cycle sizes do not sum to kappa"));
                }
                if c.principal_cycle().len() != omega(&spec).caliber() {
                    failures.push((d, "principal cycle length differs from the period of omega"));
                }
            }
            Err(_) => failures.push((d, "cycle decomposition failed")),
        }
        let mut image = BTreeSet::new();
        let mut pairs = 0u64;
        let mut a = 1;
        while 4 * a * a < disc.get() {
            for b in solve_sd(a, disc).residues {
                match lift_to_reduced(a, b, disc) {
                    Ok(f) if set.contains(&f) => {
                        image.insert(f);
                    }
                    _ => failures.push((d, "lift missed the reduced set")),
                }
                pairs += 1;
            }
            a += 1;
        }
        if image.len() as u64 != pairs || pairs != sandwich_sums_with(disc, &spf).0 {
            failures.push((
                d,
                "lift is not injective or image size differs from the lower sum",
            ));
        }
    }
    outcome(
        failures.is_empty(),
        format!("structure of {fields} fields d <= {SMALL_MAX}: failures {failures:?}"),
    )
}

fn jsonl(jobs: usize) -> Vec<u8> {
    let mut w = RecordWriter::new(Format::Jsonl, Vec::new()).unwrap();
    scan_range(2, DETERMINISM_MAX, &ScanFilter::default(), jobs, |r| {
        Ok(w.write(&OutputRecord::from(r))?)
    })
    .unwrap();
    w.finish().unwrap()
}

fn criterion_9() -> Outcome {
    let one = jsonl(1);
    let eight = jsonl(8);
    let lines = one.iter().filter(|&&b| b == b'\n').count();
    outcome(
        one == eight && lines > 0,
        format!("jobs=1 vs jobs=8 JSONL for d <= {DETERMINISM_MAX}: {} bytes, {lines} records, identical: {}", one.len(), one == eight),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    println!("acceptance: {} worker(s)", default_jobs());
    let mut failed = 0;
    for (n, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {n}: {} [{:.1?}]",
            o.summary,
            start.elapsed()
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
