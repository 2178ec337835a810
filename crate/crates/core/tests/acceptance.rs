//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use quadtally::analytic::{
    asymptotic_constant, dedekind_residue, residue_via_l, signed_series_closed_form, two_adic_factor, zeta_k_2,
    ZetaMethod,
};
use quadtally::oracle::{characters_mod2, ideal_dfs, rational_baseline, unit_group_structure, FiniteRing};
use quadtally::quadfield::{validate_field, EvenCause, FieldError, FieldSpec, ScopeReason};
use quadtally::series::{cumulative, euler_pairs, extension_counts_from};

// pinned tolerances and limits
const LOCAL_TABLE_LIMIT: Duration = Duration::from_secs(5);
const COEFF_N: u64 = 10_000;
const COEFF_LIMIT: Duration = Duration::from_secs(30);
const RESIDUE_TOL: f64 = 1e-5;
const ZETA2_TOL: f64 = 1e-8;
const ANALYTIC_DISC_BOUND: u64 = 200;
const ANALYTIC_LIMIT: Duration = Duration::from_secs(60);
const RESIDUE_TERMS: u64 = 1_000_000;
const TWO_ADIC_TOL: f64 = 1e-12;
const SIGNED_N: u64 = 100_000;
const SIGNED_TOL: f64 = 1e-4;
const ASYMPTOTIC_X: u64 = 1_000_000;
const ASYMPTOTIC_TOL: f64 = 0.05;
const ASYMPTOTIC_GROWTH: f64 = 1.5;
const ASYMPTOTIC_LIMIT: Duration = Duration::from_secs(120);
const BASELINE_X: u64 = 1_000_000;
const BASELINE_BAND: (f64, f64) = (0.99, 1.01);
const BASELINE_LIMIT: Duration = Duration::from_secs(10);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn conductors(ring: &FiniteRing, depth: u32) -> Vec<u32> {
    sorted(characters_mod2(ring, depth).unwrap().iter().map(|c| c.conductor).collect())
}

fn local_tables() -> Outcome {
    let start = Instant::now();
    let cases: Vec<(&str, Vec<u32>, Vec<u32>)> = vec![
        ("split 2", conductors(&FiniteRing::integers_mod(2, 6), 5), vec![0, 2, 3, 3]),
        ("inert 2", conductors(&FiniteRing::unramified_two(5), 5), vec![0, 2, 2, 2, 3, 3, 3, 3]),
        ("ramified 2, X^2+1", conductors(&FiniteRing::gaussian_two(6), 5), vec![0, 2, 4, 4, 5, 5, 5, 5]),
        ("ramified 2, X^2+2", conductors(&FiniteRing::sqrt_minus_two(6), 5), vec![0, 2, 4, 4, 5, 5, 5, 5]),
    ];
    let divisors: Vec<(&str, Vec<u64>, Vec<u64>)> = vec![
        ("units mod 4", sorted(unit_group_structure(&FiniteRing::unramified_two(2)).unwrap()), vec![2, 2, 3]),
        ("units mod 8", sorted(unit_group_structure(&FiniteRing::unramified_two(3)).unwrap()), vec![2, 2, 3, 4]),
    ];
    let elapsed = start.elapsed();
    let mut bad: Vec<String> = cases
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(name, got, want)| format!("{name}: {got:?} != {want:?}"))
        .collect();
    bad.extend(
        divisors
            .iter()
            .filter(|(_, got, want)| got != want)
            .map(|(name, got, want)| format!("{name}: {got:?} != {want:?}")),
    );
    if elapsed > LOCAL_TABLE_LIMIT {
        bad.push(format!("took {elapsed:?}"));
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("4 conductor multisets and 2 unit structures exact in {elapsed:?}")
        } else {
            bad.join("; ")
        },
    )
}

fn coefficients() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for d in [-7i64, -11, -23, -1, -2, -3, 5, 13, 17] {
        let field = validate_field(d).unwrap();
        let (a0, am) = euler_pairs(&field, COEFF_N).unwrap();
        let dfs = ideal_dfs(&field, COEFF_N).unwrap();
        for n in 1..=COEFF_N {
            if a0.get(n) != dfs.unsigned.get(n) || am.get(n) != dfs.signed.get(n) {
                bad.push(format!("D={d} n={n}"));
                break;
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > COEFF_LIMIT {
        bad.push(format!("took {elapsed:?}"));
    }
    outcome(
        bad.is_empty(),
        format!("9 fields, N={COEFF_N}, signed and unsigned, {elapsed:?} {}", bad.join("; ")),
    )
}

fn fields_up_to(bound: u64) -> Vec<FieldSpec> {
    (-(bound as i64)..=bound as i64)
        .filter_map(|d| validate_field(d).ok())
        .filter(|f| f.disc() <= bound)
        .collect()
}

fn analytic() -> Outcome {
    let start = Instant::now();
    let fields = fields_up_to(ANALYTIC_DISC_BOUND);
    let mut worst_residue = 0.0f64;
    let mut worst_zeta = 0.0f64;
    let mut imaginary = 0;
    for field in &fields {
        let l = residue_via_l(field, RESIDUE_TERMS, RESIDUE_TOL).unwrap();
        worst_residue = worst_residue.max((dedekind_residue(field) - l.value).abs());
        if field.is_imaginary() {
            imaginary += 1;
            let a = zeta_k_2(field, ZetaMethod::Factorization).unwrap();
            let b = zeta_k_2(field, ZetaMethod::Zagier).unwrap();
            worst_zeta = worst_zeta.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_residue <= RESIDUE_TOL && worst_zeta <= ZETA2_TOL && elapsed <= ANALYTIC_LIMIT && imaginary > 0;
    outcome(
        pass,
        format!(
            "{} fields with d_K <= {ANALYTIC_DISC_BOUND} ({imaginary} imaginary); residue gap {worst_residue:.2e} (tol {RESIDUE_TOL:e}), zeta(2) gap {worst_zeta:.2e} (tol {ZETA2_TOL:e}), {elapsed:?}",
            fields.len()
        ),
    )
}

fn two_adic() -> Outcome {
    let fields = fields_up_to(1000);
    let worst = fields
        .iter()
        .map(|f| (two_adic_factor(f).unwrap() - 1.0).abs())
        .fold(0.0f64, f64::max);
    let kinds: std::collections::BTreeSet<&str> = fields.iter().map(|f| f.kind().as_str()).collect();
    outcome(
        worst <= TWO_ADIC_TOL && kinds.len() == 5,
        format!("{} fields over {} kinds, max deviation {worst:.2e} (tol {TWO_ADIC_TOL:e})", fields.len(), kinds.len()),
    )
}

fn signed_series() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for d in [-7i64, -11] {
        let field = validate_field(d).unwrap();
        let (_, am) = euler_pairs(&field, SIGNED_N).unwrap();
        let sum: f64 = am.entries().map(|(n, b)| b as f64 / (n as f64 * n as f64)).sum();
        let closed = signed_series_closed_form(&field, 2.0).unwrap();
        let gap = (sum - closed).abs();
        pass &= gap <= SIGNED_TOL;
        lines.push(format!("D={d}: {sum:.8} vs {closed:.8} (gap {gap:.1e})"));
    }
    outcome(pass, format!("{}; N={SIGNED_N}, tol {SIGNED_TOL:e}", lines.join(", ")))
}

fn asymptotic() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for d in [-7i64, 5] {
        let field = validate_field(d).unwrap();
        let (a0, am) = euler_pairs(&field, ASYMPTOTIC_X).unwrap();
        let counts = cumulative(&extension_counts_from(&field, &a0, &am).unwrap());
        let slope = asymptotic_constant(&field).unwrap().conductor_slope(&field);
        let gaps: Vec<f64> = [10_000u64, 100_000, 1_000_000]
            .iter()
            .map(|&x| (counts[x as usize] as f64 / (slope * x as f64) - 1.0).abs())
            .collect();
        let settles = gaps.windows(2).all(|w| w[1] <= ASYMPTOTIC_GROWTH * w[0]);
        pass &= gaps[2] <= ASYMPTOTIC_TOL && settles;
        lines.push(format!(
            "D={d}: |ratio-1| at 1e4,1e5,1e6 = {:.1e}, {:.1e}, {:.1e}",
            gaps[0], gaps[1], gaps[2]
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= ASYMPTOTIC_LIMIT;
    outcome(
        pass,
        format!("{}; tol {ASYMPTOTIC_TOL}, growth <= {ASYMPTOTIC_GROWTH}x, {elapsed:?}", lines.join("; ")),
    )
}

fn baseline() -> Outcome {
    let start = Instant::now();
    let count = rational_baseline(BASELINE_X).unwrap();
    let elapsed = start.elapsed();
    let ratio = count as f64 / (6.0 / (PI * PI) * BASELINE_X as f64);
    outcome(
        ratio >= BASELINE_BAND.0 && ratio <= BASELINE_BAND.1 && elapsed <= BASELINE_LIMIT,
        format!("{count} fields up to {BASELINE_X}, ratio {ratio:.6} in {BASELINE_BAND:?}, {elapsed:?}"),
    )
}

/// Reduced primitive forms `(a, b, c)` of discriminant `disc < 0`.
fn form_class_number(disc: i64) -> u64 {
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let g = gcd(gcd(a, b.abs()), c);
            if g == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sign of the norm of the smallest solution of `x² - D y² = ±1`, `y >= 1`.
fn pell_norm(d: i64) -> i64 {
    for y in 1i64.. {
        for sign in [-1i64, 1] {
            let target = d * y * y + sign;
            let x = (target as f64).sqrt().round() as i64;
            if x > 0 && x * x == target {
                return sign;
            }
        }
    }
    unreachable!()
}

fn smallest_factor(n: u64) -> u64 {
    (2..).find(|p| n % p == 0).unwrap()
}

fn scope_gate() -> Outcome {
    let mut bad = Vec::new();
    for d in [-5i64, -13, -15, -21, 3, 7] {
        let Err(FieldError::OutOfScope { reason, .. }) = validate_field(d) else {
            bad.push(format!("D={d} accepted"));
            continue;
        };
        let m = d.unsigned_abs();
        let ok = if d < 0 {
            let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
            let h = form_class_number(disc);
            let p = smallest_factor(m);
            let cause = if p < m {
                EvenCause::Composite { factor: p }
            } else {
                EvenCause::WrongCongruence { p: m, residue_mod4: m % 4 }
            };
            h % 2 == 0 && reason == ScopeReason::EvenClassNumber { h, cause }
        } else {
            pell_norm(d) == 1 && reason == ScopeReason::NoNormMinusOneUnit { residue_mod4: m % 4 }
        };
        if !ok {
            bad.push(format!("D={d}: {reason}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "-5, -13, -15, -21 even class number by form count; 3, 7 Pell unit of norm +1".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("local tables match enumeration", local_tables),
        ("euler product equals ideal search", coefficients),
        ("residue and zeta(2) cross-checks", analytic),
        ("two-adic factor is one", two_adic),
        ("signed series closed form", signed_series),
        ("main asymptotic", asymptotic),
        ("rational baseline", baseline),
        ("scope gate", scope_gate),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += !o.pass as u32;
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
