//! Dirichlet L-values of Kronecker characters and the Riemann zeta function.

use std::f64::consts::PI;

use crate::primes::{isqrt, primes_up_to};
use crate::quadfield::kronecker;

/// `B_{2k} / (2k)!` for `k = 1..=8`.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `ζ(s)` for real `s > 1` by Euler–Maclaurin; closed forms at 2 and 4.
pub fn riemann_zeta(s: f64) -> f64 {
    if s == 2.0 {
        return PI * PI / 6.0;
    }
    if s == 4.0 {
        return PI.powi(4) / 90.0;
    }
    let n = 20.0f64;
    let mut sum: f64 = (1..20).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) times N^(-s-2k+1)
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += c * rising * power;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= n * n;
    }
    sum
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }
    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn inv_pow(n: u64, s: f64) -> f64 {
    let x = n as f64;
    if s == 2.0 {
        1.0 / (x * x)
    } else if s == 4.0 {
        let x2 = x * x;
        1.0 / (x2 * x2)
    } else {
        x.powf(-s)
    }
}

/// Period of `n -> kronecker(a, n)`.
pub fn character_period(a: i64) -> u64 {
    let m = a.unsigned_abs();
    if matches!(a.rem_euclid(4), 0 | 1) {
        m.max(1)
    } else {
        4 * m
    }
}

fn is_square(a: i64) -> bool {
    a >= 0 && {
        let r = isqrt(a as u64);
        r * r == a as u64
    }
}

/// Result of a tail-bounded character sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValue {
    pub value: f64,
    /// Bound on the neglected tail.
    pub error_bound: f64,
    pub terms: u64,
}

/// `L(s, (a/·))` for `s >= 2` with the tail below `tol`.
///
/// Summation stops at a multiple `N` of the period; by partial summation the
/// tail is then at most `M (N+1)^(-s)` where `M` bounds the partial character
/// sums over one period. Square `a` gives the principal character, handled as
/// `ζ(s) Π_{p | a} (1 - p^(-s))`.
pub fn kronecker_l(a: i64, s: f64, tol: f64) -> LValue {
    assert!(s > 1.0 && tol > 0.0);
    if is_square(a) {
        let factor: f64 = primes_up_to(a.unsigned_abs())
            .into_iter()
            .filter(|p| a as u64 % p == 0)
            .map(|p| 1.0 - (p as f64).powf(-s))
            .product();
        return LValue {
            value: riemann_zeta(s) * factor,
            error_bound: 1e-15,
            terms: 0,
        };
    }
    let k = character_period(a);
    let table: Vec<i8> = (0..k).map(|n| kronecker(a, n)).collect();
    let mut partial = 0i64;
    let mut max_partial = 0i64;
    for &c in &table[1..] {
        partial += c as i64;
        max_partial = max_partial.max(partial.abs());
    }
    partial += table[0] as i64;
    max_partial = max_partial.max(partial.abs());
    let m = max_partial.max(1) as f64;

    let mut value = Compensated::default();
    let mut n = 0u64;
    loop {
        for r in 0..k {
            let idx = n + r;
            let c = table[r as usize];
            if idx != 0 && c != 0 {
                value.add(c as f64 * inv_pow(idx, s));
            }
        }
        n += k;
        let bound = m * ((n + 1) as f64).powf(-s);
        if bound < tol {
            return LValue {
                value: value.value(),
                error_bound: bound,
                terms: n,
            };
        }
    }
}

/// `L(1, (a/·))` for a non-principal character from `terms` terms.
///
/// With `S` the periodic partial character sums and `μ` their mean over one
/// period, the tail after a full period `T` is `μ/(T+1)` plus a remainder at
/// most `2 M k / (T+1)^2`; the first part is added back.
pub fn kronecker_l_at_one(a: i64, terms: u64) -> LValue {
    let k = character_period(a);
    let table: Vec<i8> = (0..k).map(|n| kronecker(a, n)).collect();
    let mut partial = 0i64;
    let mut sum_partial = 0i64;
    let mut max_partial = 0i64;
    for n in 1..=k {
        partial += table[(n % k) as usize] as i64;
        sum_partial += partial;
        max_partial = max_partial.max(partial.abs());
    }
    assert_eq!(partial, 0, "character must be non-principal");
    let mean = sum_partial as f64 / k as f64;
    let periods = (terms / k).max(1);
    let t = periods * k;
    let mut value = Compensated::default();
    for p in 0..periods {
        for r in 1..=k {
            let c = table[(r % k) as usize];
            if c != 0 {
                value.add(c as f64 / (p * k + r) as f64);
            }
        }
    }
    let t1 = (t + 1) as f64;
    LValue {
        value: value.value() + mean / t1,
        error_bound: 2.0 * max_partial as f64 * k as f64 / (t1 * t1),
        terms: t,
    }
}
