//! Truncated Dirichlet series of the counting functions.
//!
//! `a0[n]` counts characters of the finite unit ideles whose conductor has
//! norm `n`; `a-[n]` counts them with sign `+1` for even and `-1` for odd.
//! Both come out of one in-place Euler-product convolution over the prime
//! ideals of K. The number of quadratic extensions with absolute discriminant
//! `d_K^2 n` is then `(a0[n] + a-[n]) / 2`.

use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::localdata::{local_factor, LocalError};
use crate::quadfield::{prime_ideals_up_to, FieldSpec, PrimeIdeal};

pub const DEFAULT_MAX_N: u64 = 100_000_000;
pub const MAX_N_ENV: &str = "QUADTALLY_MAX_N";

/// Capacity bound, overridable through `QUADTALLY_MAX_N`.
pub fn max_n() -> u64 {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("N = {n} exceeds the capacity {max} (set {MAX_N_ENV} to raise it)")]
    CapacityExceeded { n: u64, max: u64 },
    #[error("a0[{n}] + a-[{n}] = {a0} + {aminus} is odd")]
    ParityViolation { n: u64, a0: i64, aminus: i64 },
    #[error("X = {x} is beyond the array bound {n}")]
    OutOfRange { x: u64, n: u64 },
    #[error("coefficient overflow at n = {n}")]
    Overflow { n: u64 },
    #[error(transparent)]
    Local(#[from] LocalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Ordinary,
    Signed,
    ExtensionCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IndexMeaning {
    ConductorNorm,
    AbsoluteDiscriminant,
}

/// Coefficients `a[1..=N]`.
///
/// Values are stored densely at multiples of `stride`; every other index is
/// zero. Extension counts use `stride = d_K^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffArray {
    field_d: i64,
    n: u64,
    stride: u64,
    mode: Mode,
    index_meaning: IndexMeaning,
    /// `data[k]` is the coefficient at `k * stride`; `data[0]` is unused.
    data: Vec<i64>,
}

#[derive(Serialize)]
struct Header {
    #[serde(rename = "field_D")]
    field_d: i64,
    #[serde(rename = "N")]
    n: u64,
    mode: Mode,
    index_meaning: IndexMeaning,
}

impl CoeffArray {
    /// Conductor-norm array from dense values, `values[0]` ignored.
    pub fn from_dense(field_d: i64, mode: Mode, values: Vec<i64>) -> Self {
        let n = values.len().saturating_sub(1) as u64;
        Self {
            field_d,
            n,
            stride: 1,
            mode,
            index_meaning: IndexMeaning::ConductorNorm,
            data: values,
        }
    }

    pub fn field_d(&self) -> i64 {
        self.field_d
    }
    pub fn bound(&self) -> u64 {
        self.n
    }
    pub fn stride(&self) -> u64 {
        self.stride
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn index_meaning(&self) -> IndexMeaning {
        self.index_meaning
    }

    /// `a[m]`, zero outside `1..=N`.
    pub fn get(&self, m: u64) -> i64 {
        if m == 0 || m > self.n || m % self.stride != 0 {
            return 0;
        }
        self.data[(m / self.stride) as usize]
    }

    /// The stored values, `k -> a[k * stride]`, for `k >= 1`.
    pub fn compressed(&self) -> &[i64] {
        &self.data[1..]
    }

    /// Indices and values at multiples of the stride.
    pub fn entries(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .skip(1)
            .map(move |(k, &v)| (k as u64 * self.stride, v))
    }

    pub fn header_json(&self) -> serde_json::Value {
        serde_json::to_value(Header {
            field_d: self.field_d,
            n: self.n,
            mode: self.mode,
            index_meaning: self.index_meaning,
        })
        .expect("header serializes")
    }
}

fn check_capacity(n: u64) -> Result<(), SeriesError> {
    let max = max_n();
    if n > max {
        return Err(SeriesError::CapacityExceeded { n, max });
    }
    Ok(())
}

/// Local polynomial of one prime ideal: `(q^f, m, m - 2 m_odd)` for `f >= 1`.
fn local_terms(field: &FieldSpec, prime: &PrimeIdeal, n: u64) -> Result<Vec<(u64, i64, i64)>, SeriesError> {
    let spec = local_factor(field, prime)?;
    Ok(spec
        .rows
        .iter()
        .filter(|r| r.f > 0)
        .filter_map(|r| {
            let qf = prime.norm.checked_pow(r.f)?;
            (qf <= n).then_some((qf, r.m as i64, r.m as i64 - 2 * r.m_odd as i64))
        })
        .collect())
}

/// Multiplies the pair series by one local polynomial, in place.
fn convolve_prime(pairs: &mut [(i64, i64)], q: u64, terms: &[(u64, i64, i64)]) -> Result<(), SeriesError> {
    let n = (pairs.len() - 1) as u64;
    // descending so that a[n / q^f] is still the old value
    let mut k = n / q;
    while k >= 1 {
        let idx = k * q;
        let (mut s0, mut s1) = pairs[idx as usize];
        for &(qf, c0, c1) in terms {
            if idx % qf != 0 {
                continue;
            }
            let (b0, b1) = pairs[(idx / qf) as usize];
            s0 = c0
                .checked_mul(b0)
                .and_then(|v| v.checked_add(s0))
                .ok_or(SeriesError::Overflow { n: idx })?;
            s1 = c1
                .checked_mul(b1)
                .and_then(|v| v.checked_add(s1))
                .ok_or(SeriesError::Overflow { n: idx })?;
        }
        pairs[idx as usize] = (s0, s1);
        k -= 1;
    }
    Ok(())
}

fn euler_product(field: &FieldSpec, n: u64, primes: &[PrimeIdeal]) -> Result<Vec<(i64, i64)>, SeriesError> {
    let mut pairs = vec![(0i64, 0i64); n as usize + 1];
    if n >= 1 {
        pairs[1] = (1, 1);
    }
    for prime in primes {
        let terms = local_terms(field, prime, n)?;
        convolve_prime(&mut pairs, prime.norm, &terms)?;
    }
    Ok(pairs)
}

fn dirichlet_product(a: &[(i64, i64)], b: &[(i64, i64)]) -> Result<Vec<(i64, i64)>, SeriesError> {
    let n = a.len() - 1;
    let mut out = vec![(0i64, 0i64); n + 1];
    for i in 1..=n {
        let (x0, x1) = a[i];
        if x0 == 0 && x1 == 0 {
            continue;
        }
        for j in 1..=n / i {
            let (y0, y1) = b[j];
            let slot = &mut out[i * j];
            slot.0 = x0
                .checked_mul(y0)
                .and_then(|v| v.checked_add(slot.0))
                .ok_or(SeriesError::Overflow { n: (i * j) as u64 })?;
            slot.1 = x1
                .checked_mul(y1)
                .and_then(|v| v.checked_add(slot.1))
                .ok_or(SeriesError::Overflow { n: (i * j) as u64 })?;
        }
    }
    Ok(out)
}

/// `(a0, a-)` as conductor-norm arrays up to `n`.
pub fn euler_pairs(field: &FieldSpec, n: u64) -> Result<(CoeffArray, CoeffArray), SeriesError> {
    euler_pairs_with_workers(field, n, 1)
}

/// As [`euler_pairs`], splitting the prime ideals across `workers` threads.
///
/// Each worker builds the Euler product over its share of the primes; the
/// partial series are merged by Dirichlet convolution in worker order, so the
/// output is identical for every worker count.
pub fn euler_pairs_with_workers(field: &FieldSpec, n: u64, workers: usize) -> Result<(CoeffArray, CoeffArray), SeriesError> {
    check_capacity(n)?;
    let primes = if n >= 2 { prime_ideals_up_to(field, n) } else { Vec::new() };
    let workers = workers.max(1).min(primes.len().max(1));
    let pairs = if workers == 1 {
        euler_product(field, n, &primes)?
    } else {
        let shares: Vec<Vec<PrimeIdeal>> = (0..workers)
            .map(|w| primes.iter().copied().skip(w).step_by(workers).collect())
            .collect();
        let partials: Vec<Result<Vec<(i64, i64)>, SeriesError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = shares
                .iter()
                .map(|share| scope.spawn(move || euler_product(field, n, share)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut iter = partials.into_iter();
        let mut acc = iter.next().unwrap()?;
        for part in iter {
            acc = dirichlet_product(&acc, &part?)?;
        }
        acc
    };
    let (a0, am): (Vec<i64>, Vec<i64>) = pairs.into_iter().unzip();
    Ok((
        CoeffArray::from_dense(field.d(), Mode::Ordinary, a0),
        CoeffArray::from_dense(field.d(), Mode::Signed, am),
    ))
}

/// Unsigned (`a0`) or signed (`a-`) coefficients up to `n`.
pub fn euler_coefficients(field: &FieldSpec, n: u64, signed: bool) -> Result<CoeffArray, SeriesError> {
    let (a0, am) = euler_pairs(field, n)?;
    Ok(if signed { am } else { a0 })
}

/// Extension counts from a precomputed pair of arrays.
pub fn extension_counts_from(field: &FieldSpec, a0: &CoeffArray, am: &CoeffArray) -> Result<CoeffArray, SeriesError> {
    let x = a0.bound();
    let mut data = vec![0i64; x as usize + 1];
    for k in 1..=x {
        let (u, s) = (a0.get(k), am.get(k));
        if (u + s) % 2 != 0 {
            return Err(SeriesError::ParityViolation { n: k, a0: u, aminus: s });
        }
        let count = if field.is_imaginary() { (u + s) / 2 } else { u };
        data[k as usize] = if k == 1 { count - 1 } else { count };
    }
    let stride = field.disc() * field.disc();
    Ok(CoeffArray {
        field_d: field.d(),
        n: stride * x,
        stride,
        mode: Mode::ExtensionCount,
        index_meaning: IndexMeaning::AbsoluteDiscriminant,
        data,
    })
}

/// Number of quadratic extensions of K by absolute discriminant, up to `d_K^2 x`.
pub fn extension_counts(field: &FieldSpec, x: u64) -> Result<CoeffArray, SeriesError> {
    let (a0, am) = euler_pairs(field, x)?;
    extension_counts_from(field, &a0, &am)
}

/// `Σ_{n <= x} a[n]`.
pub fn partial_sum(coeffs: &CoeffArray, x: u64) -> Result<i64, SeriesError> {
    if x > coeffs.n {
        return Err(SeriesError::OutOfRange { x, n: coeffs.n });
    }
    let top = (x / coeffs.stride) as usize;
    Ok(coeffs.data[1..=top].iter().sum())
}

/// Running sums over the stored values: `out[k] = Σ_{j <= k} data[j]`.
pub fn cumulative(coeffs: &CoeffArray) -> Vec<i64> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(coeffs.data.len());
    out.push(0);
    for &v in &coeffs.data[1..] {
        acc += v;
        out.push(acc);
    }
    out
}

/// RFC-4180 rows `n,a0,aminus,even_count` for `n = 1..=N`.
pub fn write_csv<W: Write>(mut w: W, a0: &CoeffArray, am: &CoeffArray) -> io::Result<()> {
    write!(w, "n,a0,aminus,even_count\r\n")?;
    for n in 1..=a0.bound() {
        let (u, s) = (a0.get(n), am.get(n));
        write!(w, "{n},{u},{s},{}\r\n", (u + s).div_euclid(2))?;
    }
    Ok(())
}
