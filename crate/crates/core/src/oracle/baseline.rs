//! Quadratic fields over Q counted by discriminant.

use super::OracleError;

pub const BASELINE_MAX_X: u64 = 100_000_000;

/// Squarefree indicator for `0..=n` (entry 0 unused).
fn squarefree_table(n: usize) -> Vec<bool> {
    let mut sf = vec![true; n + 1];
    let mut q = 2usize;
    while q * q <= n {
        let sq = q * q;
        let mut j = sq;
        while j <= n {
            sf[j] = false;
            j += sq;
        }
        q += 1;
    }
    sf
}

/// Number of fundamental discriminants `d != 1` with `|d| <= x`.
pub fn rational_baseline(x: u64) -> Result<u64, OracleError> {
    if x > BASELINE_MAX_X {
        return Err(OracleError::CapacityExceeded {
            n: x,
            max: BASELINE_MAX_X,
        });
    }
    let sf = squarefree_table(x as usize);
    let mut count = 0u64;
    for m in 1..=x {
        if !sf[m as usize] {
            continue;
        }
        // d = m or d = -m, squarefree and 1 mod 4
        match m % 4 {
            1 if m > 1 => count += 1,
            3 => count += 1,
            _ => {}
        }
        // d = 4m' with m' = ±m congruent to 2 or 3 mod 4
        if 4 * m <= x {
            count += match m % 4 {
                2 => 2,
                1 | 3 => 1,
                _ => 0,
            };
        }
    }
    Ok(count)
}
