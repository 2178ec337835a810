//! Modular helpers private to the oracle.

pub fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Euler's criterion for an odd prime `p`: 1, `p - 1`, or 0.
pub fn euler_criterion(a: i64, p: u64) -> u64 {
    let a = a.rem_euclid(p as i64) as u64;
    mod_pow(a, (p - 1) / 2, p)
}

/// A square root of the quadratic residue `a` modulo the odd prime `p`.
pub fn sqrt_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    // Tonelli-Shanks
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul(b, b);
        }
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    r
}

/// Primes up to `n`, sieving odd numbers only.
pub fn odd_sieve_primes(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n >= 2 {
        out.push(2);
    }
    if n < 3 {
        return out;
    }
    let half = ((n - 1) / 2) as usize; // index i stands for 2i + 1
    let mut marked = vec![false; half + 1];
    let mut i = 1;
    while i <= half {
        if !marked[i] {
            let p = 2 * i + 1;
            out.push(p as u64);
            let mut j = (p * p - 1) / 2;
            while j <= half {
                marked[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    out
}
