//! Finite quotients `O/π^M` of local rings of integers, element by element.
//!
//! A ring is either `Z/p^k` or `Z/p^k[X]/(X^2 + c1 X + c0)`. Elements are
//! coordinate pairs `b + aX` with both coordinates reduced mod `p^k`. All
//! arithmetic is carried out directly on the pairs.

use std::fmt;

use super::OracleError;

/// Rings larger than this are refused.
pub const MAX_RING_SIZE: u64 = 1_000_000;

/// `b + aX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub b: u64,
    pub a: u64,
}

impl Elem {
    pub const fn scalar(b: u64) -> Self {
        Self { b, a: 0 }
    }
    pub const fn new(b: u64, a: u64) -> Self {
        Self { b, a }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (a, 0) => write!(f, "{a}X"),
            (a, b) => write!(f, "{a}X+{b}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteRing {
    label: String,
    p: u64,
    k: u32,
    modulus: u64,
    /// Monic `X^2 + c1 X + c0`, coefficients reduced mod `p^k`.
    poly: Option<(u64, u64)>,
    uniformizer: Elem,
    ramification: u32,
    residue_size: u64,
    designated: Vec<(String, Elem)>,
}

impl FiniteRing {
    /// `Z/p^k` with uniformizer `p`.
    pub fn integers_mod(p: u64, k: u32) -> Self {
        let modulus = p.pow(k);
        Self {
            label: format!("Z/{modulus}Z"),
            p,
            k,
            modulus,
            poly: None,
            uniformizer: Elem::scalar(p % modulus),
            ramification: 1,
            residue_size: p,
            designated: vec![("-1".into(), Elem::scalar(modulus - 1))],
        }
    }

    /// `Z/p^k[X]/(X^2 + c1 X + c0)`.
    ///
    /// `c1` and `c0` may be negative; they are reduced mod `p^k`.
    pub fn quadratic(
        p: u64,
        k: u32,
        c1: i64,
        c0: i64,
        uniformizer: Elem,
        ramification: u32,
    ) -> Self {
        let modulus = p.pow(k);
        let m = modulus as i64;
        let residue_size = if ramification == 2 { p } else { p * p };
        let label = format!(
            "Z/{modulus}Z[X]/(X^2{}{})",
            fmt_coeff(c1, "X"),
            fmt_coeff(c0, "")
        );
        Self {
            label,
            p,
            k,
            modulus,
            poly: Some((c1.rem_euclid(m) as u64, c0.rem_euclid(m) as u64)),
            uniformizer,
            ramification,
            residue_size,
            designated: vec![("-1".into(), Elem::scalar(modulus - 1))],
        }
    }

    /// `Z/2^k[X]/(X^2+X+1)`, the unramified quadratic extension of Z_2.
    pub fn unramified_two(k: u32) -> Self {
        Self::quadratic(2, k, 1, 1, Elem::scalar(2), 1).with_unit("zeta3", Elem::new(0, 1))
    }

    /// `Z/2^k[X]/(X^2+1)`, uniformizer `1+X`; designates `i = X`.
    pub fn gaussian_two(k: u32) -> Self {
        Self::quadratic(2, k, 0, 1, Elem::new(1, 1), 2).with_unit("i", Elem::new(0, 1))
    }

    /// `Z/2^k[X]/(X^2+2)`, uniformizer `X`.
    pub fn sqrt_minus_two(k: u32) -> Self {
        Self::quadratic(2, k, 0, 2, Elem::new(0, 1), 2)
    }

    /// Adds a unit whose character values are recorded.
    pub fn with_unit(mut self, name: &str, unit: Elem) -> Self {
        self.designated.push((name.into(), self.reduce(unit)));
        self
    }

    pub fn with_label(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn coefficient_exponent(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn uniformizer(&self) -> Elem {
        self.uniformizer
    }
    pub fn ramification(&self) -> u32 {
        self.ramification
    }
    pub fn residue_size(&self) -> u64 {
        self.residue_size
    }
    pub fn designated_units(&self) -> &[(String, Elem)] {
        &self.designated
    }
    pub fn is_quadratic(&self) -> bool {
        self.poly.is_some()
    }

    /// `M` such that the ring is `O/π^M`.
    pub fn precision(&self) -> u32 {
        self.ramification * self.k
    }

    pub fn size(&self) -> u64 {
        if self.poly.is_some() {
            self.modulus * self.modulus
        } else {
            self.modulus
        }
    }

    pub fn check_size(&self) -> Result<(), OracleError> {
        if self.size() > MAX_RING_SIZE {
            return Err(OracleError::TooLarge {
                ring: self.label.clone(),
                size: self.size(),
            });
        }
        Ok(())
    }

    pub fn index(&self, e: Elem) -> usize {
        (e.a * self.modulus + e.b) as usize
    }

    pub fn elem(&self, index: usize) -> Elem {
        let i = index as u64;
        Elem {
            b: i % self.modulus,
            a: i / self.modulus,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size() as usize).map(|i| self.elem(i))
    }

    fn reduce(&self, e: Elem) -> Elem {
        let a = if self.poly.is_some() { e.a % self.modulus } else { 0 };
        Elem {
            b: e.b % self.modulus,
            a,
        }
    }

    pub fn one(&self) -> Elem {
        Elem::scalar(1 % self.modulus)
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let m = self.modulus;
        Elem {
            b: (x.b + y.b) % m,
            a: (x.a + y.a) % m,
        }
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        let m = self.modulus;
        Elem {
            b: (x.b + m - y.b) % m,
            a: (x.a + m - y.a) % m,
        }
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let m = self.modulus as u128;
        let (xb, xa, yb, ya) = (x.b as u128, x.a as u128, y.b as u128, y.a as u128);
        match self.poly {
            None => Elem::scalar(((xb * yb) % m) as u64),
            Some((c1, c0)) => {
                // X^2 = -c1 X - c0
                let top = (xa * ya) % m;
                let mid = (xa * yb + xb * ya) % m;
                let low = (xb * yb) % m;
                let c1 = c1 as u128;
                let c0 = c0 as u128;
                let a = (mid + m - (top * c1) % m) % m;
                let b = (low + m - (top * c0) % m) % m;
                Elem {
                    b: b as u64,
                    a: a as u64,
                }
            }
        }
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Membership bitmap of the ideal `π^f R`.
    pub fn ideal_power(&self, f: u32) -> Vec<bool> {
        let pi_f = self.pow(self.uniformizer, f as u64);
        let mut member = vec![false; self.size() as usize];
        for r in self.elements() {
            member[self.index(self.mul(pi_f, r))] = true;
        }
        member
    }

    /// Checks the commutative ring axioms on every pair and triple.
    pub fn verify_axioms(&self) -> bool {
        let elems: Vec<Elem> = self.elements().collect();
        let zero = Elem::scalar(0);
        for &x in &elems {
            if self.mul(x, self.one()) != x || self.add(x, zero) != x {
                return false;
            }
            for &y in &elems {
                if self.mul(x, y) != self.mul(y, x) || self.add(x, y) != self.add(y, x) {
                    return false;
                }
                for &z in &elems {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return false;
                    }
                    if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn fmt_coeff(c: i64, var: &str) -> String {
    match c {
        0 => String::new(),
        1 if !var.is_empty() => format!("+{var}"),
        -1 if !var.is_empty() => format!("-{var}"),
        c if c > 0 => format!("+{c}{var}"),
        c => format!("{c}{var}"),
    }
}
