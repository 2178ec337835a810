//! Arithmetic of the base field K = Q(√D).
//!
//! Everything here is exact: class numbers come from reduced binary quadratic
//! forms, fundamental units from the continued fraction of the canonical
//! generator of the ring of integers. The scope gate in [`validate_field`]
//! admits exactly the fields the counting machinery covers:
//!
//! * `Q(√-p)` with `p > 3` prime and `p ≡ 3 (mod 4)`,
//! * the special fields `Q(i)`, `Q(√-2)`, `Q(√-3)`,
//! * `Q(√p)` with `p ≡ 1 (mod 4)` prime (these carry a unit of norm -1).
//!
//! Two discriminants are kept side by side: `d_K > 0` and the signed
//! fundamental discriminant `Δ = ±d_K` used for every Kronecker character.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::primes::{is_prime, isqrt, primes_up_to, smallest_factor, square_factor};

/// Default bound on `|Δ|` for class number computations.
pub const DEFAULT_MAX_DISC: u64 = 1_000_000;
/// Default bit bound for the fundamental unit's coordinates.
pub const DEFAULT_UNIT_BITS: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldLimits {
    pub max_abs_disc: u64,
    pub max_unit_bits: u64,
}

impl Default for FieldLimits {
    fn default() -> Self {
        Self {
            max_abs_disc: DEFAULT_MAX_DISC,
            max_unit_bits: DEFAULT_UNIT_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("D = 0 does not define a field")]
    Zero,
    #[error("D = {d} is not squarefree ({factor}^2 divides it)")]
    NotSquarefree { d: i64, factor: u64 },
    #[error("Q(√{d}) is out of scope: {reason}")]
    OutOfScope { d: i64, reason: ScopeReason },
    #[error("|discriminant| = {disc} exceeds the configured bound {bound}")]
    Overflow { disc: u64, bound: u64 },
    #[error("fundamental unit of Q(√{d}) exceeds {bits} bits")]
    UnitTooLarge { d: i64, bits: u64 },
    #[error("{0}")]
    Domain(String),
}

/// Why a squarefree `D` falls outside the covered fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScopeReason {
    /// `D = 1` gives Q itself.
    Rational,
    /// The class number computed from reduced forms is even.
    EvenClassNumber { h: u64, cause: EvenCause },
    /// Real field whose fundamental unit has norm +1.
    NoNormMinusOneUnit { residue_mod4: u64 },
    /// Real field in which 2 ramifies.
    TwoRamified,
    /// Odd class number but not one of the covered shapes.
    Unclassified { h: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenCause {
    /// `|D|` is composite; `factor` is its smallest prime factor.
    Composite { factor: u64 },
    /// `|D| = p` prime in the wrong residue class mod 4.
    WrongCongruence { p: u64, residue_mod4: u64 },
}

impl fmt::Display for ScopeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScopeReason::Rational => write!(f, "D = 1 gives the rational field"),
            ScopeReason::EvenClassNumber { h, cause } => {
                write!(f, "class number {h} is even (")?;
                match cause {
                    EvenCause::Composite { factor } => {
                        write!(f, "composite: divisible by {factor}")?
                    }
                    EvenCause::WrongCongruence { p, residue_mod4 } => {
                        write!(f, "wrong congruence: {p} ≡ {residue_mod4} (mod 4)")?
                    }
                }
                write!(f, ")")
            }
            ScopeReason::NoNormMinusOneUnit { residue_mod4 } => write!(
                f,
                "no unit of norm -1: fundamental unit has norm +1 (wrong congruence: D ≡ {residue_mod4} (mod 4))"
            ),
            ScopeReason::TwoRamified => write!(f, "2 ramifies in the real field"),
            ScopeReason::Unclassified { h } => {
                write!(f, "class number {h} is odd but the field shape is not covered")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialField {
    /// Q(i)
    I,
    /// Q(√-2)
    SqrtMinus2,
    /// Q(√-3)
    SqrtMinus3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    ImaginaryOddClass,
    SpecialImaginary(SpecialField),
    RealNormMinusOne,
}

impl FieldKind {
    pub fn is_imaginary(self) -> bool {
        !matches!(self, FieldKind::RealNormMinusOne)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::ImaginaryOddClass => "ImaginaryOddClass",
            FieldKind::SpecialImaginary(SpecialField::I) => "SpecialImaginary(i)",
            FieldKind::SpecialImaginary(SpecialField::SqrtMinus2) => "SpecialImaginary(sqrt-2)",
            FieldKind::SpecialImaginary(SpecialField::SqrtMinus3) => "SpecialImaginary(sqrt-3)",
            FieldKind::RealNormMinusOne => "RealNormMinusOne",
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FieldKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The unit `(x + y√D) / sigma` with its norm.
///
/// `x` and `y` are serialized as decimal strings since they can exceed 64 bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalUnit {
    #[serde(serialize_with = "ser_biguint")]
    pub x: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub y: BigUint,
    pub sigma: u8,
    pub norm: i8,
}

impl FundamentalUnit {
    /// `log ε`, evaluated from the exact coordinates.
    pub fn log(&self, d: i64) -> f64 {
        let bits = self.x.bits().max(self.y.bits());
        let shift = bits.saturating_sub(900);
        let xf = (&self.x >> shift).to_f64().unwrap_or(f64::INFINITY);
        let yf = (&self.y >> shift).to_f64().unwrap_or(f64::INFINITY);
        (xf + yf * (d as f64).sqrt()).ln() + shift as f64 * std::f64::consts::LN_2
            - (self.sigma as f64).ln()
    }
}

/// A validated base field. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSpec {
    #[serde(rename = "D")]
    d: i64,
    kind: FieldKind,
    #[serde(rename = "d_K")]
    disc: u64,
    signed_disc: i64,
    #[serde(rename = "h")]
    class_number: u64,
    #[serde(rename = "w")]
    roots_of_unity: u32,
    fund_unit: Option<FundamentalUnit>,
    regulator: f64,
}

impl FieldSpec {
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn kind(&self) -> FieldKind {
        self.kind
    }
    /// `d_K`, always positive.
    pub fn disc(&self) -> u64 {
        self.disc
    }
    /// `Δ = ±d_K` with the sign of `D`.
    pub fn signed_disc(&self) -> i64 {
        self.signed_disc
    }
    pub fn class_number(&self) -> u64 {
        self.class_number
    }
    pub fn roots_of_unity(&self) -> u32 {
        self.roots_of_unity
    }
    pub fn fund_unit(&self) -> Option<&FundamentalUnit> {
        self.fund_unit.as_ref()
    }
    /// `log ε` for real fields, 0 for imaginary ones.
    pub fn regulator(&self) -> f64 {
        self.regulator
    }
    pub fn is_imaginary(&self) -> bool {
        self.kind.is_imaginary()
    }
}

/// Signed fundamental discriminant of Q(√D) for squarefree `D != 0, 1`.
pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

fn check_squarefree(d: i64) -> Result<(), FieldError> {
    if d == 0 {
        return Err(FieldError::Zero);
    }
    match square_factor(d.unsigned_abs()) {
        Some(factor) => Err(FieldError::NotSquarefree { d, factor }),
        None => Ok(()),
    }
}

/// Validates `D` against the covered fields with default limits.
pub fn validate_field(d: i64) -> Result<FieldSpec, FieldError> {
    validate_field_with(d, &FieldLimits::default())
}

pub fn validate_field_with(d: i64, limits: &FieldLimits) -> Result<FieldSpec, FieldError> {
    check_squarefree(d)?;
    if d == 1 {
        return Err(FieldError::OutOfScope {
            d,
            reason: ScopeReason::Rational,
        });
    }
    let signed_disc = fundamental_discriminant(d);
    let disc = signed_disc.unsigned_abs();
    let out_of_scope = |reason| Err(FieldError::OutOfScope { d, reason });

    if d < 0 {
        let h = class_number_with(d, limits)?;
        let n = d.unsigned_abs();
        let kind = match d {
            -1 => FieldKind::SpecialImaginary(SpecialField::I),
            -2 => FieldKind::SpecialImaginary(SpecialField::SqrtMinus2),
            -3 => FieldKind::SpecialImaginary(SpecialField::SqrtMinus3),
            _ if h % 2 == 0 => {
                let cause = if is_prime(n) {
                    EvenCause::WrongCongruence {
                        p: n,
                        residue_mod4: n % 4,
                    }
                } else {
                    EvenCause::Composite {
                        factor: smallest_factor(n),
                    }
                };
                return out_of_scope(ScopeReason::EvenClassNumber { h, cause });
            }
            _ if is_prime(n) && n % 4 == 3 => FieldKind::ImaginaryOddClass,
            _ => return out_of_scope(ScopeReason::Unclassified { h }),
        };
        let roots_of_unity = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        return Ok(FieldSpec {
            d,
            kind,
            disc,
            signed_disc,
            class_number: h,
            roots_of_unity,
            fund_unit: None,
            regulator: 0.0,
        });
    }

    if disc > limits.max_abs_disc {
        return Err(FieldError::Overflow {
            disc,
            bound: limits.max_abs_disc,
        });
    }
    let unit = fundamental_unit_with_bound(d, limits.max_unit_bits)?;
    if unit.norm == 1 {
        return out_of_scope(ScopeReason::NoNormMinusOneUnit {
            residue_mod4: d.rem_euclid(4) as u64,
        });
    }
    if d % 4 != 1 {
        return out_of_scope(ScopeReason::TwoRamified);
    }
    let h = real_class_number(signed_disc, unit.norm)?;
    let n = d as u64;
    if h % 2 == 0 {
        let cause = if is_prime(n) {
            EvenCause::WrongCongruence {
                p: n,
                residue_mod4: n % 4,
            }
        } else {
            EvenCause::Composite {
                factor: smallest_factor(n),
            }
        };
        return out_of_scope(ScopeReason::EvenClassNumber { h, cause });
    }
    if !is_prime(n) {
        return out_of_scope(ScopeReason::Unclassified { h });
    }
    let regulator = unit.log(d);
    Ok(FieldSpec {
        d,
        kind: FieldKind::RealNormMinusOne,
        disc,
        signed_disc,
        class_number: h,
        roots_of_unity: 2,
        fund_unit: Some(unit),
        regulator,
    })
}

/// Kronecker symbol `(a / n)` for `n >= 0`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let v = n.trailing_zeros();
    let mut n = n >> v;
    let mut result: i8 = 1;
    if v % 2 == 1 {
        // (a/2) depends on a mod 8
        result = match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    if n == 1 {
        return result;
    }
    // Jacobi symbol for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: u64,
    pub splitting: Splitting,
    pub ideal_norms: Vec<u64>,
}

/// Decomposition of the rational prime `p` in K.
pub fn splitting_type(field: &FieldSpec, p: u64) -> PrimeSplitting {
    let splitting = match kronecker(field.signed_disc, p) {
        0 => Splitting::Ramified,
        1 => Splitting::Split,
        _ => Splitting::Inert,
    };
    let ideal_norms = match splitting {
        Splitting::Split => vec![p, p],
        Splitting::Inert => vec![p * p],
        Splitting::Ramified => vec![p],
    };
    PrimeSplitting {
        p,
        splitting,
        ideal_norms,
    }
}

/// A prime ideal of O_K, identified by its norm and the rational prime below.
///
/// The two primes above a split `p` are distinguished only by `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub norm: u64,
    pub p: u64,
    pub index: u8,
    pub splitting: Splitting,
}

/// All prime ideals of norm `<= n`, ordered by norm, then by `p`.
pub fn prime_ideals_up_to(field: &FieldSpec, n: u64) -> Vec<PrimeIdeal> {
    let mut out = Vec::new();
    for p in primes_up_to(n) {
        let ps = splitting_type(field, p);
        for (index, &norm) in ps.ideal_norms.iter().enumerate() {
            if norm <= n {
                out.push(PrimeIdeal {
                    norm,
                    p,
                    index: index as u8,
                    splitting: ps.splitting,
                });
            }
        }
    }
    out.sort();
    out
}

/// Class number of Q(√D) with the default discriminant bound.
pub fn class_number(d: i64) -> Result<u64, FieldError> {
    class_number_with(d, &FieldLimits::default())
}

pub fn class_number_with(d: i64, limits: &FieldLimits) -> Result<u64, FieldError> {
    check_squarefree(d)?;
    if d == 1 {
        return Err(FieldError::Domain("Q(√1) is not a quadratic field".into()));
    }
    let disc = fundamental_discriminant(d);
    if disc.unsigned_abs() > limits.max_abs_disc {
        return Err(FieldError::Overflow {
            disc: disc.unsigned_abs(),
            bound: limits.max_abs_disc,
        });
    }
    if d < 0 {
        Ok(imaginary_class_number(disc))
    } else {
        let norm = unit_norm(d);
        real_class_number(disc, norm)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

/// Counts primitive reduced positive definite forms of discriminant `disc < 0`.
fn imaginary_class_number(disc: i64) -> u64 {
    let n = disc.unsigned_abs() as i64;
    let mut h = 0;
    let mut b = n % 2;
    while 3 * b * b <= n {
        let ac = (b * b + n) / 4;
        let mut a = b.max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let c = ac / a;
                if gcd(gcd(a, b), c) == 1 {
                    h += if b == 0 || a == b || a == c { 1 } else { 2 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    h
}

type Form = (i64, i64, i64);

/// Reduced indefinite forms of discriminant `disc > 0` (non-square).
fn reduced_indefinite_forms(disc: i64) -> Vec<Form> {
    let mut forms = Vec::new();
    let s = isqrt(disc as u64) as i64;
    let mut b = disc % 2;
    if b == 0 {
        b = 2;
    }
    while b * b < disc {
        let ac = (disc - b * b) / 4; // = -a*c
        for a_abs in 1..=ac.min((s + b) / 2 + 1) {
            if ac % a_abs != 0 {
                continue;
            }
            let two_a = 2 * a_abs;
            // sqrt(disc) - b < 2|a| < sqrt(disc) + b
            let lower_ok = (two_a + b) * (two_a + b) > disc;
            let upper_ok = two_a <= b || (two_a - b) * (two_a - b) < disc;
            if !(lower_ok && upper_ok) {
                continue;
            }
            let c_abs = ac / a_abs;
            for sign in [1, -1] {
                let (a, c) = (sign * a_abs, -sign * c_abs);
                if gcd(gcd(a, b), c) == 1 {
                    forms.push((a, b, c));
                }
            }
        }
        b += 2;
    }
    forms
}

/// One step of the reduction operator on a reduced indefinite form.
fn rho(form: Form, disc: i64, isqrt_disc: i64) -> Form {
    let (_, b, c) = form;
    let m = 2 * c.abs();
    let r = (isqrt_disc + b).rem_euclid(m);
    let b2 = isqrt_disc - r;
    let a2 = (b2 * b2 - disc) / (4 * c);
    (c, b2, a2)
}

/// Number of cycles of reduced forms, i.e. the narrow class number.
fn narrow_class_number(disc: i64) -> u64 {
    let forms = reduced_indefinite_forms(disc);
    let s = isqrt(disc as u64) as i64;
    let index: HashMap<Form, usize> = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut f = forms[start];
        loop {
            let i = index[&f];
            if seen[i] {
                break;
            }
            seen[i] = true;
            f = rho(f, disc, s);
        }
    }
    cycles
}

fn real_class_number(disc: i64, unit_norm: i8) -> Result<u64, FieldError> {
    let narrow = narrow_class_number(disc);
    Ok(if unit_norm == -1 { narrow } else { narrow / 2 })
}

/// Continued fraction of `(P0 + √D)/Q0`, the canonical generator of O_K.
struct QuadraticCf {
    d: i64,
    s: i64,
    p: i64,
    q: i64,
}

impl QuadraticCf {
    fn new(d: i64) -> Self {
        let (p, q) = if d % 4 == 1 { (1, 2) } else { (0, 1) };
        Self {
            d,
            s: isqrt(d as u64) as i64,
            p,
            q,
        }
    }

    fn state(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// Emits the next partial quotient and advances.
    fn step(&mut self) -> i64 {
        let a = (self.p + self.s) / self.q;
        let p = a * self.q - self.p;
        self.q = (self.d - p * p) / self.q;
        self.p = p;
        a
    }
}

/// Norm of the fundamental unit from the parity of the period.
fn unit_norm(d: i64) -> i8 {
    let mut cf = QuadraticCf::new(d);
    cf.step();
    let first = cf.state();
    let mut len = 0u64;
    loop {
        cf.step();
        len += 1;
        if cf.state() == first {
            break;
        }
    }
    if len % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Fundamental unit of Q(√D), `D > 1` squarefree, default bit bound.
pub fn fundamental_unit(d: i64) -> Result<FundamentalUnit, FieldError> {
    fundamental_unit_with_bound(d, DEFAULT_UNIT_BITS)
}

pub fn fundamental_unit_with_bound(d: i64, max_bits: u64) -> Result<FundamentalUnit, FieldError> {
    check_squarefree(d)?;
    if d <= 1 {
        return Err(FieldError::Domain(format!(
            "fundamental unit requires D > 1, got {d}"
        )));
    }
    let mut cf = QuadraticCf::new(d);
    let (p0, q0) = cf.state();

    // Convergents h_k / k_k.
    let a0 = BigUint::from(cf.step() as u64);
    let (mut h_prev, mut h) = (BigUint::one(), a0);
    let (mut k_prev, mut k) = (BigUint::zero(), BigUint::one());
    let first = cf.state();
    let mut period = 0u64;
    loop {
        let a = BigUint::from(cf.step() as u64);
        period += 1;
        if cf.state() == first {
            break;
        }
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        if h.bits() > max_bits {
            return Err(FieldError::UnitTooLarge { d, bits: max_bits });
        }
    }

    // ε = p - q·conj(ξ0) = (p·Q0 - q·P0 + q√D) / Q0
    let mut x = &h * BigUint::from(q0 as u64) - &k * BigUint::from(p0 as u64);
    let mut y = k;
    let mut sigma = q0 as u8;
    if sigma == 2 && (&x % 2u8).is_zero() && (&y % 2u8).is_zero() {
        x >>= 1;
        y >>= 1;
        sigma = 1;
    }
    let norm: i8 = if period % 2 == 1 { -1 } else { 1 };

    let lhs = &x * &x;
    let rhs = &y * &y * BigUint::from(d as u64);
    let sigma_sq = BigUint::from((sigma as u64).pow(2));
    let consistent = if norm == 1 {
        lhs == rhs + sigma_sq
    } else {
        lhs + sigma_sq == rhs
    };
    assert!(consistent, "continued fraction produced a non-unit for D = {d}");
    if x.bits().max(y.bits()) > max_bits {
        return Err(FieldError::UnitTooLarge { d, bits: max_bits });
    }
    Ok(FundamentalUnit { x, y, sigma, norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reduced-form enumeration straight from the definition, no shortcuts.
    fn brute_class_number(disc: i64) -> u64 {
        let n = disc.abs();
        let mut h = 0;
        for a in 1..=n {
            for b in -a..=a {
                if (b * b - disc) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - disc) / (4 * a);
                if c < a {
                    continue;
                }
                if b < 0 && (a == -b || a == c) {
                    continue;
                }
                if gcd(gcd(a, b.abs()), c) == 1 {
                    h += 1;
                }
            }
        }
        h
    }

    #[test]
    fn imaginary_class_numbers_match_brute_force() {
        for d in [-1i64, -2, -3, -5, -6, -7, -11, -13, -15, -19, -21, -23, -47, -71, -163] {
            let disc = fundamental_discriminant(d);
            assert_eq!(
                class_number(d).unwrap(),
                brute_class_number(disc),
                "D = {d}"
            );
        }
        assert_eq!(class_number(-7).unwrap(), 1);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-1).unwrap(), 1);
        assert_eq!(class_number(-5).unwrap(), 2);
    }

    #[test]
    fn real_class_numbers() {
        // 79 and 229 are the first cases with h = 3 in their congruence class.
        for (d, h) in [(2, 1), (3, 1), (5, 1), (10, 2), (15, 2), (65, 2), (79, 3), (229, 3), (401, 5)] {
            assert_eq!(class_number(d).unwrap(), h, "D = {d}");
        }
    }

    #[test]
    fn fundamental_units() {
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.sigma, u.norm), (1u8.into(), 1u8.into(), 2, -1));
        let u = fundamental_unit(2).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.sigma, u.norm), (1u8.into(), 1u8.into(), 1, -1));
        let u = fundamental_unit(13).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.sigma, u.norm), (3u8.into(), 1u8.into(), 2, -1));
        let u = fundamental_unit(3).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.sigma, u.norm), (2u8.into(), 1u8.into(), 1, 1));
        let u = fundamental_unit(37).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.sigma, u.norm), (6u8.into(), 1u8.into(), 1, -1));
    }

    /// Smallest solution of x^2 - D y^2 = ±sigma^2 by direct search.
    fn brute_unit(d: i64) -> (u64, u64, u8, i8) {
        let sigma: i64 = if d % 4 == 1 { 2 } else { 1 };
        for y in 1i64.. {
            for x in 0..=(y * ((d as f64).sqrt() as i64 + 1)) {
                for norm in [-1i64, 1] {
                    if x * x - d * y * y == norm * sigma * sigma {
                        let (mut x, mut y, mut s) = (x as u64, y as u64, sigma as u8);
                        if s == 2 && x % 2 == 0 && y % 2 == 0 {
                            x /= 2;
                            y /= 2;
                            s = 1;
                        }
                        return (x, y, s, norm as i8);
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn fundamental_units_match_search() {
        for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 21, 29, 33, 37, 41, 53, 61] {
            let u = fundamental_unit(d).unwrap();
            let (x, y, s, n) = brute_unit(d);
            assert_eq!(
                (u.x.to_u64().unwrap(), u.y.to_u64().unwrap(), u.sigma, u.norm),
                (x, y, s, n),
                "D = {d}"
            );
        }
    }

    #[test]
    fn unit_bit_bound_is_enforced() {
        // Q(√94) has fundamental unit 2143295 + 221064√94.
        assert!(matches!(
            fundamental_unit_with_bound(94, 16),
            Err(FieldError::UnitTooLarge { .. })
        ));
        assert!(fundamental_unit_with_bound(94, 64).is_ok());
    }

    #[test]
    fn kronecker_small_cases() {
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-7, 3), -1);
        assert_eq!(kronecker(-7, 1), 1);
        assert_eq!(kronecker(-11, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(2000).into_iter().skip(1) {
            for a in [-163i64, -23, -8, -7, -4, -3, 5, 8, 12, 13, 17] {
                let am = a.rem_euclid(p as i64) as u64;
                let expected = if am == 0 {
                    0
                } else {
                    let squares: std::collections::HashSet<u64> =
                        (1..p).map(|x| x * x % p).collect();
                    if squares.contains(&am) {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(kronecker(a, p), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn validate_examples() {
        let f = validate_field(-7).unwrap();
        assert_eq!(f.kind(), FieldKind::ImaginaryOddClass);
        assert_eq!((f.disc(), f.class_number(), f.roots_of_unity()), (7, 1, 2));

        let f = validate_field(-1).unwrap();
        assert_eq!(f.kind(), FieldKind::SpecialImaginary(SpecialField::I));
        assert_eq!((f.disc(), f.class_number(), f.roots_of_unity()), (4, 1, 4));
        assert_eq!(f.signed_disc(), -4);

        let f = validate_field(-3).unwrap();
        assert_eq!(f.roots_of_unity(), 6);
        let f = validate_field(-2).unwrap();
        assert_eq!((f.disc(), f.signed_disc()), (8, -8));

        let f = validate_field(5).unwrap();
        assert_eq!(f.kind(), FieldKind::RealNormMinusOne);
        assert_eq!(f.fund_unit().unwrap().norm, -1);
        assert!((f.regulator() - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-14);

        assert!(matches!(
            validate_field(-5),
            Err(FieldError::OutOfScope {
                reason: ScopeReason::EvenClassNumber { h: 2, .. },
                ..
            })
        ));
        assert!(matches!(validate_field(12), Err(FieldError::NotSquarefree { factor: 2, .. })));
        assert_eq!(validate_field(0), Err(FieldError::Zero));
        assert!(matches!(
            validate_field(2),
            Err(FieldError::OutOfScope {
                reason: ScopeReason::TwoRamified,
                ..
            })
        ));
        assert!(matches!(
            validate_field(1),
            Err(FieldError::OutOfScope {
                reason: ScopeReason::Rational,
                ..
            })
        ));
    }

    #[test]
    fn scope_membership_is_computed() {
        for p in [7i64, 11, 19, 23, 31, 43, 47, 67, 163] {
            assert_eq!(validate_field(-p).unwrap().kind(), FieldKind::ImaginaryOddClass);
        }
        for p in [5i64, 13, 17] {
            assert!(validate_field(-p).is_err());
        }
    }

    #[test]
    fn genus_theory_parity_up_to_1e4() {
        for p in primes_up_to(10_000) {
            if p % 4 == 3 {
                assert_eq!(class_number(-(p as i64)).unwrap() % 2, 1, "p = {p}");
            }
            if p % 4 == 1 {
                let u = fundamental_unit_with_bound(p as i64, 4096).unwrap();
                assert_eq!(u.norm, -1, "p = {p}");
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let k = validate_field(-7).unwrap();
        assert_eq!(splitting_type(&k, 7).splitting, Splitting::Ramified);
        assert_eq!(splitting_type(&k, 7).ideal_norms, vec![7]);
        assert_eq!(splitting_type(&k, 2).ideal_norms, vec![2, 2]);
        let k = validate_field(-11).unwrap();
        assert_eq!(splitting_type(&k, 2).splitting, Splitting::Inert);
        assert_eq!(splitting_type(&k, 2).ideal_norms, vec![4]);
    }

    #[test]
    fn prime_ideal_streams() {
        let k = validate_field(-7).unwrap();
        let norms: Vec<u64> = prime_ideals_up_to(&k, 10).iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![2, 2, 7, 9]);
        assert!(prime_ideals_up_to(&k, 1).is_empty());
        let k = validate_field(5).unwrap();
        let norms: Vec<u64> = prime_ideals_up_to(&k, 25).iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![4, 5, 9, 11, 11, 19, 19]);
    }

    #[test]
    fn splitting_partition() {
        let k = validate_field(-23).unwrap();
        let primes = primes_up_to(5000);
        let mut ramified = 0;
        for &p in &primes {
            let s = splitting_type(&k, p);
            let prod: u64 = s.ideal_norms.iter().product();
            let e = if s.splitting == Splitting::Ramified { 2 } else { 1 };
            assert_eq!(prod.pow(e), p * p);
            if s.splitting == Splitting::Ramified {
                ramified += 1;
            }
        }
        assert!(ramified <= 2);
    }

    #[test]
    fn field_spec_json_keys() {
        let json = serde_json::to_value(validate_field(5).unwrap()).unwrap();
        let obj = json.as_object().unwrap();
        for key in ["D", "kind", "d_K", "signed_disc", "h", "w", "fund_unit", "regulator"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(json["fund_unit"]["norm"], -1);
        assert_eq!(json["fund_unit"]["x"], "1");
        let json = serde_json::to_value(validate_field(-7).unwrap()).unwrap();
        assert!(json["fund_unit"].is_null());
    }
}
