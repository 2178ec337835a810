//! Finite models of the completions of a base field, built from the minimal
//! polynomial of `ω` alone.
//!
//! `O_K = Z[ω]` with `ω = (1 + √D)/2` when `D ≡ 1 (mod 4)` and `ω = √D`
//! otherwise. At each prime the local ring is modelled either as `Z/p^k`
//! (split, `ω` sent to a lifted root) or as `Z/p^k[X]/(minpoly)` with the
//! appropriate uniformizer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::arith::{euler_criterion, mod_pow};
use super::ring::{Elem, FiniteRing};
use super::OracleError;
use crate::quadfield::{FieldSpec, Splitting};

/// Monic minimal polynomial `X^2 + c1 X + c0` of `ω`.
pub fn omega_minpoly(d: i64) -> (i64, i64) {
    if d.rem_euclid(4) == 1 {
        (-1, -(d - 1) / 4)
    } else {
        (0, -d)
    }
}

fn eval_mod(c1: i64, c0: i64, t: u64, m: u64) -> u64 {
    let m_i = m as i128;
    let t = t as i128;
    ((t * t + c1 as i128 * t + c0 as i128).rem_euclid(m_i)) as u64
}

/// Decomposition of `p` read off from roots of the minimal polynomial.
pub fn oracle_splitting(d: i64, p: u64) -> Splitting {
    let (c1, c0) = omega_minpoly(d);
    if p == 2 {
        let roots = (0..2).filter(|&t| eval_mod(c1, c0, t, 2) == 0).count();
        return match roots {
            2 => Splitting::Split,
            0 => Splitting::Inert,
            _ => Splitting::Ramified,
        };
    }
    // polynomial discriminant is D or 4D; 4 is a square
    match euler_criterion(d, p) {
        0 => Splitting::Ramified,
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

/// Roots of the minimal polynomial modulo `p`.
fn roots_mod_p(d: i64, p: u64) -> Vec<u64> {
    let (c1, c0) = omega_minpoly(d);
    if p < 1 << 16 {
        return (0..p).filter(|&t| eval_mod(c1, c0, t, p) == 0).collect();
    }
    // (-c1 ± √disc) / 2 with disc = c1^2 - 4 c0
    let disc = (c1 * c1 - 4 * c0).rem_euclid(p as i64) as u64;
    let r = super::arith::sqrt_mod(disc, p);
    let inv2 = (p + 1) / 2;
    let neg_c1 = (-c1).rem_euclid(p as i64) as u64;
    let mut out: Vec<u64> = [r, (p - r) % p]
        .iter()
        .map(|&s| ((neg_c1 + s) % p) as u128 * inv2 as u128 % p as u128)
        .map(|v| v as u64)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Lifts a simple root mod `p` to a root mod `p^k` one digit at a time.
fn lift_root(d: i64, p: u64, k: u32, root: u64) -> u64 {
    let (c1, c0) = omega_minpoly(d);
    let mut t = root;
    let mut pi = p;
    for _ in 1..k {
        let next = pi * p;
        t = (0..p)
            .map(|j| t + j * pi)
            .find(|&c| eval_mod(c1, c0, c, next) == 0)
            .expect("simple root lifts");
        pi = next;
    }
    t
}

/// A local model at one prime ideal.
#[derive(Debug, Clone)]
pub struct LocalModel {
    pub p: u64,
    pub splitting: Splitting,
    pub norm: u64,
    pub ring: FiniteRing,
}

/// Names of the units whose images decide whether a character extends.
pub fn tested_units(field: &FieldSpec) -> Vec<&'static str> {
    match field.d() {
        -1 => vec!["i"],
        -3 => vec!["zeta6"],
        d if d < 0 => vec!["-1"],
        _ => vec!["-1", "epsilon"],
    }
}

fn omega_unit_name(d: i64) -> Option<&'static str> {
    match d {
        -1 => Some("i"),
        -3 => Some("zeta6"),
        _ => None,
    }
}

/// `ε = u + v ω` as integers.
fn epsilon_in_omega(field: &FieldSpec) -> Option<(BigInt, BigInt)> {
    let unit = field.fund_unit()?;
    let x = BigInt::from(unit.x.clone());
    let y = BigInt::from(unit.y.clone());
    let sigma = BigInt::from(unit.sigma);
    if field.d().rem_euclid(4) == 1 {
        // √D = 2ω - 1
        Some(((&x - &y) / &sigma, (&y * 2) / &sigma))
    } else {
        Some((x, y))
    }
}

fn reduce_big(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Coefficient precision `k` so that `O/π^(e k)` models the filtration through `depth`.
pub fn coefficient_exponent(p: u64, e: u32, depth: u32) -> u32 {
    if p == 2 {
        depth.div_ceil(e) + 1
    } else {
        (1..).find(|&k| e * k >= 2).unwrap()
    }
}

/// Finite models at every prime ideal above `p`.
pub fn local_models(field: &FieldSpec, p: u64, depth: u32) -> Result<Vec<LocalModel>, OracleError> {
    let d = field.d();
    let (c1, c0) = omega_minpoly(d);
    let splitting = oracle_splitting(d, p);
    let e = if splitting == Splitting::Ramified { 2 } else { 1 };
    let k = coefficient_exponent(p, e, depth);
    let modulus = p.checked_pow(k).ok_or(OracleError::TooLarge {
        ring: format!("O/{p}^{k}"),
        size: u64::MAX,
    })?;
    let eps = epsilon_in_omega(field);

    let decorate = |ring: FiniteRing, omega: Elem| -> FiniteRing {
        let mut ring = ring;
        if let Some(name) = omega_unit_name(d) {
            ring = ring.with_unit(name, omega);
        }
        if let Some((u, v)) = &eps {
            let (u, v) = (reduce_big(u, modulus), reduce_big(v, modulus));
            // u + v ω with ω already a ring element
            let e = if ring.is_quadratic() {
                Elem::new(u, v)
            } else {
                Elem::scalar(ring.add(Elem::scalar(u), ring.mul(Elem::scalar(v), omega)).b)
            };
            ring = ring.with_unit("epsilon", e);
        }
        ring
    };

    let models = match splitting {
        Splitting::Split => roots_mod_p(d, p)
            .into_iter()
            .map(|r| {
                let t = lift_root(d, p, k, r);
                let ring = FiniteRing::integers_mod(p, k)
                    .with_label(format!("Z/{modulus}Z (omega -> {t})"));
                LocalModel {
                    p,
                    splitting,
                    norm: p,
                    ring: decorate(ring, Elem::scalar(t)),
                }
            })
            .collect(),
        Splitting::Inert => {
            let ring = FiniteRing::quadratic(p, k, c1, c0, Elem::scalar(p), 1);
            vec![LocalModel {
                p,
                splitting,
                norm: p * p,
                ring: decorate(ring, Elem::new(0, 1)),
            }]
        }
        Splitting::Ramified => {
            let t = roots_mod_p(d, p)[0];
            if eval_mod(c1, c0, t, p * p) == 0 {
                return Err(OracleError::NotEisenstein { d, p });
            }
            let pi = Elem::new((modulus - t) % modulus, 1);
            let ring = FiniteRing::quadratic(p, k, c1, c0, pi, 2);
            vec![LocalModel {
                p,
                splitting,
                norm: p,
                ring: decorate(ring, Elem::new(0, 1)),
            }]
        }
    };
    Ok(models)
}

/// Residue-field images of the tested units at a prime ideal above an odd `p`,
/// as bits: 1 when the unit is a non-square (so the quadratic residue
/// character sends it to 1).
pub fn odd_prime_unit_images(field: &FieldSpec, p: u64, splitting: Splitting, root: Option<u64>) -> Vec<u8> {
    let d = field.d();
    let eps = epsilon_in_omega(field);
    tested_units(field)
        .iter()
        .map(|&name| {
            let nonsquare = match splitting {
                // F_{p^2}^× squares contain F_p^×; ω-powers need the full field
                Splitting::Inert => {
                    let ring = FiniteRing::quadratic(p, 1, omega_minpoly(d).0, omega_minpoly(d).1, Elem::scalar(p), 1);
                    let u = unit_elem(name, &ring, Elem::new(0, 1), eps.as_ref(), p);
                    ring.pow(u, (p * p - 1) / 2) != ring.one()
                }
                _ => {
                    let t = root.expect("root for split or ramified prime");
                    let u = match name {
                        "-1" => p - 1,
                        "epsilon" => {
                            let (a, b) = eps.as_ref().unwrap();
                            (reduce_big(a, p) as u128 + reduce_big(b, p) as u128 * t as u128) as u64 % p
                        }
                        _ => t,
                    };
                    mod_pow(u, (p - 1) / 2, p) != 1
                }
            };
            nonsquare as u8
        })
        .collect()
}

fn unit_elem(name: &str, ring: &FiniteRing, omega: Elem, eps: Option<&(BigInt, BigInt)>, m: u64) -> Elem {
    match name {
        "-1" => Elem::scalar(m - 1),
        "epsilon" => {
            let (a, b) = eps.unwrap();
            ring.add(Elem::scalar(reduce_big(a, m)), ring.mul(Elem::scalar(reduce_big(b, m)), omega))
        }
        _ => omega,
    }
}

/// Residue-field roots of the minimal polynomial (split: two, ramified: one).
pub fn residue_roots(d: i64, p: u64) -> Vec<u64> {
    roots_mod_p(d, p)
}

/// Number of infinite sign assignments making a character with the given
/// finite unit images trivial on the global units.
pub fn extension_count(field: &FieldSpec, images: &[u8]) -> u32 {
    if field.is_imaginary() {
        return images.iter().all(|&b| b == 0) as u32;
    }
    let norm = field.fund_unit().map(|u| u.norm).unwrap_or(1);
    // signs at the two real places: -1 -> (1, 1); ε > 0 and ε' has sign N(ε)
    let rows = [[1u8, 1u8], [0u8, (norm == -1) as u8]];
    let mut count = 0;
    for s in 0..4u8 {
        let s = [s & 1, s >> 1];
        let ok = rows
            .iter()
            .zip(images)
            .all(|(row, &img)| (row[0] & s[0]) ^ (row[1] & s[1]) == img);
        count += ok as u32;
    }
    count
}

/// `2 n_ext - 1`: +1 for a character that extends once, -1 if never.
pub fn signed_weight(field: &FieldSpec, images: &[u8]) -> i64 {
    2 * extension_count(field, images) as i64 - 1
}
