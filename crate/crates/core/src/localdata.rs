//! Local character tables.
//!
//! For each prime ideal `𝔭` the quadratic characters of the local unit group
//! `U_𝔭` are tallied by conductor exponent `f`, together with the number of
//! them that are odd, i.e. send the tested global unit to the nontrivial
//! element. These tables are the coefficients of the local factors
//! `g_𝔭(s) = Σ m N(𝔭)^(-f s)` and of their signed versions.

use serde::Serialize;
use thiserror::Error;

use crate::quadfield::{FieldKind, FieldSpec, PrimeIdeal, SpecialField, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, PartialOrd, Ord)]
pub struct LocalRow {
    pub f: u32,
    pub m: u32,
    pub m_odd: u32,
}

const fn row(f: u32, m: u32, m_odd: u32) -> LocalRow {
    LocalRow { f, m, m_odd }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalFactorSpec {
    pub prime_norm: u64,
    pub rows: Vec<LocalRow>,
}

impl LocalFactorSpec {
    pub fn character_count(&self) -> u32 {
        self.rows.iter().map(|r| r.m).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("no local table for the prime of norm {norm} over {p} in {kind}")]
    UnsupportedPrime { kind: String, p: u64, norm: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoType {
    Split,
    Inert,
    Ramified,
}

impl From<Splitting> for TwoType {
    fn from(s: Splitting) -> Self {
        match s {
            Splitting::Split => TwoType::Split,
            Splitting::Inert => TwoType::Inert,
            Splitting::Ramified => TwoType::Ramified,
        }
    }
}

/// The table at a prime over 2 for one kind of field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwoAdicTable {
    pub field_kind: &'static str,
    pub two_type: TwoType,
    pub rows: &'static [LocalRow],
}

const SPLIT_ODD: &[LocalRow] = &[row(0, 1, 0), row(2, 1, 1), row(3, 2, 1)];
const INERT_ODD: &[LocalRow] = &[row(0, 1, 0), row(2, 3, 2), row(3, 4, 2)];
const SPLIT_EVEN: &[LocalRow] = &[row(0, 1, 0), row(2, 1, 0), row(3, 2, 0)];
const INERT_EVEN: &[LocalRow] = &[row(0, 1, 0), row(2, 3, 0), row(3, 4, 0)];
// odd counts at 1+i and √-2 come from exhaustive enumeration in the oracle
const RAMIFIED_GAUSSIAN: &[LocalRow] = &[row(0, 1, 0), row(2, 1, 1), row(4, 2, 1), row(5, 4, 2)];
const RAMIFIED_SQRT_MINUS_2: &[LocalRow] = &[row(0, 1, 0), row(2, 1, 0), row(4, 2, 2), row(5, 4, 2)];

pub static TWO_ADIC_TABLES: [TwoAdicTable; 7] = [
    TwoAdicTable { field_kind: "ImaginaryOddClass", two_type: TwoType::Split, rows: SPLIT_ODD },
    TwoAdicTable { field_kind: "ImaginaryOddClass", two_type: TwoType::Inert, rows: INERT_ODD },
    TwoAdicTable { field_kind: "SpecialImaginary(i)", two_type: TwoType::Ramified, rows: RAMIFIED_GAUSSIAN },
    TwoAdicTable { field_kind: "SpecialImaginary(sqrt-2)", two_type: TwoType::Ramified, rows: RAMIFIED_SQRT_MINUS_2 },
    TwoAdicTable { field_kind: "SpecialImaginary(sqrt-3)", two_type: TwoType::Inert, rows: INERT_ODD },
    TwoAdicTable { field_kind: "RealNormMinusOne", two_type: TwoType::Split, rows: SPLIT_EVEN },
    TwoAdicTable { field_kind: "RealNormMinusOne", two_type: TwoType::Inert, rows: INERT_EVEN },
];

pub fn two_adic_table(kind: FieldKind, two_type: TwoType) -> Option<&'static TwoAdicTable> {
    TWO_ADIC_TABLES
        .iter()
        .find(|t| t.field_kind == kind.as_str() && t.two_type == two_type)
}

/// The golden tables as pretty JSON, one object per table.
pub fn golden_tables_json() -> String {
    serde_json::to_string_pretty(&TWO_ADIC_TABLES[..]).expect("static tables serialize")
}

fn unsupported(field: &FieldSpec, prime: &PrimeIdeal) -> LocalError {
    LocalError::UnsupportedPrime {
        kind: field.kind().as_str().to_string(),
        p: prime.p,
        norm: prime.norm,
    }
}

/// Parity of the nontrivial character at a prime over an odd `p`.
pub fn parity_at_odd_prime(field: &FieldSpec, prime: &PrimeIdeal) -> Result<Parity, LocalError> {
    if prime.p == 2 {
        return Err(unsupported(field, prime));
    }
    let odd = match field.kind() {
        FieldKind::RealNormMinusOne => false,
        FieldKind::SpecialImaginary(SpecialField::I) => {
            prime.splitting == Splitting::Split && prime.p % 8 == 5
        }
        FieldKind::ImaginaryOddClass
        | FieldKind::SpecialImaginary(SpecialField::SqrtMinus2)
        | FieldKind::SpecialImaginary(SpecialField::SqrtMinus3) => {
            prime.splitting != Splitting::Inert && prime.p % 4 == 3
        }
    };
    Ok(if odd { Parity::Odd } else { Parity::Even })
}

/// Character table of `U_𝔭` for a prime ideal of the field.
pub fn local_factor(field: &FieldSpec, prime: &PrimeIdeal) -> Result<LocalFactorSpec, LocalError> {
    if prime.p != 2 {
        let m_odd = match parity_at_odd_prime(field, prime)? {
            Parity::Odd => 1,
            Parity::Even => 0,
        };
        return Ok(LocalFactorSpec {
            prime_norm: prime.norm,
            rows: vec![row(0, 1, 0), row(1, 1, m_odd)],
        });
    }
    let table = two_adic_table(field.kind(), prime.splitting.into()).ok_or_else(|| unsupported(field, prime))?;
    Ok(LocalFactorSpec {
        prime_norm: prime.norm,
        rows: table.rows.to_vec(),
    })
}

/// `Σ (m - [signed] 2 m_odd) N(𝔭)^(-f s)`.
pub fn evaluate_g(spec: &LocalFactorSpec, s: f64, signed: bool) -> f64 {
    let q = spec.prime_norm as f64;
    spec.rows
        .iter()
        .map(|r| {
            let c = r.m as f64 - if signed { 2.0 * r.m_odd as f64 } else { 0.0 };
            c * q.powf(-(r.f as f64) * s)
        })
        .sum()
}
