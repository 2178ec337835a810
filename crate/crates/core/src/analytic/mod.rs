//! Residues, special values and the asymptotic constant.
//!
//! The number of quadratic extensions `L/K` with `|d_L| <= n` grows like
//! `C n`, where
//!
//! ```text
//! C = prefactor · Res_{s=1} ζ_K(s) / ζ_K(2) · Π_{𝔭 | 2} g_𝔭(1) / (1 + N(𝔭)^-1)
//! ```
//!
//! with `prefactor = 1/(2 d_K²)` for imaginary fields and `1/d_K²` for real
//! fields with a unit of norm `-1`.

pub mod lseries;
pub mod zagier;

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::localdata::{evaluate_g, local_factor, LocalError};
use crate::quadfield::{prime_ideals_up_to, FieldSpec};

pub use lseries::{kronecker_l, kronecker_l_at_one, riemann_zeta, LValue};
pub use zagier::{zagier_a, zagier_a_with_error};

/// Tolerance for L-values at `s >= 2` used when assembling constants.
pub const SERIES_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("estimated error {achieved:e} exceeds the tolerance {requested:e}")]
    NonConvergence { achieved: f64, requested: f64 },
    #[error("the cotangent formula needs an imaginary field")]
    MethodUnsupported,
    #[error("quadrature reached its depth limit with error {achieved:e} (wanted {requested:e})")]
    QuadratureFailure { achieved: f64, requested: f64 },
    #[error(transparent)]
    Local(#[from] LocalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZetaMethod {
    Factorization,
    Zagier,
}

/// `Res_{s=1} ζ_K(s)` from the class number formula.
pub fn dedekind_residue(field: &FieldSpec) -> f64 {
    let h = field.class_number() as f64;
    let sqrt_d = (field.disc() as f64).sqrt();
    if field.is_imaginary() {
        2.0 * PI * h / (field.roots_of_unity() as f64 * sqrt_d)
    } else {
        2.0 * h * field.regulator() / sqrt_d
    }
}

/// `L(1, χ_K)`, which equals the residue since `ζ_K = ζ · L(·, χ_K)`.
pub fn residue_via_l(field: &FieldSpec, terms: u64, tol: f64) -> Result<LValue, AnalyticError> {
    let l = kronecker_l_at_one(field.signed_disc(), terms.max(field.disc()));
    if l.error_bound > tol {
        return Err(AnalyticError::NonConvergence {
            achieved: l.error_bound,
            requested: tol,
        });
    }
    Ok(l)
}

/// `ζ_K(2)` by the chosen method.
pub fn zeta_k_2(field: &FieldSpec, method: ZetaMethod) -> Result<f64, AnalyticError> {
    zeta_k_2_with_error(field, method).map(|(v, _)| v)
}

/// `ζ_K(2)` and an error estimate.
pub fn zeta_k_2_with_error(field: &FieldSpec, method: ZetaMethod) -> Result<(f64, f64), AnalyticError> {
    let delta = field.signed_disc();
    match method {
        ZetaMethod::Factorization => {
            let l = kronecker_l(delta, 2.0, SERIES_TOL);
            let z = riemann_zeta(2.0);
            Ok((z * l.value, z * l.error_bound))
        }
        ZetaMethod::Zagier => {
            if !field.is_imaginary() {
                return Err(AnalyticError::MethodUnsupported);
            }
            let chi = |n| crate::quadfield::kronecker(delta, n);
            zagier::zeta_k_2_zagier(field.disc(), chi)
        }
    }
}

/// `ζ_K(s) = ζ(s) L(s, χ_K)` for `s >= 2`.
pub fn dedekind_zeta(field: &FieldSpec, s: f64) -> f64 {
    riemann_zeta(s) * kronecker_l(field.signed_disc(), s, SERIES_TOL).value
}

/// `Π_{𝔭 | 2} g_𝔭(1) / (1 + N(𝔭)^-1)`.
pub fn two_adic_factor(field: &FieldSpec) -> Result<f64, AnalyticError> {
    let mut product = 1.0;
    for prime in prime_ideals_up_to(field, 4).iter().filter(|p| p.p == 2) {
        let spec = local_factor(field, prime)?;
        product *= evaluate_g(&spec, 1.0, false) / (1.0 + 1.0 / prime.norm as f64);
    }
    Ok(product)
}

pub fn prefactor(field: &FieldSpec) -> f64 {
    let d = field.disc() as f64;
    if field.is_imaginary() {
        1.0 / (2.0 * d * d)
    } else {
        1.0 / (d * d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "C")]
    pub c: f64,
    pub residue: f64,
    pub zeta2: f64,
    /// Cotangent-sum value of `ζ_K(2)`, imaginary fields only.
    pub zeta2_alt: Option<f64>,
    pub two_adic_factor: f64,
    pub prefactor: f64,
    pub h: u64,
    pub w: u32,
    pub regulator: f64,
    #[serde(skip)]
    pub zeta2_method: ZetaMethod,
}

impl ConstantReport {
    /// `|ζ_K(2)` by factorization minus the cotangent sum`|`, when both exist.
    pub fn zeta2_difference(&self) -> Option<f64> {
        self.zeta2_alt.map(|z| (z - self.zeta2).abs())
    }

    /// Slope of the extension count against the conductor-norm cutoff: `C d_K²`.
    pub fn conductor_slope(&self, field: &FieldSpec) -> f64 {
        let d = field.disc() as f64;
        self.c * d * d
    }
}

pub fn asymptotic_constant(field: &FieldSpec) -> Result<ConstantReport, AnalyticError> {
    let residue = dedekind_residue(field);
    let zeta2 = zeta_k_2(field, ZetaMethod::Factorization)?;
    let zeta2_alt = if field.is_imaginary() {
        Some(zeta_k_2(field, ZetaMethod::Zagier)?)
    } else {
        None
    };
    let two_adic = two_adic_factor(field)?;
    let pre = prefactor(field);
    Ok(ConstantReport {
        d: field.d(),
        c: pre * residue / zeta2 * two_adic,
        residue,
        zeta2,
        zeta2_alt,
        two_adic_factor: two_adic,
        prefactor: pre,
        h: field.class_number(),
        w: field.roots_of_unity(),
        regulator: field.regulator(),
        zeta2_method: ZetaMethod::Factorization,
    })
}

/// Closed form of the signed series `Σ b_n n^-s` for imaginary fields:
/// `L(s, ψ) L(s, ψ χ_K) / ζ_K(2s) · Π_{𝔭|2} g₋,𝔭(s) / (1 - N(𝔭)^-2s)`.
///
/// `ψ` is `(-4/·)` when the tested unit is `-1` and `(-8/·)` for `Q(i)`,
/// where the tested unit is `i`.
pub fn signed_series_closed_form(field: &FieldSpec, s: f64) -> Result<f64, AnalyticError> {
    if !field.is_imaginary() {
        return Err(AnalyticError::MethodUnsupported);
    }
    let delta = field.signed_disc();
    let psi = if field.d() == -1 { -8 } else { -4 };
    // ψ χ_K agrees with the Kronecker symbol of ψ·Δ on odd n, and both vanish on even n
    let l1 = kronecker_l(psi, s, SERIES_TOL).value;
    let l2 = kronecker_l(psi * delta, s, SERIES_TOL).value;
    let mut correction = 1.0;
    for prime in prime_ideals_up_to(field, 4).iter().filter(|p| p.p == 2) {
        let spec = local_factor(field, prime)?;
        let q = prime.norm as f64;
        correction *= evaluate_g(&spec, s, true) / (1.0 - q.powf(-2.0 * s));
    }
    Ok(l1 * l2 / dedekind_zeta(field, 2.0 * s) * correction)
}
