//! `ζ_K(2)` of an imaginary quadratic field as a finite cotangent sum.
//!
//! `ζ_K(2) = π² / (6 √d) Σ_{0<n<d} χ(n) A(cot(π n / d))` with
//! `A(x) = 2 ∫_0^∞ t dt / (x sinh²t + x⁻¹ cosh²t)`.

use std::f64::consts::PI;

use super::AnalyticError;

/// Upper integration limit; beyond it the integrand is below `t / sinh 2t`.
pub const UPPER: f64 = 30.0;
pub const DEFAULT_TOL: f64 = 1e-14;
const MAX_DEPTH: u32 = 60;

fn integrand(x: f64, t: f64) -> f64 {
    let s = t.sinh();
    let c = t.cosh();
    t / (x * s * s + c * c / x)
}

/// `∫_UPPER^∞ t / sinh(2t) dt <= (2 UPPER + 1) e^(-2 UPPER) / (2 (1 - e^(-4 UPPER)))`.
pub fn tail_bound() -> f64 {
    (2.0 * UPPER + 1.0) * (-2.0 * UPPER).exp() / (2.0 * (1.0 - (-4.0 * UPPER).exp()))
}

struct Simpson<F: Fn(f64) -> f64> {
    f: F,
    error: f64,
    exhausted: bool,
}

impl<F: Fn(f64) -> f64> Simpson<F> {
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 {
            self.exhausted = true;
            self.error += diff.abs() / 15.0;
            return left + right + diff / 15.0;
        }
        if diff.abs() <= 15.0 * tol {
            self.error += diff.abs() / 15.0;
            return left + right + diff / 15.0;
        }
        self.step(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + self.step(m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson on `[a, b]`; returns the value and the accumulated error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64), AnalyticError> {
    let mut s = Simpson {
        f,
        error: 0.0,
        exhausted: false,
    };
    let fa = (s.f)(a);
    let fb = (s.f)(b);
    let fm = (s.f)(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = s.step(a, b, fa, fm, fb, whole, tol, MAX_DEPTH);
    if s.exhausted && s.error > tol {
        return Err(AnalyticError::QuadratureFailure {
            achieved: s.error,
            requested: tol,
        });
    }
    Ok((v, s.error))
}

/// `A(x)` with its error estimate (quadrature plus tail).
pub fn zagier_a_with_error(x: f64, tol: f64) -> Result<(f64, f64), AnalyticError> {
    if x == 0.0 {
        return Ok((0.0, 0.0));
    }
    if x < 0.0 {
        let (v, e) = zagier_a_with_error(-x, tol)?;
        return Ok((-v, e));
    }
    // the integrand peaks near tanh t = 1/x
    let mut cuts = vec![0.0];
    if x > 1.0 {
        cuts.push((1.0 / x).atanh().min(0.5));
    }
    cuts.extend([1.0, UPPER]);
    let pieces = (cuts.len() - 1) as f64;
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let (v, e) = adaptive_simpson(|t| integrand(x, t), w[0], w[1], tol / pieces)?;
        value += v;
        error += e;
    }
    Ok((2.0 * value, 2.0 * (error + tail_bound())))
}

pub fn zagier_a(x: f64) -> Result<f64, AnalyticError> {
    zagier_a_with_error(x, DEFAULT_TOL).map(|(v, _)| v)
}

/// The cotangent sum for fundamental discriminant `-d`, with its error estimate.
pub fn zeta_k_2_zagier(d: u64, chi: impl Fn(u64) -> i8) -> Result<(f64, f64), AnalyticError> {
    let mut sum = 0.0;
    let mut error = 0.0;
    for n in 1..d {
        let c = chi(n);
        if c == 0 {
            continue;
        }
        let x = 1.0 / (PI * n as f64 / d as f64).tan();
        let (a, e) = zagier_a_with_error(x, DEFAULT_TOL)?;
        sum += c as f64 * a;
        error += e;
    }
    let scale = PI * PI / (6.0 * (d as f64).sqrt());
    Ok((scale * sum, scale * error))
}
