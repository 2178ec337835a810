//! Counting quadratic extensions of quadratic number fields with odd class number.
//!
//! The crate is layered bottom-up:
//!
//! * [`quadfield`]: the base field K, its discriminant, class number, units and
//!   prime decomposition.
//! * [`localdata`]: per-prime tables of quadratic characters of the local unit
//!   groups, by conductor exponent and parity against the global units.
//! * [`series`]: Dirichlet coefficients of the counting functions built by
//!   Euler-product convolution, and the extension counts by discriminant.
//! * [`analytic`]: residues, `ζ_K(2)` by two independent routes, and the
//!   asymptotic constant `C` in `a_K(n) ~ C n`.
//! * [`oracle`]: brute-force ground truth sharing no arithmetic with the above.
//! * [`cli`]: the `quadtally` command-line surface.

pub mod analytic;
pub mod cli;
pub mod localdata;
pub mod oracle;
pub mod primes;
pub mod quadfield;
pub mod series;

#[cfg(test)]
mod properties;

pub use quadfield::{validate_field, FieldError, FieldKind, FieldSpec};
