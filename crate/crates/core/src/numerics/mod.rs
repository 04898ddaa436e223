//! Dense complex linear algebra, polynomial arithmetic and Vandermonde inversion.

mod lu;
mod matpoly;
mod matrix;
mod poly;
mod vandermonde;

pub use lu::{lu_det, LuDecomposition};
pub use matpoly::{mat_poly_product, MatrixPolynomial};
pub use matrix::{inner, relative_commutator, relative_distance, vec_norm, ComplexMatrix};
pub use poly::{poly_roots, ScalarPolynomial, ROOT_MAX_ITER, ROOT_STEP_TOL};
pub use vandermonde::{check_distinct, prony_inverse, VandermondeSystem, GAP_REL};

use num_complex::Complex64;
use std::f64::consts::PI;

/// `ω = e^{2πi/N}`.
pub fn omega(n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / n as f64)
}

/// `ω^k` for any integer `k`, reduced mod `N` before exponentiating.
pub fn omega_pow(n: usize, k: i64) -> Complex64 {
    let r = k.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// `ω^{h/2}` on the principal branch, `exp(iπh/N)`.
pub fn omega_half_pow(n: usize, h: i64) -> Complex64 {
    let r = h.rem_euclid(2 * n as i64);
    Complex64::from_polar(1.0, PI * r as f64 / n as f64)
}
