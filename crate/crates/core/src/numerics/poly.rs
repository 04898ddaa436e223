//! Scalar complex polynomials and a simultaneous-iteration root finder.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Step-size tolerance for the Weierstrass iteration.
pub const ROOT_STEP_TOL: f64 = 1e-13;
pub const ROOT_MAX_ITER: usize = 1000;

/// Polynomial with complex coefficients in ascending degree.
///
/// An empty coefficient list is the zero polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPolynomial {
    coeffs: Vec<Complex64>,
}

impl ScalarPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `∏ (z - root)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &root in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= root * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Drops coefficients whose modulus is at most `tol * max|coeff|` from the top.
    pub fn trimmed(&self, tol: f64) -> Self {
        let cut = tol * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }
}

/// All roots of `p` with multiplicity, by Durand–Kerner (Weierstrass) iteration.
///
/// Starting points lie on a circle of radius `1 + max|a_k / a_n|`, which
/// bounds every root. Iteration stops when the largest relative step drops
/// to [`ROOT_STEP_TOL`] or every iterate sits at the round-off floor of the
/// evaluation. Converged roots receive two Newton polishing steps.
pub fn poly_roots(p: &ScalarPolynomial) -> Result<Vec<Complex64>> {
    let degree = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    let lead = p.coeff(degree);
    let monic: Vec<Complex64> = p.coeffs().iter().map(|c| c / lead).collect();
    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }
    let monic_poly = ScalarPolynomial::new(monic.clone());

    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    // An irrational phase offset keeps the start points off any symmetry axis of the roots.
    let offset = 0.4;
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / degree as f64 + offset))
        .collect();

    let mut last_step = f64::INFINITY;
    let mut converged = false;
    for _ in 0..ROOT_MAX_ITER {
        last_step = 0.0;
        for i in 0..degree {
            let zi = z[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                // Coincident iterates: nudge apart and keep going.
                z[i] = zi + Complex64::new(1e-8 * radius, 1e-8 * radius);
                last_step = f64::INFINITY;
                continue;
            }
            let step = monic_poly.eval(zi) / denom;
            z[i] = zi - step;
            last_step = last_step.max(step.norm() / zi.norm().max(1.0));
        }
        if last_step <= ROOT_STEP_TOL || z.iter().all(|&zi| at_roundoff_floor(&monic, zi)) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations: ROOT_MAX_ITER,
            last_step,
        });
    }

    let dp = monic_poly.derivative();
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let d = dp.eval(*zi);
            if d.norm() == 0.0 {
                break;
            }
            let candidate = *zi - monic_poly.eval(*zi) / d;
            if monic_poly.eval(candidate).norm() < monic_poly.eval(*zi).norm() {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    Ok(z)
}

/// `|p(z)|` is within a few ulps of the evaluation error bound `ε Σ|a_k||z|^k`,
/// so further steps are noise.
fn at_roundoff_floor(monic: &[Complex64], z: Complex64) -> bool {
    let zn = z.norm();
    let mut value = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for &c in monic.iter().rev() {
        value = value * z + c;
        bound = bound * zn + c.norm();
    }
    value.norm() <= 8.0 * f64::EPSILON * bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn contains(roots: &[Complex64], target: Complex64, tol: f64) -> bool {
        roots.iter().any(|r| (r - target).norm() < tol)
    }

    #[test]
    fn quadratic_with_integer_roots() {
        let p = ScalarPolynomial::from_real(&[2.0, -3.0, 1.0]);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(contains(&roots, Complex64::new(1.0, 0.0), 1e-12));
        assert!(contains(&roots, Complex64::new(2.0, 0.0), 1e-12));
    }

    #[test]
    fn cube_roots_of_unity() {
        let p = ScalarPolynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, TAU * k as f64 / 3.0);
            assert!(contains(&roots, w, 1e-12), "missing root {w}");
        }
    }

    #[test]
    fn double_root_is_returned_twice() {
        // (x - 1)^2 (x + 2)
        let p = ScalarPolynomial::from_real(&[2.0, -3.0, 0.0, 1.0]);
        let roots = poly_roots(&p).unwrap();
        let near_one = roots.iter().filter(|r| (*r - Complex64::new(1.0, 0.0)).norm() < 1e-6).count();
        assert_eq!(near_one, 2);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let p = ScalarPolynomial::new(vec![Complex64::new(0.0, 0.0); 3]);
        assert_eq!(poly_roots(&p), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn constant_has_no_roots() {
        let p = ScalarPolynomial::from_real(&[3.0]);
        assert!(poly_roots(&p).unwrap().is_empty());
    }

    #[test]
    fn from_roots_expands_product() {
        let p = ScalarPolynomial::from_roots(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        assert_eq!(p, ScalarPolynomial::from_real(&[2.0, -3.0, 1.0]));
    }

    fn complex_in_disc() -> impl Strategy<Value = Complex64> {
        (0.2f64..2.0, 0.0f64..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn residual_bound_holds(roots in prop::collection::vec(complex_in_disc(), 1..10)) {
            let p = ScalarPolynomial::from_roots(&roots);
            let found = poly_roots(&p).unwrap();
            prop_assert_eq!(found.len(), roots.len());
            let bound = 1e-10 * p.max_abs_coeff();
            for z in &found {
                prop_assert!(p.eval(*z).norm() <= bound, "residual {} > {}", p.eval(*z).norm(), bound);
            }
        }

        #[test]
        fn product_degree_adds(a in prop::collection::vec(complex_in_disc(), 1..6),
                               b in prop::collection::vec(complex_in_disc(), 1..6)) {
            let pa = ScalarPolynomial::from_roots(&a);
            let pb = ScalarPolynomial::from_roots(&b);
            prop_assert_eq!(pa.mul(&pb).degree(), Some(a.len() + b.len()));
        }
    }
}
