//! Polynomials with square-matrix coefficients.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// `Σ_m z^m C_m`, all coefficients sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<ComplexMatrix>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "matrix polynomial needs at least one coefficient");
        let dim = coeffs[0].dim();
        if let Some(bad) = coeffs.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        Ok(Self { coeffs })
    }

    pub fn constant(m: ComplexMatrix) -> Self {
        Self { coeffs: vec![m] }
    }

    /// `a + b z` with matrix coefficients.
    pub fn linear(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    /// Index of the highest stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Coefficient of `z^m`; `None` past the stored degree.
    pub fn coeff(&self, m: usize) -> Option<&ComplexMatrix> {
        self.coeffs.get(m)
    }

    pub fn eval(&self, z: Complex64) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim());
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(z);
            acc += c;
        }
        acc
    }

    /// The polynomial `p(s z)`: coefficient `m` scaled by `s^m`.
    pub fn rescale_variable(&self, s: Complex64) -> Self {
        let mut factor = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.scale(factor);
                factor *= s;
                out
            })
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ComplexMatrix::zeros(self.dim());
        let coeffs = (0..len)
            .map(|m| {
                let a = self.coeffs.get(m).unwrap_or(&zero);
                let b = rhs.coeffs.get(m).unwrap_or(&zero);
                a - b
            })
            .collect();
        Ok(Self { coeffs })
    }

    /// Left- and right-multiplies every coefficient by fixed matrices.
    pub fn sandwich(&self, left: Option<&ComplexMatrix>, right: Option<&ComplexMatrix>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let c = match left {
                    Some(l) => l * c,
                    None => c.clone(),
                };
                match right {
                    Some(r) => &c * r,
                    None => c,
                }
            })
            .collect();
        Self { coeffs }
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(ComplexMatrix::frobenius_norm)
            .fold(0.0, f64::max)
    }
}

/// Product of two matrix polynomials, coefficient `m` being `Σ_j A_j B_{m-j}`.
pub fn mat_poly_product(a: &MatrixPolynomial, b: &MatrixPolynomial) -> Result<MatrixPolynomial> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let dim = a.dim();
    let mut coeffs = vec![ComplexMatrix::zeros(dim); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.max_abs() == 0.0 {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            coeffs[i + j] += &(ai * bj);
        }
    }
    Ok(MatrixPolynomial { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn shift(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |i, j| if i == (j + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn identity_is_neutral() {
        let id = MatrixPolynomial::constant(ComplexMatrix::identity(3));
        let b = MatrixPolynomial::new(vec![shift(3), shift(3).scale(c(0.0, 2.0)), ComplexMatrix::identity(3)])
            .unwrap();
        assert_eq!(mat_poly_product(&id, &b).unwrap(), b);
    }

    #[test]
    fn difference_of_squares() {
        let n = 3;
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / n as f64);
        let x = shift(n);
        let id = ComplexMatrix::identity(n);
        // Variable t; (1 - ωtX)(1 + ωtX) = 1 - ω² t² X².
        let minus = MatrixPolynomial::linear(id.clone(), x.scale(-w)).unwrap();
        let plus = MatrixPolynomial::linear(id.clone(), x.scale(w)).unwrap();
        let prod = mat_poly_product(&minus, &plus).unwrap();
        assert_eq!(prod.degree(), 2);
        assert!(prod.coeffs()[0] == id);
        assert!(prod.coeffs()[1].max_abs() < 1e-15);
        let expected = x.pow(2).scale(-w * w);
        assert!((&prod.coeffs()[2] - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn mismatched_dims_rejected() {
        let a = MatrixPolynomial::constant(ComplexMatrix::identity(2));
        let b = MatrixPolynomial::constant(ComplexMatrix::identity(3));
        assert!(matches!(mat_poly_product(&a, &b), Err(Error::DimMismatch { .. })));
        assert!(MatrixPolynomial::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]).is_err());
    }

    #[test]
    fn eval_matches_horner() {
        let p = MatrixPolynomial::new(vec![ComplexMatrix::identity(2), shift(2), shift(2).pow(2)]).unwrap();
        let z = c(0.3, -0.7);
        let direct = &(&ComplexMatrix::identity(2) + &shift(2).scale(z)) + &shift(2).pow(2).scale(z * z);
        assert!((&p.eval(z) - &direct).max_abs() < 1e-15);
    }

    fn matrix_strategy(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
            ComplexMatrix::from_rows(dim, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
        })
    }

    fn poly_strategy(dim: usize) -> impl Strategy<Value = MatrixPolynomial> {
        prop::collection::vec(matrix_strategy(dim), 1..4).prop_map(|v| MatrixPolynomial::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn degree_adds(a in poly_strategy(3), b in poly_strategy(3)) {
            let p = mat_poly_product(&a, &b).unwrap();
            prop_assert_eq!(p.degree(), a.degree() + b.degree());
        }

        #[test]
        fn bilinear_in_left_factor(a in poly_strategy(2), a2 in poly_strategy(2), b in poly_strategy(2),
                                   s in (-2.0f64..2.0, -2.0f64..2.0)) {
            let s = c(s.0, s.1);
            // (a + s a2) b = a b + s a2 b
            let len = a.degree().max(a2.degree()) + 1;
            let zero = ComplexMatrix::zeros(2);
            let sum: Vec<ComplexMatrix> = (0..len).map(|m| {
                let x = a.coeff(m).unwrap_or(&zero);
                let y = a2.coeff(m).unwrap_or(&zero).scale(s);
                x + &y
            }).collect();
            let lhs = mat_poly_product(&MatrixPolynomial::new(sum).unwrap(), &b).unwrap();
            let ab = mat_poly_product(&a, &b).unwrap();
            let a2b = mat_poly_product(&a2, &b).unwrap().scale(s);
            let zero_poly = MatrixPolynomial::constant(ComplexMatrix::zeros(2));
            let rhs = ab.try_sub(&zero_poly.try_sub(&a2b).unwrap()).unwrap();
            let diff = lhs.try_sub(&rhs).unwrap();
            prop_assert!(diff.max_coeff_norm() < 1e-12);
        }
    }
}
