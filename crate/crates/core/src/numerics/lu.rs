//! Partial-pivoting LU factorization.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

pub struct LuDecomposition {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl LuDecomposition {
    pub fn new(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Self {
            lu,
            perm,
            sign,
            singular,
        }
    }

    pub fn det(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.lu.dim();
        (0..n).fold(Complex64::new(self.sign, 0.0), |acc, i| acc * self.lu[(i, i)])
    }

    /// `ln|det|`, which stays finite where the determinant itself would under- or overflow.
    pub fn log_abs_det(&self) -> f64 {
        if self.singular {
            return f64::NEG_INFINITY;
        }
        let n = self.lu.dim();
        (0..n).map(|i| self.lu[(i, i)].norm().ln()).sum()
    }

    pub fn solve(&self, b: &[Complex64]) -> Option<Vec<Complex64>> {
        if self.singular {
            return None;
        }
        let n = self.lu.dim();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<ComplexMatrix> {
        let n = self.lu.dim();
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            columns.push(self.solve(&e)?);
        }
        Some(ComplexMatrix::from_columns(&columns))
    }
}

/// Determinant by pivoted elimination. Singular matrices return zero.
pub fn lu_det(a: &ComplexMatrix) -> Complex64 {
    LuDecomposition::new(a).det()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn det_of_identity_is_one() {
        assert!((lu_det(&ComplexMatrix::identity(4)) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn det_of_diagonal() {
        let d = ComplexMatrix::diagonal(&[c(2.0), c(3.0)]);
        assert!((lu_det(&d) - c(6.0)).norm() < 1e-14);
    }

    #[test]
    fn det_tracks_row_swaps() {
        // [[0,1],[1,0]] has determinant -1.
        let m = ComplexMatrix::from_fn(2, |i, j| if i != j { c(1.0) } else { c(0.0) });
        assert!((lu_det(&m) - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_matrix_has_zero_det() {
        let m = ComplexMatrix::from_fn(3, |i, _| c(i as f64));
        assert!(lu_det(&m).norm() < 1e-14);
    }

    #[test]
    fn log_abs_det_matches_det() {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new((i * 3 + j) as f64, 1.0 / (1 + i + j) as f64));
        let lu = LuDecomposition::new(&m);
        assert!((lu.det().norm().ln() - lu.log_abs_det()).abs() < 1e-12);
    }
}
