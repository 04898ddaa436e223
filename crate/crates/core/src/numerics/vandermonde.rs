//! Vandermonde systems inverted through Lagrange basis polynomials.

use num_complex::Complex64;

use super::poly::ScalarPolynomial;
use crate::error::{Error, Result};

/// Relative distinctness threshold: nodes closer than `GAP_REL * max|λ|` are rejected.
pub const GAP_REL: f64 = 1e-6;

/// Nodes `λ_0..λ_{n-1}` together with the inverse of `P_{ij} = λ_j^i`.
///
/// Row `j` of the inverse holds the ascending coefficients of
/// `f_j(z) = ∏_{i≠j} (z - λ_i) / (λ_j - λ_i)`, so `f_j(λ_i) = δ_{ji}`.
#[derive(Debug, Clone)]
pub struct VandermondeSystem {
    lambdas: Vec<Complex64>,
    inverse_rows: Vec<Vec<Complex64>>,
}

impl VandermondeSystem {
    pub fn lambdas(&self) -> &[Complex64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `(P^{-1})_{jk}`.
    pub fn inverse(&self, j: usize, k: usize) -> Complex64 {
        self.inverse_rows[j][k]
    }

    pub fn inverse_row(&self, j: usize) -> &[Complex64] {
        &self.inverse_rows[j]
    }

    /// `P_{ij} = λ_j^i`.
    pub fn forward(&self, i: usize, j: usize) -> Complex64 {
        self.lambdas[j].powu(i as u32)
    }

    /// `f_j(z)` evaluated from the stored coefficients.
    pub fn lagrange(&self, j: usize, z: Complex64) -> Complex64 {
        self.inverse_rows[j]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Max-entry deviation of `P · P^{-1}` from the identity.
    pub fn identity_residual(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for k in 0..n {
                let s: Complex64 = (0..n).map(|j| self.forward(i, j) * self.inverse(j, k)).sum();
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// Rejects node sets with any pair closer than `GAP_REL * max|λ|`.
pub fn check_distinct(lambdas: &[Complex64]) -> Result<()> {
    let scale = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let gap_min = GAP_REL * scale;
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            let gap = (lambdas[i] - lambdas[j]).norm();
            if gap <= gap_min {
                return Err(Error::DegenerateSpectrum { i, j, gap, gap_min });
            }
        }
    }
    Ok(())
}

/// Inverts the Vandermonde matrix of `lambdas` in closed form.
pub fn prony_inverse(lambdas: &[Complex64]) -> Result<VandermondeSystem> {
    check_distinct(lambdas)?;
    let n = lambdas.len();
    let mut inverse_rows = Vec::with_capacity(n);
    for j in 0..n {
        let others: Vec<Complex64> = (0..n).filter(|&i| i != j).map(|i| lambdas[i]).collect();
        let numerator = ScalarPolynomial::from_roots(&others);
        let denom: Complex64 = others.iter().map(|&l| lambdas[j] - l).product();
        let row = (0..n).map(|k| numerator.coeff(k) / denom).collect();
        inverse_rows.push(row);
    }
    Ok(VandermondeSystem {
        lambdas: lambdas.to_vec(),
        inverse_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::ComplexMatrix;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_by_hand() {
        let vs = prony_inverse(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let expected = [[0.5, 0.5], [0.5, -0.5]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((vs.inverse(j, k) - c(expected[j][k], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn roots_of_unity_give_fourier_rows() {
        // Oracle: invert the 3x3 Vandermonde matrix directly by LU.
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        let lambdas = [c(1.0, 0.0), w, w * w];
        let p = ComplexMatrix::from_fn(3, |i, j| lambdas[j].powu(i as u32));
        let direct = p.inverse().unwrap();
        let vs = prony_inverse(&lambdas).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((vs.inverse(j, k) - direct[(j, k)]).norm() < 1e-14);
                let fourier = lambdas[j].powi(-(k as i32)) / 3.0;
                assert!((vs.inverse(j, k) - fourier).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_nodes_rejected() {
        let err = prony_inverse(&[c(1.0, 0.0), c(1.0 + 1e-9, 0.0), c(2.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum { i: 0, j: 1, .. }));
    }

    fn node_set() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((0.5f64..1.5, 0.0f64..TAU), 1..=16).prop_filter_map(
            "nodes too close",
            |v| {
                let nodes: Vec<Complex64> = v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect();
                // Keep the conditioning moderate so the 1e-9 bound is meaningful.
                let min_gap = (0..nodes.len())
                    .flat_map(|i| (i + 1..nodes.len()).map(move |j| (i, j)))
                    .map(|(i, j)| (nodes[i] - nodes[j]).norm())
                    .fold(f64::INFINITY, f64::min);
                (min_gap > 0.25).then_some(nodes)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn vandermonde_times_inverse_is_identity(nodes in node_set()) {
            let vs = prony_inverse(&nodes).unwrap();
            prop_assert!(vs.identity_residual() <= 1e-9, "residual {}", vs.identity_residual());
            for j in 0..nodes.len() {
                for (i, &l) in nodes.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((vs.lagrange(j, l) - target).norm() <= 1e-9);
                }
            }
        }
    }
}
