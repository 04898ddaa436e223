//! The chain Hamiltonian in its spin and parafermion forms, the clock special
//! case, and the commuting tower `ℋ^{(m)}` from the logarithmic derivative of τ₂.

use num_complex::Complex64;

use crate::clock_algebra::{ChainOps, ParafermionSet};
use crate::error::{Error, Result};
use crate::numerics::{
    mat_poly_product, omega_half_pow, omega_pow, ComplexMatrix, LuDecomposition, MatrixPolynomial,
};
use crate::transfer_matrix::{Coupling, ModelParams, SpectralData};

/// `∏_{ℓ=from}^{to} a_ℓ / b_ℓ`, with the empty product equal to 1.
fn a_over_b(params: &ModelParams, from: i64, to: i64) -> Complex64 {
    (from..=to)
        .map(|l| params.coupling(Coupling::A, l) / params.coupling(Coupling::B, l))
        .product()
}

fn ratio(params: &ModelParams, kind: Coupling, idx: i64) -> Complex64 {
    params.coupling(kind, idx) / params.coupling(Coupling::B, idx)
}

fn check_b(params: &ModelParams) -> Result<()> {
    match params.b.iter().position(|z| z.norm() == 0.0) {
        Some(idx) => Err(Error::InvalidParams(format!("b_{idx} = 0"))),
        None => Ok(()),
    }
}

/// The Hamiltonian as four double sums over `Z_j (∏X) Y_k^{-1}`-type strings.
pub fn build_h_explicit(params: &ModelParams, ops: &ChainOps) -> Result<ComplexMatrix> {
    check_b(params)?;
    let n = ops.n();
    let len = params.len as i64;
    use Coupling::{C, D};
    let mut h = ComplexMatrix::zeros(ops.dim());
    let half_minus = omega_half_pow(n, n as i64 - 1);
    let half_plus_inv = omega_half_pow(n, -(n as i64 + 1));

    for j in 1..=len {
        for k in j..=len {
            let coef = omega_pow(n, k - j)
                * half_minus
                * ratio(params, D, 2 * j - 2)
                * a_over_b(params, 2 * j - 1, 2 * k - 2)
                * ratio(params, D, 2 * k - 1);
            let op = &(ops.z(j as usize) * &ops.x_string(j as usize, k as usize - 1)) * &ops.y_inv(k as usize);
            h.add_scaled(-coef, &op);
        }
    }
    for j in 1..len {
        for k in j + 1..=len {
            let coef = omega_pow(n, k - j - 1)
                * ratio(params, C, 2 * j - 1)
                * a_over_b(params, 2 * j, 2 * k - 2)
                * ratio(params, D, 2 * k - 1);
            let op = &(ops.y(j as usize) * &ops.x_string(j as usize, k as usize - 1)) * &ops.y_inv(k as usize);
            h.add_scaled(coef, &op);
        }
    }
    for j in 1..len {
        for k in j..len {
            let coef = omega_pow(n, k - j)
                * half_plus_inv
                * ratio(params, C, 2 * j - 1)
                * a_over_b(params, 2 * j, 2 * k - 1)
                * ratio(params, C, 2 * k);
            let op = &(ops.y(j as usize) * &ops.x_string(j as usize, k as usize)) * &ops.z_inv(k as usize + 1);
            h.add_scaled(-coef, &op);
        }
    }
    for j in 1..len {
        for k in j..len {
            let coef = omega_pow(n, k - j)
                * ratio(params, D, 2 * j - 2)
                * a_over_b(params, 2 * j - 1, 2 * k - 1)
                * ratio(params, C, 2 * k);
            let op = &(ops.z(j as usize) * &ops.x_string(j as usize, k as usize)) * &ops.z_inv(k as usize + 1);
            h.add_scaled(coef, &op);
        }
    }
    Ok(h)
}

/// The same Hamiltonian written as a bilinear form `Σ ψ_i^{-1} ψ_k`.
pub fn build_h_parafermion(params: &ModelParams, pf: &ParafermionSet) -> Result<ComplexMatrix> {
    check_b(params)?;
    if pf.n != params.n || pf.len != params.len {
        return Err(Error::InvalidParams(format!(
            "parafermions built for (N, L) = ({}, {}), model is ({}, {})",
            pf.n, pf.len, params.n, params.len
        )));
    }
    let n = params.n;
    let len = params.len as i64;
    use Coupling::{C, D};
    let dim = pf.psi[0].dim();
    let bilinear = |i: i64, k: i64| &pf.psi_inv(i as usize) * &pf.psi[k as usize];
    let mut h = ComplexMatrix::zeros(dim);

    for j in 1..=len {
        for m in j..=len {
            let coef = omega_pow(n, m - j)
                * omega_half_pow(n, n as i64 - 1)
                * a_over_b(params, 2 * j - 1, 2 * m - 2)
                * ratio(params, D, 2 * j - 2)
                * ratio(params, D, 2 * m - 1);
            h.add_scaled(-coef, &bilinear(2 * j - 2, 2 * m - 1));
        }
    }
    for j in 1..len {
        for m in j..len {
            let outer = omega_pow(n, m - j);
            let t1 = omega_half_pow(n, -(n as i64 + 1))
                * a_over_b(params, 2 * j, 2 * m - 1)
                * ratio(params, C, 2 * j - 1)
                * ratio(params, C, 2 * m);
            let t2 = a_over_b(params, 2 * j - 1, 2 * m - 1) * ratio(params, D, 2 * j - 2) * ratio(params, C, 2 * m);
            let t3 = a_over_b(params, 2 * j, 2 * m) * ratio(params, C, 2 * j - 1) * ratio(params, D, 2 * m + 1);
            h.add_scaled(-outer * t1, &bilinear(2 * j - 1, 2 * m));
            h.add_scaled(outer * t2, &bilinear(2 * j - 2, 2 * m));
            h.add_scaled(outer * t3, &bilinear(2 * j - 1, 2 * m + 1));
        }
    }
    Ok(h)
}

/// Couplings `α_1..α_L`, `γ_1..γ_{L-1}` of `-Σ α_j X_j - Σ γ_j Z_j Z_{j+1}^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockSpecialParams {
    pub alpha: Vec<Complex64>,
    pub gamma: Vec<Complex64>,
}

impl ClockSpecialParams {
    pub fn new(alpha: Vec<Complex64>, gamma: Vec<Complex64>) -> Result<Self> {
        if alpha.is_empty() || gamma.len() + 1 != alpha.len() {
            return Err(Error::InvalidParams(format!(
                "clock couplings need L alphas and L-1 gammas, got {} and {}",
                alpha.len(),
                gamma.len()
            )));
        }
        Ok(Self { alpha, gamma })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// The clock couplings that the `a_ℓ = 0` reduction of a general model produces:
    /// `α_j = d_{2j-2}d_{2j-1}/(b_{2j-2}b_{2j-1})`, `γ_j = c_{2j-1}c_{2j}/(b_{2j-1}b_{2j})`.
    pub fn from_model(params: &ModelParams) -> Self {
        let len = params.len;
        let alpha = (1..=len)
            .map(|j| params.d[2 * j - 2] * params.d[2 * j - 1] / (params.b[2 * j - 2] * params.b[2 * j - 1]))
            .collect();
        let gamma = (1..len)
            .map(|j| params.c[2 * j - 1] * params.c[2 * j] / (params.b[2 * j - 1] * params.b[2 * j]))
            .collect();
        Self { alpha, gamma }
    }
}

/// Model couplings whose Hamiltonian is the clock chain: all `b = 1`, all `a = 0`,
/// `d_{2j-2} = α_j`, `d_{2j-1} = 1`, `c_{2j-1} = γ_j`, `c_{2j} = 1`, unused entries 0.
pub fn clock_limit(n: usize, clock: &ClockSpecialParams) -> Result<ModelParams> {
    let len = clock.len();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let a = vec![zero; 2 * len];
    let b = vec![one; 2 * len];
    let mut c = vec![zero; 2 * len];
    let mut d = vec![zero; 2 * len];
    for j in 1..=len {
        d[2 * j - 2] = clock.alpha[j - 1];
        d[2 * j - 1] = one;
    }
    for j in 1..len {
        c[2 * j - 1] = clock.gamma[j - 1];
        c[2 * j] = one;
    }
    ModelParams::new(n, len, a, b, c, d)
}

/// `-Σ_j α_j X_j - Σ_j γ_j Z_j Z_{j+1}^{-1}` assembled directly from site operators.
pub fn build_h_clock(ops: &ChainOps, clock: &ClockSpecialParams) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(ops.dim());
    for (j, &alpha) in clock.alpha.iter().enumerate() {
        h.add_scaled(-alpha, ops.x(j + 1));
    }
    for (j, &gamma) in clock.gamma.iter().enumerate() {
        h.add_scaled(-gamma, &(ops.z(j + 1) * &ops.z_inv(j + 2)));
    }
    h
}

/// `ℋ^{(0)} … ℋ^{(M)}`, with the convention `ℋ^{(0)} = -L𝟙`.
#[derive(Debug, Clone)]
pub struct HamiltonianTower {
    pub h: Vec<ComplexMatrix>,
}

impl HamiltonianTower {
    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h[1]
    }

    pub fn max_order(&self) -> usize {
        self.h.len() - 1
    }

    /// Max pairwise `‖[ℋ^{(m)}, ℋ^{(m')}]‖ / (‖ℋ^{(m)}‖‖ℋ^{(m')}‖)` over `1 ≤ m < m' ≤ M`.
    pub fn commutator_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 1..self.h.len() {
            for mp in m + 1..self.h.len() {
                worst = worst.max(crate::numerics::relative_commutator(&self.h[m], &self.h[mp]));
            }
        }
        worst
    }
}

fn normalized_coefficients(tau: &MatrixPolynomial) -> Result<Vec<ComplexMatrix>> {
    let a0 = tau.coeffs()[0].trace() / tau.dim() as f64;
    if a0.norm() < 1e-290 {
        return Err(Error::SingularLeading(a0.norm()));
    }
    let inv = Complex64::new(1.0, 0.0) / a0;
    Ok(tau.coeffs().iter().map(|c| c.scale(inv)).collect())
}

/// Coefficients of `t d/dt ln τ₂(t) = Σ (ωt)^m ℋ^{(m)}` up to order `max_order`.
///
/// With `g_m = τ_{2,m}/A₀`: `ℋ^{(m)} = m g_m - Σ_{j=1}^{m-1} g_{m-j} ℋ^{(j)}`.
pub fn higher_hamiltonians(tau: &MatrixPolynomial, max_order: usize) -> Result<HamiltonianTower> {
    tower_with_order(tau, max_order, false)
}

/// Same recursion with the products taken as `ℋ^{(j)} g_{m-j}`.
pub fn higher_hamiltonians_right(tau: &MatrixPolynomial, max_order: usize) -> Result<HamiltonianTower> {
    tower_with_order(tau, max_order, true)
}

fn tower_with_order(tau: &MatrixPolynomial, max_order: usize, right: bool) -> Result<HamiltonianTower> {
    let g = normalized_coefficients(tau)?;
    let len = tau.degree();
    let dim = tau.dim();
    let mut h = Vec::with_capacity(max_order + 1);
    h.push(ComplexMatrix::scalar(dim, Complex64::new(-(len as f64), 0.0)));
    for m in 1..=max_order {
        let mut hm = if m <= len {
            g[m].scale_real(m as f64)
        } else {
            ComplexMatrix::zeros(dim)
        };
        for j in 1..m {
            if m - j > len {
                continue;
            }
            let prod = if right { &h[j] * &g[m - j] } else { &g[m - j] * &h[j] };
            hm -= &prod;
        }
        h.push(hm);
    }
    Ok(HamiltonianTower { h })
}

/// Max relative deviation between `τ_{2,m}/A₀` and the coefficients of
/// `exp(Σ_{m=1}^{L} u^m ℋ^{(m)}/m)`, expanded as a matrix power series to order `L`.
pub fn exp_reconstruction_residual(tau: &MatrixPolynomial, tower: &HamiltonianTower) -> Result<f64> {
    let g = normalized_coefficients(tau)?;
    let len = tau.degree();
    let dim = tau.dim();
    let truncate = |p: MatrixPolynomial| -> MatrixPolynomial {
        let coeffs: Vec<ComplexMatrix> = p.coeffs().iter().take(len + 1).cloned().collect();
        MatrixPolynomial::new(coeffs).expect("shared dimension")
    };
    let mut series = vec![ComplexMatrix::zeros(dim)];
    for m in 1..=len {
        series.push(tower.h[m].scale_real(1.0 / m as f64));
    }
    let s = MatrixPolynomial::new(series)?;
    let mut term = MatrixPolynomial::constant(ComplexMatrix::identity(dim));
    let mut total = vec![ComplexMatrix::zeros(dim); len + 1];
    for order in 0..=len {
        if order > 0 {
            term = truncate(mat_poly_product(&term, &s)?).scale(Complex64::new(1.0 / order as f64, 0.0));
        }
        for (m, c) in term.coeffs().iter().enumerate() {
            total[m] += c;
        }
    }
    let scale = g.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    Ok(g.iter()
        .zip(&total)
        .map(|(a, b)| (a - b).frobenius_norm() / scale)
        .fold(0.0, f64::max))
}

/// `-Σ_k (r_k ω^{n_k})^m`, the eigenvalue of `ℋ^{(m)}` on `|n_1 … n_L⟩`.
pub fn predicted_eigenvalue(spec: &SpectralData, quantum_numbers: &[usize], m: usize) -> Complex64 {
    -quantum_numbers
        .iter()
        .enumerate()
        .map(|(k, &nk)| spec.lambda_at(nk, k).powu(m as u32))
        .sum::<Complex64>()
}

/// `ln|det(H - E𝟙)| - dim·ln‖H‖_F`; at most `ln(1e-8)` when `E` is an eigenvalue to working precision.
pub fn det_oracle_margin(h: &ComplexMatrix, e: Complex64) -> f64 {
    let shifted = h - &ComplexMatrix::scalar(h.dim(), e);
    LuDecomposition::new(&shifted).log_abs_det() - h.dim() as f64 * h.frobenius_norm().ln()
}
