//! The commutator sequence `Γ_j`, its truncation, the companion matrix `𝗛`,
//! and the Prony-transformed raising operators `Γ̂`.

use num_complex::Complex64;

use crate::clock_algebra::ParafermionSet;
use crate::error::{Error, Result};
use crate::numerics::{
    mat_poly_product, omega, omega_half_pow, omega_pow, poly_roots, ComplexMatrix, LuDecomposition,
    MatrixPolynomial, ScalarPolynomial, VandermondeSystem,
};
use crate::transfer_matrix::{Coupling, ModelParams, SpectralData};

/// `Γ_0 = Z_1^{-1}`, `Γ_{j+1} = (ω^{-1} - 1)^{-1} [ℋ, Γ_j]`.
#[derive(Debug, Clone)]
pub struct GammaSequence {
    pub gammas: Vec<ComplexMatrix>,
}

impl GammaSequence {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }
}

/// `(ω^{-1} - 1)`.
pub fn commutator_factor(n: usize) -> Complex64 {
    omega(n).conj() - 1.0
}

pub fn gamma_sequence(h: &ComplexMatrix, z1_inv: &ComplexMatrix, n: usize, jmax: usize) -> GammaSequence {
    let inv = Complex64::new(1.0, 0.0) / commutator_factor(n);
    let mut gammas = Vec::with_capacity(jmax + 1);
    gammas.push(z1_inv.clone());
    for j in 0..jmax {
        let next = h.commutator(&gammas[j]).scale(inv);
        gammas.push(next);
    }
    GammaSequence { gammas }
}

/// `Γ_1` written directly as a linear combination of the odd and even parafermions.
pub fn gamma1_closed_form(params: &ModelParams, pf: &ParafermionSet) -> ComplexMatrix {
    let n = params.n;
    let len = params.len as i64;
    let ratio = |kind, idx: i64| params.coupling(kind, idx) / params.coupling(Coupling::B, idx);
    let a_over_b = |from: i64, to: i64| -> Complex64 { (from..=to).map(|l| ratio(Coupling::A, l)).product() };
    let mut out = ComplexMatrix::zeros(pf.psi[0].dim());
    for m in 1..=len {
        let coef = omega_pow(n, m)
            * omega_half_pow(n, n as i64 - 1)
            * a_over_b(1, 2 * m - 2)
            * ratio(Coupling::D, 2 * m - 1);
        out.add_scaled(coef, &pf.psi[(2 * m - 1) as usize]);
    }
    for m in 1..len {
        let coef = omega_pow(n, m) * a_over_b(1, 2 * m - 1) * ratio(Coupling::C, 2 * m);
        out.add_scaled(-coef, &pf.psi[(2 * m) as usize]);
    }
    out.scale(ratio(Coupling::D, 0))
}

/// `‖Γ_0Γ_1 - ω^{-1}Γ_1Γ_0‖ / (‖Γ_0‖‖Γ_1‖)`.
pub fn gamma01_residual(gs: &GammaSequence, n: usize) -> f64 {
    let g0 = &gs.gammas[0];
    let g1 = &gs.gammas[1];
    let lhs = g0 * g1;
    let rhs = (g1 * g0).scale(omega(n).conj());
    (&lhs - &rhs).frobenius_norm() / (g0.frobenius_norm() * g1.frobenius_norm())
}

/// For each `j`, `‖Σ_ℓ s_ℓ Γ_{N(L-ℓ)+j}‖ / max_ℓ ‖s_ℓ Γ_{N(L-ℓ)+j}‖`.
pub fn check_truncation(gs: &GammaSequence, spec: &SpectralData, jrange: impl IntoIterator<Item = usize>) -> Vec<f64> {
    let (n, len) = (spec.n, spec.len);
    jrange
        .into_iter()
        .map(|j| {
            assert!(n * len + j < gs.len(), "Γ sequence too short for j = {j}");
            let mut sum = ComplexMatrix::zeros(gs.gammas[0].dim());
            let mut biggest: f64 = 0.0;
            for (l, &s) in spec.s.iter().enumerate() {
                let term = gs.gammas[n * (len - l) + j].scale(s);
                biggest = biggest.max(term.frobenius_norm());
                sum += &term;
            }
            sum.frobenius_norm() / biggest
        })
        .collect()
}

/// The `NL × NL` companion-like matrix of the commutator action on `Γ_0..Γ_{NL-1}`.
#[derive(Debug, Clone)]
pub struct HMatrix {
    pub n: usize,
    pub len: usize,
    pub h: ComplexMatrix,
}

/// Ones on the superdiagonal; last row `h_{NL-1, mN} = -s_{L-m}/s_0`.
pub fn build_hmatrix(spec: &SpectralData) -> HMatrix {
    let (n, len) = (spec.n, spec.len);
    let size = n * len;
    let mut h = ComplexMatrix::zeros(size);
    for i in 0..size - 1 {
        h[(i, i + 1)] = Complex64::new(1.0, 0.0);
    }
    for m in 0..len {
        h[(size - 1, m * n)] = -spec.s[len - m] / spec.s[0];
    }
    HMatrix { n, len, h }
}

impl HMatrix {
    pub fn size(&self) -> usize {
        self.h.dim()
    }

    /// Row-wise `‖[ℋ, Γ_j] - (ω^{-1}-1) Σ_k h_{jk} Γ_k‖ / ‖[ℋ, Γ_j]‖`, maximized over `j`.
    pub fn recursion_residual(&self, hamiltonian: &ComplexMatrix, gs: &GammaSequence) -> f64 {
        let factor = commutator_factor(self.n);
        let size = self.size();
        let mut worst: f64 = 0.0;
        for j in 0..size {
            let lhs = hamiltonian.commutator(&gs.gammas[j]);
            let mut rhs = ComplexMatrix::zeros(lhs.dim());
            for k in 0..size {
                let hjk = self.h[(j, k)];
                if hjk.norm() != 0.0 {
                    rhs.add_scaled(factor * hjk, &gs.gammas[k]);
                }
            }
            let scale = lhs.frobenius_norm().max(rhs.frobenius_norm());
            worst = worst.max((&lhs - &rhs).frobenius_norm() / scale);
        }
        worst
    }

    /// `det(λ𝟙 - 𝗛)` recovered from determinants at `NL + 1` points on a circle
    /// through an inverse discrete Fourier transform.
    pub fn characteristic_polynomial(&self) -> ScalarPolynomial {
        let size = self.size();
        let samples = size + 1;
        // Radius near the spectral radius keeps every coefficient well resolved.
        let radius = (0..size)
            .map(|m| self.h[(size - 1, m)].norm().powf(1.0 / (size - m) as f64))
            .fold(1e-3, f64::max);
        let mut values = Vec::with_capacity(samples);
        let mut points = Vec::with_capacity(samples);
        for i in 0..samples {
            let z = Complex64::from_polar(radius, std::f64::consts::TAU * i as f64 / samples as f64);
            let shifted = &ComplexMatrix::scalar(size, z) - &self.h;
            values.push(LuDecomposition::new(&shifted).det());
            points.push(z);
        }
        let coeffs = (0..samples)
            .map(|k| {
                let sum: Complex64 = values
                    .iter()
                    .zip(&points)
                    .map(|(v, z)| v * z.powi(-(k as i32)))
                    .sum();
                sum / samples as f64
            })
            .collect();
        ScalarPolynomial::new(coeffs)
    }

    /// Max deviation of the characteristic polynomial from `Σ_m s_m λ^{N(L-m)}`,
    /// relative to `max|s_m|` (with `s_0 = 1`).
    pub fn charpoly_residual(&self, spec: &SpectralData) -> f64 {
        let cp = self.characteristic_polynomial();
        let size = self.size();
        let mut expected = vec![Complex64::new(0.0, 0.0); size + 1];
        for (m, &s) in spec.s.iter().enumerate() {
            expected[self.n * (self.len - m)] = s / spec.s[0];
        }
        let scale = expected.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (0..=size)
            .map(|k| (cp.coeff(k) - expected[k]).norm() / scale)
            .fold(0.0, f64::max)
    }

    /// Roots of the characteristic polynomial matched one-to-one against the `λ` grid.
    pub fn eigenvalue_residual(&self, spec: &SpectralData) -> Result<f64> {
        let roots = poly_roots(&self.characteristic_polynomial())?;
        let scale = spec.lambda.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut unused: Vec<Complex64> = spec.lambda.clone();
        let mut worst: f64 = 0.0;
        for root in roots {
            let (idx, dist) = unused
                .iter()
                .enumerate()
                .map(|(i, l)| (i, (l - root).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("as many roots as grid points");
            worst = worst.max(dist / scale);
            unused.swap_remove(idx);
        }
        Ok(worst)
    }
}

/// `Γ̂_i = Σ_j (P^{-1})_{ij} Γ_j`, flat index `i = kN + p` for 0-based mode `k`.
#[derive(Debug, Clone)]
pub struct HattedGammas {
    pub n: usize,
    pub len: usize,
    pub lambda: Vec<Complex64>,
    pub gh: Vec<ComplexMatrix>,
}

impl HattedGammas {
    /// `Γ̂_{q,k}` for quantum number `q` (mod N) and 0-based mode `k`.
    pub fn get(&self, q: usize, k: usize) -> &ComplexMatrix {
        &self.gh[k * self.n + q % self.n]
    }

    pub fn lambda_at(&self, q: usize, k: usize) -> Complex64 {
        self.lambda[k * self.n + q % self.n]
    }
}

pub fn build_gamma_hat(gs: &GammaSequence, vs: &VandermondeSystem, n: usize) -> Result<HattedGammas> {
    let size = vs.len();
    if !size.is_multiple_of(n) {
        return Err(Error::InvalidParams(format!("{size} nodes is not a multiple of N = {n}")));
    }
    if gs.len() < size {
        return Err(Error::InvalidParams(format!(
            "need Γ_0..Γ_{}, have {} terms",
            size - 1,
            gs.len()
        )));
    }
    let dim = gs.gammas[0].dim();
    let gh = (0..size)
        .map(|i| {
            let mut acc = ComplexMatrix::zeros(dim);
            for j in 0..size {
                acc.add_scaled(vs.inverse(i, j), &gs.gammas[j]);
            }
            acc
        })
        .collect();
    Ok(HattedGammas {
        n,
        len: size / n,
        lambda: vs.lambdas().to_vec(),
        gh,
    })
}

/// Max over `j < NL` of `‖Σ_i λ_i^j Γ̂_i - Γ_j‖ / ‖Γ_j‖`.
pub fn gamma_hat_completeness(gh: &HattedGammas, gs: &GammaSequence) -> f64 {
    let size = gh.gh.len();
    (0..size)
        .map(|j| {
            let mut acc = ComplexMatrix::zeros(gs.gammas[0].dim());
            for (i, g) in gh.gh.iter().enumerate() {
                acc.add_scaled(gh.lambda[i].powu(j as u32), g);
            }
            (&acc - &gs.gammas[j]).frobenius_norm() / gs.gammas[j].frobenius_norm()
        })
        .fold(0.0, f64::max)
}

/// Per flat index: `‖[ℋ, Γ̂_i] - (ω^{-1}-1) λ_i Γ̂_i‖` relative to the larger side.
pub fn eigen_commutator_residuals(gh: &HattedGammas, hamiltonian: &ComplexMatrix) -> Vec<f64> {
    let factor = commutator_factor(gh.n);
    gh.gh
        .iter()
        .zip(&gh.lambda)
        .map(|(g, &l)| {
            let lhs = hamiltonian.commutator(g);
            let rhs = g.scale(factor * l);
            (&lhs - &rhs).frobenius_norm() / lhs.frobenius_norm().max(rhs.frobenius_norm())
        })
        .collect()
}

/// Coefficients in `t` of `(1 - λ_{q,ℓ} t) τ₂(t) Γ̂_{q,ℓ} - (1 - ω λ_{q,ℓ} t) Γ̂_{q,ℓ} τ₂(t)`.
pub fn intertwining_defect(gh: &HattedGammas, tau: &MatrixPolynomial, q: usize, k: usize) -> Result<MatrixPolynomial> {
    let n = gh.n;
    let g = gh.get(q, k);
    let l = gh.lambda_at(q, k);
    let dim = tau.dim();
    let id = ComplexMatrix::identity(dim);
    // τ₂ in powers of t: coefficient m is ω^m τ_{2,m}.
    let tau_t = tau.rescale_variable(omega(n));
    let left_factor = MatrixPolynomial::linear(id.clone(), id.scale(-l))?;
    let right_factor = MatrixPolynomial::linear(id.clone(), id.scale(-l * omega(n)))?;
    let lhs = mat_poly_product(&left_factor, &tau_t.sandwich(None, Some(g)))?;
    let rhs = mat_poly_product(&right_factor, &tau_t.sandwich(Some(g), None))?;
    lhs.try_sub(&rhs)
}

/// Per flat index, the largest intertwining defect coefficient relative to
/// `‖Γ̂‖ Σ_m ‖ω^m τ_{2,m}‖ (1 + |λ|)`.
pub fn check_intertwining(gh: &HattedGammas, tau: &MatrixPolynomial) -> Result<Vec<f64>> {
    let tau_scale: f64 = tau.coeffs().iter().map(ComplexMatrix::frobenius_norm).sum();
    let mut out = Vec::with_capacity(gh.gh.len());
    for k in 0..gh.len {
        for q in 0..gh.n {
            let defect = intertwining_defect(gh, tau, q, k)?;
            let scale = gh.get(q, k).frobenius_norm() * tau_scale * (1.0 + gh.lambda_at(q, k).norm());
            out.push(defect.max_coeff_norm() / scale);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock_algebra::{build_parafermions, ChainOps};
    use crate::hamiltonians::build_h_explicit;
    use crate::numerics::{prony_inverse, relative_distance};
    use crate::transfer_matrix::spectral_data;

    struct Fixture {
        params: ModelParams,
        ops: ChainOps,
        h: ComplexMatrix,
        tau: MatrixPolynomial,
        spec: SpectralData,
        gs: GammaSequence,
    }

    fn fixture(n: usize, l: usize, seed: u64) -> Fixture {
        let params = ModelParams::random(n, l, seed).unwrap();
        let ops = ChainOps::new(n, l).unwrap();
        let (tau, _, spec) = spectral_data(&params).unwrap();
        let h = build_h_explicit(&params, &ops).unwrap();
        let gs = gamma_sequence(&h, &ops.z_inv(1), n, n * l + n + 1);
        Fixture { params, ops, h, tau, spec, gs }
    }

    #[test]
    fn gamma0_and_gamma1() {
        let f = fixture(3, 2, 42);
        assert_eq!(f.gs.gammas[0], f.ops.z_inv(1));
        let pf = build_parafermions(&f.ops);
        let closed = gamma1_closed_form(&f.params, &pf);
        assert!(relative_distance(&f.gs.gammas[1], &closed) <= 1e-10);
        assert!(gamma01_residual(&f.gs, 3) <= 1e-10);
    }

    #[test]
    fn truncation_holds_for_several_offsets() {
        for (n, l, seed) in [(2, 2, 1), (3, 2, 42), (2, 3, 42), (4, 2, 1)] {
            let f = fixture(n, l, seed);
            let res = check_truncation(&f.gs, &f.spec, 0..=n);
            assert!(res.iter().all(|&r| r <= 1e-8), "({n},{l}): {res:?}");
        }
    }

    #[test]
    fn truncation_survives_rescaling() {
        let base = fixture(3, 2, 7);
        let params = base.params.scaled(Complex64::new(2.0, 0.0));
        let ops = ChainOps::new(3, 2).unwrap();
        let (_, _, spec) = spectral_data(&params).unwrap();
        let h = build_h_explicit(&params, &ops).unwrap();
        let gs = gamma_sequence(&h, &ops.z_inv(1), 3, 10);
        assert!(check_truncation(&gs, &spec, 0..=3).iter().all(|&r| r <= 1e-8));
    }

    #[test]
    fn hmatrix_for_single_z2_site() {
        let f = fixture(2, 1, 3);
        let hm = build_hmatrix(&f.spec);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(hm.h[(0, 0)], zero);
        assert_eq!(hm.h[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(hm.h[(1, 0)], -f.spec.s[1] / f.spec.s[0]);
        assert_eq!(hm.h[(1, 1)], zero);
    }

    #[test]
    fn hmatrix_layout_and_spectrum() {
        let f = fixture(3, 2, 42);
        let hm = build_hmatrix(&f.spec);
        let size = 6;
        for j in 0..size {
            if j % 3 != 0 {
                assert_eq!(hm.h[(size - 1, j)].norm(), 0.0);
            }
        }
        assert!(hm.recursion_residual(&f.h, &f.gs) <= 1e-8);
        assert!(hm.charpoly_residual(&f.spec) <= 1e-9);
        assert!(hm.eigenvalue_residual(&f.spec).unwrap() <= 1e-9);
    }

    #[test]
    fn gamma_hat_properties() {
        let f = fixture(3, 2, 42);
        let vs = prony_inverse(&f.spec.lambda).unwrap();
        let gh = build_gamma_hat(&f.gs, &vs, 3).unwrap();
        assert!(gamma_hat_completeness(&gh, &f.gs) <= 1e-10);
        let ec = eigen_commutator_residuals(&gh, &f.h);
        assert!(ec.iter().all(|&r| r <= 1e-8), "{ec:?}");
        let iw = check_intertwining(&gh, &f.tau).unwrap();
        assert!(iw.iter().all(|&r| r <= 1e-8), "{iw:?}");
    }

    #[test]
    fn intertwining_low_orders() {
        let f = fixture(3, 2, 1);
        let vs = prony_inverse(&f.spec.lambda).unwrap();
        let gh = build_gamma_hat(&f.gs, &vs, 3).unwrap();
        let d = intertwining_defect(&gh, &f.tau, 1, 0).unwrap();
        // t^0: A₀Γ̂ - A₀Γ̂.
        assert!(d.coeffs()[0].max_abs() == 0.0);
        // t^1 is ω([τ_{2,1}, Γ̂] - (ω^{-1} - 1) λ A₀ Γ̂), i.e. the eigen-commutator times ωA₀.
        let g = gh.get(1, 0);
        let l = gh.lambda_at(1, 0);
        let n = 3;
        let expected = (&f.h.commutator(g) - &g.scale(commutator_factor(n) * l)).scale(omega(n) * f.spec.a0);
        assert!((&d.coeffs()[1] - &expected).frobenius_norm() <= 1e-10 * g.frobenius_norm());
        assert_eq!(d.degree(), f.spec.len + 1);
    }

    #[test]
    fn single_mode_gamma_hat_is_discrete_fourier() {
        // L = 1: Γ̂_{p} = (1/N) Σ_q (r ω^p)^{-q} Γ_q.
        let n = 4;
        let f = fixture(n, 1, 5);
        let vs = prony_inverse(&f.spec.lambda).unwrap();
        let gh = build_gamma_hat(&f.gs, &vs, n).unwrap();
        for p in 0..n {
            let l = f.spec.lambda[p];
            let mut expected = ComplexMatrix::zeros(n);
            for q in 0..n {
                expected.add_scaled(l.powi(-(q as i32)) / n as f64, &f.gs.gammas[q]);
            }
            assert!(relative_distance(gh.get(p, 0), &expected) <= 1e-12);
        }
    }
}
