//! Spectral projectors `𝒫_{ω^p,k}` assembled from the Hamiltonian tower through
//! the inverse Vandermonde matrix, with their axioms and reconstructions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonians::HamiltonianTower;
use crate::numerics::{
    mat_poly_product, omega, relative_commutator, relative_distance, ComplexMatrix, MatrixPolynomial,
    VandermondeSystem,
};
use crate::raising_operators::HattedGammas;
use crate::transfer_matrix::SpectralData;

/// Projectors in flat order `i = kN + p` (0-based mode `k`) and the mode operators `u_k`.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    pub n: usize,
    pub len: usize,
    pub lambda: Vec<Complex64>,
    pub projectors: Vec<ComplexMatrix>,
    /// `u_k = Σ_p r_k ω^p 𝒫_{p,k}`.
    pub u: Vec<ComplexMatrix>,
}

impl ProjectorFamily {
    pub fn get(&self, p: usize, k: usize) -> &ComplexMatrix {
        &self.projectors[k * self.n + p % self.n]
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }
}

/// `𝒫_i = -Σ_{m<NL} (P^{-1})_{i,m} ℋ^{(m)}`.
pub fn build_projectors(tower: &HamiltonianTower, vs: &VandermondeSystem, n: usize) -> Result<ProjectorFamily> {
    let size = vs.len();
    if size == 0 || !size.is_multiple_of(n) {
        return Err(Error::InvalidParams(format!("{size} nodes is not a positive multiple of N = {n}")));
    }
    if tower.h.len() < size {
        return Err(Error::InvalidParams(format!(
            "tower stops at order {}, need {}",
            tower.max_order(),
            size - 1
        )));
    }
    let dim = tower.h[0].dim();
    let projectors: Vec<ComplexMatrix> = (0..size)
        .map(|i| {
            let mut acc = ComplexMatrix::zeros(dim);
            for m in 0..size {
                acc.add_scaled(-vs.inverse(i, m), &tower.h[m]);
            }
            acc
        })
        .collect();
    let lambda = vs.lambdas().to_vec();
    let len = size / n;
    let u = (0..len)
        .map(|k| {
            let mut acc = ComplexMatrix::zeros(dim);
            for p in 0..n {
                acc.add_scaled(lambda[k * n + p], &projectors[k * n + p]);
            }
            acc
        })
        .collect();
    Ok(ProjectorFamily {
        n,
        len,
        lambda,
        projectors,
        u,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomResiduals {
    /// `max ‖𝒫² - 𝒫‖ / ‖𝒫‖`.
    pub idempotency: f64,
    /// `max_{p≠q} ‖𝒫_{p,k}𝒫_{q,k}‖ / (‖𝒫_{p,k}‖‖𝒫_{q,k}‖)`.
    pub orthogonality: f64,
    /// `max_k ‖Σ_p 𝒫_{p,k} - 𝟙‖ / ‖𝟙‖`.
    pub completeness: f64,
    /// `max` relative commutator over all pairs.
    pub commutation: f64,
    /// `max |trace 𝒫 - N^{L-1}| / N^{L-1}`.
    pub trace: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        [self.idempotency, self.orthogonality, self.completeness, self.commutation, self.trace]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn check_axioms(pf: &ProjectorFamily) -> AxiomResiduals {
    let (n, len) = (pf.n, pf.len);
    let dim = pf.dim();
    let id = ComplexMatrix::identity(dim);
    let expected_trace = (n.pow(len as u32 - 1)) as f64;
    let mut out = AxiomResiduals {
        idempotency: 0.0,
        orthogonality: 0.0,
        completeness: 0.0,
        commutation: 0.0,
        trace: 0.0,
    };
    for p in &pf.projectors {
        let sq = p * p;
        out.idempotency = out.idempotency.max((&sq - p).frobenius_norm() / p.frobenius_norm());
        out.trace = out.trace.max((p.trace() - expected_trace).norm() / expected_trace);
    }
    for k in 0..len {
        let mut sum = ComplexMatrix::zeros(dim);
        for p in 0..n {
            sum += pf.get(p, k);
            for q in 0..n {
                if p != q {
                    let (a, b) = (pf.get(p, k), pf.get(q, k));
                    let r = (a * b).frobenius_norm() / (a.frobenius_norm() * b.frobenius_norm());
                    out.orthogonality = out.orthogonality.max(r);
                }
            }
        }
        out.completeness = out.completeness.max(relative_distance(&sum, &id));
    }
    for (i, a) in pf.projectors.iter().enumerate() {
        for b in &pf.projectors[i + 1..] {
            out.commutation = out.commutation.max(relative_commutator(a, b));
        }
    }
    out
}

/// `Σ_p p · trace 𝒫_{p,k}` for each mode.
pub fn weighted_traces(pf: &ProjectorFamily) -> Vec<Complex64> {
    (0..pf.len)
        .map(|k| (0..pf.n).map(|p| pf.get(p, k).trace() * p as f64).sum())
        .collect()
}

/// `max ‖[𝒫_i, ℋ^{(m)}]‖ / (‖𝒫_i‖‖ℋ^{(m)}‖)` over the whole tower.
pub fn tower_commutation(pf: &ProjectorFamily, tower: &HamiltonianTower) -> f64 {
    let mut worst: f64 = 0.0;
    for p in &pf.projectors {
        for h in &tower.h {
            worst = worst.max(relative_commutator(p, h));
        }
    }
    worst
}

/// For each order present in `tower`, `‖ℋ^{(m)} + Σ_i λ_i^m 𝒫_i‖` relative to the operands.
pub fn reconstruct_hamiltonians(pf: &ProjectorFamily, tower: &HamiltonianTower) -> Vec<f64> {
    tower
        .h
        .iter()
        .enumerate()
        .map(|(m, h)| {
            let mut acc = ComplexMatrix::zeros(pf.dim());
            for (p, l) in pf.projectors.iter().zip(&pf.lambda) {
                acc.add_scaled(-l.powu(m as u32), p);
            }
            relative_distance(h, &acc)
        })
        .collect()
}

/// `A₀ ∏_k (𝟙 - ωt u_k)` as a polynomial in `ωt`, the same variable as `tau`.
pub fn tau_from_projectors(pf: &ProjectorFamily, a0: Complex64) -> Result<MatrixPolynomial> {
    let id = ComplexMatrix::identity(pf.dim());
    let mut acc = MatrixPolynomial::constant(id.scale(a0));
    for u in &pf.u {
        let factor = MatrixPolynomial::linear(id.clone(), -u)?;
        acc = mat_poly_product(&acc, &factor)?;
    }
    Ok(acc)
}

/// Per coefficient of `ωt`, relative distance between `tau` and its projector form.
pub fn reconstruct_tau(pf: &ProjectorFamily, tau: &MatrixPolynomial, spec: &SpectralData) -> Result<Vec<f64>> {
    let rebuilt = tau_from_projectors(pf, spec.a0)?;
    let zero = ComplexMatrix::zeros(pf.dim());
    let top = tau.degree().max(rebuilt.degree());
    Ok((0..=top)
        .map(|m| {
            let a = tau.coeff(m).unwrap_or(&zero);
            let b = rebuilt.coeff(m).unwrap_or(&zero);
            relative_distance(a, b)
        })
        .collect())
}

fn projector_gammahat_with(pf: &ProjectorFamily, gh: &HattedGammas, sign: f64) -> f64 {
    let n = pf.n;
    let mut worst: f64 = 0.0;
    for k in 0..pf.len {
        for p in 0..n {
            let proj = pf.get(p, k);
            for l in 0..gh.len {
                for q in 0..n {
                    let g = gh.get(q, l);
                    let mut coef = 0.0;
                    if k == l {
                        if p == q {
                            coef += 1.0;
                        }
                        if p == (q + n - 1) % n {
                            coef -= 1.0;
                        }
                    }
                    let lhs = proj.commutator(g);
                    let diff = &lhs - &g.scale_real(sign * coef);
                    worst = worst.max(diff.frobenius_norm() / g.frobenius_norm());
                }
            }
        }
    }
    worst
}

/// `max ‖[𝒫_{p,k}, Γ̂_{q,ℓ}] - δ_{kℓ}(δ_{p,q} - δ_{p,q-1}) Γ̂_{q,ℓ}‖ / ‖Γ̂_{q,ℓ}‖`, deltas mod N.
///
/// `Γ̂_{q,ℓ}` maps the `n_ℓ = q-1` sector into `n_ℓ = q`, which fixes the sign.
pub fn check_projector_gammahat(pf: &ProjectorFamily, gh: &HattedGammas) -> f64 {
    projector_gammahat_with(pf, gh, 1.0)
}

/// The same residual with the opposite sign convention `δ_{p,q-1} - δ_{p,q}`.
pub fn projector_gammahat_flipped(pf: &ProjectorFamily, gh: &HattedGammas) -> f64 {
    projector_gammahat_with(pf, gh, -1.0)
}

/// `ω` times the negated mode sum, i.e. the `t^1` coefficient of the projector
/// form divided by `A₀`.
pub fn linear_coefficient(pf: &ProjectorFamily) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(pf.dim());
    for u in &pf.u {
        acc.add_scaled(-omega(pf.n), u);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock_algebra::ChainOps;
    use crate::hamiltonians::{build_h_explicit, clock_limit, higher_hamiltonians, ClockSpecialParams};
    use crate::numerics::prony_inverse;
    use crate::raising_operators::{build_gamma_hat, gamma_sequence};
    use crate::transfer_matrix::{spectral_data, ModelParams};

    struct Fixture {
        params: ModelParams,
        tau: MatrixPolynomial,
        spec: SpectralData,
        tower: HamiltonianTower,
        pf: ProjectorFamily,
    }

    fn fixture_from(params: ModelParams) -> Fixture {
        let (n, l) = (params.n, params.len);
        let (tau, _, spec) = spectral_data(&params).unwrap();
        let tower = higher_hamiltonians(&tau, n * l + 2).unwrap();
        let vs = prony_inverse(&spec.lambda).unwrap();
        let pf = build_projectors(&tower, &vs, n).unwrap();
        Fixture { params, tau, spec, tower, pf }
    }

    fn fixture(n: usize, l: usize, seed: u64) -> Fixture {
        fixture_from(ModelParams::random(n, l, seed).unwrap())
    }

    #[test]
    fn axioms_on_grid() {
        for (n, l, seed) in [(2, 1, 1), (2, 2, 42), (2, 3, 1), (3, 2, 42), (4, 2, 1)] {
            let f = fixture(n, l, seed);
            let ax = check_axioms(&f.pf);
            assert!(ax.max() <= 1e-8, "({n},{l},{seed}): {ax:?}");
            assert!(tower_commutation(&f.pf, &f.tower) <= 1e-8);
            let wt = weighted_traces(&f.pf);
            for w in &wt {
                assert!((w - wt[0]).norm() <= 1e-8 * wt[0].norm().max(1.0));
            }
        }
    }

    #[test]
    fn tower_is_spectral_beyond_nl() {
        let f = fixture(3, 2, 42);
        let res = reconstruct_hamiltonians(&f.pf, &f.tower);
        assert_eq!(res.len(), 9);
        assert!(res.iter().all(|&r| r <= 1e-8), "{res:?}");
    }

    #[test]
    fn zeroth_and_first_orders() {
        let f = fixture(2, 2, 1);
        let mut sum = ComplexMatrix::zeros(4);
        for p in &f.pf.projectors {
            sum += p;
        }
        assert!(relative_distance(&sum, &ComplexMatrix::scalar(4, Complex64::new(2.0, 0.0))) <= 1e-10);
        let ops = ChainOps::new(2, 2).unwrap();
        let h = build_h_explicit(&f.params, &ops).unwrap();
        let minus_u: ComplexMatrix = f.pf.u.iter().fold(ComplexMatrix::zeros(4), |acc, u| &acc - u);
        assert!(relative_distance(&h, &minus_u) <= 1e-9);
    }

    #[test]
    fn tau_rebuilt_from_modes() {
        let f = fixture(2, 3, 42);
        let res = reconstruct_tau(&f.pf, &f.tau, &f.spec).unwrap();
        assert!(res.iter().all(|&r| r <= 1e-8), "{res:?}");
        let rebuilt = tau_from_projectors(&f.pf, f.spec.a0).unwrap();
        assert!(relative_distance(&rebuilt.coeffs()[0], &ComplexMatrix::scalar(8, f.spec.a0)) <= 1e-14);
        // Coefficient of ωt is -A₀ Σ u_k.
        let lin = linear_coefficient(&f.pf).scale(f.spec.a0 / omega(2));
        assert!(relative_distance(&rebuilt.coeffs()[1], &lin) <= 1e-12);
    }

    #[test]
    fn projector_gammahat_sign() {
        let f = fixture(3, 2, 42);
        let ops = ChainOps::new(3, 2).unwrap();
        let h = build_h_explicit(&f.params, &ops).unwrap();
        let gs = gamma_sequence(&h, &ops.z_inv(1), 3, 6);
        let vs = prony_inverse(&f.spec.lambda).unwrap();
        let gh = build_gamma_hat(&gs, &vs, 3).unwrap();
        assert!(check_projector_gammahat(&f.pf, &gh) <= 1e-8);
        // The other sign misses by 2Γ̂ wherever the delta terms are nonzero.
        assert!((projector_gammahat_flipped(&f.pf, &gh) - 2.0).abs() <= 1e-8);
        // Different modes commute.
        assert!(relative_commutator(f.pf.get(0, 0), gh.get(1, 1)) <= 1e-8);
    }

    #[test]
    fn single_z2_clock_site_projects_onto_shift_eigenspaces() {
        let clock = ClockSpecialParams::new(vec![Complex64::new(1.0, 0.0)], vec![]).unwrap();
        let f = fixture_from(clock_limit(2, &clock).unwrap());
        let ops = ChainOps::new(2, 1).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!((f.spec.r[0] - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        let x = ops.x(1);
        let plus = (&id + x).scale_real(0.5);
        let minus = (&id - x).scale_real(0.5);
        assert!(relative_distance(f.pf.get(0, 0), &plus) <= 1e-12);
        assert!(relative_distance(f.pf.get(1, 0), &minus) <= 1e-12);
    }
}
