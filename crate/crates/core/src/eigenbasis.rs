//! Ground state, raising-operator eigenbasis and the matrix-element structure
//! of `Γ_j` in that basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{omega, vec_norm, ComplexMatrix, LuDecomposition, MatrixPolynomial};
use crate::projector_engine::ProjectorFamily;
use crate::raising_operators::{GammaSequence, HattedGammas};
use crate::rng::Lcg64;
use crate::transfer_matrix::SpectralData;

/// Norm below which a projected or raised vector counts as vanished.
pub const VANISH_NORM: f64 = 1e-8;
pub const GROUND_STATE_ATTEMPTS: u64 = 8;
/// Amplitudes below this fraction of the largest are skipped when fixing the phase.
pub const PHASE_PIVOT_REL: f64 = 1e-6;

/// `n_1..n_L`, each in `0..N`. Slot 0 is mode 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers(pub Vec<usize>);

impl QuantumNumbers {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidParams(format!("quantum number {bad} outside 0..{n}")));
        }
        Ok(Self(values))
    }

    pub fn ground(len: usize) -> Self {
        Self(vec![0; len])
    }

    /// Mode 1 is the most significant digit.
    pub fn from_index(mut index: usize, n: usize, len: usize) -> Self {
        let mut v = vec![0; len];
        for slot in (0..len).rev() {
            v[slot] = index % n;
            index /= n;
        }
        Self(v)
    }

    pub fn index(&self, n: usize) -> usize {
        self.0.iter().fold(0, |acc, &d| acc * n + d)
    }

    pub fn all(n: usize, len: usize) -> impl Iterator<Item = Self> {
        (0..n.pow(len as u32)).map(move |i| Self::from_index(i, n, len))
    }

    /// `n_slot -> n_slot + 1 mod N`.
    pub fn raised(&self, slot: usize, n: usize) -> Self {
        let mut v = self.0.clone();
        v[slot] = (v[slot] + 1) % n;
        Self(v)
    }

    pub fn lowered(&self, slot: usize, n: usize) -> Self {
        let mut v = self.0.clone();
        v[slot] = (v[slot] + n - 1) % n;
        Self(v)
    }

    /// The slot in which `self` is `other` raised once, if that is the only difference.
    pub fn raising_slot_from(&self, other: &Self, n: usize) -> Option<usize> {
        let mut slot = None;
        for (i, (&a, &b)) in self.0.iter().zip(&other.0).enumerate() {
            if a != b {
                if slot.is_some() || a != (b + 1) % n {
                    return None;
                }
                slot = Some(i);
            }
        }
        slot
    }
}

/// Scales `v` to unit norm with its first significant amplitude real and positive.
pub fn normalize_with_phase(v: &mut [Complex64]) -> f64 {
    let norm = vec_norm(v);
    let biggest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .find(|z| z.norm() > PHASE_PIVOT_REL * biggest)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let factor = pivot.conj() / (pivot.norm() * norm);
    for z in v.iter_mut() {
        *z *= factor;
    }
    norm
}

/// `∏_k 𝒫_{0,k} w` for a seeded random `w`, normalized.
pub fn ground_state(pf: &ProjectorFamily, seed: u64) -> Result<Vec<Complex64>> {
    let dim = pf.dim();
    for attempt in 0..GROUND_STATE_ATTEMPTS {
        let mut rng = Lcg64::new(seed.wrapping_add(attempt));
        let mut v: Vec<Complex64> = (0..dim).map(|_| rng.complex_box()).collect();
        for k in 0..pf.len {
            v = pf.get(0, k).matvec(&v);
        }
        if vec_norm(&v) >= VANISH_NORM {
            normalize_with_phase(&mut v);
            return Ok(v);
        }
    }
    Err(Error::ZeroProjection {
        attempts: GROUND_STATE_ATTEMPTS as usize,
    })
}

/// `Θ_{p,k} = Γ̂_{p,k} Γ̂_{p-1,k} ⋯ Γ̂_{1,k}`, with `Θ_{0,k} = 𝟙`.
pub fn build_theta(gh: &HattedGammas, p: usize, k: usize) -> ComplexMatrix {
    let dim = gh.gh[0].dim();
    let mut acc = ComplexMatrix::identity(dim);
    for q in 1..=p {
        acc = gh.get(q, k) * &acc;
    }
    acc
}

#[derive(Debug, Clone)]
pub struct Eigenbasis {
    pub n: usize,
    pub len: usize,
    /// `states[i]` carries quantum numbers `QuantumNumbers::from_index(i)`.
    pub states: Vec<Vec<Complex64>>,
    /// Columns are the states.
    pub v: ComplexMatrix,
    pub v_inv: ComplexMatrix,
}

impl Eigenbasis {
    pub fn state(&self, qn: &QuantumNumbers) -> &[Complex64] {
        &self.states[qn.index(self.n)]
    }

    pub fn labels(&self) -> impl Iterator<Item = QuantumNumbers> {
        QuantumNumbers::all(self.n, self.len)
    }

    /// `V^{-1} op V`.
    pub fn transform(&self, op: &ComplexMatrix) -> ComplexMatrix {
        &(&self.v_inv * op) * &self.v
    }

    /// `|det(V^† V)|` for the unit-norm states.
    pub fn gram_determinant(&self) -> f64 {
        let gram = &self.v.dagger() * &self.v;
        LuDecomposition::new(&gram).det().norm()
    }
}

/// `v_n = Θ_{n_1,1} ⋯ Θ_{n_L,L} |0⟩` for every tuple, normalized with the phase rule.
pub fn build_eigenbasis(pf: &ProjectorFamily, gh: &HattedGammas, seed: u64) -> Result<Eigenbasis> {
    let (n, len) = (pf.n, pf.len);
    let ground = ground_state(pf, seed)?;
    let thetas: Vec<Vec<ComplexMatrix>> = (0..len)
        .map(|k| (0..n).map(|p| build_theta(gh, p, k)).collect())
        .collect();
    let mut states = Vec::with_capacity(n.pow(len as u32));
    for (index, qn) in QuantumNumbers::all(n, len).enumerate() {
        let mut v = ground.clone();
        for slot in (0..len).rev() {
            if qn.0[slot] > 0 {
                v = thetas[slot][qn.0[slot]].matvec(&v);
            }
        }
        let norm = normalize_with_phase(&mut v);
        if norm < VANISH_NORM || !norm.is_finite() {
            return Err(Error::DegenerateBasis { index, norm });
        }
        states.push(v);
    }
    let v = ComplexMatrix::from_columns(&states);
    let v_inv = v.inverse().ok_or(Error::DegenerateBasis {
        index: 0,
        norm: 0.0,
    })?;
    Ok(Eigenbasis {
        n,
        len,
        states,
        v,
        v_inv,
    })
}

/// Fixed sample points for the eigenvalue relation of `τ₂(t)`.
pub fn sample_points() -> [Complex64; 3] {
    [
        Complex64::from_polar(0.3, 0.7),
        Complex64::from_polar(0.8, 2.1),
        Complex64::from_polar(1.3, -1.1),
    ]
}

/// `max ‖τ₂(t) v_n - A₀ ∏_k (1 - r_k ω^{1+n_k} t) v_n‖` relative to the larger side,
/// over every state and every `t`.
pub fn eigen_relation_residual(basis: &Eigenbasis, tau: &MatrixPolynomial, spec: &SpectralData, ts: &[Complex64]) -> f64 {
    let w = omega(spec.n);
    let mut worst: f64 = 0.0;
    for &t in ts {
        let tau_t = tau.eval(w * t);
        for qn in basis.labels() {
            let v = basis.state(&qn);
            let lhs = tau_t.matvec(v);
            let eig: Complex64 = spec.a0
                * qn.0
                    .iter()
                    .enumerate()
                    .map(|(k, &nk)| 1.0 - spec.lambda_at(nk, k) * w * t)
                    .product::<Complex64>();
            let diff: Vec<Complex64> = lhs.iter().zip(v).map(|(a, b)| a - eig * b).collect();
            let scale = vec_norm(&lhs).max(eig.norm() * vec_norm(v));
            worst = worst.max(vec_norm(&diff) / scale);
        }
    }
    worst
}

/// `max ‖op v_n - μ(n) v_n‖` for a supplied eigenvalue rule, relative to
/// `max(‖op v_n‖, |μ|, ‖op‖/√dim)` so that zero eigenvalues are measured against the operator scale.
pub fn diagonal_residual(basis: &Eigenbasis, op: &ComplexMatrix, eigenvalue: impl Fn(&QuantumNumbers) -> Complex64) -> f64 {
    let op_scale = op.frobenius_norm() / (op.dim() as f64).sqrt();
    let mut worst: f64 = 0.0;
    for qn in basis.labels() {
        let v = basis.state(&qn);
        let ov = op.matvec(v);
        let mu = eigenvalue(&qn);
        let diff: Vec<Complex64> = ov.iter().zip(v).map(|(a, b)| a - mu * b).collect();
        let scale = vec_norm(&ov).max(mu.norm()).max(op_scale);
        if scale > 0.0 {
            worst = worst.max(vec_norm(&diff) / scale);
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GammaStructure {
    /// Largest `|⟨a|Γ_j|b⟩| / ‖Γ_j‖` over pairs that are not a single raising step.
    pub forbidden: f64,
    /// Largest deviation of `⟨a|Γ_j|b⟩` from `λ^j ⟨a|Γ̂|b⟩`, relative to `‖Γ_j‖`.
    pub power_law: f64,
    /// Largest `|⟨a|Γ̂_{q,ℓ}|b⟩| / ‖Γ̂_{q,ℓ}‖` outside its single raising family.
    pub gamma_hat_forbidden: f64,
    /// Largest deviation of `⟨a|Γ̂|b⟩` from `⟨a|Γ_0|b⟩`, relative to `‖Γ_0‖`.
    pub template: f64,
}

impl GammaStructure {
    pub fn max(&self) -> f64 {
        self.forbidden.max(self.power_law).max(self.gamma_hat_forbidden).max(self.template)
    }
}

/// Eigenbasis matrix elements of `Γ_0..Γ_{jmax}` and of every `Γ̂`.
pub fn check_gamma_structure(gs: &GammaSequence, gh: &HattedGammas, basis: &Eigenbasis, spec: &SpectralData, jmax: usize) -> GammaStructure {
    let n = basis.n;
    let labels: Vec<QuantumNumbers> = basis.labels().collect();
    let hats: Vec<ComplexMatrix> = gh.gh.iter().map(|g| basis.transform(g)).collect();
    let mut out = GammaStructure::default();

    for (i, g) in gh.gh.iter().enumerate() {
        let (l, q) = (i / n, i % n);
        let m = &hats[i];
        let scale = g.frobenius_norm();
        for (a, qa) in labels.iter().enumerate() {
            for (b, qb) in labels.iter().enumerate() {
                let in_family = qa.raising_slot_from(qb, n) == Some(l) && qa.0[l] == q;
                if !in_family {
                    out.gamma_hat_forbidden = out.gamma_hat_forbidden.max(m[(a, b)].norm() / scale);
                }
            }
        }
    }

    for j in 0..=jmax.min(gs.len() - 1) {
        let m = basis.transform(&gs.gammas[j]);
        let scale = gs.gammas[j].frobenius_norm();
        for (a, qa) in labels.iter().enumerate() {
            for (b, qb) in labels.iter().enumerate() {
                match qa.raising_slot_from(qb, n) {
                    None => out.forbidden = out.forbidden.max(m[(a, b)].norm() / scale),
                    Some(l) => {
                        let q = qa.0[l];
                        let hat = hats[l * n + q][(a, b)];
                        let lam = spec.lambda_at(q, l);
                        let dev = (m[(a, b)] - lam.powu(j as u32) * hat).norm() / scale;
                        out.power_law = out.power_law.max(dev);
                        if j == 0 {
                            out.template = out.template.max((m[(a, b)] - hat).norm() / scale);
                        }
                    }
                }
            }
        }
    }
    out
}

/// One `(k, ℓ, p, q, {n})` combination of the two-mode identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ap96Index {
    pub k: usize,
    pub l: usize,
    pub p: usize,
    pub q: usize,
    pub background: QuantumNumbers,
}

/// All combinations, or `samples` seeded draws when `N·L` exceeds `full_limit`.
pub fn ap96_indices(n: usize, len: usize, full_limit: usize, samples: usize, seed: u64) -> Vec<Ap96Index> {
    let build = |k: usize, l: usize, p: usize, q: usize, bg: usize| {
        let mut background = QuantumNumbers::from_index(bg, n, len);
        background.0[k] = p;
        background.0[l] = q;
        Ap96Index { k, l, p, q, background }
    };
    let dim = n.pow(len as u32);
    if n * len <= full_limit {
        let mut out = Vec::new();
        for k in 0..len {
            for l in 0..len {
                if k == l {
                    continue;
                }
                for p in 0..n {
                    for q in 0..n {
                        for bg in 0..dim {
                            let idx = build(k, l, p, q, bg);
                            if !out.contains(&idx) {
                                out.push(idx);
                            }
                        }
                    }
                }
            }
        }
        out
    } else if len < 2 {
        Vec::new()
    } else {
        let mut rng = Lcg64::new(seed);
        let mut pick = |m: usize| (rng.next_u64() % m as u64) as usize;
        (0..samples)
            .map(|_| {
                let k = pick(len);
                let l = (k + 1 + pick(len - 1)) % len;
                let (p, q, bg) = (pick(n), pick(n), pick(dim));
                build(k, l, p, q, bg)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Ap96Residuals {
    /// `|Σ_c (⟨a|Γ_0|c⟩⟨c|Γ_1|b⟩ - ω^{-1}⟨a|Γ_1|c⟩⟨c|Γ_0|b⟩)|` over `Σ_c |terms|`.
    pub identity: f64,
    /// Contribution of intermediate states outside the two lowered families, same scale.
    pub outside_families: f64,
    /// Deviation of `Γ_1` elements from `r_k ω^p` (ε = 0) or `r_ℓ ω^q` (ε = 1) times `Γ_0`.
    pub ratio: f64,
    pub combinations: usize,
}

impl Ap96Residuals {
    pub fn max(&self) -> f64 {
        self.identity.max(self.outside_families).max(self.ratio)
    }
}

pub fn check_ap96(gs: &GammaSequence, basis: &Eigenbasis, spec: &SpectralData, indices: &[Ap96Index]) -> Ap96Residuals {
    let n = basis.n;
    let m0 = basis.transform(&gs.gammas[0]);
    let m1 = basis.transform(&gs.gammas[1]);
    let winv = omega(n).conj();
    let dim = m0.dim();
    let elem_floor = 1e-14 * m0.frobenius_norm().max(m1.frobenius_norm());
    let mut out = Ap96Residuals {
        combinations: indices.len(),
        ..Default::default()
    };
    let ratio_dev = |g1: Complex64, g0: Complex64, lam: Complex64| -> f64 {
        let scale = g1.norm().max(lam.norm() * g0.norm());
        if scale <= elem_floor {
            0.0
        } else {
            (g1 - lam * g0).norm() / scale
        }
    };
    for idx in indices {
        let top = &idx.background;
        let bottom = top.lowered(idx.k, n).lowered(idx.l, n);
        let (a, b) = (top.index(n), bottom.index(n));
        let via_k = top.lowered(idx.k, n).index(n);
        let via_l = top.lowered(idx.l, n).index(n);

        let mut total = Complex64::new(0.0, 0.0);
        let mut families = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for c in 0..dim {
            let term = m0[(a, c)] * m1[(c, b)] - winv * m1[(a, c)] * m0[(c, b)];
            magnitude += (m0[(a, c)] * m1[(c, b)]).norm() + (m1[(a, c)] * m0[(c, b)]).norm();
            total += term;
            if c == via_k || c == via_l {
                families += term;
            }
        }
        if magnitude > elem_floor * elem_floor {
            out.identity = out.identity.max(total.norm() / magnitude);
            out.outside_families = out.outside_families.max((total - families).norm() / magnitude);
        }

        let lam_k = spec.lambda_at(idx.p, idx.k);
        let lam_l = spec.lambda_at(idx.q, idx.l);
        // ε = 0: the k slot is raised on the left, the ℓ slot on the right.
        out.ratio = out.ratio.max(ratio_dev(m1[(a, via_k)], m0[(a, via_k)], lam_k));
        out.ratio = out.ratio.max(ratio_dev(m1[(via_k, b)], m0[(via_k, b)], lam_l));
        // ε = 1: the order of the two slots swapped.
        out.ratio = out.ratio.max(ratio_dev(m1[(a, via_l)], m0[(a, via_l)], lam_l));
        out.ratio = out.ratio.max(ratio_dev(m1[(via_l, b)], m0[(via_l, b)], lam_k));
    }
    out
}

/// `(‖Θ̂^N - c𝟙‖ / |c|, c)` for `Θ̂ = Σ_q Γ̂_{q,k}` and `c = trace(Θ̂^N)/dim`.
pub fn theta_hat_defect(gh: &HattedGammas, k: usize) -> (f64, Complex64) {
    let dim = gh.gh[0].dim();
    let mut theta = ComplexMatrix::zeros(dim);
    for q in 0..gh.n {
        theta += gh.get(q, k);
    }
    let power = theta.pow(gh.n);
    let (defect, c) = power.scalar_defect();
    if c.norm() == 0.0 {
        (f64::INFINITY, c)
    } else {
        (defect / (c.norm() * (dim as f64).sqrt()), c)
    }
}

/// Elementwise ratios `⟨a|Γ̂_{p,k}Γ̂_{q,ℓ}|b⟩ / ⟨a|Γ̂_{q,ℓ}Γ̂_{p,k}|b⟩` on the support of the
/// denominator, for modes `k ≠ ℓ`.
pub fn exchange_ratios(gh: &HattedGammas, basis: &Eigenbasis, p: usize, k: usize, q: usize, l: usize) -> Vec<Complex64> {
    let a = basis.transform(&(gh.get(p, k) * gh.get(q, l)));
    let b = basis.transform(&(gh.get(q, l) * gh.get(p, k)));
    let floor = 1e-8 * b.max_abs();
    let dim = a.dim();
    let mut out = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if b[(i, j)].norm() > floor {
                out.push(a[(i, j)] / b[(i, j)]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock_algebra::ChainOps;
    use crate::hamiltonians::{
        build_h_explicit, clock_limit, higher_hamiltonians, predicted_eigenvalue, ClockSpecialParams, HamiltonianTower,
    };
    use crate::numerics::prony_inverse;
    use crate::projector_engine::build_projectors;
    use crate::raising_operators::{build_gamma_hat, gamma_sequence};
    use crate::transfer_matrix::{spectral_data, ModelParams};

    struct Fixture {
        tau: MatrixPolynomial,
        spec: SpectralData,
        tower: HamiltonianTower,
        pf: ProjectorFamily,
        gs: GammaSequence,
        gh: HattedGammas,
    }

    fn fixture_from(params: ModelParams) -> Fixture {
        let (n, l) = (params.n, params.len);
        let ops = ChainOps::new(n, l).unwrap();
        let (tau, _, spec) = spectral_data(&params).unwrap();
        let tower = higher_hamiltonians(&tau, n * l).unwrap();
        let vs = prony_inverse(&spec.lambda).unwrap();
        let pf = build_projectors(&tower, &vs, n).unwrap();
        let h = build_h_explicit(&params, &ops).unwrap();
        let gs = gamma_sequence(&h, &ops.z_inv(1), n, n * l + 1);
        let gh = build_gamma_hat(&gs, &vs, n).unwrap();
        Fixture { tau, spec, tower, pf, gs, gh }
    }

    fn fixture(n: usize, l: usize, seed: u64) -> Fixture {
        fixture_from(ModelParams::random(n, l, seed).unwrap())
    }

    #[test]
    fn quantum_number_indexing() {
        let q = QuantumNumbers::from_index(5, 3, 2);
        assert_eq!(q.0, vec![1, 2]);
        assert_eq!(q.index(3), 5);
        assert_eq!(q.raised(1, 3).0, vec![1, 0]);
        assert_eq!(q.lowered(0, 3).0, vec![0, 2]);
        assert_eq!(q.raised(1, 3).raising_slot_from(&q, 3), Some(1));
        assert_eq!(q.raising_slot_from(&q, 3), None);
        assert!(QuantumNumbers::new(3, vec![0, 3]).is_err());
    }

    #[test]
    fn phase_rule() {
        let mut v = vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -2.0), Complex64::new(1.0, 0.0)];
        let norm = normalize_with_phase(&mut v);
        assert!((norm - 5f64.sqrt()).abs() < 1e-15);
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
        assert!((vec_norm(&v) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ground_state_is_fixed_by_zero_projectors() {
        let f = fixture(3, 2, 42);
        let g = ground_state(&f.pf, 9).unwrap();
        for k in 0..2 {
            let pg = f.pf.get(0, k).matvec(&g);
            let d: Vec<Complex64> = pg.iter().zip(&g).map(|(a, b)| a - b).collect();
            assert!(vec_norm(&d) <= 1e-8);
        }
        let h = f.tower.hamiltonian().matvec(&g);
        let e = predicted_eigenvalue(&f.spec, &[0, 0], 1);
        let rayleigh: Complex64 = g.iter().zip(&h).map(|(a, b)| a.conj() * b).sum();
        assert!((rayleigh - e).norm() <= 1e-8 * e.norm());
    }

    #[test]
    fn single_z2_clock_ground_state() {
        let clock = ClockSpecialParams::new(vec![Complex64::new(1.0, 0.0)], vec![]).unwrap();
        let f = fixture_from(clock_limit(2, &clock).unwrap());
        let g = ground_state(&f.pf, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g[0] - s).norm() < 1e-12 && (g[1] - s).norm() < 1e-12, "{g:?}");
        let (defect, _) = theta_hat_defect(&f.gh, 0);
        assert!(defect <= 1e-8);
    }

    #[test]
    fn theta_products() {
        let f = fixture(3, 2, 1);
        assert_eq!(build_theta(&f.gh, 0, 1), ComplexMatrix::identity(9));
        assert_eq!(build_theta(&f.gh, 1, 1), *f.gh.get(1, 1));
        let t2 = build_theta(&f.gh, 2, 0);
        assert_eq!(t2, f.gh.get(2, 0) * f.gh.get(1, 0));
    }

    #[test]
    fn eigenbasis_on_grid() {
        for (n, l, seed) in [(2, 2, 1), (3, 2, 42), (2, 3, 42), (4, 2, 1)] {
            let f = fixture(n, l, seed);
            let basis = build_eigenbasis(&f.pf, &f.gh, seed).unwrap();
            assert!(basis.gram_determinant() > 1e-12, "({n},{l}) gram");
            let er = eigen_relation_residual(&basis, &f.tau, &f.spec, &sample_points());
            assert!(er <= 1e-8, "({n},{l}) eigen {er}");
            for m in 0..n * l {
                let r = diagonal_residual(&basis, &f.tower.h[m], |qn| predicted_eigenvalue(&f.spec, &qn.0, m));
                assert!(r <= 1e-8, "({n},{l}) H[{m}] {r}");
            }
            for k in 0..l {
                for p in 0..n {
                    let r = diagonal_residual(&basis, f.pf.get(p, k), |qn| {
                        Complex64::new(if qn.0[k] == p { 1.0 } else { 0.0 }, 0.0)
                    });
                    assert!(r <= 1e-8, "({n},{l}) P[{p},{k}] {r}");
                }
            }
            let gsr = check_gamma_structure(&f.gs, &f.gh, &basis, &f.spec, n * l - 1);
            assert!(gsr.max() <= 1e-8, "({n},{l}) {gsr:?}");
            let idx = ap96_indices(n, l, 9, 64, seed);
            let ap = check_ap96(&f.gs, &basis, &f.spec, &idx);
            assert!(ap.max() <= 1e-8, "({n},{l}) {ap:?}");
        }
    }

    #[test]
    fn ground_label_is_ground_state() {
        let f = fixture(2, 2, 3);
        let basis = build_eigenbasis(&f.pf, &f.gh, 5).unwrap();
        let g = ground_state(&f.pf, 5).unwrap();
        let d: Vec<Complex64> = basis.state(&QuantumNumbers::ground(2)).iter().zip(&g).map(|(a, b)| a - b).collect();
        assert!(vec_norm(&d) <= 1e-14);
    }

    #[test]
    fn ap96_index_sets() {
        let full = ap96_indices(2, 2, 9, 64, 1);
        // (k,ℓ) ordered pairs × p × q, background fully fixed for L = 2.
        assert_eq!(full.len(), 2 * 2 * 2);
        let sampled = ap96_indices(4, 3, 9, 64, 1);
        assert_eq!(sampled.len(), 64);
        assert!(sampled.iter().all(|i| i.k != i.l));
        assert!(ap96_indices(3, 1, 9, 64, 1).is_empty());
    }

    #[test]
    fn exchange_ratios_are_finite() {
        let f = fixture(3, 2, 42);
        let basis = build_eigenbasis(&f.pf, &f.gh, 42).unwrap();
        let ratios = exchange_ratios(&f.gh, &basis, 1, 0, 1, 1);
        assert!(!ratios.is_empty());
        assert!(ratios.iter().all(|z| z.is_finite()));
    }
}
