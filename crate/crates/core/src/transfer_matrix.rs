//! The open-boundary τ₂(t) transfer matrix, its functional relation, and the
//! spectral data (`s_ℓ`, `r_k`, `λ` grid) extracted from it.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{
    check_distinct, mat_poly_product, omega, omega_pow, poly_roots, ComplexMatrix, MatrixPolynomial,
    ScalarPolynomial,
};
use crate::rng::Lcg64;

/// Tolerance on the off-identity and off-period parts of the functional product.
pub const FUNCTIONAL_TOL: f64 = 1e-9;

/// Couplings of the inhomogeneous model with free boundaries.
///
/// Each array has length `2L` and holds indices `0..2L-1`. The boundary
/// entries are implied: `a_{-1} = c_{-1} = d_{-1} = 0`, `b_{-1} = 1`,
/// `a_{2L} = c_{2L} = d_{2L} = 0`, `b_{2L} = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub len: usize,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    A,
    B,
    C,
    D,
}

impl ModelParams {
    pub fn new(
        n: usize,
        len: usize,
        a: Vec<Complex64>,
        b: Vec<Complex64>,
        c: Vec<Complex64>,
        d: Vec<Complex64>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        if len == 0 {
            return Err(Error::InvalidParams("chain length L must be at least 1".into()));
        }
        for (name, arr) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            if arr.len() != 2 * len {
                return Err(Error::InvalidParams(format!(
                    "coupling array {name} has length {}, expected {}",
                    arr.len(),
                    2 * len
                )));
            }
            if arr.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidParams(format!("coupling array {name} is not finite")));
            }
        }
        if let Some(idx) = b.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::InvalidParams(format!("b_{idx} = 0")));
        }
        Ok(Self { n, len, a, b, c, d })
    }

    /// Couplings drawn from the pinned generator: modulus uniform in `[0.5, 1.5]`,
    /// phase uniform in `[0, 2π)`, filling `a`, `b`, `c`, `d` in that order.
    pub fn random(n: usize, len: usize, seed: u64) -> Result<Self> {
        let mut rng = Lcg64::new(seed);
        let mut draw = || (0..2 * len).map(|_| rng.polar(0.5, 1.5)).collect::<Vec<_>>();
        let a = draw();
        let b = draw();
        let c = draw();
        let d = draw();
        Self::new(n, len, a, b, c, d)
    }

    /// Coupling at index `-1..=2L`, substituting the fixed boundary values.
    pub fn coupling(&self, kind: Coupling, idx: i64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let top = 2 * self.len as i64;
        if idx == -1 || idx == top {
            return if kind == Coupling::B { one } else { zero };
        }
        assert!((0..top).contains(&idx), "coupling index {idx} out of range");
        let arr = match kind {
            Coupling::A => &self.a,
            Coupling::B => &self.b,
            Coupling::C => &self.c,
            Coupling::D => &self.d,
        };
        arr[idx as usize]
    }

    /// `A₀ = ∏_{ℓ=0}^{2L-1} b_ℓ`.
    pub fn a0(&self) -> Complex64 {
        self.b.iter().product()
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.len as u32)
    }

    /// Every coupling multiplied by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        let sc = |v: &Vec<Complex64>| v.iter().map(|z| z * s).collect();
        Self {
            n: self.n,
            len: self.len,
            a: sc(&self.a),
            b: sc(&self.b),
            c: sc(&self.c),
            d: sc(&self.d),
        }
    }
}

/// A row of spins `σ_1..σ_L` in `ℤ_N`, site 1 most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig(pub Vec<usize>);

impl SpinConfig {
    pub fn from_index(mut index: usize, n: usize, len: usize) -> Self {
        let mut digits = vec![0; len];
        for slot in digits.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        Self(digits)
    }

    pub fn index(&self, n: usize) -> usize {
        self.0.iter().fold(0, |acc, &s| acc * n + s)
    }
}

/// The weight `W_j(σ_j, σ_{j+1}, σ'_{j+1}, σ'_j)` as `(w0, w1)` with `W = w0 + t·w1`.
///
/// Spins are taken mod `N`. Combinations outside the four allowed patterns
/// (`σ' ∈ {σ, σ-1}` at both ends) give `(0, 0)`.
pub fn irf_weight(
    params: &ModelParams,
    j: usize,
    s_j: usize,
    s_next: usize,
    sp_next: usize,
    sp_j: usize,
) -> (Complex64, Complex64) {
    let n = params.n;
    let zero = Complex64::new(0.0, 0.0);
    let w = omega(n);
    let phase = omega_pow(n, s_j as i64 - s_next as i64 + 1);
    let lo = 2 * j as i64 - 1;
    let hi = 2 * j as i64;
    let cp = |kind, idx| params.coupling(kind, idx);
    use Coupling::{A, B, C, D};

    let down = |s: usize, sp: usize| -> Option<bool> {
        if sp % n == s % n {
            Some(false)
        } else if sp % n == (s + n - 1) % n {
            Some(true)
        } else {
            None
        }
    };
    let (Some(left_down), Some(right_down)) = (down(s_j, sp_j), down(s_next, sp_next)) else {
        return (zero, zero);
    };
    match (right_down, left_down) {
        (false, false) => (cp(B, lo) * cp(B, hi), -phase * cp(C, lo) * cp(C, hi)),
        (false, true) => (zero, -w * cp(D, lo) * cp(B, hi) + phase * cp(A, lo) * cp(C, hi)),
        (true, false) => (cp(B, lo) * cp(D, hi) - phase * cp(C, lo) * cp(A, hi), zero),
        (true, true) => (phase * cp(A, lo) * cp(A, hi), -w * cp(D, lo) * cp(D, hi)),
    }
}

/// Matrix coefficients of τ₂ in powers of `t` (not `ωt`), degree `L + 1`,
/// with the boundary spins fixed to `boundary`.
pub fn tau2_t_coefficients(params: &ModelParams, boundary: usize) -> Vec<ComplexMatrix> {
    let n = params.n;
    let len = params.len;
    let dim = params.dim();
    let mut coeffs = vec![ComplexMatrix::zeros(dim); len + 2];
    let mut row_spins = vec![0usize; len + 2];
    let mut col_spins = vec![0usize; len + 2];
    let mut poly = Vec::with_capacity(len + 2);
    for row in 0..dim {
        let sigma = SpinConfig::from_index(row, n, len);
        row_spins[0] = boundary;
        row_spins[1..=len].copy_from_slice(&sigma.0);
        row_spins[len + 1] = boundary;
        'col: for col in 0..dim {
            let sigma_p = SpinConfig::from_index(col, n, len);
            col_spins[0] = boundary;
            col_spins[1..=len].copy_from_slice(&sigma_p.0);
            col_spins[len + 1] = boundary;
            poly.clear();
            poly.push(Complex64::new(1.0, 0.0));
            for j in 0..=len {
                let (w0, w1) = irf_weight(
                    params,
                    j,
                    row_spins[j],
                    row_spins[j + 1],
                    col_spins[j + 1],
                    col_spins[j],
                );
                if w0.norm() == 0.0 && w1.norm() == 0.0 {
                    continue 'col;
                }
                poly.push(Complex64::new(0.0, 0.0));
                for m in (0..poly.len()).rev() {
                    let lower = if m > 0 { poly[m - 1] * w1 } else { Complex64::new(0.0, 0.0) };
                    poly[m] = poly[m] * w0 + lower;
                }
            }
            for (m, &v) in poly.iter().enumerate() {
                coeffs[m][(row, col)] = v;
            }
        }
    }
    coeffs
}

/// τ₂(t) as `Σ_{m=0}^{L} (ωt)^m τ_{2,m}`, built by enumerating every pair of rows.
///
/// The `t^{L+1}` coefficient vanishes identically because `W_0` is independent
/// of `t`; it is dropped here (see [`degree_excess`]).
pub fn build_tau2(params: &ModelParams) -> Result<MatrixPolynomial> {
    if let Some(idx) = params.b.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::InvalidParams(format!("b_{idx} = 0")));
    }
    let n = params.n;
    let raw = tau2_t_coefficients(params, 0);
    let coeffs = raw
        .into_iter()
        .take(params.len + 1)
        .enumerate()
        .map(|(m, c)| c.scale(omega_pow(n, -(m as i64))))
        .collect();
    MatrixPolynomial::new(coeffs)
}

/// `‖τ_{2,L+1}‖ / |A₀|`: size of the coefficient past the expected degree.
pub fn degree_excess(params: &ModelParams) -> f64 {
    let raw = tau2_t_coefficients(params, 0);
    raw[params.len + 1].frobenius_norm() / params.a0().norm()
}

/// Relative distance between τ₂ built with boundary spins 0 and with boundary spins `boundary`.
pub fn boundary_independence(params: &ModelParams, boundary: usize) -> f64 {
    let base = tau2_t_coefficients(params, 0);
    let other = tau2_t_coefficients(params, boundary % params.n);
    let scale: f64 = base.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
    base.iter()
        .zip(&other)
        .map(|(x, y)| (x - y).frobenius_norm() / scale)
        .fold(0.0, f64::max)
}

/// Max over coefficient pairs of `‖[τ_{2,m}, τ_{2,m'}]‖ / (‖τ_{2,m}‖‖τ_{2,m'}‖)`.
pub fn commuting_family_residual(tau: &MatrixPolynomial) -> f64 {
    let mut worst: f64 = 0.0;
    for (m, a) in tau.coeffs().iter().enumerate() {
        for b in &tau.coeffs()[m + 1..] {
            worst = worst.max(crate::numerics::relative_commutator(a, b));
        }
    }
    worst
}

/// Outcome of `τ₂(t)τ₂(ωt)…τ₂(ω^{N-1}t)`.
#[derive(Debug, Clone)]
pub struct FunctionalProduct {
    /// `f(x)` with `x = t^N`, `f(0) = A₀^N`.
    pub f: ScalarPolynomial,
    /// Largest off-identity part of any coefficient, relative to the largest coefficient.
    pub scalar_residual: f64,
    /// Largest coefficient at a power not divisible by `N`, relative to the largest coefficient.
    pub periodic_residual: f64,
}

/// Multiplies out the `N` rotated copies of τ₂ and reads off `f(t^N)`.
pub fn functional_product(tau: &MatrixPolynomial, n: usize) -> Result<FunctionalProduct> {
    // Coefficient of t^m in τ₂(ω^k t) is ω^{m(k+1)} τ_{2,m}.
    let mut product: Option<MatrixPolynomial> = None;
    for k in 0..n {
        let rotated = tau.rescale_variable(omega_pow(n, k as i64 + 1));
        product = Some(match product {
            None => rotated,
            Some(p) => mat_poly_product(&p, &rotated)?,
        });
    }
    let product = product.expect("N >= 2");
    let scale = product.max_coeff_norm();
    let dim = product.dim() as f64;

    let mut scalar_residual: f64 = 0.0;
    let mut periodic_residual: f64 = 0.0;
    let mut f = Vec::new();
    let mut worst_scalar = (0, 0.0);
    let mut worst_periodic = (0, 0.0);
    for (m, coeff) in product.coeffs().iter().enumerate() {
        let (defect, c) = coeff.scalar_defect();
        let rel = defect / scale;
        if rel > scalar_residual {
            scalar_residual = rel;
            worst_scalar = (m, rel);
        }
        if m % n == 0 {
            f.push(c);
        } else {
            let rel = c.norm() * dim.sqrt() / scale;
            if rel > periodic_residual {
                periodic_residual = rel;
                worst_periodic = (m, rel);
            }
        }
    }
    if scalar_residual > FUNCTIONAL_TOL {
        return Err(Error::NotScalar {
            power: worst_scalar.0,
            residual: worst_scalar.1,
        });
    }
    if periodic_residual > FUNCTIONAL_TOL {
        return Err(Error::NotPeriodic {
            power: worst_periodic.0,
            residual: worst_periodic.1,
        });
    }
    // Drop numerically vanishing top coefficients relative to f(0).
    let f = ScalarPolynomial::new(f).trimmed(1e-12);
    Ok(FunctionalProduct {
        f,
        scalar_residual,
        periodic_residual,
    })
}

/// `A₀`, the normalized `s_ℓ`, the roots `r_k` and the grid `λ_{kN+p} = r_k ω^p` (0-based `k`).
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub n: usize,
    pub len: usize,
    pub a0: Complex64,
    /// `s_0..s_L` with `s_0 = 1`.
    pub s: Vec<Complex64>,
    /// `r_1..r_L` (stored 0-based), each with argument in `[0, 2π/N)`.
    pub r: Vec<Complex64>,
    pub lambda: Vec<Complex64>,
}

impl SpectralData {
    /// Flat index of `(p, k)` with 0-based mode `k`.
    #[inline]
    pub fn flat(&self, p: usize, k: usize) -> usize {
        k * self.n + p
    }

    /// `λ` for quantum number `p` of 0-based mode `k`: `r_k ω^p`.
    pub fn lambda_at(&self, p: usize, k: usize) -> Complex64 {
        self.lambda[self.flat(p % self.n, k)]
    }

    /// Per-root relative residual of `Σ_ℓ s_ℓ (r_k^N)^{L-ℓ}`.
    pub fn root_residuals(&self) -> Vec<f64> {
        self.r
            .iter()
            .map(|&r| {
                let y = r.powu(self.n as u32);
                let mut sum = Complex64::new(0.0, 0.0);
                let mut mag = 0.0;
                for (l, &s) in self.s.iter().enumerate() {
                    let term = s * y.powu((self.len - l) as u32);
                    sum += term;
                    mag += term.norm();
                }
                if mag == 0.0 {
                    0.0
                } else {
                    sum.norm() / mag
                }
            })
            .collect()
    }
}

/// `arg y` this close below `2π` is read as `0` when choosing the branch of `y^{1/N}`.
pub const BRANCH_SNAP: f64 = 1e-9;

/// Extracts `s_ℓ`, `r_k` and the `λ` grid from `f`.
///
/// `s_ℓ = f_ℓ / f_0`, which equals `(-1)^ℓ e_ℓ(r_1^N, …, r_L^N)` because
/// `f(x) = A₀^N ∏(1 - r_k^N x)`. The values `y_k = r_k^N` are the roots of
/// `Σ_ℓ s_ℓ y^{L-ℓ}`.
pub fn spectral_roots(f: &ScalarPolynomial, a0: Complex64, n: usize, len: usize) -> Result<SpectralData> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f0 = f.coeff(0);
    if f0.norm() == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let s: Vec<Complex64> = (0..=len).map(|l| f.coeff(l) / f0).collect();
    let max_s = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if s[len].norm() <= 1e-12 * max_s {
        // f has degree < L: at least one x-root is at infinity, i.e. some r_k = 0.
        return Err(Error::ZeroRoot(len - 1));
    }
    let reversed = ScalarPolynomial::new(s.iter().rev().copied().collect());
    let ys = poly_roots(&reversed)?;

    let mut r: Vec<Complex64> = Vec::with_capacity(len);
    for (k, &y) in ys.iter().enumerate() {
        if y.norm() <= 1e-300 {
            return Err(Error::ZeroRoot(k));
        }
        let mut arg = y.arg().rem_euclid(TAU);
        // Round-off on an exactly positive real y must not push r into the last sector.
        if arg > TAU - BRANCH_SNAP {
            arg = 0.0;
        }
        r.push(Complex64::from_polar(y.norm().powf(1.0 / n as f64), arg / n as f64));
    }
    r.sort_by(|x, y| {
        x.norm()
            .partial_cmp(&y.norm())
            .unwrap()
            .then(x.arg().rem_euclid(TAU).partial_cmp(&y.arg().rem_euclid(TAU)).unwrap())
    });

    let mut lambda = Vec::with_capacity(n * len);
    for &rk in &r {
        for p in 0..n {
            lambda.push(rk * omega_pow(n, p as i64));
        }
    }
    check_distinct(&lambda)?;
    Ok(SpectralData {
        n,
        len,
        a0,
        s,
        r,
        lambda,
    })
}

/// Runs the full chain `build_tau2 → functional_product → spectral_roots`.
pub fn spectral_data(params: &ModelParams) -> Result<(MatrixPolynomial, FunctionalProduct, SpectralData)> {
    let tau = build_tau2(params)?;
    let fp = functional_product(&tau, params.n)?;
    let spec = spectral_roots(&fp.f, params.a0(), params.n, params.len)?;
    Ok((tau, fp, spec))
}
