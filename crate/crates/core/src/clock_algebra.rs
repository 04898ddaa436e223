//! Single-site clock operators, their chain embeddings, and the parafermions.
//!
//! Site 1 is the most significant factor of the composite index, so the basis
//! state `|σ_1 … σ_L⟩` sits at index `Σ_j σ_j N^{L-j}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{omega, omega_half_pow, ComplexMatrix};

/// `X`, `Z`, `Y` on one `N`-state site.
#[derive(Debug, Clone)]
pub struct ClockSite {
    pub n: usize,
    pub omega: Complex64,
    /// `[X]_{σ,σ'} = δ(σ, σ'+1)`.
    pub x: ComplexMatrix,
    /// `[Z]_{σ,σ'} = ω^σ δ(σ, σ')`.
    pub z: ComplexMatrix,
    /// `Y = ω^{(N-1)/2} X^{-1} Z`.
    pub y: ComplexMatrix,
}

impl ClockSite {
    pub fn x_inv(&self) -> ComplexMatrix {
        self.x.dagger()
    }

    pub fn z_inv(&self) -> ComplexMatrix {
        self.z.dagger()
    }

    pub fn y_inv(&self) -> ComplexMatrix {
        self.y.dagger()
    }
}

pub fn build_site_ops(n: usize) -> Result<ClockSite> {
    if n < 2 {
        return Err(Error::InvalidN(n));
    }
    let w = omega(n);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let x = ComplexMatrix::from_fn(n, |s, sp| if s == (sp + 1) % n { one } else { zero });
    let z = ComplexMatrix::diagonal(&(0..n).map(|s| crate::numerics::omega_pow(n, s as i64)).collect::<Vec<_>>());
    let y = (&x.dagger() * &z).scale(omega_half_pow(n, n as i64 - 1));
    Ok(ClockSite { n, omega: w, x, z, y })
}

/// `𝟙^{⊗(j-1)} ⊗ op ⊗ 𝟙^{⊗(L-j)}` for a 1-based site `j`.
pub fn embed(op: &ComplexMatrix, site: usize, len: usize) -> Result<ComplexMatrix> {
    if site == 0 || site > len {
        return Err(Error::SiteOutOfRange { site, len });
    }
    let n = op.dim();
    let left = n.pow((site - 1) as u32);
    let right = n.pow((len - site) as u32);
    let mut out = ComplexMatrix::identity(left).kron(op);
    if right > 1 {
        out = out.kron(&ComplexMatrix::identity(right));
    }
    Ok(out)
}

/// All single-site operators embedded into an `L`-site chain, indexed by 1-based site.
#[derive(Debug, Clone)]
pub struct ChainOps {
    pub site: ClockSite,
    pub len: usize,
    x: Vec<ComplexMatrix>,
    z: Vec<ComplexMatrix>,
    y: Vec<ComplexMatrix>,
}

impl ChainOps {
    pub fn new(n: usize, len: usize) -> Result<Self> {
        let site = build_site_ops(n)?;
        if len == 0 {
            return Err(Error::SiteOutOfRange { site: 0, len });
        }
        let mut x = Vec::with_capacity(len);
        let mut z = Vec::with_capacity(len);
        let mut y = Vec::with_capacity(len);
        for j in 1..=len {
            x.push(embed(&site.x, j, len)?);
            z.push(embed(&site.z, j, len)?);
            y.push(embed(&site.y, j, len)?);
        }
        Ok(Self { site, len, x, z, y })
    }

    pub fn n(&self) -> usize {
        self.site.n
    }

    pub fn dim(&self) -> usize {
        self.x[0].dim()
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.dim())
    }

    pub fn x(&self, j: usize) -> &ComplexMatrix {
        &self.x[j - 1]
    }

    pub fn z(&self, j: usize) -> &ComplexMatrix {
        &self.z[j - 1]
    }

    pub fn y(&self, j: usize) -> &ComplexMatrix {
        &self.y[j - 1]
    }

    pub fn x_inv(&self, j: usize) -> ComplexMatrix {
        self.x[j - 1].dagger()
    }

    pub fn z_inv(&self, j: usize) -> ComplexMatrix {
        self.z[j - 1].dagger()
    }

    pub fn y_inv(&self, j: usize) -> ComplexMatrix {
        self.y[j - 1].dagger()
    }

    /// `X_from X_{from+1} … X_to`; identity when `to < from`.
    pub fn x_string(&self, from: usize, to: usize) -> ComplexMatrix {
        let mut out = self.identity();
        for l in from..=to {
            if l >= 1 && l <= self.len {
                out = &out * self.x(l);
            }
        }
        out
    }
}

/// The `2L` parafermions `ψ_0 … ψ_{2L-1}`.
#[derive(Debug, Clone)]
pub struct ParafermionSet {
    pub n: usize,
    pub len: usize,
    pub psi: Vec<ComplexMatrix>,
}

impl ParafermionSet {
    pub fn psi_inv(&self, k: usize) -> ComplexMatrix {
        self.psi[k].dagger()
    }
}

/// `ψ_{2j-2} = (∏_{ℓ<j} X_ℓ) Z_j^{-1}`, `ψ_{2j-1} = (∏_{ℓ<j} X_ℓ) Y_j^{-1}`.
pub fn build_parafermions(ops: &ChainOps) -> ParafermionSet {
    let len = ops.len;
    let mut psi = Vec::with_capacity(2 * len);
    for j in 1..=len {
        let string = ops.x_string(1, j - 1);
        psi.push(&string * &ops.z_inv(j));
        psi.push(&string * &ops.y_inv(j));
    }
    ParafermionSet {
        n: ops.n(),
        len,
        psi,
    }
}

/// Max residuals of the single-site relations: `ZX - ωXZ`, `X^N, Z^N, Y^N - 𝟙`,
/// unitarity of X, Z, Y, and the two expressions for `Y`.
pub fn site_algebra_residual(site: &ClockSite) -> f64 {
    let n = site.n;
    let id = ComplexMatrix::identity(n);
    let w = site.omega;
    let mut worst: f64 = 0.0;
    let zx = &site.z * &site.x;
    let xz = (&site.x * &site.z).scale(w);
    worst = worst.max((&zx - &xz).frobenius_norm());
    for m in [&site.x, &site.z, &site.y] {
        worst = worst.max((&m.pow(n) - &id).frobenius_norm());
        worst = worst.max((&(m * &m.dagger()) - &id).frobenius_norm());
    }
    let y_alt = (&site.z * &site.x_inv()).scale(omega_half_pow(n, n as i64 + 1));
    worst = worst.max((&site.y - &y_alt).frobenius_norm());
    let y_inv_alt = (&site.z_inv() * &site.x).scale(omega_half_pow(n, 1 - n as i64));
    worst = worst.max((&site.y_inv() - &y_inv_alt).frobenius_norm());
    worst
}

/// Max residual of `ψ_jψ_k - ω^{-1}ψ_kψ_j` (j < k) and `ψ_j^N - 𝟙`.
pub fn parafermion_residual(set: &ParafermionSet) -> f64 {
    let w_inv = omega(set.n).conj();
    let dim = set.psi[0].dim();
    let id = ComplexMatrix::identity(dim);
    let mut worst: f64 = 0.0;
    for j in 0..set.psi.len() {
        worst = worst.max((&set.psi[j].pow(set.n) - &id).frobenius_norm());
        for k in j + 1..set.psi.len() {
            let lhs = &set.psi[j] * &set.psi[k];
            let rhs = (&set.psi[k] * &set.psi[j]).scale(w_inv);
            worst = worst.max((&lhs - &rhs).frobenius_norm());
        }
    }
    worst
}
