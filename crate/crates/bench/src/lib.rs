//! Shared fixtures for the benchmark harness.

use tau2_core::hamiltonians::{higher_hamiltonians, HamiltonianTower};
use tau2_core::numerics::prony_inverse;
use tau2_core::transfer_matrix::spectral_data;
use tau2_core::{MatrixPolynomial, ModelParams, SpectralData, VandermondeSystem};

/// Chain sizes benchmarked, smallest first.
pub const SIZES: [(usize, usize); 3] = [(2, 3), (3, 2), (3, 3)];
pub const SEED: u64 = 42;

pub fn model(n: usize, len: usize) -> ModelParams {
    ModelParams::random(n, len, SEED).expect("valid size")
}

pub struct Prepared {
    pub params: ModelParams,
    pub tau: MatrixPolynomial,
    pub spec: SpectralData,
    pub tower: HamiltonianTower,
    pub vs: VandermondeSystem,
}

/// Everything up to the projector construction, built once outside the timed loop.
pub fn prepared(n: usize, len: usize) -> Prepared {
    let params = model(n, len);
    let (tau, _, spec) = spectral_data(&params).expect("seeded model is nondegenerate");
    let tower = higher_hamiltonians(&tau, n * len - 1).expect("A0 nonzero");
    let vs = prony_inverse(&spec.lambda).expect("distinct grid");
    Prepared {
        params,
        tau,
        spec,
        tower,
        vs,
    }
}
