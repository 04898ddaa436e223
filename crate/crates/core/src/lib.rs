//! Explicit finite-matrix realization of the inhomogeneous τ₂(t) model with
//! free boundaries: clock and parafermion operators, the transfer matrix and
//! its functional relation, the commuting Hamiltonian tower, raising
//! operators, spectral projectors and the raising-operator eigenbasis, each
//! with a residual-based certification routine.

pub mod clock_algebra;
pub mod eigenbasis;
pub mod error;
pub mod hamiltonians;
pub mod numerics;
pub mod projector_engine;
pub mod raising_operators;
pub mod rng;
pub mod transfer_matrix;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, MatrixPolynomial, ScalarPolynomial, VandermondeSystem};
pub use transfer_matrix::{ModelParams, SpectralData};

pub use num_complex::Complex64;
