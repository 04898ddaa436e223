//! Dependency-ordered execution of every verification check.

use std::time::Instant;

use num_complex::Complex64;
use tau2_core::clock_algebra::{
    build_parafermions, parafermion_residual, site_algebra_residual, ChainOps, ParafermionSet,
};
use tau2_core::eigenbasis::{
    ap96_indices, build_eigenbasis, check_ap96, check_gamma_structure, diagonal_residual, eigen_relation_residual,
    exchange_ratios, sample_points, theta_hat_defect, Eigenbasis,
};
use tau2_core::hamiltonians::{
    build_h_clock, build_h_explicit, build_h_parafermion, clock_limit, det_oracle_margin, higher_hamiltonians,
    predicted_eigenvalue, ClockSpecialParams, HamiltonianTower,
};
use tau2_core::numerics::{prony_inverse, relative_distance};
use tau2_core::projector_engine::{
    build_projectors, check_axioms, check_projector_gammahat, reconstruct_hamiltonians, reconstruct_tau,
    tower_commutation, ProjectorFamily,
};
use tau2_core::raising_operators::{
    build_gamma_hat, build_hmatrix, check_intertwining, check_truncation, eigen_commutator_residuals,
    gamma01_residual, gamma1_closed_form, gamma_hat_completeness, gamma_sequence, GammaSequence, HattedGammas,
};
use tau2_core::transfer_matrix::{
    boundary_independence, build_tau2, commuting_family_residual, degree_excess, functional_product, spectral_roots,
    FunctionalProduct,
};
use tau2_core::{ComplexMatrix, MatrixPolynomial, SpectralData, VandermondeSystem};

use crate::config::RunConfig;
use crate::report::{CheckRecord, Comparison, ModelEcho, StageRecord, Status, VerificationReport};

/// Largest number of quantum-number tuples fed to the determinant oracle.
pub const DET_ORACLE_MAX_TUPLES: usize = 81;
/// `N·L` up to which every AP96 index combination is checked.
pub const AP96_FULL_LIMIT: usize = 9;
pub const AP96_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ops,
    Tau,
    Functional,
    Spectral,
    Vandermonde,
    Hamiltonian,
    Tower,
    Gammas,
    GammaHat,
    Projectors,
    Eigenbasis,
}

impl Stage {
    pub const ALL: [Stage; 11] = [
        Stage::Ops,
        Stage::Tau,
        Stage::Functional,
        Stage::Spectral,
        Stage::Vandermonde,
        Stage::Hamiltonian,
        Stage::Tower,
        Stage::Gammas,
        Stage::GammaHat,
        Stage::Projectors,
        Stage::Eigenbasis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ops => "clock_operators",
            Stage::Tau => "tau2",
            Stage::Functional => "functional_product",
            Stage::Spectral => "spectral_roots",
            Stage::Vandermonde => "vandermonde",
            Stage::Hamiltonian => "hamiltonian",
            Stage::Tower => "hamiltonian_tower",
            Stage::Gammas => "gamma_sequence",
            Stage::GammaHat => "gamma_hat",
            Stage::Projectors => "projectors",
            Stage::Eigenbasis => "eigenbasis",
        }
    }

    fn deps(self) -> &'static [Stage] {
        match self {
            Stage::Ops | Stage::Tau => &[],
            Stage::Functional => &[Stage::Tau],
            Stage::Spectral => &[Stage::Functional],
            Stage::Vandermonde => &[Stage::Spectral],
            Stage::Hamiltonian => &[Stage::Ops],
            Stage::Tower => &[Stage::Tau],
            Stage::Gammas => &[Stage::Ops, Stage::Hamiltonian],
            Stage::GammaHat => &[Stage::Gammas, Stage::Vandermonde],
            Stage::Projectors => &[Stage::Tower, Stage::Vandermonde],
            Stage::Eigenbasis => &[Stage::Projectors, Stage::GammaHat],
        }
    }
}

macro_rules! checks {
    ($($variant:ident => $name:literal, $threshold:expr, $cmp:ident, [$($stage:ident),*];)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CheckId { $($variant),* }

        impl CheckId {
            /// Every check, in execution order.
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(CheckId::$variant => $name),* }
            }

            pub fn from_name(name: &str) -> Option<Self> {
                match name { $($name => Some(CheckId::$variant),)* _ => None }
            }

            /// `None` for report-only quantities.
            pub fn default_threshold(self) -> Option<f64> {
                match self { $(CheckId::$variant => $threshold),* }
            }

            pub fn comparison(self) -> Comparison {
                match self { $(CheckId::$variant => Comparison::$cmp),* }
            }

            pub fn stages(self) -> &'static [Stage] {
                match self { $(CheckId::$variant => &[$(Stage::$stage),*]),* }
            }
        }
    };
}

checks! {
    ClockRelations => "clock_relations", Some(1e-12), AtMost, [Ops];
    ParafermionRelations => "parafermion_relations", Some(1e-12), AtMost, [Ops];
    Tau2Degree => "tau2_degree", Some(1e-12), AtMost, [];
    Tau2Boundary => "tau2_boundary", Some(1e-12), AtMost, [];
    CommutingFamily => "commuting_family", Some(1e-10), AtMost, [Tau];
    FunctionalScalar => "functional_scalar", Some(1e-9), AtMost, [Functional];
    FunctionalPeriodic => "functional_periodic", Some(1e-9), AtMost, [Functional];
    FunctionalDegree => "functional_degree", Some(0.0), AtMost, [Functional];
    SpectralRoots => "spectral_roots", Some(1e-9), AtMost, [Spectral];
    DetOracle => "det_oracle", Some(1e-8), AtMost, [Spectral, Hamiltonian];
    HamiltonianForms => "hamiltonian_forms", Some(1e-10), AtMost, [Ops, Tau, Hamiltonian];
    ClockLimit => "clock_limit", Some(1e-10), AtMost, [Ops];
    TowerCommutation => "tower_commutation", Some(1e-10), AtMost, [Tower];
    GammaRelations => "gamma_relations", Some(1e-10), AtMost, [Ops, Gammas];
    Truncation => "truncation", Some(1e-8), AtMost, [Gammas, Spectral];
    HMatrixRecursion => "hmatrix_recursion", Some(1e-8), AtMost, [Hamiltonian, Gammas, Spectral];
    HMatrixCharpoly => "hmatrix_charpoly", Some(1e-9), AtMost, [Spectral];
    HMatrixEigenvalues => "hmatrix_eigenvalues", Some(1e-9), AtMost, [Spectral];
    GammaHatCompleteness => "gamma_hat_completeness", Some(1e-8), AtMost, [Gammas, GammaHat];
    GammaHatEigen => "gamma_hat_eigen", Some(1e-8), AtMost, [Hamiltonian, GammaHat];
    Intertwining => "intertwining", Some(1e-8), AtMost, [Tau, GammaHat];
    ProjectorIdempotency => "projector_idempotency", Some(1e-8), AtMost, [Projectors];
    ProjectorOrthogonality => "projector_orthogonality", Some(1e-8), AtMost, [Projectors];
    ProjectorCompleteness => "projector_completeness", Some(1e-8), AtMost, [Projectors];
    ProjectorCommutation => "projector_commutation", Some(1e-8), AtMost, [Projectors];
    ProjectorTrace => "projector_trace", Some(1e-8), AtMost, [Projectors];
    ProjectorTower => "projector_tower_commutation", Some(1e-8), AtMost, [Projectors, Tower];
    HamiltonianReconstruction => "hamiltonian_reconstruction", Some(1e-8), AtMost, [Projectors, Tower];
    TauReconstruction => "tau_reconstruction", Some(1e-8), AtMost, [Projectors, Tau, Spectral];
    ProjectorGammaHat => "projector_gammahat", Some(1e-8), AtMost, [Projectors, GammaHat];
    EigenbasisGram => "eigenbasis_gram", Some(1e-12), Above, [Eigenbasis];
    EigenRelation => "eigen_relation", Some(1e-8), AtMost, [Eigenbasis, Tau, Spectral];
    TowerDiagonal => "tower_diagonal", Some(1e-8), AtMost, [Eigenbasis, Tower, Spectral];
    ProjectorDiagonal => "projector_diagonal", Some(1e-8), AtMost, [Eigenbasis, Projectors];
    GammaStructure => "gamma_structure", Some(1e-8), AtMost, [Eigenbasis, Gammas, GammaHat, Spectral];
    GammaPowerLaw => "gamma_power_law", Some(1e-8), AtMost, [Eigenbasis, Gammas, GammaHat, Spectral];
    GammaTemplate => "gamma_template", Some(1e-8), AtMost, [Eigenbasis, Gammas, GammaHat, Spectral];
    GammaHatSupport => "gamma_hat_support", Some(1e-8), AtMost, [Eigenbasis, Gammas, GammaHat, Spectral];
    Ap96Identity => "ap96_identity", Some(1e-8), AtMost, [Eigenbasis, Gammas, Spectral];
    Ap96Families => "ap96_families", Some(1e-8), AtMost, [Eigenbasis, Gammas, Spectral];
    Ap96Ratios => "ap96_ratios", Some(1e-8), AtMost, [Eigenbasis, Gammas, Spectral];
    ThetaHatDefect => "theta_hat_defect", None, AtMost, [GammaHat];
    ExchangeRatio => "exchange_ratio", None, AtMost, [Eigenbasis, GammaHat];
}

/// Stages needed by `checks`, closed under dependencies.
pub fn required_stages(checks: &[CheckId]) -> Vec<Stage> {
    fn add(stage: Stage, out: &mut Vec<Stage>) {
        if out.contains(&stage) {
            return;
        }
        for &d in stage.deps() {
            add(d, out);
        }
        out.push(stage);
    }
    let mut out = Vec::new();
    for c in checks {
        for &s in c.stages() {
            add(s, &mut out);
        }
    }
    out.sort();
    out
}

type StageResult<T> = Option<Result<T, String>>;

#[derive(Default)]
struct Artifacts {
    ops: StageResult<(ChainOps, ParafermionSet)>,
    tau: StageResult<MatrixPolynomial>,
    functional: StageResult<FunctionalProduct>,
    spectral: StageResult<SpectralData>,
    vandermonde: StageResult<VandermondeSystem>,
    hamiltonian: StageResult<ComplexMatrix>,
    tower: StageResult<HamiltonianTower>,
    gammas: StageResult<GammaSequence>,
    gamma_hat: StageResult<HattedGammas>,
    projectors: StageResult<ProjectorFamily>,
    eigenbasis: StageResult<Eigenbasis>,
}

fn get<T>(slot: &StageResult<T>) -> &T {
    slot.as_ref().and_then(|r| r.as_ref().ok()).expect("stage checked before use")
}

impl Artifacts {
    fn failure(&self, stage: Stage) -> Option<&str> {
        match stage {
            Stage::Ops => err_of(&self.ops),
            Stage::Tau => err_of(&self.tau),
            Stage::Functional => err_of(&self.functional),
            Stage::Spectral => err_of(&self.spectral),
            Stage::Vandermonde => err_of(&self.vandermonde),
            Stage::Hamiltonian => err_of(&self.hamiltonian),
            Stage::Tower => err_of(&self.tower),
            Stage::Gammas => err_of(&self.gammas),
            Stage::GammaHat => err_of(&self.gamma_hat),
            Stage::Projectors => err_of(&self.projectors),
            Stage::Eigenbasis => err_of(&self.eigenbasis),
        }
    }

    fn build(&mut self, stage: Stage, cfg: &RunConfig) -> Result<(), String> {
        if let Some(&dep) = stage.deps().iter().find(|&&d| self.failure(d).is_some()) {
            let msg = format!("depends on failed stage {}", dep.name());
            self.store_err(stage, msg.clone());
            return Err(msg);
        }
        let (n, len) = (cfg.n, cfg.len);
        let e = |err: tau2_core::Error| err.to_string();
        macro_rules! put {
            ($field:ident, $value:expr) => {{
                let value = $value;
                let outcome = value.as_ref().map(|_| ()).map_err(Clone::clone);
                self.$field = Some(value);
                outcome
            }};
        }
        match stage {
            Stage::Ops => put!(
                ops,
                ChainOps::new(n, len).map(|ops| {
                    let pf = build_parafermions(&ops);
                    (ops, pf)
                }).map_err(e)
            ),
            Stage::Tau => put!(tau, build_tau2(&cfg.params).map_err(e)),
            Stage::Functional => put!(functional, functional_product(get(&self.tau), n).map_err(e)),
            Stage::Spectral => {
                let fp = get(&self.functional);
                put!(spectral, spectral_roots(&fp.f, cfg.params.a0(), n, len).map_err(e))
            }
            Stage::Vandermonde => put!(vandermonde, prony_inverse(&get(&self.spectral).lambda).map_err(e)),
            Stage::Hamiltonian => put!(hamiltonian, build_h_explicit(&cfg.params, &get(&self.ops).0).map_err(e)),
            Stage::Tower => put!(tower, higher_hamiltonians(get(&self.tau), n * len + 2).map_err(e)),
            Stage::Gammas => {
                let z1 = get(&self.ops).0.z_inv(1);
                put!(gammas, Ok::<_, String>(gamma_sequence(get(&self.hamiltonian), &z1, n, n * len + n + 1)))
            }
            Stage::GammaHat => put!(
                gamma_hat,
                build_gamma_hat(get(&self.gammas), get(&self.vandermonde), n).map_err(e)
            ),
            Stage::Projectors => put!(
                projectors,
                build_projectors(get(&self.tower), get(&self.vandermonde), n).map_err(e)
            ),
            Stage::Eigenbasis => put!(
                eigenbasis,
                build_eigenbasis(get(&self.projectors), get(&self.gamma_hat), cfg.seed).map_err(e)
            ),
        }
    }

    fn store_err(&mut self, stage: Stage, msg: String) {
        match stage {
            Stage::Ops => self.ops = Some(Err(msg)),
            Stage::Tau => self.tau = Some(Err(msg)),
            Stage::Functional => self.functional = Some(Err(msg)),
            Stage::Spectral => self.spectral = Some(Err(msg)),
            Stage::Vandermonde => self.vandermonde = Some(Err(msg)),
            Stage::Hamiltonian => self.hamiltonian = Some(Err(msg)),
            Stage::Tower => self.tower = Some(Err(msg)),
            Stage::Gammas => self.gammas = Some(Err(msg)),
            Stage::GammaHat => self.gamma_hat = Some(Err(msg)),
            Stage::Projectors => self.projectors = Some(Err(msg)),
            Stage::Eigenbasis => self.eigenbasis = Some(Err(msg)),
        }
    }
}

fn err_of<T>(r: &StageResult<T>) -> Option<&str> {
    match r {
        Some(Err(e)) => Some(e.as_str()),
        Some(Ok(_)) => None,
        None => Some("stage not run"),
    }
}

struct Outcome {
    residual: Option<f64>,
    detail: Option<String>,
}

impl Outcome {
    fn value(residual: f64) -> Self {
        Self {
            residual: Some(residual),
            detail: None,
        }
    }

    fn with_detail(residual: f64, detail: String) -> Self {
        Self {
            residual: Some(residual),
            detail: Some(detail),
        }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn clock_couplings(cfg: &RunConfig) -> ClockSpecialParams {
    cfg.clock.clone().unwrap_or_else(|| ClockSpecialParams::from_model(&cfg.params))
}

fn evaluate(id: CheckId, a: &Artifacts, cfg: &RunConfig) -> Result<Outcome, String> {
    let (n, len) = (cfg.n, cfg.len);
    let e = |err: tau2_core::Error| err.to_string();
    let out = match id {
        CheckId::ClockRelations => Outcome::value(site_algebra_residual(&get(&a.ops).0.site)),
        CheckId::ParafermionRelations => Outcome::value(parafermion_residual(&get(&a.ops).1)),
        CheckId::Tau2Degree => Outcome::value(degree_excess(&cfg.params)),
        CheckId::Tau2Boundary => Outcome::value(max_of((1..n).map(|b| boundary_independence(&cfg.params, b)))),
        CheckId::CommutingFamily => Outcome::value(commuting_family_residual(get(&a.tau))),
        CheckId::FunctionalScalar => Outcome::value(get(&a.functional).scalar_residual),
        CheckId::FunctionalPeriodic => Outcome::value(get(&a.functional).periodic_residual),
        CheckId::FunctionalDegree => {
            let degree = get(&a.functional).f.degree().unwrap_or(0);
            Outcome::with_detail(degree.abs_diff(len) as f64, format!("deg f = {degree}, L = {len}"))
        }
        CheckId::SpectralRoots => Outcome::value(max_of(get(&a.spectral).root_residuals())),
        CheckId::DetOracle => {
            let dim = cfg.dim();
            if dim > DET_ORACLE_MAX_TUPLES {
                return Ok(Outcome {
                    residual: None,
                    detail: Some(format!("{dim} tuples exceed the {DET_ORACLE_MAX_TUPLES}-tuple budget")),
                });
            }
            let spec = get(&a.spectral);
            let h = get(&a.hamiltonian);
            let worst = (0..dim)
                .map(|i| {
                    let qn = tau2_core::eigenbasis::QuantumNumbers::from_index(i, n, len);
                    det_oracle_margin(h, predicted_eigenvalue(spec, &qn.0, 1))
                })
                .fold(f64::NEG_INFINITY, f64::max);
            Outcome::with_detail(worst.exp(), format!("max ln|det(H-E)|/|H|^dim = {worst:.3}"))
        }
        CheckId::HamiltonianForms => {
            let h = get(&a.hamiltonian);
            let pf = build_h_parafermion(&cfg.params, &get(&a.ops).1).map_err(e)?;
            let tau = get(&a.tau);
            let from_tau = tau.coeffs()[1].scale(Complex64::new(1.0, 0.0) / cfg.params.a0());
            Outcome::value(relative_distance(h, &pf).max(relative_distance(h, &from_tau)))
        }
        CheckId::ClockLimit => {
            let clock = clock_couplings(cfg);
            let ops = &get(&a.ops).0;
            let params = clock_limit(n, &clock).map_err(e)?;
            let general = build_h_explicit(&params, ops).map_err(e)?;
            Outcome::value(relative_distance(&general, &build_h_clock(ops, &clock)))
        }
        CheckId::TowerCommutation => Outcome::value(get(&a.tower).commutator_residual()),
        CheckId::GammaRelations => {
            let gs = get(&a.gammas);
            let closed = gamma1_closed_form(&cfg.params, &get(&a.ops).1);
            Outcome::value(gamma01_residual(gs, n).max(relative_distance(&gs.gammas[1], &closed)))
        }
        CheckId::Truncation => Outcome::value(max_of(check_truncation(get(&a.gammas), get(&a.spectral), 0..=n))),
        CheckId::HMatrixRecursion => {
            let hm = build_hmatrix(get(&a.spectral));
            Outcome::value(hm.recursion_residual(get(&a.hamiltonian), get(&a.gammas)))
        }
        CheckId::HMatrixCharpoly => {
            let spec = get(&a.spectral);
            Outcome::value(build_hmatrix(spec).charpoly_residual(spec))
        }
        CheckId::HMatrixEigenvalues => {
            let spec = get(&a.spectral);
            Outcome::value(build_hmatrix(spec).eigenvalue_residual(spec).map_err(e)?)
        }
        CheckId::GammaHatCompleteness => Outcome::value(gamma_hat_completeness(get(&a.gamma_hat), get(&a.gammas))),
        CheckId::GammaHatEigen => {
            Outcome::value(max_of(eigen_commutator_residuals(get(&a.gamma_hat), get(&a.hamiltonian))))
        }
        CheckId::Intertwining => Outcome::value(max_of(check_intertwining(get(&a.gamma_hat), get(&a.tau)).map_err(e)?)),
        CheckId::ProjectorIdempotency => Outcome::value(check_axioms(get(&a.projectors)).idempotency),
        CheckId::ProjectorOrthogonality => Outcome::value(check_axioms(get(&a.projectors)).orthogonality),
        CheckId::ProjectorCompleteness => Outcome::value(check_axioms(get(&a.projectors)).completeness),
        CheckId::ProjectorCommutation => Outcome::value(check_axioms(get(&a.projectors)).commutation),
        CheckId::ProjectorTrace => Outcome::value(check_axioms(get(&a.projectors)).trace),
        CheckId::ProjectorTower => Outcome::value(tower_commutation(get(&a.projectors), get(&a.tower))),
        CheckId::HamiltonianReconstruction => {
            Outcome::value(max_of(reconstruct_hamiltonians(get(&a.projectors), get(&a.tower))))
        }
        CheckId::TauReconstruction => Outcome::value(max_of(
            reconstruct_tau(get(&a.projectors), get(&a.tau), get(&a.spectral)).map_err(e)?,
        )),
        CheckId::ProjectorGammaHat => Outcome::value(check_projector_gammahat(get(&a.projectors), get(&a.gamma_hat))),
        CheckId::EigenbasisGram => Outcome::with_detail(
            get(&a.eigenbasis).gram_determinant(),
            format!("{} states", get(&a.eigenbasis).states.len()),
        ),
        CheckId::EigenRelation => Outcome::value(eigen_relation_residual(
            get(&a.eigenbasis),
            get(&a.tau),
            get(&a.spectral),
            &sample_points(),
        )),
        CheckId::TowerDiagonal => {
            let (basis, tower, spec) = (get(&a.eigenbasis), get(&a.tower), get(&a.spectral));
            Outcome::value(max_of(
                (0..n * len).map(|m| diagonal_residual(basis, &tower.h[m], |qn| predicted_eigenvalue(spec, &qn.0, m))),
            ))
        }
        CheckId::ProjectorDiagonal => {
            let (basis, pf) = (get(&a.eigenbasis), get(&a.projectors));
            let mut worst: f64 = 0.0;
            for k in 0..len {
                for p in 0..n {
                    worst = worst.max(diagonal_residual(basis, pf.get(p, k), |qn| {
                        Complex64::new(if qn.0[k] == p { 1.0 } else { 0.0 }, 0.0)
                    }));
                }
            }
            Outcome::value(worst)
        }
        CheckId::GammaStructure | CheckId::GammaPowerLaw | CheckId::GammaTemplate | CheckId::GammaHatSupport => {
            let s = check_gamma_structure(
                get(&a.gammas),
                get(&a.gamma_hat),
                get(&a.eigenbasis),
                get(&a.spectral),
                n * len - 1,
            );
            Outcome::value(match id {
                CheckId::GammaStructure => s.forbidden,
                CheckId::GammaPowerLaw => s.power_law,
                CheckId::GammaTemplate => s.template,
                _ => s.gamma_hat_forbidden,
            })
        }
        CheckId::Ap96Identity | CheckId::Ap96Families | CheckId::Ap96Ratios => {
            let idx = ap96_indices(n, len, AP96_FULL_LIMIT, AP96_SAMPLES, cfg.seed);
            if idx.is_empty() {
                return Ok(Outcome {
                    residual: None,
                    detail: Some("needs at least two modes".into()),
                });
            }
            let r = check_ap96(get(&a.gammas), get(&a.eigenbasis), get(&a.spectral), &idx);
            let value = match id {
                CheckId::Ap96Identity => r.identity,
                CheckId::Ap96Families => r.outside_families,
                _ => r.ratio,
            };
            Outcome::with_detail(value, format!("{} index combinations", r.combinations))
        }
        CheckId::ThetaHatDefect => {
            let gh = get(&a.gamma_hat);
            let defects: Vec<f64> = (0..len).map(|k| theta_hat_defect(gh, k).0).collect();
            let listed: Vec<String> = defects.iter().map(|d| format!("{d:.3e}")).collect();
            Outcome::with_detail(max_of(defects), format!("per mode: {}", listed.join(", ")))
        }
        CheckId::ExchangeRatio => {
            if len < 2 {
                return Ok(Outcome {
                    residual: None,
                    detail: Some("needs at least two modes".into()),
                });
            }
            let (gh, basis) = (get(&a.gamma_hat), get(&a.eigenbasis));
            let ratios = exchange_ratios(gh, basis, 1 % n, 0, 1 % n, 1);
            if ratios.is_empty() {
                return Ok(Outcome {
                    residual: None,
                    detail: Some("empty support".into()),
                });
            }
            let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
            let spread = max_of(ratios.iter().map(|z| (z - mean).norm() / mean.norm()));
            Outcome::with_detail(
                spread,
                format!(
                    "Γ̂(1,1)Γ̂(1,2) vs Γ̂(1,2)Γ̂(1,1): mean ratio {:+.6e} {:+.6e}i over {} elements",
                    mean.re,
                    mean.im,
                    ratios.len()
                ),
            )
        }
    };
    Ok(out)
}

fn elapsed(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

/// Builds every stage the selected checks need, then runs the checks in order.
pub fn run_suite(cfg: &RunConfig) -> VerificationReport {
    let selected: Vec<CheckId> = match &cfg.checks {
        Some(list) => CheckId::ALL.iter().copied().filter(|c| list.contains(c)).collect(),
        None => CheckId::ALL.to_vec(),
    };
    let mut artifacts = Artifacts::default();
    let mut stages = Vec::new();
    for stage in required_stages(&selected) {
        let start = Instant::now();
        let result = artifacts.build(stage, cfg);
        stages.push(StageRecord {
            name: stage.name().to_string(),
            ok: result.is_ok(),
            wall_time_s: elapsed(start, cfg.timing),
            error: result.err(),
        });
    }

    let mut checks = Vec::with_capacity(selected.len());
    for id in selected {
        let threshold = cfg.tolerances.get(&id).copied().or(id.default_threshold());
        let comparison = id.comparison();
        let start = Instant::now();
        let blocked = id.stages().iter().find_map(|&s| artifacts.failure(s).map(|m| (s, m.to_string())));
        let (status, residual, detail) = match blocked {
            Some((stage, msg)) => (Status::Skipped, None, Some(format!("stage {} failed: {msg}", stage.name()))),
            None => match evaluate(id, &artifacts, cfg) {
                Err(msg) => (Status::Error, None, Some(msg)),
                Ok(Outcome { residual: None, detail }) => (Status::Reported, None, detail),
                Ok(Outcome {
                    residual: Some(r),
                    detail,
                }) => {
                    let status = match threshold {
                        None => Status::Reported,
                        Some(t) => {
                            let ok = match comparison {
                                Comparison::AtMost => r <= t,
                                Comparison::Above => r > t,
                            };
                            if ok {
                                Status::Pass
                            } else {
                                Status::Fail
                            }
                        }
                    };
                    (status, Some(r), detail)
                }
            },
        };
        let pass = matches!(status, Status::Pass | Status::Reported);
        checks.push(CheckRecord {
            name: id.name().to_string(),
            status,
            residual: residual.filter(|r| r.is_finite()),
            threshold: if status == Status::Reported && id.default_threshold().is_none() {
                None
            } else {
                threshold
            },
            comparison,
            pass,
            wall_time_s: elapsed(start, cfg.timing),
            detail,
        });
    }

    let mut model = ModelEcho {
        n: cfg.n,
        len: cfg.len,
        mode: cfg.mode,
        seed: cfg.seed,
        a0: Some(crate::report::pair(cfg.params.a0())),
        s: None,
        r: None,
    };
    if let Some(Ok(spec)) = &artifacts.spectral {
        model = model.with_spectrum(spec);
    }
    let overall_pass = checks.iter().all(|c| c.pass);
    VerificationReport {
        model,
        stages,
        checks,
        overall_pass,
    }
}

/// Spectral data alone, for the `spectrum` subcommand.
pub fn spectrum(cfg: &RunConfig) -> Result<SpectralData, String> {
    let tau = build_tau2(&cfg.params).map_err(|e| e.to_string())?;
    let fp = functional_product(&tau, cfg.n).map_err(|e| e.to_string())?;
    spectral_roots(&fp.f, cfg.params.a0(), cfg.n, cfg.len).map_err(|e| e.to_string())
}

/// The full raising-operator eigenbasis, for the `eigenbasis` subcommand.
pub fn eigenbasis(cfg: &RunConfig) -> Result<(SpectralData, Eigenbasis), String> {
    let needed = required_stages(&[CheckId::EigenbasisGram]);
    let mut artifacts = Artifacts::default();
    for stage in needed {
        artifacts
            .build(stage, cfg)
            .map_err(|msg| format!("stage {}: {msg}", stage.name()))?;
    }
    let spec = artifacts.spectral.take().and_then(Result::ok).expect("built");
    let basis = artifacts.eigenbasis.take().and_then(Result::ok).expect("built");
    Ok((spec, basis))
}
