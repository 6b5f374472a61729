//! Alternating (see-saw) maximization of the guessing probability.
//!
//! Each round solves two subproblems exactly enough to certify:
//!
//! 1. measurement step — with the probe fixed, the quantum-coin objective
//!    (1/d)Σ_a Tr[M_a D_a] over POVMs is a minimum-error discrimination
//!    problem for the operators D_a = W_a†ρ_B W_a. It is solved by the
//!    fixed-point iteration M_a ← L^{-1/2} D_a M_a D_a L^{-1/2} with
//!    L = Σ_b D_b M_b D_b, and the result is checked against the standard
//!    optimality conditions (Y = Σ_a D_a M_a Hermitian, Y ⪰ D_a for all a).
//!    For the classical coin only POVM diagonals matter and the exact
//!    optimum is the argmax guess rule.
//! 2. probe step — with the POVM fixed the objective is Tr[ρK] for a fixed
//!    Hermitian K, so the exact optimum is the top eigenvector of K.
//!
//! Restart seeds derive from the master seed by a splitmix step, restarts
//! run independently (in parallel when a rayon pool is around), and the best
//! strategy is selected by value with index tie-breaks, so results are
//! bit-identical for a fixed configuration regardless of thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{outcome_vectors, validate_povm, CoinKind, Strategy};
use crate::linalg::{ComplexMatrix, C64};
use crate::mub::MubSet;

/// Spread one master seed into per-task seeds (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Density matrix from the Hilbert-Schmidt measure: ρ = GG†/Tr(GG†) with G
/// a matrix of i.i.d. standard complex Gaussians from the seeded generator.
pub fn random_density_hs(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = normal.sample(&mut rng);
        let im: f64 = normal.sample(&mut rng);
        C64::new(re, im)
    });
    let gg = &g * &g.adjoint();
    gg.scale_re(1.0 / gg.trace().re).symmetrize()
}

/// The d Hermitian PSD operators D_a = W_a† ρ_B W_a (column i of W_a is
/// U_i|a⟩). For any POVM, (1/d)Σ_a Tr[M_a D_a] is the quantum-coin guessing
/// probability, so optimizing the measurement is discriminating the D_a.
pub fn discrimination_operators(probe: &ComplexMatrix, set: &MubSet) -> Result<Vec<ComplexMatrix>> {
    crate::game::validate_density(probe, 1e-9)?;
    Ok(discrimination_operators_unchecked(probe, set))
}

fn discrimination_operators_unchecked(probe: &ComplexMatrix, set: &MubSet) -> Vec<ComplexMatrix> {
    let d = set.dim().as_usize();
    (0..d)
        .map(|a| {
            let w = outcome_vectors(set, a);
            (&(&w.adjoint() * probe) * &w).symmetrize()
        })
        .collect()
}

/// Optimality audit for a discrimination POVM: Y = Σ_a D_a M_a must be
/// Hermitian and Y - D_a PSD for every a.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertificateReport {
    /// ‖Y - Y†‖_max.
    pub hermitian_defect: f64,
    /// min over a of the smallest eigenvalue of (Y+Y†)/2 - D_a.
    pub min_eig_gap: f64,
}

impl CertificateReport {
    pub fn is_optimal(&self, tol: f64) -> bool {
        self.hermitian_defect <= tol && self.min_eig_gap >= -tol
    }

    /// Single nonnegative convergence figure: ~0 iff the conditions hold.
    pub fn gap(&self) -> f64 {
        self.hermitian_defect.max((-self.min_eig_gap).max(0.0))
    }
}

pub fn certificate_check(povm: &[ComplexMatrix], ops: &[ComplexMatrix]) -> CertificateReport {
    let n = ops[0].rows();
    let mut y = ComplexMatrix::zeros(n, n);
    for (d_a, m_a) in ops.iter().zip(povm) {
        y = &y + &(d_a * m_a);
    }
    let defect = (&y - &y.adjoint()).max_abs();
    let yh = y.symmetrize();
    let mut gap = f64::INFINITY;
    for d_a in ops {
        let lam_min = (&yh - d_a)
            .hermitian_eigenvalues()
            .expect("difference of Hermitian matrices is Hermitian")[0];
        gap = gap.min(lam_min);
    }
    CertificateReport {
        hermitian_defect: defect,
        min_eig_gap: gap,
    }
}

/// Outcome of the measurement subproblem.
#[derive(Debug, Clone)]
pub struct MeasurementSolution {
    pub povm: Vec<ComplexMatrix>,
    /// Achieved Σ_a Tr[M_a D_a] (not divided by d).
    pub value: f64,
    /// Certified upper bound on the achievable value.
    pub dual_value: f64,
    pub iterations: usize,
    pub certificate: CertificateReport,
}

const MEASUREMENT_MAX_ITERS: usize = 5000;
const MEASUREMENT_GAP_TARGET: f64 = 1e-8;

/// Maximize Σ_a Tr[M_a D_a] over POVMs by the discrimination fixed point,
/// stopping once the optimality certificate closes below 1e-8.
pub fn optimal_measurement(ops: &[ComplexMatrix]) -> Result<MeasurementSolution> {
    for (index, op) in ops.iter().enumerate() {
        if !op.is_hermitian(1e-9) {
            return Err(Error::NotHermitian {
                deviation: op.hermitian_deviation(),
                tol: 1e-9,
            });
        }
        let min_eig = op.hermitian_eigenvalues()?[0];
        if min_eig < -1e-9 {
            return Err(Error::NotPsd { index, min_eig });
        }
    }
    let (solution, converged) = discrimination_fixed_point(ops, MEASUREMENT_MAX_ITERS);
    if converged {
        Ok(solution)
    } else {
        Err(Error::SolverStalled {
            iterations: solution.iterations,
            gap: solution.certificate.gap(),
            value: solution.value,
        })
    }
}

fn objective(povm: &[ComplexMatrix], ops: &[ComplexMatrix]) -> f64 {
    povm.iter().zip(ops).map(|(m, d)| (m * d).trace().re).sum()
}

/// Fixed-point loop shared by the public solver and the see-saw (which
/// tolerates hitting the iteration cap and keeps the best POVM seen).
fn discrimination_fixed_point(
    ops: &[ComplexMatrix],
    max_iters: usize,
) -> (MeasurementSolution, bool) {
    let n = ops[0].rows();
    let count = ops.len();
    let identity = ComplexMatrix::identity(n);
    let mut povm: Vec<ComplexMatrix> = vec![identity.scale_re(1.0 / count as f64); count];
    let mut best: Option<(f64, Vec<ComplexMatrix>, CertificateReport)> = None;
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let cert = certificate_check(&povm, ops);
        let value = objective(&povm, ops);
        let better = best
            .as_ref()
            .is_none_or(|(v, _, c)| cert.gap() < c.gap() || (cert.gap() == c.gap() && value > *v));
        if better {
            best = Some((value, povm.clone(), cert));
        }
        if cert.gap() < MEASUREMENT_GAP_TARGET {
            converged = true;
            break;
        }
        if iterations >= max_iters {
            break;
        }
        iterations += 1;

        // M_a ← L^{-1/2} D_a M_a D_a L^{-1/2}, kernel weight spread uniformly
        let mut l = ComplexMatrix::zeros(n, n);
        for (d_a, m_a) in ops.iter().zip(&povm) {
            l = &l + &(&(d_a * m_a) * d_a);
        }
        let lh = l.symmetrize();
        let lam_max = lh
            .hermitian_eigenvalues()
            .expect("L is Hermitian")
            .last()
            .copied()
            .unwrap_or(0.0);
        let cutoff = 1e-12 * lam_max.max(1e-300);
        let isqrt = lh
            .psd_power(-0.5, cutoff)
            .expect("L is Hermitian PSD up to rounding");
        let parts: Vec<ComplexMatrix> = ops
            .iter()
            .zip(&povm)
            .map(|(d_a, m_a)| (&(&isqrt * &(&(d_a * m_a) * d_a)) * &isqrt).symmetrize())
            .collect();
        let mut total = ComplexMatrix::zeros(n, n);
        for p in &parts {
            total = &total + p;
        }
        // remainder is the kernel projector up to rounding; distributing it
        // keeps Σ M_a = 1
        let remainder = (&identity - &total).scale_re(1.0 / count as f64);
        let raw: Vec<ComplexMatrix> = parts
            .into_iter()
            .map(|p| (&p + &remainder).symmetrize())
            .collect();
        // The pseudo-inverse amplifies rounding noise near the kernel of L,
        // which can push iterate eigenvalues a little below zero. Clip the
        // negatives and whiten by the (≈ identity) sum so every iterate is a
        // genuine POVM.
        let clipped: Vec<ComplexMatrix> = raw
            .iter()
            .map(|p| p.psd_power(1.0, 0.0).expect("iterate is Hermitian"))
            .collect();
        let mut s_tot = ComplexMatrix::zeros(n, n);
        for p in &clipped {
            s_tot = &s_tot + p;
        }
        let white = s_tot
            .symmetrize()
            .psd_power(-0.5, 1e-12)
            .expect("POVM sum is near identity");
        povm = clipped
            .into_iter()
            .map(|p| (&(&white * &p) * &white).symmetrize())
            .collect();
    }

    let (value, povm, certificate) = best.expect("at least one iterate");
    let dual_value = {
        let mut y = ComplexMatrix::zeros(n, n);
        for (d_a, m_a) in ops.iter().zip(&povm) {
            y = &y + &(d_a * m_a);
        }
        let shift = (-certificate.min_eig_gap).max(0.0);
        y.symmetrize().trace().re + shift * n as f64
    };
    (
        MeasurementSolution {
            povm,
            value,
            dual_value,
            iterations,
            certificate,
        },
        converged,
    )
}

/// Outcome of the probe subproblem.
#[derive(Debug, Clone)]
pub struct ProbeSolution {
    pub probe: ComplexMatrix,
    /// λ_max of the assembled objective operator = the guessing probability.
    pub value: f64,
}

/// Maximize the quantum-coin objective over probes for a fixed POVM: the
/// objective is Tr[ρK] with K = (1/d)Σ_a W_a M_a W_a†, so the optimum is the
/// projector onto a top eigenvector of K.
pub fn optimal_probe(povm: &[ComplexMatrix], set: &MubSet) -> Result<ProbeSolution> {
    let d = set.dim().as_usize();
    validate_povm(povm, d, 1e-7)?;
    Ok(probe_step(povm, set, CoinKind::Quantum))
}

fn probe_step(povm: &[ComplexMatrix], set: &MubSet, coin: CoinKind) -> ProbeSolution {
    let d = set.dim().as_usize();
    let mut k = ComplexMatrix::zeros(d, d);
    match coin {
        CoinKind::Quantum => {
            for (a, m_a) in povm.iter().enumerate() {
                let w = outcome_vectors(set, a);
                k = &k + &(&(&w * m_a) * &w.adjoint());
            }
        }
        CoinKind::Classical => {
            // only coin diagonals contribute
            for (a, m_a) in povm.iter().enumerate() {
                for (i, u) in set.unitaries().iter().enumerate() {
                    let weight = m_a[(i, i)].re;
                    if weight == 0.0 {
                        continue;
                    }
                    let col = u.column(a);
                    for r in 0..d {
                        for c in 0..d {
                            k[(r, c)] += col[r] * col[c].conj() * weight;
                        }
                    }
                }
            }
        }
    }
    let k = k.scale_re(1.0 / d as f64).symmetrize();
    let eig = k.hermitian_eigen().expect("K is Hermitian");
    let top = eig.top_eigenvector();
    ProbeSolution {
        probe: ComplexMatrix::outer(&top, &top),
        value: *eig.values.last().expect("nonempty spectrum"),
    }
}

/// Exact classical-coin measurement step: read the coin, guess the most
/// probable outcome of the revealed basis.
fn classical_guess_povm(probe: &ComplexMatrix, set: &MubSet) -> Vec<ComplexMatrix> {
    let d = set.dim().as_usize();
    let mut povm = vec![ComplexMatrix::zeros(d, d); d];
    for (i, u) in set.unitaries().iter().enumerate() {
        let rotated = &(&u.adjoint() * probe) * u;
        let mut best_a = 0;
        let mut best_p = f64::NEG_INFINITY;
        for a in 0..d {
            let p = rotated[(a, a)].re;
            if p > best_p + 1e-15 {
                best_p = p;
                best_a = a;
            }
        }
        povm[best_a][(i, i)] = C64::new(1.0, 0.0);
    }
    povm
}

/// See-saw settings; `epsilon` is the convergence parameter of the round
/// loop and `master_seed` pins every random draw.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeesawConfig {
    pub epsilon: f64,
    pub max_rounds: usize,
    pub restarts: usize,
    pub master_seed: u64,
}

impl SeesawConfig {
    pub fn new(master_seed: u64) -> Self {
        SeesawConfig {
            epsilon: 1e-6,
            max_rounds: 500,
            restarts: 50,
            master_seed,
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon <= 0.0 {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// One restart's audit trail.
#[derive(Debug, Clone, Serialize)]
pub struct RestartRecord {
    pub seed: u64,
    pub rounds: usize,
    pub final_value: f64,
    pub monotone_ok: bool,
    pub converged: bool,
    /// Value after each probe step, for the monotonicity audit.
    pub trace: Vec<f64>,
}

/// Validity stamp for the winning strategy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeesawCertificate {
    pub is_valid_povm: bool,
    pub discrimination_gap: f64,
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub best_value: f64,
    pub best_strategy: Strategy,
    pub per_restart: Vec<RestartRecord>,
    pub certificate: SeesawCertificate,
}

impl SeesawResult {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dto<'a> {
            best_value: f64,
            probe: Vec<[f64; 2]>,
            povm: Vec<Vec<[f64; 2]>>,
            per_restart: &'a [RestartRecord],
            certificate: SeesawCertificate,
        }
        let dto = Dto {
            best_value: self.best_value,
            probe: crate::wire::mat_to_pairs(self.best_strategy.probe()),
            povm: self
                .best_strategy
                .povm()
                .iter()
                .map(crate::wire::mat_to_pairs)
                .collect(),
            per_restart: &self.per_restart,
            certificate: self.certificate,
        };
        serde_json::to_string_pretty(&dto).expect("SeesawResult serialization cannot fail")
    }
}

struct RestartOutcome {
    record: RestartRecord,
    probe: ComplexMatrix,
    povm: Vec<ComplexMatrix>,
}

fn run_restart(set: &MubSet, coin: CoinKind, config: &SeesawConfig, seed: u64) -> RestartOutcome {
    let d = set.dim().as_usize();
    let mut probe = random_density_hs(d, seed);
    let mut povm: Option<Vec<ComplexMatrix>> = None;
    let mut current = 0.0f64;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut rounds = 0;

    while rounds < config.max_rounds {
        rounds += 1;
        let candidate = match coin {
            CoinKind::Quantum => {
                let ops = discrimination_operators_unchecked(&probe, set);
                let (solution, _) = discrimination_fixed_point(&ops, MEASUREMENT_MAX_ITERS);
                // an inexact inner solve must never regress on the incumbent
                match povm.take() {
                    Some(prev) if objective(&prev, &ops) > solution.value => prev,
                    _ => solution.povm,
                }
            }
            CoinKind::Classical => classical_guess_povm(&probe, set),
        };
        let step = probe_step(&candidate, set, coin);
        povm = Some(candidate);
        probe = step.probe;
        trace.push(step.value);
        if step.value - current < config.epsilon {
            converged = true;
            break;
        }
        current = step.value;
    }

    let final_value = trace.last().copied().unwrap_or(0.0);
    let monotone_ok = trace.windows(2).all(|w| w[1] >= w[0] - 1e-9);
    RestartOutcome {
        record: RestartRecord {
            seed,
            rounds,
            final_value,
            monotone_ok,
            converged,
            trace,
        },
        probe,
        povm: povm.expect("at least one round ran"),
    }
}

/// Per restart, draw a Hilbert-Schmidt random probe, alternate the
/// measurement and probe steps until the value gain drops below ε, and
/// report the best restart. Identical configurations give bit-identical
/// results, sequential or parallel.
pub fn seesaw(set: &MubSet, coin: CoinKind, config: &SeesawConfig) -> Result<SeesawResult> {
    config.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts as u64)
        .into_par_iter()
        .map(|r| run_restart(set, coin, config, derive_seed(config.master_seed, r)))
        .collect();

    let mut best_idx = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.record.final_value > outcomes[best_idx].record.final_value {
            best_idx = i;
        }
    }
    let best = &outcomes[best_idx];
    let best_strategy = Strategy::new(best.probe.clone(), best.povm.clone())?;
    let is_valid_povm = validate_povm(best_strategy.povm(), set.dim().as_usize(), 1e-7).is_ok();
    let certificate = match coin {
        CoinKind::Quantum => {
            let ops = discrimination_operators_unchecked(&best.probe, set);
            let report = certificate_check(best_strategy.povm(), &ops);
            SeesawCertificate {
                is_valid_povm,
                discrimination_gap: report.min_eig_gap,
            }
        }
        // the argmax step is exactly optimal given the probe
        CoinKind::Classical => SeesawCertificate {
            is_valid_povm,
            discrimination_gap: 0.0,
        },
    };
    Ok(SeesawResult {
        best_value: best.record.final_value,
        best_strategy,
        per_restart: outcomes.into_iter().map(|o| o.record).collect(),
        certificate,
    })
}
