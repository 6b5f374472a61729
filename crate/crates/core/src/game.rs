//! The guessing game: Bob prepares a probe, Alice measures it in a
//! coherently selected basis, Bob measures the returned coin to guess her
//! outcome.
//!
//! Conventions. Basis a of a [`MubSet`] measures in the column basis of
//! `U_a`, so Alice's outcome-k projector is `U_a|k⟩⟨k|U_a†`. The coin
//! register is the first tensor factor; the controlled unitary is
//! block-diagonal with blocks `U_i†`. For either coin the average winning
//! probability reduces to
//!
//! ```text
//!   P_g = (1/d) Σ_{i,j,a} ⟨i|M_a|j⟩ ⟨a|U_j† ρ_B U_i|a⟩      (quantum coin)
//!   P_g = (1/d) Σ_{i,a}   ⟨i|M_a|i⟩ ⟨a|U_i† ρ_B U_i|a⟩      (classical coin)
//! ```
//!
//! and the quantum-coin sum is Σ_a Tr[M_a·W_a†ρ_B W_a]/d where column i of
//! `W_a` is `U_i|a⟩`. [`guessing_probability_tensor`] evaluates the full
//! d²×d² tensor expression instead and serves as the independent oracle for
//! the reduced forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::mub::{Family, MubSet};
use crate::numtheory::{mod_inverse, reduce_mod, root_of_unity, PrimeDim};

/// The control register: a pure uniform superposition or the maximally
/// mixed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoinKind {
    #[serde(rename = "quantum")]
    Quantum,
    #[serde(rename = "classical")]
    Classical,
}

impl CoinKind {
    /// |+⟩⟨+| for the quantum coin, 1/d for the classical coin.
    pub fn state(self, d: usize) -> ComplexMatrix {
        match self {
            CoinKind::Quantum => {
                let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
                let plus = vec![amp; d];
                ComplexMatrix::outer(&plus, &plus)
            }
            CoinKind::Classical => ComplexMatrix::identity(d).scale_re(1.0 / d as f64),
        }
    }
}

impl std::fmt::Display for CoinKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoinKind::Quantum => write!(f, "quantum"),
            CoinKind::Classical => write!(f, "classical"),
        }
    }
}

/// Bob's play: a probe density operator and a d-outcome POVM on the coin.
///
/// Both halves are validated at construction and immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    probe: ComplexMatrix,
    povm: Vec<ComplexMatrix>,
}

impl Strategy {
    pub fn new(probe: ComplexMatrix, povm: Vec<ComplexMatrix>) -> Result<Self> {
        validate_density(&probe, 1e-9)?;
        validate_povm(&povm, probe.rows(), 1e-9)?;
        Ok(Strategy { probe, povm })
    }

    /// The no-information baseline: maximally mixed probe, uniform POVM.
    pub fn uniform(d: usize) -> Self {
        let flat = ComplexMatrix::identity(d).scale_re(1.0 / d as f64);
        Strategy {
            probe: flat.clone(),
            povm: vec![flat; d],
        }
    }

    pub fn probe(&self) -> &ComplexMatrix {
        &self.probe
    }

    pub fn povm(&self) -> &[ComplexMatrix] {
        &self.povm
    }

    pub fn to_json(&self) -> String {
        let dto = StrategyJson {
            probe: crate::wire::mat_to_pairs(&self.probe),
            povm: self.povm.iter().map(crate::wire::mat_to_pairs).collect(),
        };
        serde_json::to_string_pretty(&dto).expect("Strategy serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: StrategyJson =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let probe = crate::wire::square_from_pairs(&dto.probe)?;
        let povm = dto
            .povm
            .iter()
            .map(|p| crate::wire::square_from_pairs(p))
            .collect::<Result<Vec<_>>>()?;
        Strategy::new(probe, povm)
    }
}

#[derive(Serialize, Deserialize)]
struct StrategyJson {
    probe: Vec<[f64; 2]>,
    povm: Vec<Vec<[f64; 2]>>,
}

pub(crate) fn validate_density(probe: &ComplexMatrix, tol: f64) -> Result<()> {
    if !probe.is_square() {
        return Err(Error::NotDensity {
            reason: format!("not square: {}x{}", probe.rows(), probe.cols()),
        });
    }
    if !probe.is_hermitian(tol) {
        return Err(Error::NotDensity {
            reason: format!(
                "not Hermitian (deviation {:.3e})",
                probe.hermitian_deviation()
            ),
        });
    }
    let tr = probe.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::NotDensity {
            reason: format!("trace {tr} is not 1"),
        });
    }
    let min_eig = probe
        .hermitian_eigenvalues()?
        .first()
        .copied()
        .unwrap_or(0.0);
    if min_eig < -tol {
        return Err(Error::NotDensity {
            reason: format!("negative eigenvalue {min_eig:.3e}"),
        });
    }
    Ok(())
}

pub(crate) fn validate_povm(povm: &[ComplexMatrix], d: usize, tol: f64) -> Result<()> {
    if povm.len() != d {
        return Err(Error::NotPovm {
            reason: format!("expected {d} outcomes, got {}", povm.len()),
        });
    }
    let mut sum = ComplexMatrix::zeros(d, d);
    for (a, m) in povm.iter().enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(Error::NotPovm {
                reason: format!("element {a} has shape {}x{}", m.rows(), m.cols()),
            });
        }
        if !m.is_psd(tol) {
            return Err(Error::NotPovm {
                reason: format!("element {a} is not PSD within {tol:.1e}"),
            });
        }
        sum = &sum + m;
    }
    let dev = sum.max_diff(&ComplexMatrix::identity(d));
    if dev > tol {
        return Err(Error::NotPovm {
            reason: format!("completeness defect {dev:.3e}"),
        });
    }
    Ok(())
}

/// A guess rule for the classical coin: outcome ñ(i) when the coin reads i.
/// Not necessarily a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeMap {
    assignment: Vec<usize>,
}

impl OutcomeMap {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let d = assignment.len();
        if let Some(&bad) = assignment.iter().find(|&&v| v >= d) {
            return Err(Error::InvalidInput(format!(
                "outcome {bad} out of range 0..{d}"
            )));
        }
        Ok(OutcomeMap { assignment })
    }

    pub fn constant(d: usize, value: usize) -> Result<Self> {
        Self::new(vec![value; d])
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn get(&self, i: usize) -> usize {
        self.assignment[i]
    }
}

/// The coherent basis selector: blocks U_i† on the diagonal, coin register
/// first, so block i acts on the probe when the coin reads i.
pub fn controlled_unitary(set: &MubSet) -> ComplexMatrix {
    let d = set.dim().as_usize();
    let mut cu = ComplexMatrix::zeros(d * d, d * d);
    for (i, u) in set.unitaries().iter().enumerate() {
        let block = u.adjoint();
        for r in 0..d {
            for c in 0..d {
                cu[(i * d + r, i * d + c)] = block[(r, c)];
            }
        }
    }
    cu
}

/// Matrix whose column i is `U_i|a⟩`: each basis' a-th vector.
pub(crate) fn outcome_vectors(set: &MubSet, a: usize) -> ComplexMatrix {
    let d = set.dim().as_usize();
    ComplexMatrix::from_fn(d, d, |r, i| set.unitaries()[i][(r, a)])
}

/// Average winning probability of `strategy` against `set` for the given
/// coin, via the reduced d×d formulas.
pub fn guessing_probability(set: &MubSet, strategy: &Strategy, coin: CoinKind) -> Result<f64> {
    let d = set.dim().as_usize();
    if strategy.probe().rows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: strategy.probe().rows(),
        });
    }
    Ok(match coin {
        CoinKind::Quantum => {
            let mut total = 0.0;
            for (a, m) in strategy.povm().iter().enumerate() {
                let w = outcome_vectors(set, a);
                let disc = &(&w.adjoint() * strategy.probe()) * &w;
                total += (m * &disc).trace().re;
            }
            total / d as f64
        }
        CoinKind::Classical => {
            let mut total = 0.0;
            for (i, u) in set.unitaries().iter().enumerate() {
                let rotated = &(&u.adjoint() * strategy.probe()) * u;
                for (a, m) in strategy.povm().iter().enumerate() {
                    total += m[(i, i)].re * rotated[(a, a)].re;
                }
            }
            total / d as f64
        }
    })
}

/// Literal evaluation on the full d²×d² tensor space: prepare ρ_C ⊗ ρ_B,
/// conjugate by the controlled unitary, and project on outcome agreement.
///
/// Independent oracle for [`guessing_probability`].
pub fn guessing_probability_tensor(
    set: &MubSet,
    strategy: &Strategy,
    coin: CoinKind,
) -> Result<f64> {
    let d = set.dim().as_usize();
    if strategy.probe().rows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: strategy.probe().rows(),
        });
    }
    let cu = controlled_unitary(set);
    let joint = coin.state(d).kron(strategy.probe());
    let evolved = &(&cu * &joint) * &cu.adjoint();
    let mut total = 0.0;
    for (a, m) in strategy.povm().iter().enumerate() {
        let win = m.kron(&ComplexMatrix::ketbra(d, a, a));
        total += (&evolved * &win).trace().re;
    }
    Ok(total)
}

/// Probe amplitudes of the closed-form perfect strategy: ω^{3⁻¹k³}/√d for
/// d > 3, ninth-root phases ω₉^{k³}/√3 for d = 3.
fn perfect_probe_amplitudes(d: PrimeDim) -> Result<Vec<C64>> {
    let dv = d.value();
    let norm = 1.0 / (dv as f64).sqrt();
    let amps = if dv == 3 {
        (0..3i64)
            .map(|k| root_of_unity(k * k * k, 9) * norm)
            .collect()
    } else {
        let alpha = mod_inverse(3, d)? as i64;
        (0..dv as i64)
            .map(|k| {
                let cube = reduce_mod(k * k * k, dv) as i64;
                root_of_unity(alpha * cube, dv) * norm
            })
            .collect()
    };
    Ok(amps)
}

/// The closed-form strategy that wins with certainty against the shifted
/// (dpp) basis set. Only defined for odd primes; the qubit case is covered
/// by the see-saw instead.
pub fn perfect_strategy(d: PrimeDim) -> Result<Strategy> {
    let set = MubSet::dpp_set(d)?;
    perfect_strategy_for(&set)
}

/// Build the perfect strategy against a caller-supplied set.
///
/// The construction is provably perfect only for the shifted family, so any
/// other provenance is rejected.
///
/// A |φ_k⟩ can have exactly zero norm (at d = 5 and d = 11 the cubic
/// character sum in ⟨φ_0|φ_0⟩ evaluates to -√d), in which case that outcome
/// never fires and its projector is free. Those slots are filled with an
/// orthonormal basis of the span's orthocomplement so the POVM stays
/// projective and complete without touching the winning probability.
pub fn perfect_strategy_for(set: &MubSet) -> Result<Strategy> {
    let d = set.dim().as_usize();
    let phis = perfect_phi_vectors(set)?;
    let psi = perfect_probe_amplitudes(set.dim())?;
    let weights: Vec<f64> = phis
        .iter()
        .map(|phi| phi.iter().map(|c| c.norm_sqr()).sum())
        .collect();
    let mut povm: Vec<Option<ComplexMatrix>> = Vec::with_capacity(d);
    let mut span = ComplexMatrix::zeros(d, d);
    for (phi, &w) in phis.iter().zip(&weights) {
        if w > 1e-12 {
            let proj = ComplexMatrix::outer(phi, phi).scale_re(1.0 / w);
            span = &span + &proj;
            povm.push(Some(proj));
        } else {
            povm.push(None);
        }
    }
    let missing = povm.iter().filter(|m| m.is_none()).count();
    if missing > 0 {
        let complement = &ComplexMatrix::identity(d) - &span;
        let eig = complement.symmetrize().hermitian_eigen()?;
        // eigenvalues are 0 or 1; the top `missing` columns span the gap
        let mut fill = (d - missing..d).map(|c| {
            let v = eig.vectors.column(c);
            ComplexMatrix::outer(&v, &v)
        });
        for slot in povm.iter_mut() {
            if slot.is_none() {
                *slot = Some(fill.next().expect("one filler per empty slot"));
            }
        }
    }
    let povm = povm.into_iter().map(|m| m.expect("filled")).collect();
    Strategy::new(ComplexMatrix::outer(&psi, &psi), povm)
}

/// Unnormalized coin-space vectors |φ_k⟩ = (1/√d)Σ_a ⟨k|U_a†|ψ⟩|a⟩ of the
/// perfect strategy; exposed so their pairwise orthogonality can be checked
/// directly.
pub fn perfect_phi_vectors(set: &MubSet) -> Result<Vec<Vec<C64>>> {
    if set.family() != Family::Dpp {
        return Err(Error::StrategyConstructionSpecific {
            got: set.family().to_string(),
        });
    }
    let d = set.dim().as_usize();
    let psi = perfect_probe_amplitudes(set.dim())?;
    let norm = 1.0 / (d as f64).sqrt();
    let mut phis = Vec::with_capacity(d);
    for k in 0..d {
        let mut phi = vec![C64::new(0.0, 0.0); d];
        for (a, u) in set.unitaries().iter().enumerate() {
            // ⟨k|U_a†|ψ⟩ = Σ_r conj(U_a[r][k])·ψ[r]
            let mut amp = C64::new(0.0, 0.0);
            for r in 0..d {
                amp += u[(r, k)].conj() * psi[r];
            }
            phi[a] = amp * norm;
        }
        phis.push(phi);
    }
    Ok(phis)
}

/// Best guessing probability for a fixed coin→outcome rule:
/// (1/d)·λ_max[Σ_j U_j|ñ(j)⟩⟨ñ(j)|U_j†], the probe being optimized away by
/// the eigenvalue reduction.
pub fn classical_map_value(set: &MubSet, map: &OutcomeMap) -> f64 {
    let d = set.dim().as_usize();
    assert_eq!(map.assignment().len(), d, "map length must match dimension");
    let mut t = ComplexMatrix::zeros(d, d);
    for (j, u) in set.unitaries().iter().enumerate() {
        let col = u.column(map.get(j));
        for r in 0..d {
            for c in 0..d {
                t[(r, c)] += col[r] * col[c].conj();
            }
        }
    }
    let lam = t
        .lambda_max()
        .expect("projector sum is Hermitian by construction");
    lam / d as f64
}

/// Closed-form ceiling on the classical-coin value over every MUB set:
/// (1/d)(1 + (d-1)/√d).
pub fn classical_upper_bound(d: PrimeDim) -> f64 {
    let dv = d.value() as f64;
    (1.0 + (dv - 1.0) / dv.sqrt()) / dv
}

/// Everything `certify` checks about the closed-form strategy at one
/// dimension.
#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub dim: u64,
    /// Worst unbiasedness deviation of the shifted basis set.
    pub mub_deviation: f64,
    pub povm_projective: bool,
    /// max |⟨φ_i|φ_j⟩| over i ≠ j.
    pub max_phi_overlap: f64,
    /// |P_g - 1| under the quantum coin.
    pub pg_deviation: f64,
    pub tolerance: f64,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.mub_deviation <= self.tolerance
            && self.povm_projective
            && self.max_phi_overlap < self.tolerance
            && self.pg_deviation < self.tolerance
    }
}

/// Build the shifted set and the closed-form strategy, then check
/// unbiasedness, POVM projectivity, φ orthogonality, and P_g = 1, all at
/// 1e-9. Odd primes only.
pub fn certify(d: PrimeDim) -> Result<CertifyReport> {
    let tolerance = 1e-9;
    let set = MubSet::dpp_set(d)?;
    let strategy = perfect_strategy_for(&set)?;
    let mub_report = crate::mub::verify_mub_set(&set, tolerance);
    let povm_projective = crate::linalg::is_projective_povm(strategy.povm(), tolerance)?;
    let phis = perfect_phi_vectors(&set)?;
    let mut max_phi_overlap = 0.0f64;
    for i in 0..phis.len() {
        for j in 0..phis.len() {
            if i == j {
                continue;
            }
            let dot: C64 = phis[i]
                .iter()
                .zip(&phis[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            max_phi_overlap = max_phi_overlap.max(dot.norm());
        }
    }
    let pg = guessing_probability(&set, &strategy, CoinKind::Quantum)?;
    Ok(CertifyReport {
        dim: d.value(),
        mub_deviation: mub_report.worst_deviation,
        povm_projective,
        max_phi_overlap,
        pg_deviation: (pg - 1.0).abs(),
        tolerance,
    })
}
