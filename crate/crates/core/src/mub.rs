//! Mutually unbiased basis families, outcome relabellings, and verification.
//!
//! For an odd prime dimension d the available pool is the computational basis
//! plus the d Wootters-Fields bases `U_a` with entries ω^{ai²+ij}/√d. The
//! shifted family `dpp_unitary` applies the outcome relabelling
//! `|j⟩ → |j - a²⟩` to each WF basis; it is the construction that admits a
//! perfect guessing strategy. For d = 2 the WF formula degenerates (its two
//! bases are not unbiased), so the pool is hardcoded as the three Pauli
//! eigenbases.
//!
//! A basis is represented by the unitary whose *columns* are the basis
//! vectors; an outcome relabelling is therefore a column permutation, which
//! never changes the unbiasedness of a pair of bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::numtheory::{root_of_unity, PrimeDim};

/// A bijection on outcome labels {0, …, d-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::NotPermutation(mapping.clone(), n));
            }
            seen[m] = true;
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n).collect(),
        }
    }

    /// π(j) = (j + shift) mod n.
    pub fn cyclic_shift(n: usize, shift: usize) -> Self {
        Permutation {
            mapping: (0..n).map(|j| (j + shift) % n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.mapping[j]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(j, &m)| j == m)
    }

    /// Lexicographic rank among all permutations of the same length.
    pub fn rank(&self) -> u64 {
        let n = self.mapping.len();
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut rank: u64 = 0;
        for (i, &m) in self.mapping.iter().enumerate() {
            let pos = remaining.iter().position(|&x| x == m).unwrap();
            rank += pos as u64 * factorial(n - 1 - i);
            remaining.remove(pos);
        }
        rank
    }

    /// Inverse of [`Self::rank`].
    pub fn unrank(n: usize, mut rank: u64) -> Result<Self> {
        if rank >= factorial(n) {
            return Err(Error::InvalidInput(format!(
                "permutation rank {rank} out of range for length {n}"
            )));
        }
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut mapping = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let pos = (rank / f) as usize;
            rank %= f;
            mapping.push(remaining.remove(pos));
        }
        Ok(Permutation { mapping })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.mapping
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Which construction a measurement set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "wf")]
    Wf,
    #[serde(rename = "dpp")]
    Dpp,
    #[serde(rename = "wf-plus-computational")]
    WfPlusComputational,
    #[serde(rename = "custom")]
    Custom,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Wf => "wf",
            Family::Dpp => "dpp",
            Family::WfPlusComputational => "wf-plus-computational",
            Family::Custom => "custom",
        };
        write!(f, "{s}")
    }
}

/// Where a [`MubSet`] came from: which family, which of the d+1 pool bases
/// was dropped, and which outcome relabelling was applied to each survivor.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub family: Family,
    pub excluded: Option<usize>,
    pub relabellings: Vec<Permutation>,
}

/// An ordered set of d measurement bases in dimension d.
///
/// Column j of `unitaries()[a]` is the j-th basis vector of measurement a.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: PrimeDim,
    unitaries: Vec<ComplexMatrix>,
    provenance: Provenance,
}

impl MubSet {
    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn family(&self) -> Family {
        self.provenance.family
    }

    /// Wrap externally built unitaries (e.g. perturbed bases). The family is
    /// `Custom`, so no unbiasedness is promised, but each matrix must still
    /// be unitary.
    pub fn custom(dim: PrimeDim, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        let d = dim.as_usize();
        if unitaries.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: unitaries.len(),
            });
        }
        for u in &unitaries {
            if u.rows() != d || u.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: u.rows(),
                });
            }
            if !u.is_unitary(1e-9) {
                return Err(Error::InvalidInput(
                    "custom basis matrix is not unitary within 1e-9".into(),
                ));
            }
        }
        Ok(MubSet {
            dim,
            unitaries,
            provenance: Provenance {
                family: Family::Custom,
                excluded: None,
                relabellings: vec![Permutation::identity(d); d],
            },
        })
    }

    /// The d WF bases with identity labelling (computational basis dropped).
    pub fn wf_set(d: PrimeDim) -> Result<Self> {
        let ids = vec![Permutation::identity(d.as_usize()); d.as_usize()];
        standard_set(d, 0, &ids)
    }

    /// The shifted family: WF bases relabelled by `|j⟩ → |j - a²⟩`.
    pub fn dpp_set(d: PrimeDim) -> Result<Self> {
        standard_set(d, 0, &dpp_relabellings(d)?)
    }

    pub fn to_json(&self) -> String {
        let dto = MubSetJson {
            dim: self.dim.value(),
            family: self.provenance.family,
            excluded: self.provenance.excluded,
            relabellings: self
                .provenance
                .relabellings
                .iter()
                .map(|p| p.mapping().to_vec())
                .collect(),
            unitaries: self
                .unitaries
                .iter()
                .map(crate::wire::mat_to_pairs)
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("MubSet serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: MubSetJson =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let dim = PrimeDim::new(dto.dim)?;
        let d = dim.as_usize();
        if dto.unitaries.len() != d || dto.relabellings.len() != d {
            return Err(Error::Serialization(format!(
                "expected {d} unitaries and relabellings"
            )));
        }
        let unitaries = dto
            .unitaries
            .iter()
            .map(|pairs| crate::wire::mat_from_pairs(d, d, pairs))
            .collect::<Result<Vec<_>>>()?;
        let relabellings = dto
            .relabellings
            .into_iter()
            .map(Permutation::new)
            .collect::<Result<Vec<_>>>()?;
        for u in &unitaries {
            if !u.is_unitary(1e-9) {
                return Err(Error::Serialization(
                    "deserialized basis matrix is not unitary within 1e-9".into(),
                ));
            }
        }
        let set = MubSet {
            dim,
            unitaries,
            provenance: Provenance {
                family: dto.family,
                excluded: dto.excluded,
                relabellings,
            },
        };
        if dto.family != Family::Custom {
            let report = verify_mub_set(&set, 1e-9);
            if !report.ok {
                return Err(Error::Serialization(format!(
                    "deserialized {} set violates unbiasedness (worst deviation {:.3e})",
                    dto.family, report.worst_deviation
                )));
            }
        }
        Ok(set)
    }
}

#[derive(Serialize, Deserialize)]
struct MubSetJson {
    dim: u64,
    family: Family,
    excluded: Option<usize>,
    relabellings: Vec<Vec<usize>>,
    unitaries: Vec<Vec<[f64; 2]>>,
}

/// Wootters-Fields basis unitary: entry (i,j) = ω^{ai² + ij}/√d.
///
/// Only valid for odd primes; at d = 2 the formula fails to produce unbiased
/// bases, so it is rejected.
pub fn wf_unitary(a: u64, d: PrimeDim) -> Result<ComplexMatrix> {
    check_basis_index(a, d)?;
    let dv = d.value();
    let norm = 1.0 / (dv as f64).sqrt();
    Ok(ComplexMatrix::from_fn(
        d.as_usize(),
        d.as_usize(),
        |i, j| {
            let (i, j) = (i as i64, j as i64);
            root_of_unity(a as i64 * i * i + i * j, dv) * norm
        },
    ))
}

/// Shifted basis unitary: entry (i,j) = ω^{ai² + ij - a²i}/√d.
///
/// Equal to `wf_unitary(a, d)` with columns cyclically shifted by a².
pub fn dpp_unitary(a: u64, d: PrimeDim) -> Result<ComplexMatrix> {
    check_basis_index(a, d)?;
    let dv = d.value();
    let norm = 1.0 / (dv as f64).sqrt();
    Ok(ComplexMatrix::from_fn(
        d.as_usize(),
        d.as_usize(),
        |i, j| {
            let (i, j) = (i as i64, j as i64);
            let a = a as i64;
            root_of_unity(a * i * i + i * j - a * a * i, dv) * norm
        },
    ))
}

fn check_basis_index(a: u64, d: PrimeDim) -> Result<()> {
    if !d.is_odd() {
        return Err(Error::OddPrimeRequired(d.value()));
    }
    if a >= d.value() {
        return Err(Error::InvalidInput(format!(
            "basis index {a} out of range 0..{}",
            d.value()
        )));
    }
    Ok(())
}

/// The relabellings that turn the WF family into the shifted one:
/// π_a(j) = (j - a²) mod d.
pub fn dpp_relabellings(d: PrimeDim) -> Result<Vec<Permutation>> {
    if !d.is_odd() {
        return Err(Error::OddPrimeRequired(d.value()));
    }
    let dv = d.value();
    Ok((0..dv)
        .map(|a| {
            let shift_back = (dv - (a * a) % dv) % dv;
            Permutation::cyclic_shift(d.as_usize(), shift_back as usize)
        })
        .collect())
}

/// Outcome relabelling: column j of the result is column π(j) of the input.
///
/// Copies columns verbatim, so relabelled entries are bit-identical to the
/// source entries.
pub fn relabel(u: &ComplexMatrix, pi: &Permutation) -> Result<ComplexMatrix> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    if pi.len() != u.cols() {
        return Err(Error::DimensionMismatch {
            expected: u.cols(),
            got: pi.len(),
        });
    }
    Ok(ComplexMatrix::from_fn(u.rows(), u.cols(), |i, j| {
        u[(i, pi.apply(j))]
    }))
}

/// The d+1 available bases, ordered [computational, WF a=0, …, WF a=d-1].
/// For d = 2: [computational, σx eigenbasis, σy eigenbasis].
pub fn basis_pool(d: PrimeDim) -> Result<Vec<ComplexMatrix>> {
    let n = d.as_usize();
    if d.value() == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = ComplexMatrix::from_entries(
            2,
            2,
            vec![
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
            ],
        )?;
        let y = ComplexMatrix::from_entries(
            2,
            2,
            vec![
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(0.0, s),
                C64::new(0.0, -s),
            ],
        )?;
        return Ok(vec![ComplexMatrix::identity(2), x, y]);
    }
    let mut pool = Vec::with_capacity(n + 1);
    pool.push(ComplexMatrix::identity(n));
    for a in 0..d.value() {
        pool.push(wf_unitary(a, d)?);
    }
    Ok(pool)
}

/// Build a d-measurement set from the d+1 pool: drop the basis at `excluded`
/// and relabel the remaining bases in pool order.
pub fn standard_set(d: PrimeDim, excluded: usize, relabellings: &[Permutation]) -> Result<MubSet> {
    let n = d.as_usize();
    if excluded > n {
        return Err(Error::ExcludedOutOfRange {
            index: excluded,
            max: n,
        });
    }
    if relabellings.len() != n {
        return Err(Error::RelabellingCount {
            expected: n,
            got: relabellings.len(),
        });
    }
    let pool = basis_pool(d)?;
    let mut unitaries = Vec::with_capacity(n);
    let mut kept = pool
        .into_iter()
        .enumerate()
        .filter(|(idx, _)| *idx != excluded)
        .map(|(_, u)| u);
    for pi in relabellings {
        let u = kept.next().expect("pool has d+1 bases");
        unitaries.push(relabel(&u, pi)?);
    }
    let family = classify_family(d, excluded, relabellings);
    Ok(MubSet {
        dim: d,
        unitaries,
        provenance: Provenance {
            family,
            excluded: Some(excluded),
            relabellings: relabellings.to_vec(),
        },
    })
}

fn classify_family(d: PrimeDim, excluded: usize, relabellings: &[Permutation]) -> Family {
    if excluded != 0 {
        return Family::WfPlusComputational;
    }
    if d.is_odd() {
        if let Ok(shifts) = dpp_relabellings(d) {
            if relabellings == shifts.as_slice() {
                return Family::Dpp;
            }
        }
    }
    Family::Wf
}

/// Result of an unbiasedness check.
#[derive(Debug, Clone, Serialize)]
pub struct MubReport {
    pub ok: bool,
    /// max over basis pairs and entries of | |⟨i|U_a†U_b|j⟩| - 1/√d |.
    pub worst_deviation: f64,
    /// (a, b, i, j) of the worst entry, if any pair exceeds the tolerance.
    pub offending_pair: Option<(usize, usize, usize, usize)>,
}

/// Check |⟨i|U_a†U_b|j⟩| = 1/√d for every pair a ≠ b and every entry.
pub fn verify_mub_unitaries(unitaries: &[ComplexMatrix], tol: f64) -> MubReport {
    let mut worst = 0.0f64;
    let mut offender = None;
    for a in 0..unitaries.len() {
        for b in 0..unitaries.len() {
            if a == b {
                continue;
            }
            let d = unitaries[a].rows();
            let target = 1.0 / (d as f64).sqrt();
            let overlap = &unitaries[a].adjoint() * &unitaries[b];
            for i in 0..d {
                for j in 0..d {
                    let dev = (overlap[(i, j)].norm() - target).abs();
                    if dev > worst {
                        worst = dev;
                        offender = Some((a, b, i, j));
                    }
                }
            }
        }
    }
    MubReport {
        ok: worst <= tol,
        worst_deviation: worst,
        offending_pair: if worst <= tol { None } else { offender },
    }
}

pub fn verify_mub_set(set: &MubSet, tol: f64) -> MubReport {
    verify_mub_unitaries(set.unitaries(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(v: u64) -> PrimeDim {
        PrimeDim::new(v).unwrap()
    }

    #[test]
    fn wf_zero_is_fourier() {
        let dim = d(5);
        let u = wf_unitary(0, dim).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let expect = root_of_unity((i * j) as i64, 5) / 5f64.sqrt();
                assert!((u[(i, j)] - expect).norm() < 1e-15);
            }
        }
        // a = 0 makes WF and the shifted family coincide
        assert_eq!(u, dpp_unitary(0, dim).unwrap());
    }

    #[test]
    fn wf_entry_example() {
        // (a=1, d=3), entry (1,2): exponent 1·1 + 1·2 = 3 ≡ 0, so 1/√3
        let u = wf_unitary(1, d(3)).unwrap();
        assert!((u[(1, 2)] - C64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wf_is_unitary_with_flat_moduli() {
        for dv in [3u64, 5, 7, 11, 13] {
            let dim = d(dv);
            for a in 0..dv {
                let u = wf_unitary(a, dim).unwrap();
                assert!(u.is_unitary(1e-9), "WF a={a} d={dv}");
                let target = 1.0 / (dv as f64).sqrt();
                for e in u.entries() {
                    assert!((e.norm() - target).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn wf_rejects_d2() {
        assert!(wf_unitary(0, d(2)).is_err());
        assert!(dpp_unitary(1, d(2)).is_err());
    }

    #[test]
    fn wf_formula_fails_at_d2() {
        // evaluating the formula naively at d=2 gives overlap moduli 0 and 1
        let naive = |a: i64| {
            ComplexMatrix::from_fn(2, 2, |i, j| {
                let (i, j) = (i as i64, j as i64);
                root_of_unity(a * i * i + i * j, 2) * std::f64::consts::FRAC_1_SQRT_2
            })
        };
        let report = verify_mub_unitaries(&[naive(0), naive(1)], 1e-9);
        assert!(!report.ok);
        // overlap moduli are 0 and 1, so the worst deviation from 1/√2 is 1/√2
        assert!((report.worst_deviation - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(report.offending_pair.is_some());
    }

    #[test]
    fn dpp_equals_relabelled_wf_bitwise() {
        for dv in [3u64, 5, 7, 11, 13] {
            let dim = d(dv);
            let shifts = dpp_relabellings(dim).unwrap();
            for a in 0..dv {
                let dpp = dpp_unitary(a, dim).unwrap();
                let wf = wf_unitary(a, dim).unwrap();
                let relabelled = relabel(&wf, &shifts[a as usize]).unwrap();
                for (x, y) in dpp.entries().iter().zip(relabelled.entries()) {
                    assert_eq!(x.re.to_bits(), y.re.to_bits(), "a={a} d={dv}");
                    assert_eq!(x.im.to_bits(), y.im.to_bits(), "a={a} d={dv}");
                }
            }
        }
    }

    #[test]
    fn dpp_column_examples() {
        // d=3, a=1: column j of the shifted basis is column (j-1) mod 3 of WF
        let dpp = dpp_unitary(1, d(3)).unwrap();
        let wf = wf_unitary(1, d(3)).unwrap();
        for j in 0..3 {
            let src = (j + 3 - 1) % 3;
            for i in 0..3 {
                assert!((dpp[(i, j)] - wf[(i, src)]).norm() < 1e-15);
            }
        }
        // d=5, a=2: a² = 4
        let dpp = dpp_unitary(2, d(5)).unwrap();
        let wf = wf_unitary(2, d(5)).unwrap();
        for j in 0..5 {
            let src = (j + 5 - 4) % 5;
            for i in 0..5 {
                assert!((dpp[(i, j)] - wf[(i, src)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn full_wf_pool_is_mutually_unbiased() {
        for dv in [3u64, 5, 7] {
            let pool = basis_pool(d(dv)).unwrap();
            assert_eq!(pool.len(), dv as usize + 1);
            let report = verify_mub_unitaries(&pool, 1e-9);
            assert!(report.ok, "d={dv}: worst {}", report.worst_deviation);
        }
    }

    #[test]
    fn qubit_pool_is_mutually_unbiased() {
        let pool = basis_pool(d(2)).unwrap();
        assert_eq!(pool.len(), 3);
        assert!(verify_mub_unitaries(&pool, 1e-9).ok);
        // textbook pair: computational + Hadamard
        let report = verify_mub_unitaries(&pool[0..2], 1e-9);
        assert!(report.ok);
        assert!(report.offending_pair.is_none());
    }

    #[test]
    fn relabel_identity_and_unitarity() {
        let u = wf_unitary(2, d(5)).unwrap();
        let id = Permutation::identity(5);
        assert_eq!(relabel(&u, &id).unwrap(), u);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let mut m: Vec<usize> = (0..5).collect();
            m.shuffle(&mut rng);
            let pi = Permutation::new(m).unwrap();
            let v = relabel(&u, &pi).unwrap();
            assert!(v.is_unitary(1e-9));
        }
    }

    #[test]
    fn relabelling_preserves_overlap_moduli() {
        let dim = d(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let pis: Vec<Permutation> = (0..3)
                .map(|_| {
                    let mut m: Vec<usize> = (0..3).collect();
                    m.shuffle(&mut rng);
                    Permutation::new(m).unwrap()
                })
                .collect();
            let set = standard_set(dim, 0, &pis).unwrap();
            let report = verify_mub_set(&set, 1e-9);
            assert!(report.ok, "worst {}", report.worst_deviation);
        }
    }

    #[test]
    fn standard_set_families() {
        let dim = d(3);
        let ids = vec![Permutation::identity(3); 3];
        let wf = standard_set(dim, 0, &ids).unwrap();
        assert_eq!(wf.family(), Family::Wf);
        for (a, u) in wf.unitaries().iter().enumerate() {
            assert_eq!(u, &wf_unitary(a as u64, dim).unwrap());
        }

        let dpp = standard_set(dim, 0, &dpp_relabellings(dim).unwrap()).unwrap();
        assert_eq!(dpp.family(), Family::Dpp);
        for (a, u) in dpp.unitaries().iter().enumerate() {
            assert_eq!(u, &dpp_unitary(a as u64, dim).unwrap());
        }

        let mixed = standard_set(dim, 2, &ids).unwrap();
        assert_eq!(mixed.family(), Family::WfPlusComputational);
        // pool order [comp, wf0, wf1, wf2] minus index 2 = [comp, wf0, wf2]
        assert_eq!(mixed.unitaries()[0], ComplexMatrix::identity(3));
        assert_eq!(mixed.unitaries()[1], wf_unitary(0, dim).unwrap());
        assert_eq!(mixed.unitaries()[2], wf_unitary(2, dim).unwrap());

        let qubit = standard_set(d(2), 0, &vec![Permutation::identity(2); 2]).unwrap();
        assert_eq!(qubit.unitaries().len(), 2);
        assert!(verify_mub_set(&qubit, 1e-9).ok);
    }

    #[test]
    fn standard_set_rejects_bad_args() {
        let dim = d(3);
        let ids = vec![Permutation::identity(3); 3];
        assert!(matches!(
            standard_set(dim, 4, &ids),
            Err(Error::ExcludedOutOfRange { .. })
        ));
        assert!(matches!(
            standard_set(dim, 0, &ids[0..2]),
            Err(Error::RelabellingCount { .. })
        ));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 1, 2]).is_ok());
        assert!(Permutation::new(vec![0, 0, 2]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let set = MubSet::dpp_set(d(5)).unwrap();
        let text = set.to_json();
        let back = MubSet::from_json(&text).unwrap();
        assert_eq!(set, back);
        assert_eq!(back.family(), Family::Dpp);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn permutation_rank_round_trip(n in 1usize..8, r in 0u64..5040) {
            prop_assume!(r < factorial(n));
            let p = Permutation::unrank(n, r).unwrap();
            prop_assert_eq!(p.rank(), r);
        }
    }
}
