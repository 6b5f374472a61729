//! Dense complex matrices and a cyclic-Jacobi Hermitian eigensolver.
//!
//! The matrices here are small (at most d² × d² with d ≤ 13), so the kernel
//! favors simplicity and determinism over asymptotics: row-major `Vec`
//! storage, naive products, and a Jacobi sweep loop that always visits pivots
//! in the same order. Identical input bits give identical output bits.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Off-diagonal Frobenius mass at which a Jacobi sweep stops.
const JACOBI_OFF_TARGET: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// |i⟩⟨j| in dimension n.
    pub fn ketbra(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    /// Column vector from amplitudes.
    pub fn column_vector(amplitudes: &[C64]) -> Self {
        ComplexMatrix {
            rows: amplitudes.len(),
            cols: 1,
            entries: amplitudes.to_vec(),
        }
    }

    /// Outer product u·v† of two amplitude slices.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        let entries = self.entries.iter().map(|e| e * factor).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry modulus, the ‖·‖_max norm used by the tolerance checks.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// max |A - B| entrywise; matrices must have equal shape.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker (tensor) product; the right factor is the fast index.
    pub fn kron(&self, other: &Self) -> Self {
        let (ra, ca, rb, cb) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(ra * rb, ca * cb);
        for i1 in 0..ra {
            for j1 in 0..ca {
                let a = self[(i1, j1)];
                for i2 in 0..rb {
                    for j2 in 0..cb {
                        out[(i1 * rb + i2, j1 * cb + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    /// max |M - M†| entry; 0 for exactly Hermitian input.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol
    }

    /// ‖U†U - I‖_max ≤ tol.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = &self.adjoint() * self;
        gram.max_diff(&Self::identity(self.rows)) <= tol
    }

    /// Hermitian within tol and all eigenvalues ≥ -tol.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match self.hermitian_eigenvalues() {
            Ok(vals) => vals.first().is_none_or(|&v| v >= -tol),
            Err(_) => false,
        }
    }

    /// (M + M†)/2, used to shed rounding-level asymmetry before eigensolves.
    pub fn symmetrize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Full spectral decomposition of a Hermitian matrix.
    ///
    /// Values come back ascending; eigenvector columns are orthonormal. The
    /// input must be Hermitian within 1e-9 or the call is rejected with the
    /// failed check.
    pub fn hermitian_eigen(&self) -> Result<EigenResult> {
        let n = self.check_hermitian_input()?;
        let mut a = self.symmetrize();
        let mut v = Some(Self::identity(n));
        jacobi_diagonalize(&mut a, &mut v)?;
        let (values, order) = sorted_diagonal(&a);
        let vraw = v.unwrap();
        let vectors = Self::from_fn(n, n, |i, j| vraw[(i, order[j])]);
        Ok(EigenResult { values, vectors })
    }

    /// Eigenvalues only (ascending); cheaper than [`Self::hermitian_eigen`]
    /// in enumeration loops that only need λ_max.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let _ = self.check_hermitian_input()?;
        let mut a = self.symmetrize();
        jacobi_diagonalize(&mut a, &mut None)?;
        Ok(sorted_diagonal(&a).0)
    }

    /// Largest eigenvalue of a Hermitian matrix.
    pub fn lambda_max(&self) -> Result<f64> {
        Ok(*self
            .hermitian_eigenvalues()?
            .last()
            .expect("nonempty spectrum"))
    }

    /// f(M) = V diag(λ^p) V† over eigenvalues above `cutoff`; eigenvalues at
    /// or below the cutoff are mapped to 0. Requires a Hermitian input whose
    /// spectrum is nonnegative up to the cutoff.
    pub fn psd_power(&self, exponent: f64, cutoff: f64) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eigen()?;
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda <= cutoff {
                continue;
            }
            let w = lambda.powf(exponent);
            let v = eig.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * w;
                }
            }
        }
        Ok(out)
    }

    /// Projector onto the span of eigenvectors with eigenvalue above `cutoff`.
    pub fn support_projector(&self, cutoff: f64) -> Result<ComplexMatrix> {
        self.psd_power(0.0, cutoff)
    }

    fn check_hermitian_input(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let dev = self.hermitian_deviation();
        if dev > 1e-9 {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: 1e-9,
            });
        }
        Ok(self.rows)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenResult {
    /// Eigenvector column belonging to the largest eigenvalue.
    pub fn top_eigenvector(&self) -> Vec<C64> {
        self.vectors.column(self.values.len() - 1)
    }
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi for Hermitian matrices: sweep all (p,q) pivots in row order
/// until the off-diagonal Frobenius mass drops below the target. `v`, when
/// present, accumulates the rotations so its columns end up as eigenvectors.
fn jacobi_diagonalize(a: &mut ComplexMatrix, v: &mut Option<ComplexMatrix>) -> Result<()> {
    let n = a.rows();
    if n <= 1 {
        return Ok(());
    }
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_mass(a);
        if off < JACOBI_OFF_TARGET {
            return Ok(());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(a, v, p, q);
            }
        }
    }
    let off = off_diagonal_mass(a);
    if off < JACOBI_OFF_TARGET {
        return Ok(());
    }
    Err(Error::EigenNoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
        off,
    })
}

fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut Option<ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r; // e^{iθ} with a_pq = r·e^{iθ}
    let tau = (aqq - app) / (2.0 * r);
    // smaller root of t² + 2τt - 1 = 0 keeps the rotation angle ≤ π/4
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // The plane rotation is U = diag(1, e^{-iθ})·[[c, s], [-s, c]] acting on
    // the (p,q) subspace; apply A ← U†AU column- then row-wise.
    let pc = phase.conj();
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * (pc * s);
        a[(k, q)] = akp * s + akq * (pc * c);
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * (phase * s);
        a[(q, k)] = apk * s + aqk * (phase * c);
    }
    // exact post-rotation block: off-diagonal annihilated, reals on diagonal
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);

    if let Some(vm) = v {
        for k in 0..n {
            let vkp = vm[(k, p)];
            let vkq = vm[(k, q)];
            vm[(k, p)] = vkp * c - vkq * (pc * s);
            vm[(k, q)] = vkp * s + vkq * (pc * c);
        }
    }
}

fn sorted_diagonal(a: &ComplexMatrix) -> (Vec<f64>, Vec<usize>) {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    (values, order)
}

/// True iff every element is a Hermitian PSD idempotent and the family sums
/// to the identity, all within `tol`.
pub fn is_projective_povm(elements: &[ComplexMatrix], tol: f64) -> Result<bool> {
    let first = elements
        .first()
        .ok_or_else(|| Error::InvalidInput("empty POVM".into()))?;
    if !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let n = first.rows();
    for m in elements {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.rows(),
            });
        }
    }
    let mut sum = ComplexMatrix::zeros(n, n);
    for m in elements {
        if !m.is_hermitian(tol) || !m.is_psd(tol) {
            return Ok(false);
        }
        if (&(m * m) - m).max_abs() > tol {
            return Ok(false);
        }
        sum = &sum + m;
    }
    Ok(sum.max_diff(&ComplexMatrix::identity(n)) <= tol)
}
