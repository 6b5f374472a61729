//! Shared helpers for the JSON wire format: complex matrices travel as flat
//! row-major lists of `[re, im]` pairs, with shapes supplied by context.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub(crate) fn mat_to_pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.entries().iter().map(|c| [c.re, c.im]).collect()
}

pub(crate) fn mat_from_pairs(
    rows: usize,
    cols: usize,
    pairs: &[[f64; 2]],
) -> Result<ComplexMatrix> {
    if pairs.len() != rows * cols {
        return Err(Error::Serialization(format!(
            "expected {}x{} = {} complex entries, got {}",
            rows,
            cols,
            rows * cols,
            pairs.len()
        )));
    }
    let entries = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    ComplexMatrix::from_entries(rows, cols, entries)
}

/// Square matrix whose side is inferred from the entry count.
pub(crate) fn square_from_pairs(pairs: &[[f64; 2]]) -> Result<ComplexMatrix> {
    let n = (pairs.len() as f64).sqrt().round() as usize;
    if n * n != pairs.len() {
        return Err(Error::Serialization(format!(
            "entry count {} is not a perfect square",
            pairs.len()
        )));
    }
    mat_from_pairs(n, n, pairs)
}
