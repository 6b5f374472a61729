//! Modular arithmetic and quadratic Gauss sums over prime dimensions.
//!
//! Everything here is exact integer arithmetic except the two Gauss-sum
//! evaluators, which return complex values. `gauss_sum_direct` is the literal
//! summation and serves as an independent oracle for the closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// A dimension that has been checked to be prime.
///
/// Primality is established by trial division at construction; the dimensions
/// in play are tiny (d ≤ ~100), so nothing fancier is warranted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PrimeDim(u64);

impl PrimeDim {
    pub fn new(d: u64) -> Result<Self> {
        if is_prime(d) {
            Ok(PrimeDim(d))
        } else {
            Err(Error::NotPrime(d))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// Residue class of d mod 4; decides the Gauss-sum prefactor ε_d.
    pub fn mod4(self) -> u64 {
        self.0 % 4
    }

    fn require_odd(self) -> Result<Self> {
        if self.is_odd() {
            Ok(self)
        } else {
            Err(Error::OddPrimeRequired(self.0))
        }
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for PrimeDim {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let d = u64::deserialize(deserializer)?;
        PrimeDim::new(d).map_err(serde::de::Error::custom)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// `base^exp mod m` by square-and-multiply; `m` must be nonzero.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m > 0, "zero modulus");
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b: u128 = (base % m) as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Canonical representative of `x mod d` in `[0, d)`.
pub fn reduce_mod(x: i64, d: u64) -> u64 {
    x.rem_euclid(d as i64) as u64
}

/// Multiplicative inverse of `x` modulo the prime `d`, via Fermat:
/// `x^{d-2} mod d`. Fails when `x ≡ 0 (mod d)`.
pub fn mod_inverse(x: i64, d: PrimeDim) -> Result<u64> {
    let r = reduce_mod(x, d.value());
    if r == 0 {
        return Err(Error::NoInverse { x, d: d.value() });
    }
    Ok(mod_pow(r, d.value() - 2, d.value()))
}

/// Legendre symbol (m/d) for an odd prime d, by Euler's criterion
/// `m^{(d-1)/2} mod d`. Returns 0 when `m ≡ 0`.
pub fn legendre_symbol(m: i64, d: PrimeDim) -> Result<i32> {
    d.require_odd()?;
    let r = reduce_mod(m, d.value());
    if r == 0 {
        return Ok(0);
    }
    let e = mod_pow(r, (d.value() - 1) / 2, d.value());
    Ok(if e == 1 { 1 } else { -1 })
}

/// The constants α ≡ 3⁻¹ and β ≡ 2⁻¹ (mod d) plus the fourth-root-of-unity
/// prefactor ε_d of the closed-form quadratic Gauss sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussConstants {
    pub alpha: u64,
    pub beta: u64,
    pub epsilon_d: Complex64,
}

impl GaussConstants {
    /// Requires an odd prime d > 3 (3 has no inverse mod 3).
    pub fn new(d: PrimeDim) -> Result<Self> {
        d.require_odd()?;
        Ok(GaussConstants {
            alpha: mod_inverse(3, d)?,
            beta: mod_inverse(2, d)?,
            epsilon_d: epsilon(d),
        })
    }
}

/// ε_d = 1 for d ≡ 1 (mod 4), i for d ≡ 3 (mod 4).
pub fn epsilon(d: PrimeDim) -> Complex64 {
    match d.mod4() {
        1 => Complex64::new(1.0, 0.0),
        3 => Complex64::new(0.0, 1.0),
        _ => unreachable!("epsilon is only defined for odd d"),
    }
}

/// d-th root of unity raised to the canonical residue of `exponent` mod d.
///
/// Exponents are always reduced before hitting the trig functions so that
/// algebraically equal phases are bit-identical.
pub fn root_of_unity(exponent: i64, d: u64) -> Complex64 {
    let e = reduce_mod(exponent, d);
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / d as f64)
}

/// Closed-form quadratic Gauss sum Σ_a ω^{a²m} for an odd prime d:
/// `(m/d)·ε_d·√d` when `m ≢ 0`, and `d` when `m ≡ 0`.
pub fn gauss_sum_closed(m: i64, d: PrimeDim) -> Result<Complex64> {
    d.require_odd()?;
    if reduce_mod(m, d.value()) == 0 {
        return Ok(Complex64::new(d.value() as f64, 0.0));
    }
    let chi = legendre_symbol(m, d)? as f64;
    Ok(epsilon(d) * chi * (d.value() as f64).sqrt())
}

/// Literal evaluation of Σ_{a=0}^{d-1} ω^{a²m} with ω = e^{2πi/d}.
///
/// Independent oracle for [`gauss_sum_closed`]; also valid at d = 2.
pub fn gauss_sum_direct(m: i64, d: PrimeDim) -> Complex64 {
    let dv = d.value();
    let mut sum = Complex64::new(0.0, 0.0);
    for a in 0..dv {
        let sq = (a as u128 * a as u128 % dv as u128) as i64;
        sum += root_of_unity(sq * reduce_mod(m, dv) as i64, dv);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < TOL
    }

    #[test]
    fn primality_check() {
        for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 97] {
            assert!(PrimeDim::new(d).is_ok(), "{d} is prime");
        }
        for d in [0u64, 1, 4, 6, 9, 15, 21, 91] {
            assert!(PrimeDim::new(d).is_err(), "{d} is not prime");
        }
    }

    #[test]
    fn mod_inverse_examples() {
        let d5 = PrimeDim::new(5).unwrap();
        let d7 = PrimeDim::new(7).unwrap();
        let d11 = PrimeDim::new(11).unwrap();
        assert_eq!(mod_inverse(3, d5).unwrap(), 2);
        assert_eq!(mod_inverse(1, d7).unwrap(), 1);
        // brute-force oracle: the unique y in 1..11 with 2y ≡ 1 (mod 11)
        let y = (1..11).find(|y| 2 * y % 11 == 1).unwrap();
        assert_eq!(y, 6);
        assert_eq!(mod_inverse(2, d11).unwrap(), 6);
    }

    #[test]
    fn mod_inverse_rejects_zero_residue() {
        let d5 = PrimeDim::new(5).unwrap();
        assert!(mod_inverse(0, d5).is_err());
        assert!(mod_inverse(10, d5).is_err());
        assert!(mod_inverse(-5, d5).is_err());
    }

    #[test]
    fn legendre_examples() {
        let d3 = PrimeDim::new(3).unwrap();
        let d5 = PrimeDim::new(5).unwrap();
        assert_eq!(legendre_symbol(1, d3).unwrap(), 1);
        // squares mod 3 are {0, 1}, so 2 is a non-residue
        let squares: Vec<u64> = (0..3).map(|n| n * n % 3).collect();
        assert!(!squares.contains(&2));
        assert_eq!(legendre_symbol(2, d3).unwrap(), -1);
        assert_eq!(legendre_symbol(0, d5).unwrap(), 0);
    }

    #[test]
    fn legendre_rejects_two() {
        let d2 = PrimeDim::new(2).unwrap();
        assert!(legendre_symbol(1, d2).is_err());
        assert!(gauss_sum_closed(1, d2).is_err());
        assert!(GaussConstants::new(d2).is_err());
    }

    #[test]
    fn legendre_matches_bruteforce_residues() {
        for dv in [3u64, 5, 7, 11, 13] {
            let d = PrimeDim::new(dv).unwrap();
            let squares: std::collections::HashSet<u64> = (1..dv).map(|n| n * n % dv).collect();
            for m in 1..dv {
                let expect = if squares.contains(&m) { 1 } else { -1 };
                assert_eq!(legendre_symbol(m as i64, d).unwrap(), expect, "({m}/{dv})");
            }
        }
    }

    #[test]
    fn gauss_constants() {
        let d5 = PrimeDim::new(5).unwrap();
        let c = GaussConstants::new(d5).unwrap();
        assert_eq!(c.alpha, 2); // 3·2 = 6 ≡ 1 (mod 5)
        assert_eq!(c.beta, 3); // 2·3 = 6 ≡ 1 (mod 5)
        assert_eq!(c.epsilon_d, Complex64::new(1.0, 0.0));
        let d7 = PrimeDim::new(7).unwrap();
        let c = GaussConstants::new(d7).unwrap();
        assert_eq!((3 * c.alpha) % 7, 1);
        assert_eq!((2 * c.beta) % 7, 1);
        assert_eq!(c.epsilon_d, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn gauss_sum_examples() {
        let d3 = PrimeDim::new(3).unwrap();
        let d5 = PrimeDim::new(5).unwrap();
        let d7 = PrimeDim::new(7).unwrap();
        assert!(close(
            gauss_sum_closed(0, d5).unwrap(),
            Complex64::new(5.0, 0.0)
        ));
        // 1 + ω + ω with ω = e^{2πi/3} equals i√3
        assert!(close(
            gauss_sum_closed(1, d3).unwrap(),
            Complex64::new(0.0, 3f64.sqrt())
        ));
        assert!(close(
            gauss_sum_closed(1, d5).unwrap(),
            Complex64::new(5f64.sqrt(), 0.0)
        ));
        assert!(close(gauss_sum_direct(0, d7), Complex64::new(7.0, 0.0)));
        assert!(close(
            gauss_sum_direct(1, d3),
            Complex64::new(0.0, 3f64.sqrt())
        ));
        assert!(close(
            gauss_sum_direct(2, d5),
            Complex64::new(-(5f64.sqrt()), 0.0)
        ));
    }

    #[test]
    fn closed_form_matches_direct_sum_up_to_23() {
        for dv in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let d = PrimeDim::new(dv).unwrap();
            for m in 0..dv as i64 {
                let closed = gauss_sum_closed(m, d).unwrap();
                let direct = gauss_sum_direct(m, d);
                assert!(
                    (closed - direct).norm() < TOL,
                    "d={dv} m={m}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn shifted_square_sum_is_shift_invariant() {
        // Σ_a ω^{-n(a-s)²} = Σ_a ω^{-n a²}: (a-s)² runs over the same
        // residues as a².
        let shifted = |n: i64, s: i64, dv: u64| -> Complex64 {
            (0..dv as i64)
                .map(|a| {
                    let e = -(n * (a - s) * (a - s));
                    root_of_unity(e, dv)
                })
                .sum()
        };
        for dv in [3u64, 5, 7, 11, 13] {
            let d = PrimeDim::new(dv).unwrap();
            for n in 1..dv as i64 {
                let base = gauss_sum_direct(-n, d);
                for s in 0..dv as i64 {
                    assert!(
                        (shifted(n, s, dv) - base).norm() < TOL,
                        "d={dv} n={n} s={s}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn mod_inverse_is_an_involution(x in 1i64..1000, di in 0usize..6) {
            let dv = [3u64, 5, 7, 11, 13, 17][di];
            let d = PrimeDim::new(dv).unwrap();
            prop_assume!(reduce_mod(x, dv) != 0);
            let y = mod_inverse(x, d).unwrap();
            prop_assert_eq!(x as u64 * y % dv, 1);
            let back = mod_inverse(y as i64, d).unwrap();
            prop_assert_eq!(back, reduce_mod(x, dv));
        }

        #[test]
        fn legendre_is_multiplicative(m in 1i64..100, n in 1i64..100, di in 0usize..5) {
            let dv = [3u64, 5, 7, 11, 13][di];
            let d = PrimeDim::new(dv).unwrap();
            prop_assume!(reduce_mod(m, dv) != 0 && reduce_mod(n, dv) != 0);
            let lhs = legendre_symbol(m, d).unwrap() * legendre_symbol(n, d).unwrap();
            let rhs = legendre_symbol(m * n, d).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
