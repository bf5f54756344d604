//! Exact roots of unity, used as eigenvalue and outcome labels.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The complex number `exp(2πi · num / den)`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    num: u64,
    den: u64,
}

impl Root {
    pub const ONE: Root = Root { num: 0, den: 1 };
    pub const MINUS_ONE: Root = Root { num: 1, den: 2 };
    pub const I: Root = Root { num: 1, den: 4 };
    pub const MINUS_I: Root = Root { num: 3, den: 4 };

    pub fn new(num: i64, den: u64) -> Root {
        assert!(den > 0, "root of unity with zero denominator");
        let num = num.rem_euclid(den as i64) as u64;
        let g = gcd(num, den);
        if num == 0 {
            return Root::ONE;
        }
        Root {
            num: num / g,
            den: den / g,
        }
    }

    /// `ω^k` with `ω = exp(2πi/d)`.
    pub fn omega_pow(k: i64, d: u32) -> Root {
        Root::new(k, d as u64)
    }

    /// `+1` for `true`, `-1` for `false`.
    pub fn sign(positive: bool) -> Root {
        if positive {
            Root::ONE
        } else {
            Root::MINUS_ONE
        }
    }

    /// `(-1)^bit`.
    pub fn parity(bit: u8) -> Root {
        Root::sign(bit.is_multiple_of(2))
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn conj(self) -> Root {
        Root::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, k: i64) -> Root {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Root::new(n as i64, self.den)
    }

    /// Exponent `k` such that `self = ω^k` for `ω = exp(2πi/d)`, if any.
    pub fn omega_exponent(self, d: u32) -> Option<u32> {
        let d = d as u64;
        if !d.is_multiple_of(self.den) {
            return None;
        }
        Some((self.num * (d / self.den)) as u32)
    }

    /// `Some(true)` for `+1`, `Some(false)` for `-1`, `None` otherwise.
    pub fn as_sign(self) -> Option<bool> {
        match (self.num, self.den) {
            (0, 1) => Some(true),
            (1, 2) => Some(false),
            _ => None,
        }
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        // Exact values on the quarter turns keep ±1 and ±i free of rounding.
        let quarter = (4 * self.num).is_multiple_of(self.den);
        if quarter {
            return match 4 * self.num / self.den {
                0 => Complex::new(T::one(), T::zero()),
                1 => Complex::new(T::zero(), T::one()),
                2 => Complex::new(-T::one(), T::zero()),
                _ => Complex::new(T::zero(), -T::one()),
            };
        }
        let angle = 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64;
        Complex::new(T::of(angle.cos()), T::of(angle.sin()))
    }
}

/// Ordered by angle in `[0, 2π)`.
impl Ord for Root {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Root {
    type Output = Root;

    fn mul(self, rhs: Root) -> Root {
        let den = self.den / gcd(self.den, rhs.den) * rhs.den;
        let num = self.num * (den / self.den) + rhs.num * (den / rhs.den);
        Root::new(num as i64, den)
    }
}

impl std::iter::Product for Root {
    fn product<I: Iterator<Item = Root>>(iter: I) -> Root {
        iter.fold(Root::ONE, |a, b| a * b)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "+1"),
            (1, 2) => write!(f, "-1"),
            (1, 4) => write!(f, "+i"),
            (3, 4) => write!(f, "-i"),
            (n, d) => write!(f, "exp(2πi·{n}/{d})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_products() {
        assert_eq!(Root::new(2, 4), Root::MINUS_ONE);
        assert_eq!(Root::new(-1, 4), Root::MINUS_I);
        assert_eq!(Root::I * Root::I, Root::MINUS_ONE);
        assert_eq!(Root::omega_pow(3, 6) * Root::omega_pow(3, 6), Root::ONE);
        assert_eq!(Root::I.conj(), Root::MINUS_I);
        assert_eq!(Root::omega_pow(1, 4).pow(4), Root::ONE);
    }

    #[test]
    fn omega_exponents() {
        assert_eq!(Root::MINUS_ONE.omega_exponent(4), Some(2));
        assert_eq!(Root::I.omega_exponent(2), None);
        assert_eq!(Root::ONE.omega_exponent(3), Some(0));
    }

    #[test]
    fn complex_values() {
        let z: Complex<f64> = Root::new(1, 3).to_complex();
        assert!((z.re + 0.5).abs() < 1e-15);
        assert!((z.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(Root::MINUS_I.to_complex::<f64>(), Complex::new(0.0, -1.0));
    }
}
