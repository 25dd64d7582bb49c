use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::polyio::{big_to_real, IntPoly};
use crate::scalar::Real;

/// Univariate polynomial with complex floating coefficients, lowest degree
/// first. Trailing exact zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CxPoly<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> CxPoly<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm_sqr() == T::zero()) {
            coeffs.pop();
        }
        CxPoly { coeffs }
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn from_int(p: &IntPoly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| Complex::new(big_to_real(c), T::zero()))
                .collect(),
        )
    }

    /// `c · ∏ (z - r)`.
    pub fn from_roots(c: Complex<T>, roots: &[Complex<T>]) -> Self {
        let mut v = vec![c];
        for &r in roots {
            let mut next = vec![Complex::new(T::zero(), T::zero()); v.len() + 1];
            for (k, &a) in v.iter().enumerate() {
                next[k + 1] = next[k + 1] + a;
                next[k] = next[k] - a * r;
            }
            v = next;
        }
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative by Horner.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let (mut p, mut dp) = (zero, zero);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `Σ |a_k| r^k`, the natural scale for rounding error near `|z| = r`.
    pub fn abs_scale(&self, r: T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_usize(k).unwrap())
                .collect(),
        )
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        - other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut v = vec![Complex::new(T::zero(), T::zero()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j] + a * b;
            }
        }
        Self::new(v)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
}
