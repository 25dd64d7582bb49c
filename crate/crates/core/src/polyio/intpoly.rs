use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Univariate polynomial with exact integer coefficients, lowest degree first.
///
/// The zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c·z^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `z^d p(1/z)` with `d = deg p`.
    pub fn reversed(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval<T: Real>(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex::new(big_to_real(c), T::zero());
        }
        acc
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(big_to_real::<f64>).collect()
    }

    /// Division with remainder, exact over the integers; `None` when a
    /// quotient coefficient would not be integral.
    pub fn div_rem(&self, d: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        let dd = d.degree()?;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        Some((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact quotient, `None` when `d` does not divide `self` over ℤ.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        match self.div_rem(d) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) · self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("nonzero divisor");
        let Some(ds) = self.degree() else {
            return IntPoly::zero();
        };
        if ds < dd {
            return self.clone();
        }
        let lc = d.leading();
        let mut r = self.clone();
        let mut steps = 0u32;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = IntPoly::monomial(r.leading(), rd - dd);
            r = &r.scale(&lc) - &(&shift * d);
            steps += 1;
        }
        let missing = (ds - dd + 1) as u32 - steps;
        r.scale(&num_traits::pow(lc, missing as usize))
    }

    /// Greatest common divisor over ℤ (primitive, positive leading coefficient).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let content = self.content().gcd(&other.content());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive().scale(&content)
    }

    /// Squarefree part `p / gcd(p, p')`, primitive.
    pub fn squarefree(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive()
            .div_exact(&g.primitive())
            .expect("gcd divides")
            .primitive()
    }
}

pub(crate) fn big_to_real<T: Real>(c: &BigInt) -> T {
    match c.to_f64() {
        Some(v) => T::lit(v),
        None => T::nan(),
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    /// Renders highest degree first in the variable `z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "z")?,
                1 => write!(f, "{mag}*z")?,
                _ if unit => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_and_gcd() {
        let a = IntPoly::from_i64(&[-1, 0, 1]); // z^2 - 1
        let b = IntPoly::from_i64(&[1, 1]); // z + 1
        assert_eq!(a.div_exact(&b), Some(IntPoly::from_i64(&[-1, 1])));
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).div_exact(&b), None);
        let g = a.gcd(&IntPoly::from_i64(&[1, 2, 1]));
        assert_eq!(g, IntPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn squarefree_part() {
        // (z-1)^3 (z+2)
        let p = &IntPoly::from_i64(&[-1, 1]).pow(3) * &IntPoly::from_i64(&[2, 1]);
        assert_eq!(p.squarefree(), IntPoly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = IntPoly::from_i64(&[1, 2, 3, 4]);
        let d = IntPoly::from_i64(&[1, 0, 2]);
        // 2^2 * a = q d + r
        let r = a.pseudo_rem(&d);
        let lhs = a.scale(&BigInt::from(4));
        let (q, rr) = (&lhs - &r).div_rem(&d).unwrap();
        assert!(rr.is_zero());
        assert!(q.degree().unwrap() <= 1);
    }

    #[test]
    fn display_highest_first() {
        assert_eq!(IntPoly::from_i64(&[1, 4, 0, 3, -5]).to_string(), "-5*z^4 + 3*z^3 + 4*z + 1");
    }
}
