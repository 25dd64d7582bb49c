use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::intpoly::{big_to_real, IntPoly};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exponent pair `(l, m)` of the monomial `x^l y^m`.
pub type Exponent = (u32, u32);

/// Bivariate polynomial with exact integer coefficients.
///
/// Stored sparsely; zero coefficients are never kept. A valid `BiPoly` has
/// at least one term (the zero polynomial is rejected at construction).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl BiPoly {
    /// Builds a polynomial from terms, summing duplicates. Fails on zero.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let p = Self::from_terms_unchecked(terms);
        if p.terms.is_empty() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(p)
        }
    }

    pub fn from_i64(terms: &[((u32, u32), i64)]) -> Result<Self> {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    /// Possibly-zero intermediate used during parsing and arithmetic.
    pub(crate) fn from_terms_unchecked<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut map: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        BiPoly { terms: map }
    }

    pub(crate) fn zero_unchecked() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn constant_unchecked(c: BigInt) -> Self {
        Self::from_terms_unchecked([((0, 0), c)])
    }

    pub fn x() -> Self {
        Self::from_terms_unchecked([((1, 0), BigInt::one())])
    }

    pub fn y() -> Self {
        Self::from_terms_unchecked([((0, 1), BigInt::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, l: u32, m: u32) -> BigInt {
        self.terms.get(&(l, m)).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = Exponent> + '_ {
        self.terms.keys().copied()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant_unchecked(BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `P(y, x)`.
    pub fn swap_xy(&self) -> BiPoly {
        Self::from_terms_unchecked(self.terms.iter().map(|(&(l, m), c)| ((m, l), c.clone())))
    }

    /// Divides out the largest monomial `x^a y^b` dividing every term.
    pub fn strip_monomial(&self) -> BiPoly {
        let a = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        self.shift(-(a as i64), -(b as i64))
    }

    /// Multiplies by `x^a y^b`; exponents must stay nonnegative.
    pub fn shift(&self, a: i64, b: i64) -> BiPoly {
        Self::from_terms_unchecked(self.terms.iter().map(|(&(l, m), c)| {
            let l = l as i64 + a;
            let m = m as i64 + b;
            assert!(l >= 0 && m >= 0, "negative exponent in shift");
            ((l as u32, m as u32), c.clone())
        }))
    }

    /// `x^{deg_x} y^{deg_y} P(1/x, 1/y)`: the torus conjugate of `P` when
    /// the coefficients are real.
    pub fn reciprocal(&self) -> BiPoly {
        let (dx, dy) = (self.deg_x(), self.deg_y());
        Self::from_terms_unchecked(
            self.terms
                .iter()
                .map(|(&(l, m), c)| ((dx - l, dy - m), c.clone())),
        )
    }

    /// True when `P` coincides with its monomial-cleared reciprocal up to
    /// sign and a monomial shift.
    pub fn is_reciprocal(&self) -> bool {
        let p = self.strip_monomial();
        let r = p.reciprocal().strip_monomial();
        r == p || r == -&p
    }

    pub fn partial_x(&self) -> BiPoly {
        Self::from_terms_unchecked(
            self.terms
                .iter()
                .filter(|(e, _)| e.0 > 0)
                .map(|(&(l, m), c)| ((l - 1, m), c * BigInt::from(l))),
        )
    }

    pub fn partial_y(&self) -> BiPoly {
        Self::from_terms_unchecked(
            self.terms
                .iter()
                .filter(|(e, _)| e.1 > 0)
                .map(|(&(l, m), c)| ((l, m - 1), c * BigInt::from(m))),
        )
    }

    /// Coefficients as a polynomial in `y` over `ℤ[x]`, lowest `y` power first.
    pub fn as_poly_in_y(&self) -> Vec<IntPoly> {
        let dy = self.deg_y() as usize;
        let dx = self.deg_x() as usize;
        let mut rows = vec![vec![BigInt::zero(); dx + 1]; dy + 1];
        for (&(l, m), c) in &self.terms {
            rows[m as usize][l as usize] = c.clone();
        }
        rows.into_iter().map(IntPoly::new).collect()
    }

    /// Coefficient of `y^{deg_y}` as a polynomial in `x`.
    pub fn leading_coeff_y(&self) -> IntPoly {
        self.as_poly_in_y().pop().unwrap_or_default()
    }

    /// `P(x0, y)` for an integer `x0`.
    pub fn specialize_x_int(&self, x0: &BigInt) -> IntPoly {
        IntPoly::new(self.as_poly_in_y().iter().map(|c| c.eval_int(x0)).collect())
    }

    /// Coefficients of `P(x0, y)` in `y` for complex `x0`, lowest first.
    pub fn specialize_x<T: Real>(&self, x0: Complex<T>) -> Vec<Complex<T>> {
        let dy = self.deg_y() as usize;
        let mut out = vec![Complex::new(T::zero(), T::zero()); dy + 1];
        let mut pows = vec![Complex::new(T::one(), T::zero())];
        for _ in 0..self.deg_x() {
            let last = *pows.last().unwrap();
            pows.push(last * x0);
        }
        for (&(l, m), c) in &self.terms {
            out[m as usize] = out[m as usize] + pows[l as usize] * big_to_real::<T>(c);
        }
        out
    }

    pub fn eval<T: Real>(&self, x: Complex<T>, y: Complex<T>) -> Complex<T> {
        let coeffs = self.specialize_x(x);
        let mut acc = Complex::new(T::zero(), T::zero());
        for c in coeffs.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    /// Scale for relative residuals: `Σ |c| |x|^l |y|^m`.
    pub fn abs_scale<T: Real>(&self, x: Complex<T>, y: Complex<T>) -> T {
        let (ax, ay) = (x.norm(), y.norm());
        self.terms.iter().fold(T::zero(), |acc, (&(l, m), c)| {
            acc + big_to_real::<T>(&c.abs()) * ax.powi(l as i32) * ay.powi(m as i32)
        })
    }

    /// Exact division; `None` when `d` does not divide `self` over ℤ.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        if d.is_zero() {
            return None;
        }
        // lex order with y dominant
        let lead = |p: &BiPoly| {
            p.terms
                .iter()
                .max_by_key(|(&(l, m), _)| (m, l))
                .map(|(&e, c)| (e, c.clone()))
        };
        let (de, dc) = lead(d)?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((re, rc)) = lead(&rem) {
            if re.0 < de.0 || re.1 < de.1 {
                return None;
            }
            let (q, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe = (re.0 - de.0, re.1 - de.1);
            let term = BiPoly::from_terms_unchecked([(qe, q.clone())]);
            rem = &rem - &(&term * d);
            quot.push((qe, q));
        }
        Some(BiPoly::from_terms_unchecked(quot))
    }

    /// JSON rendering `{"terms":[{"l":..,"m":..,"c":".."}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(&(l, m), c)| JsonTerm {
                l,
                m,
                c: c.to_string(),
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: JsonPoly = serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string()))?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let c: BigInt = t
                .c
                .parse()
                .map_err(|_| Error::NonInteger(t.c.clone()))?;
            terms.push(((t.l, t.m), c));
        }
        Self::from_terms(terms)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    l: u32,
    m: u32,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::from_terms_unchecked(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(&e, c)| (e, c.clone())),
        )
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_terms_unchecked(self.terms.iter().map(|(&e, c)| (e, -c)))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (&(l1, m1), a) in &self.terms {
            for (&(l2, m2), b) in &rhs.terms {
                *out.entry((l1 + l2, m1 + m2)).or_default() += a * b;
            }
        }
        out.retain(|_, c| !c.is_zero());
        BiPoly { terms: out }
    }
}

impl fmt::Display for BiPoly {
    /// Canonical text: descending total degree, then descending `x` power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(l, m)| std::cmp::Reverse((l + m, l)));
        for (i, (l, m)) in keys.into_iter().enumerate() {
            let c = &self.terms[&(l, m)];
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !mag.is_one() || (l == 0 && m == 0) {
                parts.push(mag.to_string());
            }
            match l {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(format!("x^{l}")),
            }
            match m {
                0 => {}
                1 => parts.push("y".into()),
                _ => parts.push(format!("y^{m}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        BiPoly::from_json(&v).map_err(serde::de::Error::custom)
    }
}
