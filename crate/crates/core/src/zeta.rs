//! Dedekind zeta values `ζ_F(2)` for imaginary quadratic fields.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::euler_phi;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FieldKind {
    Rationals,
    /// `ℚ(ξ_n)` with `n ≢ 2 (mod 4)`.
    Cyclotomic(u64),
    /// `ℚ(√-d)` with `d` squarefree and positive.
    ImaginaryQuadratic(u64),
    /// Anything else, described by the minimal polynomial text.
    General(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub discriminant: Option<i128>,
    pub complex_pairs: u32,
    pub real_embeddings: u32,
}

fn squarefree(n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor {
            kind: FieldKind::Rationals,
            discriminant: Some(1),
            complex_pairs: 0,
            real_embeddings: 1,
        }
    }

    /// `ℚ(ξ_n)`, normalised so that `n ≢ 2 (mod 4)`; `n ≤ 2` gives `ℚ`.
    pub fn cyclotomic(n: u64) -> Self {
        let n = if n % 4 == 2 { n / 2 } else { n };
        if n <= 2 {
            return Self::rationals();
        }
        let phi = euler_phi(n);
        // disc ℚ(ξ_n) = (-1)^{φ/2} n^φ / ∏_{p | n} p^{φ/(p-1)}
        let disc = (|| {
            let mut num: i128 = 1;
            for _ in 0..phi {
                num = num.checked_mul(n as i128)?;
            }
            for p in prime_factors(n) {
                for _ in 0..phi / (p - 1) {
                    num /= p as i128;
                }
            }
            Some(if (phi / 2) % 2 == 1 { -num } else { num })
        })();
        FieldDescriptor {
            kind: FieldKind::Cyclotomic(n),
            discriminant: disc,
            complex_pairs: (phi / 2) as u32,
            real_embeddings: 0,
        }
    }

    /// `ℚ(√-d)` for squarefree `d ≥ 1`.
    pub fn imaginary_quadratic(d: u64) -> Result<Self> {
        if d == 0 || !squarefree(d) {
            return Err(Error::Invalid(format!("{d} is not a positive squarefree integer")));
        }
        let disc = if d % 4 == 3 { -(d as i128) } else { -4 * d as i128 };
        Ok(FieldDescriptor {
            kind: FieldKind::ImaginaryQuadratic(d),
            discriminant: Some(disc),
            complex_pairs: 1,
            real_embeddings: 0,
        })
    }

    pub fn general(text: impl Into<String>, complex_pairs: u32, real_embeddings: u32) -> Self {
        FieldDescriptor {
            kind: FieldKind::General(text.into()),
            discriminant: None,
            complex_pairs,
            real_embeddings,
        }
    }

    /// Fundamental discriminant when the field is imaginary quadratic
    /// (including `ℚ(ξ_3)` and `ℚ(ξ_4)`).
    pub fn quadratic_discriminant(&self) -> Option<i64> {
        match self.kind {
            FieldKind::ImaginaryQuadratic(_) => self.discriminant.map(|d| d as i64),
            FieldKind::Cyclotomic(3) => Some(-3),
            FieldKind::Cyclotomic(4) => Some(-4),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FieldKind::Rationals => "Q".into(),
            FieldKind::Cyclotomic(n) => format!("Q(zeta_{n})"),
            FieldKind::ImaginaryQuadratic(d) => format!("Q(sqrt(-{d}))"),
            FieldKind::General(t) => format!("Q[z]/({t})"),
        }
    }
}

/// True for fundamental discriminants (1 included).
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        return squarefree(d.unsigned_abs());
    }
    if m == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        return (r == 2 || r == 3) && squarefree(q.unsigned_abs());
    }
    false
}

fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(D | n)` for a fundamental discriminant `D`.
pub fn kronecker_chi(d: i64, n: u64) -> Result<i8> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(kronecker_unchecked(d, n))
}

fn kronecker_unchecked(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut out = 1i8;
    while n % 2 == 0 {
        n /= 2;
        out *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    if n > 1 {
        out *= jacobi(d, n);
    }
    out
}

/// `B_{2j}` for `j = 1..7`.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Hurwitz zeta `ζ(2, a)` for `a > 0` by Euler–Maclaurin with 20 direct terms.
pub fn hurwitz2(a: f64) -> f64 {
    const N: usize = 20;
    let head: f64 = (0..N).map(|k| (k as f64 + a).powi(-2)).sum();
    let x = N as f64 + a;
    let mut tail = 1.0 / x + 0.5 / (x * x);
    let mut pow = x; // x^{2j+1}
    for b in BERNOULLI {
        pow *= x * x;
        tail += b / pow;
    }
    head + tail
}

/// `L(2, χ_D) = |D|^{-2} Σ_{a=1}^{|D|} χ(a) ζ(2, a/|D|)`.
pub fn dirichlet_l2(d: i64) -> Result<f64> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    if d == 1 {
        return Ok(std::f64::consts::PI.powi(2) / 6.0);
    }
    let q = d.unsigned_abs();
    let qf = q as f64;
    let s: f64 = (1..=q)
        .map(|a| f64::from(kronecker_unchecked(d, a)) * hurwitz2(a as f64 / qf))
        .sum();
    Ok(s / (qf * qf))
}

/// `ζ_F(2) = ζ(2) L(2, χ_disc)` for imaginary quadratic `F`.
pub fn zeta_f2(f: &FieldDescriptor) -> Result<f64> {
    let d = f
        .quadratic_discriminant()
        .ok_or_else(|| Error::UnsupportedField(f.label()))?;
    Ok(std::f64::consts::PI.powi(2) / 6.0 * dirichlet_l2(d)?)
}

/// `|disc F|^{3/2} ζ_F(2) / π^{2r+2}`, defined for fields with exactly one
/// complex pair.
pub fn borel_term(f: &FieldDescriptor) -> Result<f64> {
    if f.complex_pairs != 1 {
        return Err(Error::UnsupportedField(format!(
            "{} has {} complex pairs",
            f.label(),
            f.complex_pairs
        )));
    }
    let z = zeta_f2(f)?;
    let disc = f.quadratic_discriminant().unwrap().unsigned_abs() as f64;
    let r = f.real_embeddings as i32;
    Ok(disc.powf(1.5) * z / std::f64::consts::PI.powi(2 * r + 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(FieldDescriptor::imaginary_quadratic(2).unwrap().discriminant, Some(-8));
        assert_eq!(FieldDescriptor::imaginary_quadratic(3).unwrap().discriminant, Some(-3));
        assert_eq!(FieldDescriptor::imaginary_quadratic(1).unwrap().discriminant, Some(-4));
        assert!(FieldDescriptor::imaginary_quadratic(8).is_err());
        assert_eq!(FieldDescriptor::cyclotomic(5).discriminant, Some(125));
        assert_eq!(FieldDescriptor::cyclotomic(6), FieldDescriptor::cyclotomic(3));
        assert_eq!(FieldDescriptor::cyclotomic(3).discriminant, Some(-3));
        assert_eq!(FieldDescriptor::cyclotomic(7).discriminant, Some(-16807));
        assert_eq!(FieldDescriptor::cyclotomic(2).kind, FieldKind::Rationals);
    }

    #[test]
    fn character_values() {
        let v: Vec<i8> = [1, 3, 5, 7].iter().map(|&n| kronecker_chi(-8, n).unwrap()).collect();
        assert_eq!(v, vec![1, 1, -1, -1]);
        assert_eq!(kronecker_chi(-4, 6).unwrap(), 0);
        assert_eq!(kronecker_chi(-3, 2).unwrap(), -1);
        assert!(matches!(kronecker_chi(-12, 5), Err(Error::NotFundamental(-12))));
    }

    #[test]
    fn hurwitz_at_one_is_zeta2() {
        assert!((hurwitz2(1.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        // ζ(2, 1/2) = 3 ζ(2)
        assert!((hurwitz2(0.5) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn borel_plugins() {
        let f = FieldDescriptor::imaginary_quadratic(2).unwrap();
        let z = zeta_f2(&f).unwrap();
        let b = borel_term(&f).unwrap();
        assert!((b - 16.0 * 2f64.sqrt() * z / std::f64::consts::PI.powi(2)).abs() < 1e-13);
        assert!(borel_term(&FieldDescriptor::cyclotomic(5)).is_err());
    }
}
