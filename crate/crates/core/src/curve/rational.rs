use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{find_roots, CxPoly, DEFAULT_TOL};
use crate::scalar::ExtComplex;

type C = Complex<f64>;

/// Roots closer than this are merged.
pub const ROOT_MERGE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub root: C,
    pub exp: i32,
}

/// `scalar · ∏ (t - root)^exp` with distinct roots and nonzero exponents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub scalar: C,
    pub factors: Vec<Factor>,
}

impl RationalFunction {
    /// Builds the factored form, merging roots within [`ROOT_MERGE`] and
    /// dropping zero exponents.
    pub fn new(scalar: C, factors: impl IntoIterator<Item = (C, i32)>) -> Self {
        let mut out: Vec<Factor> = Vec::new();
        for (root, exp) in factors {
            match out.iter_mut().find(|f| (f.root - root).norm() <= ROOT_MERGE) {
                Some(f) => f.exp += exp,
                None => out.push(Factor { root, exp }),
            }
        }
        out.retain(|f| f.exp != 0);
        RationalFunction { scalar, factors: out }
    }

    /// The identity function `t`.
    pub fn identity() -> Self {
        Self::new(C::new(1.0, 0.0), [(C::new(0.0, 0.0), 1)])
    }

    /// `num / den` from coefficient lists (lowest degree first).
    pub fn from_polys(num: &CxPoly<f64>, den: &CxPoly<f64>) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut factors = Vec::new();
        for (p, sign) in [(num, 1), (den, -1)] {
            if p.degree().unwrap() > 0 {
                for r in find_roots(p, DEFAULT_TOL)?.roots {
                    factors.push((r.value, sign * r.multiplicity as i32));
                }
            }
        }
        Ok(Self::new(num.leading() / den.leading(), factors))
    }

    /// `Σ exp`: positive for a pole at infinity, negative for a zero there.
    pub fn degree(&self) -> i32 {
        self.factors.iter().map(|f| f.exp).sum()
    }

    pub fn zeros(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.exp > 0)
    }

    pub fn poles(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.exp < 0)
    }

    fn poly(&self, sign: i32) -> CxPoly<f64> {
        let roots: Vec<C> = self
            .factors
            .iter()
            .filter(|f| f.exp * sign > 0)
            .flat_map(|f| std::iter::repeat(f.root).take(f.exp.unsigned_abs() as usize))
            .collect();
        CxPoly::from_roots(C::new(1.0, 0.0), &roots)
    }

    /// `scalar · ∏_{exp>0} (t - root)^exp`.
    pub fn numerator(&self) -> CxPoly<f64> {
        self.poly(1).scale(self.scalar)
    }

    /// `∏_{exp<0} (t - root)^{-exp}`, monic.
    pub fn denominator(&self) -> CxPoly<f64> {
        self.poly(-1)
    }

    /// Value at a finite point; zeros and poles give `0` and `∞`.
    pub fn eval(&self, t: C) -> ExtComplex<f64> {
        let mut v = self.scalar;
        let mut pole = false;
        for f in &self.factors {
            let d = t - f.root;
            if d.norm_sqr() == 0.0 {
                if f.exp > 0 {
                    return ExtComplex::Finite(C::new(0.0, 0.0));
                }
                pole = true;
                continue;
            }
            v *= d.powi(f.exp);
        }
        if pole {
            ExtComplex::Infinity
        } else {
            ExtComplex::from(v)
        }
    }

    /// Value on the Riemann sphere.
    pub fn eval_ext(&self, t: ExtComplex<f64>) -> ExtComplex<f64> {
        match t {
            ExtComplex::Finite(t) => self.eval(t),
            ExtComplex::Infinity => self.at_infinity(),
        }
    }

    pub fn at_infinity(&self) -> ExtComplex<f64> {
        match self.degree() {
            0 => ExtComplex::Finite(self.scalar),
            d if d > 0 => ExtComplex::Infinity,
            _ => ExtComplex::Finite(C::new(0.0, 0.0)),
        }
    }

    /// Derivative of `s ↦ h(1/s)` at `s = 0`, defined when `degree() == 0`.
    pub fn derivative_at_infinity(&self) -> Option<C> {
        if self.degree() != 0 {
            return None;
        }
        let s: C = self.factors.iter().map(|f| f.root * f.exp as f64).sum();
        Some(-self.scalar * s)
    }

    /// `h(a)` with every factor whose root equals `a` omitted.
    pub fn eval_tilde(&self, a: C) -> C {
        let mut v = self.scalar;
        for f in &self.factors {
            let d = a - f.root;
            if d.norm() > ROOT_MERGE {
                v *= d.powi(f.exp);
            }
        }
        v
    }

    /// Complex conjugate function `t ↦ conj(h(conj t))`.
    pub fn conj(&self) -> Self {
        RationalFunction {
            scalar: self.scalar.conj(),
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    root: f.root.conj(),
                    exp: f.exp,
                })
                .collect(),
        }
    }

    /// `h(c·t)`.
    pub fn rescale(&self, c: C) -> Self {
        let mut scalar = self.scalar;
        for f in &self.factors {
            scalar *= c.powi(f.exp);
        }
        Self::new(scalar, self.factors.iter().map(|f| (f.root / c, f.exp)))
    }

    /// Exchange format with decimal strings carrying 20 significant digits.
    pub fn to_json(&self) -> serde_json::Value {
        let num = |z: C| serde_json::json!([format!("{:.20e}", z.re), format!("{:.20e}", z.im)]);
        serde_json::json!({
            "scalar": num(self.scalar),
            "factors": self.factors.iter().map(|f| serde_json::json!({"root": num(f.root), "exp": f.exp})).collect::<Vec<_>>(),
        })
    }

    /// Accepts numbers or decimal strings for each real component.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let real = |x: &serde_json::Value| -> Result<f64> {
            match x {
                serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| Error::Format(format!("bad number {n}"))),
                serde_json::Value::String(s) => s.trim().parse().map_err(|_| Error::Format(format!("bad decimal `{s}`"))),
                other => Err(Error::Format(format!("expected number, got {other}"))),
            }
        };
        let cx = |x: &serde_json::Value| -> Result<C> {
            match x.as_array().map(Vec::as_slice) {
                Some([re, im]) => Ok(C::new(real(re)?, real(im)?)),
                _ => Err(Error::Format(format!("expected [re, im], got {x}"))),
            }
        };
        let scalar = cx(v.get("scalar").ok_or_else(|| Error::Format("missing `scalar`".into()))?)?;
        let mut factors = Vec::new();
        for f in v.get("factors").and_then(|f| f.as_array()).ok_or_else(|| Error::Format("missing `factors`".into()))? {
            let root = cx(f.get("root").ok_or_else(|| Error::Format("missing `root`".into()))?)?;
            let exp = f
                .get("exp")
                .and_then(|e| e.as_i64())
                .ok_or_else(|| Error::Format("missing integer `exp`".into()))?;
            factors.push((root, exp as i32));
        }
        if scalar.norm_sqr() == 0.0 {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self::new(scalar, factors))
    }
}
