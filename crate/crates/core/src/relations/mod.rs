//! Integer relations among computed constants and identity checks of the
//! form `π·m(P) = Σ rⱼ·bⱼ`.

mod pslq;

use num_rational::Ratio;
use serde::Serialize;

pub use pslq::{pslq, Confidence, RelationResult};

use crate::dilog::bw;
use crate::error::Result;
use crate::measure::{mahler_jensen1d, QuadConfig};
use crate::polyio::BiPoly;
use crate::scalar::root_of_unity;
use crate::zeta::{borel_term, FieldDescriptor};

/// Largest denominator accepted when reading coefficients as rationals.
pub const MAX_DENOMINATOR: i64 = 60;

/// A constant that may appear on the right-hand side of an identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BasisElement {
    /// `D(e^{2πik/n})`.
    Dilog { n: u64, k: u64 },
    /// `|disc F|^{3/2} ζ_F(2) / π^{2r+2}` for the given field.
    Borel { field: FieldDescriptor },
    /// Fields without a known basis constant.
    Unknown { field: FieldDescriptor },
    Custom { label: String, value: f64 },
}

impl BasisElement {
    pub fn value(&self) -> Option<f64> {
        match self {
            BasisElement::Dilog { n, k } => Some(bw(root_of_unity::<f64>(*k as i64, *n))),
            BasisElement::Borel { field } => borel_term(field).ok(),
            BasisElement::Unknown { .. } => None,
            BasisElement::Custom { value, .. } => Some(*value),
        }
    }

    pub fn label(&self) -> String {
        match self {
            BasisElement::Dilog { n: 3, k: 1 } => "D(omega)".into(),
            BasisElement::Dilog { n: 4, k: 1 } => "D(i)".into(),
            BasisElement::Dilog { n, k: 1 } => format!("D(xi_{n})"),
            BasisElement::Dilog { n, k } => format!("D(xi_{n}^{k})"),
            BasisElement::Borel { field } => format!("borel[{}]", field.label()),
            BasisElement::Unknown { field } => format!("unknown[{}]", field.label()),
            BasisElement::Custom { label, .. } => label.clone(),
        }
    }

    /// Parses `D(omega)`, `D(i)`, `D(xi_n)`, `D(xi_n^k)`, `borel(d)` for
    /// `ℚ(√-d)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || crate::error::Error::Format(format!("unknown basis element `{text}`"));
        if let Some(inner) = t.strip_prefix("D(").and_then(|s| s.strip_suffix(')')) {
            return match inner {
                "omega" | "w" => Ok(BasisElement::Dilog { n: 3, k: 1 }),
                "i" => Ok(BasisElement::Dilog { n: 4, k: 1 }),
                _ => {
                    let rest = inner.strip_prefix("xi_").ok_or_else(bad)?;
                    let (n, k) = rest.split_once('^').unwrap_or((rest, "1"));
                    Ok(BasisElement::Dilog {
                        n: n.parse().map_err(|_| bad())?,
                        k: k.parse().map_err(|_| bad())?,
                    })
                }
            };
        }
        if let Some(inner) = t.strip_prefix("borel(").and_then(|s| s.strip_suffix(')')) {
            let d: u64 = inner.parse().map_err(|_| bad())?;
            return Ok(BasisElement::Borel {
                field: FieldDescriptor::imaginary_quadratic(d)?,
            });
        }
        Err(bad())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityConfig {
    pub max_coeff: i64,
    pub digits: u32,
    /// Target accuracy of `m(P)` when it is computed by quadrature.
    pub measure_tol: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            max_coeff: 50,
            digits: 15,
            measure_tol: 1e-13,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityVerdict {
    pub measure: f64,
    pub measure_error: f64,
    pub basis: Vec<String>,
    pub relation: RelationResult,
    /// `π·m = Σ rⱼ bⱼ` as `(numerator, denominator)` pairs.
    pub coefficients: Option<Vec<(i64, i64)>>,
    /// `|π·m − Σ rⱼ bⱼ|`.
    pub residual: Option<f64>,
    pub text: String,
}

impl IdentityVerdict {
    pub fn found(&self) -> bool {
        self.coefficients.is_some()
    }
}

/// Runs PSLQ on `[π·m, b₁, …]` for a measure value computed elsewhere.
pub fn identity_from_value(m: f64, m_err: f64, basis: &[BasisElement], cfg: &IdentityConfig) -> IdentityVerdict {
    let pi = std::f64::consts::PI;
    let known: Vec<(&BasisElement, f64)> = basis.iter().filter_map(|b| b.value().map(|v| (b, v))).collect();
    let mut values = vec![pi * m];
    values.extend(known.iter().map(|(_, v)| *v));
    let relation = pslq(&values, cfg.max_coeff, cfg.digits);
    let labels: Vec<String> = known.iter().map(|(b, _)| b.label()).collect();
    let mut verdict = IdentityVerdict {
        measure: m,
        measure_error: m_err,
        basis: labels.clone(),
        coefficients: None,
        residual: None,
        text: "no relation at this precision/bound".into(),
        relation,
    };
    let c = &verdict.relation.coefficients;
    if verdict.relation.confidence != Confidence::Detected || c[0] == 0 {
        if verdict.relation.confidence == Confidence::Inconclusive {
            verdict.text = "inconclusive at this precision".into();
        }
        return verdict;
    }
    let rats: Vec<Ratio<i64>> = c[1..].iter().map(|&k| Ratio::new(-k, c[0])).collect();
    if rats.iter().any(|r| *r.denom() > MAX_DENOMINATOR) {
        verdict.text = "relation found but coefficients exceed the denominator bound".into();
        return verdict;
    }
    let fitted: f64 = rats
        .iter()
        .zip(&values[1..])
        .map(|(r, v)| *r.numer() as f64 / *r.denom() as f64 * v)
        .sum();
    let terms: Vec<String> = rats
        .iter()
        .zip(&labels)
        .filter(|(r, _)| *r.numer() != 0)
        .map(|(r, l)| format!("{r}*{l}"))
        .collect();
    verdict.text = format!("pi*m(P) = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
    verdict.residual = Some((values[0] - fitted).abs());
    verdict.coefficients = Some(rats.iter().map(|r| (*r.numer(), *r.denom())).collect());
    verdict
}

/// Computes `m(P)` by Jensen-reduced quadrature and searches for
/// `π·m(P) = Σ rⱼ bⱼ` with rational `rⱼ`.
pub fn verify_identity(p: &BiPoly, basis: &[BasisElement], cfg: &IdentityConfig) -> Result<IdentityVerdict> {
    let q = QuadConfig {
        tol: cfg.measure_tol,
        max_panels: 20_000,
        ..QuadConfig::default()
    };
    let m = mahler_jensen1d(p, &q)?;
    Ok(identity_from_value(m.value, m.error_bound, basis, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_parsing() {
        assert_eq!(BasisElement::parse("D(xi_7^3)").unwrap(), BasisElement::Dilog { n: 7, k: 3 });
        assert_eq!(BasisElement::parse(" D( omega )").unwrap(), BasisElement::Dilog { n: 3, k: 1 });
        assert!(matches!(BasisElement::parse("borel(2)").unwrap(), BasisElement::Borel { .. }));
        assert!(BasisElement::parse("borel(4)").is_err());
        assert!(BasisElement::parse("E(i)").is_err());
    }

    #[test]
    fn planted_value() {
        let basis = [BasisElement::Dilog { n: 4, k: 1 }, BasisElement::Dilog { n: 3, k: 1 }];
        let (di, dw) = (basis[0].value().unwrap(), basis[1].value().unwrap());
        let m = (2.0 * di - 0.75 * dw) / std::f64::consts::PI;
        let v = identity_from_value(m, 0.0, &basis, &IdentityConfig::default());
        assert_eq!(v.coefficients, Some(vec![(2, 1), (-3, 4)]));
        assert!(v.residual.unwrap() < 1e-14);
        assert_eq!(v.text, "pi*m(P) = 2*D(i) + -3/4*D(omega)");
    }
}
