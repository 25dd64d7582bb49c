//! `m(P)` for a parametrized curve as a sum of dilogarithms at the path
//! endpoints and logarithms weighted by winding angles.

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::{Serialize, Serializer};

use crate::curve::{toric_points, validate_parametrization, RationalFunction, ToricPoint, PARAM_TOL, ROOT_MERGE};
use crate::dilog::bw_dilog;
use crate::error::{Error, Result};
use crate::measure::{mahler_1var_int, mahler_jensen1d, QuadConfig};
use crate::paths::{extract_S, pullback, trace_sections, winding, PathSegment, DEFAULT_GRID};
use crate::polyio::BiPoly;
use crate::relations::BasisElement;
use crate::scalar::ExtComplex;
use crate::zeta::FieldKind;

type C = Complex<f64>;
type Ext = ExtComplex<f64>;

/// Winding terms whose logarithm is below this are dropped.
pub const LOG_ZERO: f64 = 1e-12;
/// Floor of the allowed gap between the assembled total and quadrature.
pub const CHECK_FLOOR: f64 = 1e-7;

/// `h(a)` with any factor `(t - a)^e` left out.
pub fn eval_tilde(h: &RationalFunction, a: C) -> C {
    h.eval_tilde(a)
}

fn ser_ext<S: Serializer>(z: &Ext, s: S) -> std::result::Result<S::Ok, S::Error> {
    match z {
        ExtComplex::Finite(z) => [z.re, z.im].serialize(s),
        ExtComplex::Infinity => "inf".serialize(s),
    }
}

fn ser_cx<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointKind {
    Initial,
    Terminal,
}

/// `coeff · D(arg)` for one endpoint and one pair `(α_r, β_s)`. Indices are
/// 1-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilogTerm {
    pub j: usize,
    pub r: usize,
    pub s: usize,
    /// `±l_r·m_s`, positive at initial points.
    pub coeff: i64,
    #[serde(serialize_with = "ser_ext")]
    pub arg: Ext,
    pub endpoint_kind: EndpointKind,
    /// `coeff · D(arg)`.
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    /// Zero or pole of `f`.
    Alpha,
    /// Zero or pole of `g`.
    Beta,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindingTerm {
    pub kind: PointKind,
    pub j: usize,
    /// `r` or `s`, 1-based.
    pub index: usize,
    #[serde(serialize_with = "ser_cx")]
    pub point: C,
    /// `log|g̃(α_r)|` or `log|f̃(β_s)|`.
    pub log_abs: f64,
    pub winding: f64,
    /// `l_r·log|g̃(α_r)|·wind` or `-m_s·log|f̃(β_s)|·wind`.
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureBreakdown {
    /// `2π·m(λ)` for the leading coefficient `λ(x)` in `y`.
    pub lambda_term: f64,
    pub dilog_terms: Vec<DilogTerm>,
    pub winding_terms: Vec<WindingTerm>,
    /// `m(P)`.
    pub total: f64,
    /// Quadrature value used for the consistency check, if it ran.
    pub quadrature: Option<f64>,
    #[serde(skip)]
    pub segments: Vec<PathSegment>,
    #[serde(skip)]
    pub toric: Vec<ToricPoint>,
}

impl MeasureBreakdown {
    pub fn dilog_sum(&self) -> f64 {
        self.dilog_terms.iter().map(|t| t.value).sum()
    }

    pub fn winding_sum(&self) -> f64 {
        self.winding_terms.iter().map(|t| t.contribution).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theorem2Options {
    /// Compare against Jensen quadrature and fail on disagreement.
    pub check: bool,
    pub grid: usize,
}

impl Default for Theorem2Options {
    fn default() -> Self {
        Theorem2Options {
            check: true,
            grid: DEFAULT_GRID,
        }
    }
}

/// `(u - α)/(β - α)` on the sphere.
fn ratio(u: Ext, alpha: C, beta: C) -> Ext {
    match u {
        ExtComplex::Finite(u) => ExtComplex::from((u - alpha) / (beta - alpha)),
        ExtComplex::Infinity => ExtComplex::Infinity,
    }
}

/// The formal sum `Σ' l_r m_s [(u - α_r)/(β_s - α_r)]` at one endpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalSum {
    pub terms: Vec<FormalTerm>,
    /// `Σ c·D(arg)`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormalTerm {
    pub r: usize,
    pub s: usize,
    pub coeff: i64,
    #[serde(serialize_with = "ser_ext")]
    pub arg: Ext,
}

pub fn formal_dilog_sum(u: Ext, f: &RationalFunction, g: &RationalFunction) -> FormalSum {
    let mut terms = Vec::new();
    for (r, a) in f.factors.iter().enumerate() {
        for (s, b) in g.factors.iter().enumerate() {
            if (a.root - b.root).norm() <= ROOT_MERGE {
                continue;
            }
            terms.push(FormalTerm {
                r: r + 1,
                s: s + 1,
                coeff: a.exp as i64 * b.exp as i64,
                arg: ratio(u, a.root, b.root),
            });
        }
    }
    let value = terms.iter().map(|t| t.coeff as f64 * bw_dilog(t.arg)).sum();
    FormalSum { terms, value }
}

/// Lifted paths of `S` for a validated parametrization.
pub fn segments(p: &BiPoly, f: &RationalFunction, g: &RationalFunction, grid: usize) -> Result<(Vec<ToricPoint>, Vec<PathSegment>)> {
    let p = p.strip_monomial();
    let err = validate_parametrization(&p, f, g, 16);
    if !(err <= PARAM_TOL) {
        return Err(Error::Invalid(format!("parametrization does not satisfy P(f, g) = 0 (residual {err:.3e})")));
    }
    let toric = toric_points(&p)?;
    let sheets = trace_sections(&p, grid)?;
    let arcs = extract_S(&sheets, &p, &toric)?;
    let segs = arcs.iter().map(|a| pullback(a, f, g, &toric)).collect::<Result<Vec<_>>>()?;
    Ok((toric, segs))
}

/// `m(P)` with the full breakdown, checked against quadrature.
pub fn theorem2_measure(p: &BiPoly, f: &RationalFunction, g: &RationalFunction) -> Result<MeasureBreakdown> {
    theorem2_with(p, f, g, &Theorem2Options::default())
}

pub fn theorem2_with(p: &BiPoly, f: &RationalFunction, g: &RationalFunction, opts: &Theorem2Options) -> Result<MeasureBreakdown> {
    let p = p.strip_monomial();
    let (toric, segs) = segments(&p, f, g, opts.grid)?;
    let lambda_term = TAU * mahler_1var_int(&p.leading_coeff_y())?;

    let mut dilog_terms = Vec::new();
    let mut winding_terms = Vec::new();
    for (j, seg) in segs.iter().enumerate() {
        if !seg.closed {
            for (u, kind, sign) in [(seg.u, EndpointKind::Initial, 1), (seg.v, EndpointKind::Terminal, -1)] {
                for t in formal_dilog_sum(u, f, g).terms {
                    let coeff = sign * t.coeff;
                    dilog_terms.push(DilogTerm {
                        j: j + 1,
                        r: t.r,
                        s: t.s,
                        coeff,
                        arg: t.arg,
                        endpoint_kind: kind,
                        value: coeff as f64 * bw_dilog(t.arg),
                    });
                }
            }
        }
        for (r, a) in f.factors.iter().enumerate() {
            let log_abs = g.eval_tilde(a.root).norm().ln();
            let w = winding(seg, a.root)?;
            winding_terms.push(WindingTerm {
                kind: PointKind::Alpha,
                j: j + 1,
                index: r + 1,
                point: a.root,
                log_abs,
                winding: w,
                contribution: a.exp as f64 * log_abs * w,
            });
        }
        for (s, b) in g.factors.iter().enumerate() {
            let log_abs = f.eval_tilde(b.root).norm().ln();
            if log_abs.abs() < LOG_ZERO {
                continue;
            }
            let w = winding(seg, b.root)?;
            winding_terms.push(WindingTerm {
                kind: PointKind::Beta,
                j: j + 1,
                index: s + 1,
                point: b.root,
                log_abs,
                winding: w,
                contribution: -(b.exp as f64) * log_abs * w,
            });
        }
    }
    let sum = lambda_term
        + dilog_terms.iter().map(|t| t.value).sum::<f64>()
        + winding_terms.iter().map(|t| t.contribution).sum::<f64>();
    let total = sum / TAU;
    let mut quadrature = None;
    if opts.check {
        let q = mahler_jensen1d(
            &p,
            &QuadConfig {
                tol: 1e-12,
                max_panels: 20_000,
                ..QuadConfig::default()
            },
        )?;
        quadrature = Some(q.value);
        let bound = CHECK_FLOOR.max(10.0 * q.error_bound);
        if (total - q.value).abs() > bound {
            return Err(Error::Inconsistent {
                theorem: total,
                quadrature: q.value,
                bound,
            });
        }
    }
    Ok(MeasureBreakdown {
        lambda_term,
        dilog_terms,
        winding_terms,
        total,
        quadrature,
        segments: segs,
        toric,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaloisReport {
    pub totals: Vec<f64>,
    /// Sorted `(coeff, D(arg))` pairs per parametrization.
    pub dilog_terms: Vec<Vec<(i64, f64)>>,
}

/// Runs the evaluation once per conjugate parametrization; the totals must
/// agree within `1e-9`.
pub fn galois_average_check(p: &BiPoly, params: &[(RationalFunction, RationalFunction)], opts: &Theorem2Options) -> Result<GaloisReport> {
    let mut totals = Vec::new();
    let mut terms = Vec::new();
    for (f, g) in params {
        let b = theorem2_with(p, f, g, opts)?;
        totals.push(b.total);
        let mut t: Vec<(i64, f64)> = b.dilog_terms.iter().map(|d| (d.coeff, bw_dilog(d.arg))).collect();
        t.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        terms.push(t);
    }
    let (lo, hi) = totals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if hi - lo > 1e-9 {
        return Err(Error::GaloisMismatch(totals));
    }
    Ok(GaloisReport { totals, dilog_terms: terms })
}

/// Constants expected in `π·m(P)` from the fields attached to the toric
/// points: `D(ξ)` for primitive roots of unity in cyclotomic fields, a zeta
/// term for fields with one complex pair.
pub fn predict_basis(p: &BiPoly) -> Result<Vec<BasisElement>> {
    let p = p.strip_monomial();
    let mut out: Vec<BasisElement> = Vec::new();
    for pt in toric_points(&p)? {
        let Some(field) = pt.field else { continue };
        let new: Vec<BasisElement> = match &field.kind {
            FieldKind::Rationals => Vec::new(),
            FieldKind::Cyclotomic(n) => {
                let n = *n;
                (1..n)
                    .filter(|&k| 2 * k < n && num_integer::gcd(k, n) == 1)
                    .map(|k| BasisElement::Dilog { n, k })
                    .collect()
            }
            FieldKind::ImaginaryQuadratic(_) => vec![BasisElement::Borel { field: field.clone() }],
            FieldKind::General(_) if field.complex_pairs == 1 => vec![BasisElement::Borel { field: field.clone() }],
            FieldKind::General(_) => vec![BasisElement::Unknown { field: field.clone() }],
        };
        for b in new {
            if !out.contains(&b) {
                out.push(b);
            }
        }
    }
    let key = |b: &BasisElement| match b {
        BasisElement::Dilog { n, k } => (0, *n, *k),
        BasisElement::Borel { .. } => (1, 0, 0),
        BasisElement::Unknown { .. } => (2, 0, 0),
        BasisElement::Custom { .. } => (3, 0, 0),
    };
    out.sort_by_key(key);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parametrize_deg2;
    use crate::dilog::bw;
    use crate::polyio::parse_poly;
    use crate::scalar::root_of_unity;

    #[test]
    fn tilde_values() {
        let h = RationalFunction::new(C::new(1.0, 0.0), [(C::new(1.0, 0.0), 1)]);
        assert!((eval_tilde(&h, C::new(2.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((eval_tilde(&h, C::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn loop_example() {
        let p = parse_poly("-2y^2+2xy+6y+2x+1").unwrap();
        let (f, g, _) = parametrize_deg2(&p).unwrap();
        let b = theorem2_measure(&p, &f, &g).unwrap();
        assert!((b.total - (3.0 + 11f64.sqrt()).ln()).abs() < 1e-10);
        assert!(b.dilog_terms.is_empty());
        assert!((b.lambda_term - TAU * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn parabola_example() {
        let p = parse_poly("x^2-2xy+y^2-4y+4").unwrap();
        let (f, g, _) = parametrize_deg2(&p).unwrap();
        let b = theorem2_measure(&p, &f, &g).unwrap();
        let w = bw(root_of_unity::<f64>(1, 3));
        let want = 3.75 * w / std::f64::consts::PI + 2f64.ln();
        assert!((b.total - want).abs() < 1e-9, "{} vs {want}", b.total);
    }

    #[test]
    fn formal_sum_at_infinity() {
        let f = RationalFunction::new(C::new(1.0, 0.0), [(C::new(1.0, 0.0), 1), (C::new(-1.0, 0.0), -1)]);
        let g = RationalFunction::new(C::new(1.0, 0.0), [(C::new(0.0, 1.0), 1)]);
        let s = formal_dilog_sum(ExtComplex::Infinity, &f, &g);
        assert_eq!(s.terms.len(), 2);
        assert!(s.terms.iter().all(|t| t.arg.is_infinite()));
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn basis_for_the_hexagonal_conic() {
        let b = predict_basis(&parse_poly("y^2+y(x+1)+x^2+x+1").unwrap()).unwrap();
        assert_eq!(b, vec![BasisElement::Dilog { n: 3, k: 1 }, BasisElement::Dilog { n: 4, k: 1 }]);
    }
}
