use num_complex::Complex;
use serde::Serialize;

use super::facing::{facing_edge_at, local_expansion, unity_exponent, FacingEdge, LocalExpansion, MAX_EXACT_ORDER};
use crate::error::{Error, Result};
use crate::measure::unit_circle_args;
use crate::polyio::BiPoly;
use crate::roots::{find_roots, resultant_y, CxPoly, Resultant, DEFAULT_TOL};
use crate::scalar::{cis, root_of_unity};
use crate::zeta::FieldDescriptor;

type C = Complex<f64>;

/// Toric points closer than this (in both coordinates) are merged.
pub const MERGE: f64 = 1e-7;

/// A point of the curve on the torus `|x| = |y| = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToricPoint {
    pub mu: C,
    pub nu: C,
    pub singular: bool,
    /// `(k, n)` with `μ = e^{2πik/n}` when `μ` is a root of unity.
    pub mu_order: Option<(u64, u64)>,
    pub nu_order: Option<(u64, u64)>,
    pub facing_edge: Option<FacingEdge>,
    pub field: Option<FieldDescriptor>,
}

impl ToricPoint {
    /// Distance to `(x, y)` in the max norm.
    pub fn distance(&self, x: C, y: C) -> f64 {
        (self.mu - x).norm().max((self.nu - y).norm())
    }
}

/// Newton iteration for `P(e^{iθ}, e^{iψ}) = 0` in the real unknowns
/// `(θ, ψ)`. Returns `None` if the Jacobian degenerates or it fails to
/// converge.
fn polish_on_torus(p: &BiPoly, px: &BiPoly, py: &BiPoly, x: C, y: C) -> Option<(C, C)> {
    let (mut th, mut ps) = (x.arg(), y.arg());
    for _ in 0..30 {
        let (x, y) = (cis(th), cis(ps));
        let v = p.eval(x, y);
        let scale = p.abs_scale(x, y);
        if v.norm() <= 1e-15 * scale {
            return Some((x, y));
        }
        let i = C::new(0.0, 1.0);
        let jt = i * x * px.eval(x, y);
        let jp = i * y * py.eval(x, y);
        let det = jt.re * jp.im - jp.re * jt.im;
        if det.abs() < 1e-10 * scale * scale {
            return None;
        }
        let dth = (v.re * jp.im - jp.re * v.im) / det;
        let dps = (jt.re * v.im - v.re * jt.im) / det;
        th -= dth;
        ps -= dps;
    }
    let (x, y) = (cis(th), cis(ps));
    (p.eval(x, y).norm() <= 1e-12 * p.abs_scale(x, y)).then_some((x, y))
}

/// Replaces `(x, y)` by a nearby exact root-of-unity point on the curve,
/// or by the Newton-polished point.
fn refine(p: &BiPoly, px: &BiPoly, py: &BiPoly, x: C, y: C, snap: f64) -> Option<(C, C)> {
    if let (Some((a, n)), Some((b, m))) = (unity_exponent(x, MAX_EXACT_ORDER, snap), unity_exponent(y, MAX_EXACT_ORDER, snap)) {
        let (mu, nu) = (root_of_unity::<f64>(a as i64, n), root_of_unity::<f64>(b as i64, m));
        if let LocalExpansion::Exact { terms, .. } = local_expansion(p, mu, nu) {
            if !terms.contains_key(&(0, 0)) {
                return Some((mu, nu));
            }
        }
    }
    if let Some(pt) = polish_on_torus(p, px, py, x, y) {
        return Some(pt);
    }
    (p.eval(x, y).norm() <= 1e-9 * p.abs_scale(x, y)).then_some((x, y))
}

fn classify(p: &BiPoly, px: &BiPoly, py: &BiPoly, mu: C, nu: C) -> ToricPoint {
    let exp = local_expansion(p, mu, nu);
    let singular = if exp.is_exact() {
        let s = exp.support();
        !s.contains(&(1, 0)) && !s.contains(&(0, 1))
    } else {
        let gx = px.eval(mu, nu).norm() / px.abs_scale(mu, nu).max(1.0);
        let gy = py.eval(mu, nu).norm() / py.abs_scale(mu, nu).max(1.0);
        gx < 1e-8 && gy < 1e-8
    };
    let (facing_edge, field) = match facing_edge_at(p, mu, nu) {
        Ok((e, f)) => (Some(e), Some(f)),
        Err(_) => (None, None),
    };
    ToricPoint {
        mu,
        nu,
        singular,
        mu_order: unity_exponent(mu, MAX_EXACT_ORDER, 1e-12),
        nu_order: unity_exponent(nu, MAX_EXACT_ORDER, 1e-12),
        facing_edge,
        field,
    }
}

/// Merges, refines and classifies candidate torus points, sorted by
/// `(arg μ, arg ν)` in `[0, 2π)`.
pub fn finalize_points(p: &BiPoly, candidates: &[(C, C)], snap: f64) -> Vec<ToricPoint> {
    let (px, py) = (p.partial_x(), p.partial_y());
    let mut pts: Vec<(C, C)> = Vec::new();
    for &(x, y) in candidates {
        let Some((mu, nu)) = refine(p, &px, &py, x, y, snap) else {
            continue;
        };
        if !pts.iter().any(|&(a, b)| (a - mu).norm() < MERGE && (b - nu).norm() < MERGE) {
            pts.push((mu, nu));
        }
    }
    let key = |z: C| z.arg().rem_euclid(std::f64::consts::TAU);
    pts.sort_by(|a, b| key(a.0).total_cmp(&key(b.0)).then(key(a.1).total_cmp(&key(b.1))));
    pts.into_iter().map(|(mu, nu)| classify(p, &px, &py, mu, nu)).collect()
}

/// Points with `|x| = |y| = 1` on `P = 0`, from the unit-circle roots of
/// `Res_y(P, x^l y^m P(1/x, 1/y))`. Reciprocal polynomials, whose resultant
/// vanishes, go through the crossing scan of the `paths` module instead.
pub fn toric_points(p: &BiPoly) -> Result<Vec<ToricPoint>> {
    let p = p.strip_monomial();
    if p.deg_y() == 0 {
        return Ok(Vec::new());
    }
    let r = resultant_y(&p, &p.reciprocal())?;
    let Resultant::Poly(r) = r else {
        let cands = crate::paths::crossing_scan(&p, crate::paths::DEFAULT_GRID)?;
        return Ok(finalize_points(&p, &cands, 1e-6));
    };
    let mut cands = Vec::new();
    for phi in unit_circle_args(&r, 1e-6)? {
        let x = cis(phi);
        let coeffs = p.specialize_x(x);
        let poly = CxPoly::new(coeffs);
        if poly.degree().unwrap_or(0) == 0 {
            continue;
        }
        for root in find_roots(&poly, DEFAULT_TOL)?.roots {
            // clustered roots at singular points carry larger errors
            let slack = if root.multiplicity > 1 { 1e-4 } else { 1e-6 };
            if (root.value.norm() - 1.0).abs() < slack {
                cands.push((x, root.value));
            }
        }
    }
    let pts = finalize_points(&p, &cands, 1e-7);
    if pts.is_empty() && !cands.is_empty() {
        return Err(Error::Invalid("torus candidates failed to refine".into()));
    }
    Ok(pts)
}
