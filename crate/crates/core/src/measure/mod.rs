//! Numerical Mahler measure: exact one-variable evaluation, Jensen-reduced
//! quadrature over `|x| = 1`, and a plain torus average used as an oracle.

mod quad;

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::Serialize;

pub use quad::{integrate, Integral};

use crate::error::{Error, Result};
use crate::polyio::{BiPoly, IntPoly};
use crate::roots::{aberth, find_roots, CxPoly, Resultant, DEFAULT_TOL};
use crate::curve::{local_expansion, toric_points};
use crate::scalar::{cis, wrap_angle, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Jensen1d,
    Quad2d,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub method: Method,
    /// Number of integrand evaluations (rows of the torus grid for `quad2d`).
    pub evaluations: usize,
    /// Grid sizes for `quad2d`; number of final panels for `jensen1d`.
    pub levels: Vec<usize>,
}

/// `log|lc| + Σ log⁺|α|` over the roots of `p`.
pub fn mahler_1var<T: Real>(p: &CxPoly<T>) -> Result<T> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let roots = find_roots(p, T::lit(DEFAULT_TOL).max(T::eps() * T::lit(100.0)))?;
    let tail = roots.roots.iter().fold(T::zero(), |s, r| {
        s + T::from_usize(r.multiplicity).unwrap() * r.value.norm().ln().max(T::zero())
    });
    Ok(p.leading().norm().ln() + tail)
}

/// [`mahler_1var`] for an integer polynomial.
pub fn mahler_1var_int(p: &IntPoly) -> Result<f64> {
    mahler_1var(&CxPoly::<f64>::from_int(p))
}

/// Settings for [`mahler_jensen1d`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadConfig {
    /// Target absolute error on the measure.
    pub tol: f64,
    pub max_panels: usize,
    /// Uniform samples used to locate sign changes of the `|ρ| > 1` count.
    pub scan: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: 1e-8,
            max_panels: 4000,
            scan: 256,
        }
    }
}

fn y_roots(p: &BiPoly, phi: f64) -> Result<Vec<Complex<f64>>> {
    let poly = CxPoly::new(p.specialize_x(cis(phi)));
    aberth(&poly, DEFAULT_TOL).map_err(|e| Error::Tracking { phi, msg: e.to_string() })
}

/// Radius in `x` around an exact singular toric point inside which the
/// Jensen integrand is computed from the re-centred polynomial.
pub const LOCAL_RADIUS: f64 = 0.25;

/// `P(μ+s, ν+w)` at a singular toric point with root-of-unity coordinates:
/// `rows[j]` holds the coefficients in `s` of `w^j`.
///
/// Roots clustered at `ν` are ill-conditioned in `y` (error about `ε^{1/k}`
/// for `k` coalescing roots) but are found to full relative accuracy as
/// small roots `w`.
struct LocalChart {
    theta: f64,
    nu: Complex<f64>,
    rows: Vec<Vec<Complex<f64>>>,
}

impl LocalChart {
    fn new(p: &BiPoly, mu: Complex<f64>, nu: Complex<f64>) -> Option<Self> {
        let e = local_expansion(p, mu, nu);
        if !e.is_exact() {
            return None;
        }
        let rows = (0..=p.deg_y())
            .map(|j| (0..=p.deg_x()).map(|i| e.value(i, j)).collect())
            .collect();
        Some(LocalChart { theta: mu.arg(), nu, rows })
    }

    /// `y`-roots at `x = e^{iφ}`, or `None` outside [`LOCAL_RADIUS`].
    fn roots(&self, phi: f64) -> Option<Result<Vec<Complex<f64>>>> {
        let d = wrap_angle(phi - self.theta);
        // e^{iφ} − e^{iθ} without cancellation
        let s = Complex::new(0.0, 2.0 * (0.5 * d).sin()) * cis(self.theta + 0.5 * d);
        if s.norm() > LOCAL_RADIUS {
            return None;
        }
        let coeffs: Vec<Complex<f64>> = self
            .rows
            .iter()
            .map(|row| row.iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * s + c))
            .collect();
        Some(
            aberth(&CxPoly::new(coeffs), DEFAULT_TOL)
                .map(|w| w.into_iter().map(|w| self.nu + w).collect())
                .map_err(|e| Error::Tracking { phi, msg: e.to_string() }),
        )
    }
}

fn local_charts(p: &BiPoly) -> Vec<LocalChart> {
    let Ok(points) = toric_points(p) else {
        return Vec::new();
    };
    points
        .iter()
        .filter(|t| t.singular)
        .filter_map(|t| LocalChart::new(p, t.mu, t.nu))
        .collect()
}

fn outside_count(p: &BiPoly, phi: f64) -> Result<usize> {
    Ok(y_roots(p, phi)?.iter().filter(|r| r.norm() > 1.0).count())
}

/// Arguments in `[0, 2π)` of the roots of `p` within `slack` of the unit circle.
pub fn unit_circle_args(p: &IntPoly, slack: f64) -> Result<Vec<f64>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let roots = aberth(&CxPoly::<f64>::from_int(&p.squarefree()), DEFAULT_TOL)?;
    Ok(roots
        .iter()
        .filter(|r| (r.norm() - 1.0).abs() < slack)
        .map(|r| r.arg().rem_euclid(TAU))
        .collect())
}

/// Kink and singularity locations of the Jensen integrand on `[0, 2π]`.
pub fn jensen_breakpoints(p: &BiPoly, scan: usize) -> Result<Vec<f64>> {
    let mut b = vec![0.0, TAU];
    b.extend(unit_circle_args(&p.leading_coeff_y(), 1e-6)?);
    if p.deg_y() > 1 {
        // ramification points give square-root behaviour
        if let Resultant::Poly(r) = crate::roots::resultant_y(p, &p.partial_y())? {
            b.extend(unit_circle_args(&r, 1e-6)?);
        }
    }
    if let Resultant::Poly(r) = crate::roots::resultant_y(p, &p.reciprocal())? {
        b.extend(unit_circle_args(&r, 1e-6)?);
    }
    let n = scan.max(8);
    let grid: Vec<f64> = (0..=n).map(|k| TAU * (k as f64 + 0.5) / n as f64 - TAU * 0.5 / n as f64).collect();
    let counts: Vec<Result<usize>> = grid.iter().map(|&phi| outside_count(p, phi)).collect();
    for k in 0..n {
        let (Ok(ca), Ok(cb)) = (&counts[k], &counts[k + 1]) else {
            continue;
        };
        if ca == cb {
            continue;
        }
        let (mut lo, mut hi) = (grid[k], grid[k + 1]);
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            match outside_count(p, mid) {
                Ok(c) if c == *ca => lo = mid,
                Ok(_) => hi = mid,
                Err(_) => break,
            }
        }
        b.push(0.5 * (lo + hi));
    }
    b.retain(|x| (0.0..=TAU).contains(x));
    b.sort_by(f64::total_cmp);
    b.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    Ok(b)
}

/// `m(λ) + (2π)⁻¹ ∫ Σ log⁺|ρ_k(e^{iφ})| dφ` by adaptive Gauss–Kronrod, split
/// at every kink of the integrand.
pub fn mahler_jensen1d(p: &BiPoly, cfg: &QuadConfig) -> Result<MeasureEstimate> {
    let p = &p.strip_monomial();
    let lam = p.leading_coeff_y();
    let m_lam = mahler_1var_int(&lam)?;
    if p.deg_y() == 0 {
        return Ok(MeasureEstimate {
            value: m_lam,
            error_bound: 0.0,
            method: Method::Exact,
            evaluations: 0,
            levels: Vec::new(),
        });
    }
    let breaks = jensen_breakpoints(p, cfg.scan)?;
    let charts = local_charts(p);
    let r = integrate(
        |phi: f64| {
            let roots = match charts.iter().find_map(|c| c.roots(phi)) {
                Some(r) => r?,
                None => y_roots(p, phi)?,
            };
            Ok(roots.iter().map(|r| r.norm().ln().max(0.0)).sum())
        },
        &breaks,
        cfg.tol * TAU,
        cfg.max_panels,
    )?;
    Ok(MeasureEstimate {
        value: m_lam + r.value / TAU,
        error_bound: r.error / TAU,
        method: Method::Jensen1d,
        evaluations: r.evaluations,
        levels: vec![r.panels],
    })
}

/// Midpoint-rule torus average on an `n × n` grid.
fn torus_average(p: &BiPoly, n: usize) -> f64 {
    let h = TAU / n as f64;
    let mut total = 0.0;
    for j in 0..n {
        let coeffs = p.specialize_x(cis((j as f64 + 0.5) * h));
        let horner = |psi: f64| {
            let y = cis(psi);
            coeffs.iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * y + c)
        };
        let mut row = 0.0;
        for k in 0..n {
            let psi = (k as f64 + 0.5) * h;
            let mut v = horner(psi).norm();
            if v == 0.0 {
                v = horner(psi + 0.5 * h).norm();
            }
            row += v.ln();
        }
        total += row;
    }
    total / (n * n) as f64
}

/// Tensor-product average of `log|P|` over the torus at sizes `n/4, n/2, n`,
/// Richardson-extrapolated. The bound is the sum of the raw and the
/// extrapolated level differences.
pub fn mahler_quad2d(p: &BiPoly, n: usize) -> MeasureEstimate {
    let p = &p.strip_monomial();
    let n = n.max(16) / 4 * 4;
    let sizes = [n / 4, n / 2, n];
    let q: Vec<f64> = sizes.iter().map(|&s| torus_average(p, s)).collect();
    let r_half = q[1] + (q[1] - q[0]) / 3.0;
    let r_full = q[2] + (q[2] - q[1]) / 3.0;
    let bound = (q[2] - q[1]).abs() + (r_full - r_half).abs() + 1e-13 * (1.0 + r_full.abs());
    MeasureEstimate {
        value: r_full,
        error_bound: bound,
        method: Method::Quad2d,
        evaluations: sizes.iter().map(|s| s * s).sum(),
        levels: sizes.to_vec(),
    }
}
