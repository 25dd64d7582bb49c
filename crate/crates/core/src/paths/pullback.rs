//! Lifting arcs of `S` to the parameter line and winding angles there.

use num_complex::Complex;
use serde::Serialize;

use super::arcs::Arc;
use crate::curve::{RationalFunction, ToricPoint};
use crate::error::{Error, Result};
use crate::roots::{projective_roots, DEFAULT_TOL};
use crate::scalar::{chordal_ext, cis, wrap_angle, ExtComplex, Real};

type C = Complex<f64>;
type Ext = ExtComplex<f64>;

/// Largest chordal distance between `g(t)` and the arc's `y` for a lifted
/// sample.
pub const LIFT_TOL: f64 = 1e-6;
/// Within this distance of a singular toric point several branches of the
/// curve are close, and the lift is chosen by continuity.
pub const SINGULAR_RADIUS: f64 = 1e-2;
/// Rounds of sample densification in [`winding`].
pub const MAX_DENSIFY: usize = 20;

/// Oriented lift `γ` of an arc: `f(γ)` runs along the unit circle with
/// increasing argument.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSegment {
    pub samples: Vec<Ext>,
    /// `arg f` at each sample, unwrapped.
    pub phi: Vec<f64>,
    pub u: Ext,
    pub v: Ext,
    pub closed: bool,
    pub toric_start: Option<usize>,
    pub toric_end: Option<usize>,
    /// Limit of `arg(t - u)` as `t → u` along the path; for `u = ∞`, the
    /// limit of `arg t`.
    pub dir_u: f64,
    /// Same at the terminal point.
    pub dir_v: f64,
    pub f: RationalFunction,
    pub g: RationalFunction,
}

/// `t`-values with `f(t) = x`, including `∞`.
fn preimages(f: &RationalFunction, x: C, trim: f64) -> Result<Vec<Ext>> {
    let num = f.numerator();
    let den = f.denominator();
    let n = num.coeffs().len().max(den.coeffs().len());
    let coeff = |p: &crate::roots::CxPoly<f64>, k: usize| p.coeffs().get(k).copied().unwrap_or_default();
    let poly: Vec<C> = (0..n).map(|k| coeff(&num, k) - x * coeff(&den, k)).collect();
    projective_roots(&poly, trim, DEFAULT_TOL)
}

/// Prediction for the next lift from the last two, in the chart where the
/// last one is bounded.
fn extrapolate(prev: Option<Ext>, cur: Ext) -> Ext {
    let Some(prev) = prev else { return cur };
    match (prev, cur) {
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) if b.norm() <= 1.0 => ExtComplex::Finite(2.0 * b - a),
        (a, b) => {
            let (ExtComplex::Finite(ra), ExtComplex::Finite(rb)) = (a.recip(), b.recip()) else {
                return cur;
            };
            ExtComplex::Finite(2.0 * rb - ra).recip()
        }
    }
}

fn nearest(cands: &[Ext], target: Ext) -> Ext {
    *cands
        .iter()
        .min_by(|a, b| chordal_ext(**a, target).total_cmp(&chordal_ext(**b, target)))
        .expect("nonempty candidate list")
}

/// Logarithmic derivative `f'/f`.
fn log_derivative(f: &RationalFunction, t: C) -> C {
    f.factors.iter().map(|fa| fa.exp as f64 / (t - fa.root)).sum()
}

/// Direction data at an endpoint; `sign` is `+1` at the start, `-1` at the
/// end.
fn endpoint_direction(f: &RationalFunction, t: Ext, phi: f64, sign: f64) -> Result<f64> {
    let i = C::new(0.0, 1.0);
    // dt/dφ = i·f/f'
    let dir = match t {
        ExtComplex::Finite(t) => {
            let l = log_derivative(f, t);
            (l.norm() > 1e-12).then(|| (sign * i / l).arg())
        }
        ExtComplex::Infinity => {
            // s = 1/t, ds/dφ = i·F/F'(0) with F(s) = f(1/s)
            let s: C = f.factors.iter().map(|fa| fa.root * fa.exp as f64).sum();
            (f.degree() == 0 && s.norm() > 1e-12).then(|| -(sign * (-i) / s).arg())
        }
    };
    if let Some(d) = dir {
        return Ok(d);
    }
    // degenerate derivative: look a short way along the path
    let step = 1e-6;
    let x = cis(phi + sign * step);
    let cands = preimages(f, x, 1e-14)?;
    let near = nearest(&cands, t);
    Ok(match (t, near) {
        (ExtComplex::Finite(t), ExtComplex::Finite(s)) => (s - t).arg(),
        (ExtComplex::Infinity, ExtComplex::Finite(s)) => s.arg(),
        _ => 0.0,
    })
}

/// Lifts an arc through `t ↦ (f(t), g(t))`.
pub fn pullback(arc: &Arc, f: &RationalFunction, g: &RationalFunction, toric: &[ToricPoint]) -> Result<PathSegment> {
    let n = arc.phi.len();
    let singular: Vec<(C, C)> = toric.iter().filter(|t| t.singular).map(|t| (t.mu, t.nu)).collect();
    let near_singular = |x: C, y: Ext| {
        y.as_finite()
            .is_some_and(|y| singular.iter().any(|&(a, b)| (a - x).norm().max((b - y).norm()) < SINGULAR_RADIUS))
    };
    let is_end = |k: usize| !arc.closed && (k == 0 || k == n - 1);

    // candidates at each node, filtered by the y-coordinate
    let lifts = |k: usize| -> Result<Vec<(Ext, f64)>> {
        let x = arc.x(k);
        let trim = if is_end(k) { 1e-12 } else { 1e-14 };
        let cands = preimages(f, x, trim)?;
        let mut scored: Vec<(Ext, f64)> = cands.into_iter().map(|t| (t, chordal_ext(g.eval_ext(t), arc.y[k]))).collect();
        scored.sort_by(|a, b| a.1.total_cmp(&b.1));
        let tol = if near_singular(x, arc.y[k]) || is_end(k) { 1e-4 } else { LIFT_TOL };
        let kept: Vec<(Ext, f64)> = scored.iter().copied().filter(|c| c.1 < tol).collect();
        if kept.is_empty() {
            return Err(Error::Pullback {
                node: k,
                phi: arc.phi[k],
                msg: format!("no preimage with matching y (closest {:.3e})", scored.first().map_or(f64::NAN, |c| c.1)),
            });
        }
        Ok(kept)
    };

    let anchor = n / 2;
    let mut t = vec![ExtComplex::Infinity; n];
    t[anchor] = lifts(anchor)?[0].0;
    for (range, step) in [((anchor + 1..n).collect::<Vec<_>>(), -1isize), ((0..anchor).rev().collect(), 1)] {
        for k in range {
            let k1 = (k as isize + step) as usize;
            let k2 = k as isize + 2 * step;
            let prev = (0..n as isize).contains(&k2).then(|| t[k2 as usize]);
            let pred = extrapolate(prev, t[k1]);
            let cands: Vec<Ext> = lifts(k)?.into_iter().map(|c| c.0).collect();
            t[k] = nearest(&cands, pred);
        }
    }
    let snap_inf = |z: Ext| match z {
        ExtComplex::Finite(w) if w.norm() > 1e10 => ExtComplex::Infinity,
        other => other,
    };
    if arc.closed {
        let gap = chordal_ext(t[0], t[n - 1]);
        if gap > 1e-6 {
            return Err(Error::Pullback {
                node: n - 1,
                phi: arc.phi[n - 1],
                msg: format!("lift of a loop does not close (gap {gap:.3e})"),
            });
        }
        t[n - 1] = t[0];
    } else {
        t[0] = snap_inf(t[0]);
        t[n - 1] = snap_inf(t[n - 1]);
    }
    let (u, v) = (t[0], t[n - 1]);
    let (dir_u, dir_v) = if arc.closed {
        (0.0, 0.0)
    } else {
        (
            endpoint_direction(f, u, arc.phi[0], 1.0)?,
            endpoint_direction(f, v, arc.phi[n - 1], -1.0)?,
        )
    };
    Ok(PathSegment {
        samples: t,
        phi: arc.phi.clone(),
        u,
        v,
        closed: arc.closed,
        toric_start: arc.start,
        toric_end: arc.end,
        dir_u,
        dir_v,
        f: f.clone(),
        g: g.clone(),
    })
}

/// Result of summing wrapped argument increments over a sample chain.
#[derive(Clone, Debug, PartialEq)]
pub struct WindingSum<T> {
    pub total: T,
    /// Intervals `(k, k+1)` whose increment is too large to trust.
    pub coarse: Vec<usize>,
}

/// Accumulated argument of `t - a` along `samples`. Endpoint directions
/// replace `arg(t - a)` where an endpoint is `∞` or equals `a`. A step
/// through `∞` (both ends far out, nearly opposite) is taken as the
/// principal value, dropping the half-turn jump.
pub fn winding_sum<T: Real>(samples: &[ExtComplex<T>], a: Complex<T>, dirs: Option<(T, T)>, coarse_above: T) -> WindingSum<T> {
    let n = samples.len();
    let pi = T::PI();
    let far = T::lit(100.0) * (T::one() + a.norm());
    let at = |k: usize| -> Option<T> {
        match samples[k] {
            ExtComplex::Finite(t) => {
                let d = t - a;
                if d.norm() <= T::lit(1e-12) * (T::one() + a.norm()) {
                    None
                } else {
                    Some(d.arg())
                }
            }
            ExtComplex::Infinity => None,
        }
    };
    let angle = |k: usize| -> Option<T> {
        match (at(k), dirs) {
            (Some(v), _) => Some(v),
            (None, Some((du, _))) if k == 0 => Some(du),
            (None, Some((_, dv))) if k == n - 1 => Some(dv),
            _ => None,
        }
    };
    let big = |k: usize| match samples[k] {
        ExtComplex::Finite(t) => t.norm() > far,
        ExtComplex::Infinity => true,
    };
    let mut total = T::zero();
    let mut coarse = Vec::new();
    let mut last: Option<(usize, T)> = angle(0).map(|v| (0, v));
    for k in 1..n {
        let Some(cur) = angle(k) else { continue };
        if let Some((j, prev)) = last {
            let mut inc = wrap_angle(cur - prev);
            let opposite = match (samples[j], samples[k]) {
                (ExtComplex::Finite(p), ExtComplex::Finite(q)) => wrap_angle(q.arg() - p.arg()).abs() > pi / T::lit(2.0),
                _ => true,
            };
            let through_infinity = big(j) && big(k) && inc.abs() > pi / T::lit(2.0) && opposite;
            if through_infinity {
                inc = wrap_angle(inc + pi);
            } else if inc.abs() > coarse_above {
                coarse.push(j);
            }
            total = total + inc;
        }
        last = Some((k, cur));
    }
    WindingSum { total, coarse }
}

/// Winding angle of the path around `a`, with samples added wherever an
/// increment exceeds `π/4`.
pub fn winding(seg: &PathSegment, a: C) -> Result<f64> {
    let mut samples = seg.samples.clone();
    let mut phi = seg.phi.clone();
    let dirs = (!seg.closed).then_some((seg.dir_u, seg.dir_v));
    let limit = std::f64::consts::FRAC_PI_4;
    let mut sum = winding_sum(&samples, a, dirs, limit);
    for _ in 0..MAX_DENSIFY {
        if sum.coarse.is_empty() {
            break;
        }
        let mut new_s = Vec::with_capacity(samples.len() + sum.coarse.len());
        let mut new_p = Vec::with_capacity(new_s.capacity());
        let mut c = sum.coarse.iter().peekable();
        for k in 0..samples.len() {
            new_s.push(samples[k]);
            new_p.push(phi[k]);
            if c.peek() == Some(&&k) {
                c.next();
                let pm = 0.5 * (phi[k] + phi[k + 1]);
                let cands = preimages(&seg.f, cis(pm), 1e-14)?;
                let best = *cands
                    .iter()
                    .min_by(|x, y| {
                        let cost = |t: &Ext| chordal_ext(*t, samples[k]) + chordal_ext(*t, samples[k + 1]);
                        cost(x).total_cmp(&cost(y))
                    })
                    .expect("nonempty preimage set");
                new_s.push(best);
                new_p.push(pm);
            }
        }
        samples = new_s;
        phi = new_p;
        sum = winding_sum(&samples, a, dirs, limit);
    }
    Ok(sum.total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg_from(samples: Vec<C>) -> Vec<Ext> {
        samples.into_iter().map(ExtComplex::Finite).collect()
    }

    #[test]
    fn circle_winds_once() {
        let pts: Vec<C> = (0..=64).map(|k| cis(std::f64::consts::TAU * k as f64 / 64.0)).collect();
        let s = winding_sum(&seg_from(pts), C::new(0.2, 0.1), None, 1.0);
        assert!((s.total - std::f64::consts::TAU).abs() < 1e-12);
        assert!(s.coarse.is_empty());
    }

    #[test]
    fn ray_to_infinity() {
        // positive multiples of -1+i, from ∞ to 0
        let dir = C::new(-1.0, 1.0);
        let mut samples = vec![ExtComplex::Infinity];
        samples.extend((0..200).map(|k| ExtComplex::Finite(dir * 10f64.powf(3.0 - k as f64 * 0.03))));
        samples.push(ExtComplex::Finite(C::new(0.0, 0.0)));
        let ray = dir.arg();
        let dirs = Some((ray, ray));
        let pi = std::f64::consts::PI;
        for (a, want) in [(C::new(1.0, 0.0), pi / 4.0), (C::new(0.0, 1.0), 3.0 * pi / 4.0), (C::new(-1.0, 0.0), -3.0 * pi / 4.0), (C::new(0.0, -1.0), -pi / 4.0)] {
            let s = winding_sum(&samples, a, dirs, 1.0);
            assert!((s.total - want).abs() < 1e-12, "{a}: {}", s.total);
        }
    }

    #[test]
    fn coarse_steps_are_reported() {
        let s = winding_sum(&seg_from(vec![C::new(1.0, 0.0), C::new(-1.0, 0.1)]), C::new(0.0, 0.0), None, 0.5);
        assert_eq!(s.coarse, vec![0]);
    }

    #[test]
    fn single_precision_kernel() {
        let pts: Vec<Complex<f32>> = (0..=32).map(|k| cis(std::f32::consts::TAU * k as f32 / 32.0)).collect();
        let s = winding_sum(&pts.into_iter().map(ExtComplex::Finite).collect::<Vec<_>>(), Complex::new(0.0f32, 0.0), None, 1.0);
        assert!((s.total - std::f32::consts::TAU).abs() < 1e-5);
    }
}
