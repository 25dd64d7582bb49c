//! The set `S = {|x| = 1, |y| ≥ 1}` as arcs cut out of the traced sheets.

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::Serialize;

use super::trace::{critical_args, section_roots, trace_sections, BranchSheet};
use crate::curve::ToricPoint;
use crate::error::{Error, Result};
use crate::polyio::BiPoly;
use crate::roots::{find_roots, CxPoly, DEFAULT_TOL};
use crate::scalar::{chordal_ext, cis, wrap_angle, ExtComplex};

type C = Complex<f64>;
type Ext = ExtComplex<f64>;

/// Arc endpoints within this max-norm distance of a toric point are snapped
/// to it.
pub const ENDPOINT_MATCH: f64 = 1e-7;
/// Matching radius at singular toric points, where crossings are computed
/// from clustered roots.
pub const SINGULAR_MATCH: f64 = 1e-2;
/// Crossings are bisected in `φ` down to this width.
pub const CROSSING_TOL: f64 = 1e-13;
/// A local minimum of `|y| - 1` below this counts as tangency.
pub const GRAZE_TOL: f64 = 1e-7;

/// A piece of `S` on one sheet, ordered by increasing `φ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Arc {
    pub sheet: usize,
    pub phi: Vec<f64>,
    pub y: Vec<Ext>,
    /// Whole loop outside the unit circle; `phi` then ends one or more turns
    /// after it starts and the last node repeats the first.
    pub closed: bool,
    /// Indices into the toric point list.
    pub start: Option<usize>,
    pub end: Option<usize>,
}

impl Arc {
    pub fn x(&self, k: usize) -> C {
        cis(self.phi[k])
    }
}

#[derive(Clone, Copy, Debug)]
struct Event {
    phi: f64,
    y: Ext,
}

fn excess(y: Ext) -> f64 {
    match y {
        ExtComplex::Finite(z) => z.norm() - 1.0,
        ExtComplex::Infinity => 1e300,
    }
}

fn lerp(a: Ext, b: Ext, w: f64) -> Ext {
    match (a, b) {
        (ExtComplex::Finite(a), ExtComplex::Finite(b)) => ExtComplex::Finite(a + (b - a) * w),
        (ExtComplex::Infinity, b) if w > 0.5 => b,
        (a, ExtComplex::Infinity) if w < 0.5 => a,
        _ => ExtComplex::Infinity,
    }
}

/// Multiple roots on the unit circle above discriminant zeros.
#[derive(Clone, Debug)]
struct Collisions(Vec<(f64, C)>);

impl Collisions {
    fn new(p: &BiPoly) -> Result<Self> {
        let mut out = Vec::new();
        for phi in critical_args(p)? {
            let poly = CxPoly::new(p.specialize_x(cis(phi)));
            if poly.degree().unwrap_or(0) == 0 {
                continue;
            }
            for r in find_roots(&poly, DEFAULT_TOL)?.roots {
                if r.multiplicity > 1 && (r.value.norm() - 1.0).abs() < 1e-6 {
                    out.push((phi, r.value));
                }
            }
        }
        Ok(Collisions(out))
    }

    /// Moves an event onto a nearby collision, keeping the unwrapped `φ`.
    fn snap(&self, e: &mut Event) {
        let Some(y) = e.y.as_finite() else { return };
        for &(phi, yc) in &self.0 {
            let d = wrap_angle(phi - e.phi);
            if d.abs() < 1e-3 && (y - yc).norm() < 1e-2 {
                e.phi += d;
                e.y = ExtComplex::Finite(yc);
                return;
            }
        }
    }
}

struct SheetView<'a> {
    p: &'a BiPoly,
    sheet: &'a BranchSheet,
    /// Distinct nodes per period.
    m: usize,
    period: f64,
}

impl SheetView<'_> {
    /// Node `k` of the periodic extension.
    fn node(&self, k: isize) -> (f64, Ext) {
        let m = self.m as isize;
        let (q, r) = (k.div_euclid(m), k.rem_euclid(m) as usize);
        (self.sheet.phi[r] + self.period * q as f64, self.sheet.y[r])
    }

    /// Root at `φ` nearest (chordally) to `guess`.
    fn root_near(&self, phi: f64, guess: Ext) -> Result<Ext> {
        let roots = section_roots(self.p, phi)?;
        Ok(roots
            .into_iter()
            .min_by(|a, b| chordal_ext(*a, guess).total_cmp(&chordal_ext(*b, guess)))
            .expect("nonempty root set"))
    }

    fn bisect(&self, (mut pa, mut ya): (f64, Ext), (mut pb, mut yb): (f64, Ext)) -> Result<Event> {
        let sa = excess(ya) >= 0.0;
        while pb - pa > CROSSING_TOL {
            let pm = 0.5 * (pa + pb);
            if pm <= pa || pm >= pb {
                break;
            }
            let ym = self.root_near(pm, lerp(ya, yb, 0.5))?;
            if (excess(ym) >= 0.0) == sa {
                (pa, ya) = (pm, ym);
            } else {
                (pb, yb) = (pm, ym);
            }
        }
        let (phi, y) = if excess(ya).abs() <= excess(yb).abs() { (pa, ya) } else { (pb, yb) };
        Ok(Event { phi, y })
    }

    /// Golden-section search for the extremum of `±(|y| - 1)` between
    /// nodes `k - 1` and `k + 1`.
    fn extremum(&self, k: isize, sign: f64) -> Result<(f64, Ext)> {
        let (p0, y0) = self.node(k - 1);
        let (p1, y1) = self.node(k);
        let (p2, y2) = self.node(k + 1);
        let guess = |phi: f64| {
            if phi <= p1 {
                lerp(y0, y1, (phi - p0) / (p1 - p0))
            } else {
                lerp(y1, y2, (phi - p1) / (p2 - p1))
            }
        };
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (p0, p2);
        let f = |phi: f64| -> Result<(f64, Ext)> {
            let y = self.root_near(phi, guess(phi))?;
            Ok((sign * excess(y), y))
        };
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        while b - a > 1e-12 {
            if fc.0 < fd.0 {
                b = d;
                (d, fd) = (c, fc);
                c = b - r * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                (c, fc) = (d, fd);
                d = a + r * (b - a);
                fd = f(d)?;
            }
        }
        Ok(if fc.0 < fd.0 { (c, fc.1) } else { (d, fd.1) })
    }

    /// Crossings and tangencies, with `φ` in `[φ₀, φ₀ + period)`.
    fn events(&self, inside_grazes: bool) -> Result<Vec<Event>> {
        let m = self.m as isize;
        let s: Vec<f64> = (0..m).map(|k| excess(self.node(k).1)).collect();
        let sk = |k: isize| s[k.rem_euclid(m) as usize];

        // a stretch of nodes on the circle means a continuum of toric points
        let mut run = 0;
        for k in 0..2 * m {
            run = if sk(k).abs() < 1e-9 { run + 1 } else { 0 };
            if run >= 8 || run >= m {
                return Err(Error::ToricContinuum);
            }
        }

        let mut out = Vec::new();
        for k in 0..m {
            let (a, b) = (sk(k), sk(k + 1));
            if (a >= 0.0) != (b >= 0.0) {
                out.push(self.bisect(self.node(k), self.node(k + 1))?);
            }
        }
        for k in 0..m {
            let (prev, cur, next) = (sk(k - 1), sk(k), sk(k + 1));
            for (sign, outside) in [(1.0, true), (-1.0, false)] {
                let (prev, cur, next) = (sign * prev, sign * cur, sign * next);
                let local_min = cur >= 0.0 && prev >= 0.0 && next >= 0.0 && cur <= prev && cur <= next;
                if !local_min || cur >= 1e-2 || (!outside && !inside_grazes) {
                    continue;
                }
                let (phi, y) = self.extremum(k, sign)?;
                let v = sign * excess(y);
                if v < -1e-9 {
                    // a pair of crossings between grid nodes
                    let mid = (phi, y);
                    out.push(self.bisect(self.node(k - 1), mid)?);
                    out.push(self.bisect(mid, self.node(k + 1))?);
                } else if v <= GRAZE_TOL {
                    out.push(Event { phi, y });
                }
            }
        }
        let start = self.sheet.phi[0];
        for e in &mut out {
            e.phi = start + (e.phi - start).rem_euclid(self.period);
        }
        out.sort_by(|a, b| a.phi.total_cmp(&b.phi));
        Ok(out)
    }
}

fn views<'a>(p: &'a BiPoly, sheets: &'a [BranchSheet]) -> impl Iterator<Item = SheetView<'a>> {
    sheets.iter().map(move |sheet| SheetView {
        p,
        sheet,
        m: sheet.phi.len() - 1,
        period: TAU * sheet.turns() as f64,
    })
}

/// Points where some sheet meets `|y| = 1`: crossings and tangencies from
/// either side. Used to locate toric points when the resultant vanishes.
pub fn crossing_scan(p: &BiPoly, grid: usize) -> Result<Vec<(C, C)>> {
    let p = p.strip_monomial();
    let sheets = trace_sections(&p, grid)?;
    let coll = Collisions::new(&p)?;
    let mut out = Vec::new();
    for view in views(&p, &sheets) {
        for mut e in view.events(true)? {
            coll.snap(&mut e);
            if let Some(y) = e.y.as_finite() {
                out.push((cis(e.phi), y));
            }
        }
    }
    Ok(out)
}

fn match_point(toric: &[ToricPoint], e: &Event) -> Result<usize> {
    let x = cis(e.phi);
    let y = e.y.as_finite().unwrap_or(C::new(f64::INFINITY, 0.0));
    toric
        .iter()
        .enumerate()
        .map(|(i, t)| (i, t.distance(x, y)))
        .filter(|(i, d)| *d <= if toric[*i].singular { SINGULAR_MATCH } else { ENDPOINT_MATCH })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .ok_or(Error::UnmatchedEndpoint {
            x_re: x.re,
            x_im: x.im,
            y_re: y.re,
            y_im: y.im,
        })
}

/// Splits the sheets into arcs of `S`, oriented by increasing `φ`, with
/// endpoints snapped to the given toric points.
#[allow(non_snake_case)]
pub fn extract_S(sheets: &[BranchSheet], p: &BiPoly, toric: &[ToricPoint]) -> Result<Vec<Arc>> {
    let p = p.strip_monomial();
    let coll = Collisions::new(&p)?;
    let mut arcs = Vec::new();
    for (si, view) in views(&p, sheets).enumerate() {
        let mut events = view.events(false)?;
        for e in &mut events {
            coll.snap(e);
        }
        if events.is_empty() {
            if excess(view.sheet.y[0]) > 0.0 {
                arcs.push(Arc {
                    sheet: si,
                    phi: view.sheet.phi.clone(),
                    y: view.sheet.y.clone(),
                    closed: true,
                    start: None,
                    end: None,
                });
            }
            continue;
        }
        let m = view.m as isize;
        let first = view.sheet.phi[0];
        let n = events.len();
        for i in 0..n {
            let a = events[i];
            let mut b = events[(i + 1) % n];
            if i + 1 == n {
                b.phi += view.period;
            }
            if b.phi - a.phi < CROSSING_TOL {
                continue;
            }
            let k0 = ((a.phi - first) / view.period * m as f64).floor() as isize - 1;
            let mut phi = vec![a.phi];
            let mut y = vec![a.y];
            let mut k = k0.max(0);
            loop {
                let (ph, yy) = view.node(k);
                if ph >= b.phi - CROSSING_TOL {
                    break;
                }
                if ph > a.phi + CROSSING_TOL {
                    phi.push(ph);
                    y.push(yy);
                }
                k += 1;
            }
            if phi.len() == 1 {
                let mid = 0.5 * (a.phi + b.phi);
                phi.push(mid);
                y.push(view.root_near(mid, lerp(a.y, b.y, 0.5))?);
            }
            let deepest = y[1..].iter().map(|v| excess(*v)).max_by(|u, v| u.abs().total_cmp(&v.abs())).unwrap();
            if deepest <= 0.0 {
                continue;
            }
            let (ia, ib) = (match_point(toric, &a)?, match_point(toric, &b)?);
            let (ta, tb) = (&toric[ia], &toric[ib]);
            phi[0] = a.phi + wrap_angle(ta.mu.arg() - a.phi);
            y[0] = ExtComplex::Finite(ta.nu);
            phi.push(b.phi + wrap_angle(tb.mu.arg() - b.phi));
            y.push(ExtComplex::Finite(tb.nu));
            arcs.push(Arc {
                sheet: si,
                phi,
                y,
                closed: false,
                start: Some(ia),
                end: Some(ib),
            });
        }
    }
    Ok(arcs)
}
