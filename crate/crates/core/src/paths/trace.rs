//! Continuation of the roots of `P(e^{iφ}, y)` around the circle.

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::unit_circle_args;
use crate::polyio::BiPoly;
use crate::roots::{projective_roots, resultant_y, Resultant, DEFAULT_TOL};
use crate::scalar::{chordal_ext, cis, wrap_angle, ExtComplex};

type C = Complex<f64>;
type Ext = ExtComplex<f64>;

/// Default number of φ nodes.
pub const DEFAULT_GRID: usize = 2048;
/// Maximum number of interval bisections when a match is ambiguous.
pub const MAX_DEPTH: u32 = 8;
/// A match is accepted when the second best assignment costs this many
/// times the best one.
pub const AMBIGUITY_RATIO: f64 = 3.0;

/// One root branch followed continuously in φ; it closes up after a whole
/// number of turns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchSheet {
    /// Increasing angles from `φ₀` to `φ₀ + 2π·turns`; the last node repeats
    /// the first.
    pub phi: Vec<f64>,
    pub y: Vec<Ext>,
    /// Angles (mod 2π) where the match was settled at a root collision.
    pub branch_points: Vec<f64>,
}

impl BranchSheet {
    pub fn turns(&self) -> usize {
        ((self.phi[self.phi.len() - 1] - self.phi[0]) / TAU).round() as usize
    }
}

/// `y`-roots of `P(e^{iφ}, y)` on the Riemann sphere.
pub fn section_roots(p: &BiPoly, phi: f64) -> Result<Vec<Ext>> {
    projective_roots(&p.specialize_x(cis(phi)), 1e-14, DEFAULT_TOL).map_err(|e| Error::Tracking {
        phi,
        msg: e.to_string(),
    })
}

/// Unit-circle arguments of the discriminant and of the leading coefficient.
pub fn critical_args(p: &BiPoly) -> Result<Vec<f64>> {
    let mut out = unit_circle_args(&p.leading_coeff_y(), 1e-6)?;
    if p.deg_y() > 1 {
        if let Resultant::Poly(r) = resultant_y(p, &p.partial_y())? {
            out.extend(unit_circle_args(&r, 1e-6)?);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Best and second best assignments of predictions to candidates.
fn assign(pred: &[Ext], cand: &[Ext], perms: &[Vec<usize>]) -> (Vec<usize>, f64, f64) {
    let n = pred.len();
    let cost = |i: usize, j: usize| chordal_ext(pred[i], cand[j]);
    if n > 7 {
        // greedy, nearest pairs first
        let mut pairs: Vec<(f64, usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (cost(i, j), i, j)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut perm = vec![usize::MAX; n];
        let mut taken = vec![false; n];
        let mut total = 0.0;
        for (c, i, j) in pairs {
            if perm[i] == usize::MAX && !taken[j] {
                perm[i] = j;
                taken[j] = true;
                total += c;
            }
        }
        // second best: cheapest single transposition
        let mut second = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                let alt = total - cost(a, perm[a]) - cost(b, perm[b]) + cost(a, perm[b]) + cost(b, perm[a]);
                second = second.min(alt);
            }
        }
        return (perm, total, second);
    }
    let mut best = (Vec::new(), f64::INFINITY);
    let mut second = f64::INFINITY;
    for perm in perms {
        let c: f64 = perm.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
        if c < best.1 {
            second = best.1;
            best = (perm.clone(), c);
        } else if c < second {
            second = c;
        }
    }
    (best.0, best.1, second)
}

fn predict(cur: &[Ext], vel: &[Option<C>], h: f64) -> Vec<Ext> {
    cur.iter()
        .zip(vel)
        .map(|(y, v)| match (y, v) {
            (ExtComplex::Finite(y), Some(v)) => ExtComplex::Finite(*y + *v * h),
            _ => *y,
        })
        .collect()
}

fn velocity(a: &[Ext], b: &[Ext], h: f64) -> Vec<Option<C>> {
    a.iter()
        .zip(b)
        .map(|(a, b)| match (a, b) {
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) if (b - a).norm() < 1e3 => Some((b - a) / h),
            _ => None,
        })
        .collect()
}

struct Tracker<'a> {
    p: &'a BiPoly,
    perms: Vec<Vec<usize>>,
    critical: Vec<f64>,
    nodes: Vec<(f64, Vec<Ext>)>,
    branch_points: Vec<f64>,
}

impl Tracker<'_> {
    /// Matches the ordered roots at `a` to the candidates at `b`, refining
    /// the interval while ambiguous. Pushes every node after `a` (up to and
    /// including `b`) and returns the velocities at `b` and the index map.
    fn advance(
        &mut self,
        (pa, ya, va): (f64, &[Ext], &[Option<C>]),
        (pb, cand): (f64, &[Ext]),
        depth: u32,
    ) -> Result<(Vec<Option<C>>, Vec<usize>)> {
        let h = pb - pa;
        let pred = predict(ya, va, h);
        let (perm, best, second) = assign(&pred, cand, &self.perms);
        let clear = second >= AMBIGUITY_RATIO * best || (best == 0.0 && second == 0.0);
        if !clear && depth < MAX_DEPTH {
            let pm = 0.5 * (pa + pb);
            let cm = section_roots(self.p, pm)?;
            let (vm, perm_m) = self.advance((pa, ya, va), (pm, &cm), depth + 1)?;
            let ym: Vec<Ext> = perm_m.iter().map(|&j| cm[j]).collect();
            return self.advance((pm, &ym, &vm), (pb, cand), depth + 1);
        }
        if !clear {
            let contested = cand
                .iter()
                .enumerate()
                .flat_map(|(i, a)| cand[i + 1..].iter().map(move |b| chordal_ext(*a, *b)))
                .fold(f64::INFINITY, f64::min);
            let near_critical = self
                .critical
                .iter()
                .any(|&c| wrap_angle(c - pa).abs() < 1e-2 || wrap_angle(c - pb).abs() < 1e-2);
            if contested >= 1e-6 && !near_critical {
                return Err(Error::Tracking {
                    phi: pa,
                    msg: format!("ambiguous root matching (cost ratio {:.3})", second / best),
                });
            }
            self.branch_points.push((0.5 * (pa + pb)).rem_euclid(TAU));
        }
        let yb: Vec<Ext> = perm.iter().map(|&j| cand[j]).collect();
        let vb = if clear { velocity(ya, &yb, h) } else { vec![None; ya.len()] };
        self.nodes.push((pb, yb));
        Ok((vb, perm))
    }
}

/// Follows the roots of `P(e^{iφ}, y)` over a half-offset grid of `grid`
/// nodes and groups them into sheets by monodromy.
pub fn trace_sections(p: &BiPoly, grid: usize) -> Result<Vec<BranchSheet>> {
    let p = &p.strip_monomial();
    let d = p.deg_y() as usize;
    if d == 0 {
        return Err(Error::Invalid("polynomial does not involve y".into()));
    }
    let n = grid.max(16);
    let phis: Vec<f64> = (0..n).map(|k| TAU * (k as f64 + 0.5) / n as f64).collect();
    let mut tr = Tracker {
        p,
        perms: if d <= 7 { permutations(d) } else { Vec::new() },
        critical: critical_args(p)?,
        nodes: Vec::new(),
        branch_points: Vec::new(),
    };
    let roots0 = section_roots(p, phis[0])?;
    tr.nodes.push((phis[0], roots0.clone()));
    let mut vel: Vec<Option<C>> = vec![None; d];
    let mut last_perm = Vec::new();
    for k in 1..=n {
        let (pa, ya) = tr.nodes.last().cloned().unwrap();
        let (pb, cand) = if k < n {
            (phis[k], section_roots(p, phis[k])?)
        } else {
            (phis[0] + TAU, roots0.clone())
        };
        let (v, perm) = tr.advance((pa, &ya, &vel), (pb, &cand), 0)?;
        vel = v;
        last_perm = perm;
    }
    // strand i ends where strand last_perm[i] starts
    let body = &tr.nodes[..tr.nodes.len() - 1];
    let mut seen = vec![false; d];
    let mut sheets = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut i = last_perm[start];
        while i != start {
            seen[i] = true;
            cycle.push(i);
            i = last_perm[i];
        }
        let mut phi = Vec::with_capacity(cycle.len() * body.len() + 1);
        let mut y = Vec::with_capacity(phi.capacity());
        for (turn, &strand) in cycle.iter().enumerate() {
            for (ph, ys) in body {
                phi.push(ph + TAU * turn as f64);
                y.push(ys[strand]);
            }
        }
        phi.push(body[0].0 + TAU * cycle.len() as f64);
        y.push(body[0].1[start]);
        sheets.push(BranchSheet {
            phi,
            y,
            branch_points: tr.branch_points.clone(),
        });
    }
    Ok(sheets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyio::parse_poly;

    #[test]
    fn constant_sheets() {
        let sheets = trace_sections(&parse_poly("y^2-4").unwrap(), 64).unwrap();
        assert_eq!(sheets.len(), 2);
        for s in &sheets {
            assert_eq!(s.turns(), 1);
            let y0 = s.y[0].as_finite().unwrap();
            assert!((y0.norm() - 2.0).abs() < 1e-14);
            assert!(s.y.iter().all(|y| (y.as_finite().unwrap() - y0).norm() < 1e-14));
        }
    }

    #[test]
    fn square_root_monodromy() {
        // y² = x: one sheet covering the circle twice
        let sheets = trace_sections(&parse_poly("y^2-x").unwrap(), 128).unwrap();
        assert_eq!(sheets.len(), 1);
        assert_eq!(sheets[0].turns(), 2);
        for (phi, y) in sheets[0].phi.iter().zip(&sheets[0].y) {
            let y = y.as_finite().unwrap();
            assert!((y * y - cis(*phi)).norm() < 1e-13);
        }
        // continuity along the sheet
        let ys: Vec<C> = sheets[0].y.iter().map(|y| y.as_finite().unwrap()).collect();
        assert!(ys.windows(2).all(|w| (w[1] - w[0]).norm() < 0.05));
    }

    #[test]
    fn first_example_has_an_outer_loop() {
        let sheets = trace_sections(&parse_poly("-2y^2+2xy+6y+2x+1").unwrap(), DEFAULT_GRID).unwrap();
        assert_eq!(sheets.len(), 2);
        let outside: Vec<bool> = sheets.iter().map(|s| s.y.iter().all(|y| y.as_finite().unwrap().norm() > 1.0)).collect();
        assert_eq!(outside.iter().filter(|b| **b).count(), 1);
    }

    #[test]
    fn every_node_reproduces_the_root_set() {
        let p = parse_poly("y^2+y(x+1)+x^2+x+1").unwrap();
        let sheets = trace_sections(&p, 256).unwrap();
        let total: usize = sheets.iter().map(|s| s.turns()).sum();
        assert_eq!(total, 2);
        for s in &sheets {
            for (phi, y) in s.phi.iter().zip(&s.y) {
                let y = y.as_finite().unwrap();
                let x = cis(*phi);
                assert!(p.eval(x, y).norm() < 1e-12 * p.abs_scale(x, y));
            }
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
    }
}
