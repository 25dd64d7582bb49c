use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::bipoly::BiPoly;
use super::intpoly::IntPoly;

/// Integer lattice point `(l, m)`.
pub type Lattice = (i64, i64);

/// One side of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeData {
    pub start: Lattice,
    pub end: Lattice,
    /// `(end - start) / length`, with coprime components.
    pub primitive_step: Lattice,
    /// Coefficients read counterclockwise, the first one read being the
    /// leading coefficient: `z^k` carries the coefficient at
    /// `end - k * primitive_step`.
    pub edge_poly: IntPoly,
}

impl EdgeData {
    /// Lattice length of the edge, equal to the degree of `edge_poly`.
    pub fn length(&self) -> i64 {
        let (dx, dy) = (self.end.0 - self.start.0, self.end.1 - self.start.1);
        dx.gcd(&dy)
    }

    /// Lattice points from `start` to `end` inclusive.
    pub fn lattice_points(&self) -> Vec<Lattice> {
        let n = self.length();
        (0..=n)
            .map(|k| (self.start.0 + k * self.primitive_step.0, self.start.1 + k * self.primitive_step.1))
            .collect()
    }

    /// Outward normal of a counterclockwise edge.
    pub fn outward_normal(&self) -> Lattice {
        (self.primitive_step.1, -self.primitive_step.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// Hull vertices counterclockwise from the lexicographically smallest.
    pub vertices: Vec<Lattice>,
    pub edges: Vec<EdgeData>,
}

fn cross(o: Lattice, a: Lattice, b: Lattice) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull by the monotone chain; collinear points are dropped.
pub fn convex_hull(points: &[Lattice]) -> Vec<Lattice> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Lattice> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Lattice> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn edge(p: &BiPoly, start: Lattice, end: Lattice) -> EdgeData {
    let (dx, dy) = (end.0 - start.0, end.1 - start.1);
    let n = dx.gcd(&dy);
    let step = (dx / n, dy / n);
    let coeffs: Vec<BigInt> = (0..=n)
        .map(|k| {
            let (l, m) = (end.0 - k * step.0, end.1 - k * step.1);
            p.coeff(l as u32, m as u32)
        })
        .collect();
    EdgeData {
        start,
        end,
        primitive_step: step,
        edge_poly: IntPoly::new(coeffs),
    }
}

/// Newton polygon of `p`. A segment hull yields two edges, one per
/// direction; a single monomial yields no edges.
pub fn newton_polygon(p: &BiPoly) -> NewtonPolygon {
    let support: Vec<Lattice> = p.support().map(|(l, m)| (l as i64, m as i64)).collect();
    let vertices = convex_hull(&support);
    let edges = match vertices.len() {
        0 | 1 => Vec::new(),
        2 => vec![edge(p, vertices[0], vertices[1]), edge(p, vertices[1], vertices[0])],
        n => (0..n).map(|i| edge(p, vertices[i], vertices[(i + 1) % n])).collect(),
    };
    NewtonPolygon { vertices, edges }
}

pub fn edge_polynomials(p: &BiPoly) -> Vec<EdgeData> {
    newton_polygon(p).edges
}

/// True when `q` lies in the closed polygon (segment or point for
/// degenerate hulls).
pub fn polygon_contains(vertices: &[Lattice], q: Lattice) -> bool {
    match vertices.len() {
        0 => false,
        1 => vertices[0] == q,
        2 => {
            let (a, b) = (vertices[0], vertices[1]);
            cross(a, b, q) == 0
                && q.0 >= a.0.min(b.0)
                && q.0 <= a.0.max(b.0)
                && q.1 >= a.1.min(b.1)
                && q.1 <= a.1.max(b.1)
        }
        n => (0..n).all(|i| cross(vertices[i], vertices[(i + 1) % n], q) >= 0),
    }
}
