//! Local expansion `P(x+μ, y+ν)` at a toric point and the edge of its
//! Newton polygon that faces the origin.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyio::{convex_hull, BiPoly, IntPoly, Lattice};
use crate::roots::{cyclotomic, find_roots, is_root_of_unity, CxPoly, DEFAULT_TOL};
use crate::scalar::root_of_unity;
use crate::zeta::FieldDescriptor;

type C = Complex<f64>;

/// Largest root-of-unity order handled with exact arithmetic.
pub const MAX_EXACT_ORDER: u64 = 120;

/// Numeric coefficients below this fraction of their magnitude scale are
/// treated as zero.
pub const CLEANUP: f64 = 1e-9;

/// An element of `ℤ[ζ_n]`, reduced modulo `Φ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cyclo {
    pub n: u64,
    /// Coefficients of `1, ζ, ζ², …`, fewer than `φ(n)` of them.
    pub coeffs: IntPoly,
}

impl Cyclo {
    fn reduce(n: u64, cyclic: Vec<BigInt>) -> Self {
        let (_, r) = IntPoly::new(cyclic).div_rem(&cyclotomic(n)).expect("cyclotomic polynomials are monic");
        Cyclo { n, coeffs: r }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.coeffs.degree() {
            None => Some(BigInt::zero()),
            Some(0) => Some(self.coeffs.coeff(0)),
            _ => None,
        }
    }

    pub fn value(&self) -> C {
        self.coeffs.eval(root_of_unity::<f64>(1, self.n))
    }

    fn text(&self) -> String {
        match self.as_integer() {
            Some(c) => c.to_string(),
            None => format!("({})", self.coeffs.to_string().replace('z', &format!("zeta_{}", self.n))),
        }
    }
}

/// Taylor coefficients `Q_ij` of `P(x+μ, y+ν) = Σ Q_ij x^i y^j`.
#[derive(Clone, Debug)]
pub enum LocalExpansion {
    /// `μ = ζ_n^a`, `ν = ζ_n^b`.
    Exact { n: u64, terms: BTreeMap<(u32, u32), Cyclo> },
    Numeric(BTreeMap<(u32, u32), C>),
}

impl LocalExpansion {
    pub fn support(&self) -> Vec<Lattice> {
        match self {
            LocalExpansion::Exact { terms, .. } => terms.keys().map(|&(i, j)| (i as i64, j as i64)).collect(),
            LocalExpansion::Numeric(t) => t.keys().map(|&(i, j)| (i as i64, j as i64)).collect(),
        }
    }

    pub fn value(&self, i: u32, j: u32) -> C {
        match self {
            LocalExpansion::Exact { terms, .. } => terms.get(&(i, j)).map_or(C::new(0.0, 0.0), Cyclo::value),
            LocalExpansion::Numeric(t) => t.get(&(i, j)).copied().unwrap_or_default(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LocalExpansion::Exact { .. })
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `(k, n)` with `z = e^{2πik/n}`, `n ≤ max_order`, within `tol`.
pub fn unity_exponent(z: C, max_order: u64, tol: f64) -> Option<(u64, u64)> {
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let frac = (z.arg() / std::f64::consts::TAU).rem_euclid(1.0);
    for n in 1..=max_order {
        let k = (frac * n as f64).round() as u64 % n;
        if (root_of_unity::<f64>(k as i64, n) - z).norm() < tol {
            let g = k.gcd(&n).max(1);
            return Some((k / g, n / g));
        }
    }
    None
}

/// Expands `P(x+μ, y+ν)`, exactly over `ℤ[ζ_n]` when both coordinates are
/// roots of unity of order at most [`MAX_EXACT_ORDER`].
pub fn local_expansion(p: &BiPoly, mu: C, nu: C) -> LocalExpansion {
    let exact = (unity_exponent(mu, MAX_EXACT_ORDER, 1e-12), unity_exponent(nu, MAX_EXACT_ORDER, 1e-12));
    if let (Some((a, na)), Some((b, nb))) = exact {
        let n = na.lcm(&nb);
        let (a, b) = (a * (n / na), b * (n / nb));
        if n <= MAX_EXACT_ORDER {
            let mut acc: BTreeMap<(u32, u32), Vec<BigInt>> = BTreeMap::new();
            for (&(l, m), c) in p.terms() {
                for i in 0..=l {
                    for j in 0..=m {
                        let w = c * binomial(l, i) * binomial(m, j);
                        let e = ((a * (l - i) as u64 + b * (m - j) as u64) % n) as usize;
                        acc.entry((i, j)).or_insert_with(|| vec![BigInt::zero(); n as usize])[e] += w;
                    }
                }
            }
            let terms = acc
                .into_iter()
                .map(|(k, v)| (k, Cyclo::reduce(n, v)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            return LocalExpansion::Exact { n, terms };
        }
    }
    let mut acc: BTreeMap<(u32, u32), (C, f64)> = BTreeMap::new();
    for (&(l, m), c) in p.terms() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        for i in 0..=l {
            for j in 0..=m {
                let w = c * binomial(l, i).to_f64().unwrap() * binomial(m, j).to_f64().unwrap();
                let e = acc.entry((i, j)).or_default();
                e.0 += mu.powu(l - i) * nu.powu(m - j) * w;
                e.1 += w.abs();
            }
        }
    }
    LocalExpansion::Numeric(
        acc.into_iter()
            .filter(|(_, (v, s))| v.norm() > CLEANUP * s.max(1.0))
            .map(|(k, (v, _))| (k, v))
            .collect(),
    )
}

/// The edge of the local Newton polygon facing the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacingEdge {
    pub start: Lattice,
    pub end: Lattice,
    /// `z^k` carries the coefficient at `start + k·step`.
    pub coeffs: Vec<C>,
    /// Present when every coefficient is a rational integer; the sign is
    /// chosen to make the leading coefficient positive.
    pub integer: Option<IntPoly>,
    pub text: String,
    pub squarefree: bool,
    pub roots: Vec<C>,
}

impl FacingEdge {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Edges of the hull of `support` whose supporting line separates it from
/// the origin, as `(start, end)` in counterclockwise order.
pub fn facing_edges(support: &[Lattice]) -> Vec<(Lattice, Lattice)> {
    let hull = convex_hull(support);
    let n = hull.len();
    if n < 2 {
        return Vec::new();
    }
    let pairs: Vec<(Lattice, Lattice)> = if n == 2 {
        vec![(hull[0], hull[1]), (hull[1], hull[0])]
    } else {
        (0..n).map(|i| (hull[i], hull[(i + 1) % n])).collect()
    };
    pairs
        .into_iter()
        .filter(|&(s, e)| {
            let normal = (e.1 - s.1, -(e.0 - s.0));
            normal.0 * s.0 + normal.1 * s.1 < 0
        })
        .collect()
}

fn edge_from(exp: &LocalExpansion, start: Lattice, end: Lattice) -> Result<FacingEdge> {
    let (dx, dy) = (end.0 - start.0, end.1 - start.1);
    let len = dx.gcd(&dy);
    let step = (dx / len, dy / len);
    let points: Vec<(u32, u32)> = (0..=len)
        .map(|k| ((start.0 + k * step.0) as u32, (start.1 + k * step.1) as u32))
        .collect();
    let coeffs: Vec<C> = points.iter().map(|&(i, j)| exp.value(i, j)).collect();
    let (integer, text) = match exp {
        LocalExpansion::Exact { terms, n } => {
            let zero = Cyclo { n: *n, coeffs: IntPoly::zero() };
            let cy: Vec<&Cyclo> = points.iter().map(|k| terms.get(k).unwrap_or(&zero)).collect();
            let ints: Option<Vec<BigInt>> = cy.iter().map(|c| c.as_integer()).collect();
            let text = cy
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| match k {
                    0 => c.text(),
                    1 => format!("{}*z", c.text()),
                    _ => format!("{}*z^{k}", c.text()),
                })
                .collect::<Vec<_>>()
                .join(" + ");
            match ints {
                Some(v) => {
                    let mut ip = IntPoly::new(v);
                    if ip.leading() < BigInt::from(0) {
                        ip = ip.scale(&BigInt::from(-1));
                    }
                    (Some(ip.clone()), ip.to_string())
                }
                None => (None, text),
            }
        }
        LocalExpansion::Numeric(_) => {
            let text = coeffs
                .iter()
                .enumerate()
                .rev()
                .map(|(k, c)| format!("({:.12}{:+.12}i)*z^{k}", c.re, c.im))
                .collect::<Vec<_>>()
                .join(" + ");
            (None, text)
        }
    };
    let poly = CxPoly::new(coeffs.clone());
    let (roots, squarefree) = match &integer {
        Some(ip) => {
            let sf = ip.squarefree().degree() == ip.degree();
            (crate::roots::aberth(&CxPoly::<f64>::from_int(ip), DEFAULT_TOL)?, sf)
        }
        None => {
            let rs = find_roots(&poly, DEFAULT_TOL)?;
            let sf = rs.roots.iter().all(|r| r.multiplicity == 1);
            (rs.values(), sf)
        }
    };
    Ok(FacingEdge {
        start,
        end,
        coeffs,
        integer,
        text,
        squarefree,
        roots,
    })
}

fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        if n % p == 0 {
            out *= p;
            n /= p;
        }
        p += 1;
    }
    out * n
}

/// Field generated by `μ`, `ν` and the roots of the facing edge.
pub fn edge_field(mu: C, nu: C, edge: &FacingEdge) -> FieldDescriptor {
    let base = match (unity_exponent(mu, MAX_EXACT_ORDER, 1e-10), unity_exponent(nu, MAX_EXACT_ORDER, 1e-10)) {
        (Some((_, a)), Some((_, b))) => Some(a.lcm(&b)),
        _ => None,
    };
    let general = |text: String| {
        let pairs = edge.roots.iter().filter(|r| r.im > 1e-9).count() as u32;
        let reals = edge.roots.iter().filter(|r| r.im.abs() <= 1e-9).count() as u32;
        FieldDescriptor::general(text, pairs, reals)
    };
    let Some(base) = base else {
        return general(format!("Q(mu, nu, roots of {})", edge.text));
    };
    if edge.degree() == 1 {
        return FieldDescriptor::cyclotomic(base);
    }
    let orders: Option<Vec<u64>> = edge.roots.iter().map(|&r| is_root_of_unity(r, MAX_EXACT_ORDER)).collect();
    if let Some(orders) = orders {
        return FieldDescriptor::cyclotomic(orders.into_iter().fold(base, |acc, n| acc.lcm(&n)));
    }
    let base_field = FieldDescriptor::cyclotomic(base);
    if let Some(ip) = edge.integer.as_ref().filter(|ip| ip.degree() == Some(2)) {
        let [c, b, a] = [0, 1, 2].map(|k| ip.coeff(k));
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        let d = disc.abs().to_u64().map(squarefree_part);
        if let Some(d) = d {
            if disc.is_negative() {
                let quad = match d {
                    1 => FieldDescriptor::cyclotomic(4),
                    3 => FieldDescriptor::cyclotomic(3),
                    _ => FieldDescriptor::imaginary_quadratic(d).expect("squarefree"),
                };
                if base_field == quad || base <= 2 {
                    return quad;
                }
            } else if d == 1 {
                return base_field;
            }
        }
    }
    general(format!("{} over {}", edge.text, base_field.label()))
}

/// Facing edge and attached field at a point `(μ, ν)` of the curve.
pub fn facing_edge_at(p: &BiPoly, mu: C, nu: C) -> Result<(FacingEdge, FieldDescriptor)> {
    let exp = local_expansion(p, mu, nu);
    let support = exp.support();
    if support.contains(&(0, 0)) {
        return Err(Error::Invalid(format!("({mu}, {nu}) is not on the curve")));
    }
    let edges = facing_edges(&support);
    match edges.as_slice() {
        [(s, e)] => {
            let edge = edge_from(&exp, *s, *e)?;
            let field = edge_field(mu, nu, &edge);
            Ok((edge, field))
        }
        [] => Err(Error::Invalid("no edge faces the origin".into())),
        many => Err(Error::MultipleFacingEdges(many.len())),
    }
}
