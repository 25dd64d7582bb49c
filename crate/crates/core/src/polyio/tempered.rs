use num_complex::Complex;
use serde::Serialize;

use super::bipoly::BiPoly;
use super::intpoly::IntPoly;
use super::newton::{edge_polynomials, EdgeData};
use crate::roots::{aberth, cyclotomic, euler_phi, CxPoly};

/// Factorisation `p = content · z^k · ∏ Φ_n^{e_n} · remainder`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclotomicSplit {
    pub zero_power: usize,
    /// `(n, e_n)` in increasing `n`.
    pub factors: Vec<(u64, usize)>,
    /// Primitive cofactor with no cyclotomic factor left.
    pub remainder: IntPoly,
}

impl CyclotomicSplit {
    /// True when every nonzero root is a root of unity.
    pub fn is_cyclotomic(&self) -> bool {
        self.remainder.degree() == Some(0)
    }
}

fn unity_candidates(p: &IntPoly) -> Vec<u64> {
    let Ok(roots) = aberth(&CxPoly::<f64>::from_int(p), 1e-12) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for r in roots {
        // repeated roots are only accurate to about eps^(1/mult)
        if (r.norm() - 1.0).abs() > 1e-4 {
            continue;
        }
        let x = r.arg() / std::f64::consts::TAU;
        for n in 1..=360u64 {
            let k = (x * n as f64).round();
            if (x * n as f64 - k).abs() < 1e-4 {
                out.push(n);
                break;
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Splits off every cyclotomic factor of `p` by exact division.
pub fn cyclotomic_split(p: &IntPoly) -> CyclotomicSplit {
    let mut rest = p.primitive();
    let zero_power = rest.coeffs().iter().take_while(|c| num_traits::Zero::is_zero(*c)).count();
    rest = IntPoly::new(rest.coeffs()[zero_power..].to_vec());
    let mut found: Vec<(u64, usize)> = Vec::new();
    let strip = |rest: &mut IntPoly, found: &mut Vec<(u64, usize)>, n: u64| {
        let phi = cyclotomic(n);
        let mut e = 0;
        while rest.degree().unwrap_or(0) >= phi.degree().unwrap() {
            match rest.div_exact(&phi) {
                Some(q) => {
                    *rest = q;
                    e += 1;
                }
                None => break,
            }
        }
        if e > 0 {
            found.push((n, e));
        }
    };
    for n in unity_candidates(&rest) {
        strip(&mut rest, &mut found, n);
    }
    // exhaustive pass: φ(n) ≥ sqrt(n/2) bounds the orders that can still fit
    let d = rest.degree().unwrap_or(0) as u64;
    for n in 1..=(2 * d * d).max(2) {
        if euler_phi(n) <= d && found.iter().all(|f| f.0 != n) {
            strip(&mut rest, &mut found, n);
        }
    }
    found.sort_unstable();
    CyclotomicSplit {
        zero_power,
        factors: found,
        remainder: rest.primitive(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeVerdict {
    pub edge: EdgeData,
    pub cyclotomic: bool,
    pub orders: Vec<(u64, usize)>,
    /// A root that is not a root of unity, when one exists.
    pub witness: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TemperedReport {
    pub tempered: bool,
    pub edges: Vec<EdgeVerdict>,
}

/// Checks that every edge polynomial is a product of cyclotomic factors
/// (up to content and powers of `z`).
pub fn is_tempered(p: &BiPoly) -> TemperedReport {
    let edges: Vec<EdgeVerdict> = edge_polynomials(p)
        .into_iter()
        .map(|edge| {
            let split = cyclotomic_split(&edge.edge_poly);
            let witness = if split.is_cyclotomic() {
                None
            } else {
                aberth(&CxPoly::<f64>::from_int(&split.remainder), 1e-12)
                    .ok()
                    .and_then(|rs| {
                        rs.into_iter()
                            .max_by(|a: &Complex<f64>, b| {
                                (a.norm().ln().abs()).total_cmp(&b.norm().ln().abs())
                            })
                    })
                    .map(|z| (z.re, z.im))
            };
            EdgeVerdict {
                cyclotomic: split.is_cyclotomic(),
                orders: split.factors,
                witness,
                edge,
            }
        })
        .collect();
    TemperedReport {
        tempered: edges.iter().all(|e| e.cyclotomic),
        edges,
    }
}
