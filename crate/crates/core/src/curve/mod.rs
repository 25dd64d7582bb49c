//! Conic parametrization, parametrization checks, toric points, facing
//! edges and admissibility.

mod conic;
mod facing;
mod rational;
mod toric;

use serde::Serialize;

pub use conic::{conic_poly, parametrize_deg2, validate_parametrization, ConicData, PARAM_TOL};
pub use facing::{
    edge_field, facing_edge_at, facing_edges, local_expansion, unity_exponent, Cyclo, FacingEdge, LocalExpansion,
    MAX_EXACT_ORDER,
};
pub use rational::{Factor, RationalFunction, ROOT_MERGE};
pub use toric::{finalize_points, toric_points, ToricPoint, MERGE};

use crate::error::{Error, Result};
use crate::polyio::{is_tempered, BiPoly};
use crate::relations::{pslq, Confidence};
use crate::zeta::FieldDescriptor;

/// Facing edge and field of a toric point, recomputed from `P`.
pub fn facing_edge(p: &BiPoly, pt: &ToricPoint) -> Result<(FacingEdge, FieldDescriptor)> {
    facing_edge_at(&p.strip_monomial(), pt.mu, pt.nu)
}

/// Coefficient bound for the commensurability search.
pub const COMMENSURATE_BOUND: i64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointVerdict {
    pub mu: (f64, f64),
    pub nu: (f64, f64),
    pub singular: bool,
    /// `(l, m)` with `μ^l = ν^m`, when found.
    pub relation: Option<(i64, i64)>,
    /// Single squarefree facing edge (always true at nonsingular points).
    pub well_behaved: bool,
    pub edge: Option<String>,
    pub field: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibleReport {
    pub tempered: bool,
    pub points: Vec<PointVerdict>,
    pub admissible: bool,
}

/// `(l, m)` with `μ^l = ν^m` and `|l|, |m| ≤ bound`.
pub fn commensurate(mu: num_complex::Complex<f64>, nu: num_complex::Complex<f64>, bound: i64) -> Option<(i64, i64)> {
    let tau = std::f64::consts::TAU;
    let (a, b) = (mu.arg() / tau, nu.arg() / tau);
    if a.abs() < 1e-12 {
        return Some((1, 0));
    }
    if b.abs() < 1e-12 {
        return Some((0, 1));
    }
    let rel = pslq(&[a, b, 1.0], bound, 15);
    if rel.confidence != Confidence::Detected {
        return None;
    }
    let (l, m) = (rel.coefficients[0], -rel.coefficients[1]);
    ((l, m) != (0, 0)).then_some((l, m))
}

/// Tempered, commensurate toric coordinates and well-behaved singular points.
pub fn is_admissible(p: &BiPoly) -> Result<AdmissibleReport> {
    let p = p.strip_monomial();
    let tempered = is_tempered(&p).tempered;
    let pts = match toric_points(&p) {
        Ok(pts) => pts,
        Err(Error::ToricContinuum) => {
            return Ok(AdmissibleReport {
                tempered,
                points: Vec::new(),
                admissible: false,
            })
        }
        Err(e) => return Err(e),
    };
    let points: Vec<PointVerdict> = pts
        .iter()
        .map(|pt| {
            let relation = commensurate(pt.mu, pt.nu, COMMENSURATE_BOUND);
            let (well_behaved, note) = if !pt.singular {
                (true, None)
            } else {
                match facing_edge(&p, pt) {
                    Ok((e, _)) if e.squarefree => (true, None),
                    Ok(_) => (false, Some("facing edge has repeated roots".to_string())),
                    Err(e) => (false, Some(e.to_string())),
                }
            };
            PointVerdict {
                mu: (pt.mu.re, pt.mu.im),
                nu: (pt.nu.re, pt.nu.im),
                singular: pt.singular,
                relation,
                well_behaved,
                edge: pt.facing_edge.as_ref().map(|e| e.text.clone()),
                field: pt.field.as_ref().map(FieldDescriptor::label),
                note,
            }
        })
        .collect();
    let admissible = tempered && points.iter().all(|v| v.relation.is_some() && v.well_behaved);
    Ok(AdmissibleReport {
        tempered,
        points,
        admissible,
    })
}
