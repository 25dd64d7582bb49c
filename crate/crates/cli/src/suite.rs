//! Regression table over the worked examples.

use std::f64::consts::PI;

use mahler::curve::{facing_edge_at, parametrize_deg2, toric_points, RationalFunction};
use mahler::dilog::bw;
use mahler::evaluate::{predict_basis, theorem2_with, EndpointKind, MeasureBreakdown, Theorem2Options};
use mahler::polyio::{parse_poly, IntPoly};
use mahler::relations::{verify_identity, BasisElement, IdentityConfig};
use mahler::scalar::root_of_unity;
use mahler::zeta::{FieldDescriptor, FieldKind};
use num_complex::Complex;
use serde::Serialize;

use crate::config::RunConfig;

type C = Complex<f64>;

const IDENTITY_TOL: f64 = 1e-9;
const WINDING_TOL: f64 = 1e-8;
const POINT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub pass: bool,
    /// Largest deviation among the checked quantities.
    pub error: f64,
    pub detail: String,
}

type Check = fn(&RunConfig) -> Result<(bool, f64, String), mahler::error::Error>;

pub const ROWS: [(&str, Check); 8] = [
    ("no-toric", no_toric),
    ("conic-windings", conic_windings),
    ("boyd", boyd),
    ("proved-conic", proved_conic),
    ("quintic-field", quintic_field),
    ("sqrt-minus-2", sqrt_minus_2),
    ("finale", finale),
    ("finale-initial-points", finale_initial_points),
];

fn d(k: i64, n: u64) -> f64 {
    bw(root_of_unity::<f64>(k, n))
}

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn opts(cfg: &RunConfig) -> Theorem2Options {
    Theorem2Options { check: true, grid: cfg.path_grid }
}

fn identity_cfg(cfg: &RunConfig) -> IdentityConfig {
    IdentityConfig {
        max_coeff: cfg.max_coeff,
        digits: cfg.digits,
        measure_tol: cfg.measure_tol,
    }
}

fn conic(text: &str, cfg: &RunConfig) -> mahler::error::Result<MeasureBreakdown> {
    let p = parse_poly(text)?;
    let (f, g, _) = parametrize_deg2(&p)?;
    theorem2_with(&p, &f, &g, &opts(cfg))
}

/// Largest distance from each expected `(point, winding)` to the computed
/// winding at that point; every computed term must belong to a listed point.
fn winding_error(b: &MeasureBreakdown, want: &[(C, f64)]) -> f64 {
    b.winding_terms
        .iter()
        .map(|w| {
            want.iter()
                .filter(|(a, _)| (w.point - a).norm() <= WINDING_TOL)
                .map(|(_, v)| (w.winding - v).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn no_toric(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let b = conic("-2y^2+2xy+6y+2x+1", cfg)?;
    let err = (b.total - (3.0 + 11f64.sqrt()).ln()).abs();
    Ok((err <= 1e-10, err, "m = log(3+sqrt(11))".into()))
}

fn conic_windings(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let b = conic("x^2-2xy+y^2-4y+4", cfg)?;
    let err = (PI * b.total - 3.75 * d(1, 3) - PI * 2f64.ln()).abs();
    let mut got: Vec<f64> = b.winding_terms.iter().map(|w| w.winding).collect();
    got.sort_by(f64::total_cmp);
    let want = [PI / 3.0, PI / 3.0, 4.0 * PI / 3.0];
    let werr = if got.len() == 3 {
        got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok((
        err <= IDENTITY_TOL && werr <= WINDING_TOL,
        err.max(werr),
        "pi m = (15/4) D(omega) + pi log 2; windings 4pi/3, pi/3, pi/3".into(),
    ))
}

fn boyd(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let p = parse_poly("x+y-4xy+x^2y+xy^2")?;
    let (one, i) = (c(1.0, 0.0), c(0.0, 1.0));
    let f = RationalFunction::new(one, [(one, 1), (i, 1), (-one, -1), (-i, -1)]);
    let g = RationalFunction::new(one, [(one, 1), (-i, 1), (-one, -1), (i, -1)]);
    let b = theorem2_with(&p, &f, &g, &opts(cfg))?;
    let err = (PI * b.total - 4.0 * d(1, 4)).abs();
    let q = PI / 4.0;
    let werr = winding_error(&b, &[(one, q), (i, 3.0 * q), (-one, -3.0 * q), (-i, -q)]);
    let logs = b.winding_sum().abs();
    Ok((
        err <= IDENTITY_TOL && werr <= WINDING_TOL && logs < 1e-9,
        err.max(werr).max(logs),
        "pi m = 4 D(i); windings pi/4, 3pi/4, -3pi/4, -pi/4; log terms cancel".into(),
    ))
}

fn proved_conic(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let text = "y^2+y(x+1)+x^2+x+1";
    let b = conic(text, cfg)?;
    let err = (PI * b.total - 2.0 * d(1, 4) + 0.75 * d(1, 3)).abs();
    let n = toric_points(&parse_poly(text)?)?.len();
    Ok((
        err <= IDENTITY_TOL && n == 8,
        err,
        format!("pi m = 2 D(i) - (3/4) D(omega); {n} toric points"),
    ))
}

fn quintic_field(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let p = parse_poly("y^2+y+x^2+x+1")?;
    let v = verify_identity(&p, &predict_basis(&p)?, &identity_cfg(cfg))?;
    let res = v.residual.unwrap_or(f64::INFINITY);
    let ok = v.coefficients == Some(vec![(3, 4), (5, 4), (-5, 6)]) && res < 1e-9;
    Ok((ok, res, v.text))
}

fn sqrt_minus_2(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let p = parse_poly("y^2+y(x^2+1)+x^4+x^3+x^2+x+1")?;
    let (edge, field) = facing_edge_at(&p, c(-1.0, 0.0), c(-1.0, 0.0))?;
    let basis = [
        BasisElement::Dilog { n: 3, k: 1 },
        BasisElement::Dilog { n: 4, k: 1 },
        BasisElement::Borel { field: FieldDescriptor::imaginary_quadratic(2)? },
    ];
    let v = verify_identity(&p, &basis, &identity_cfg(cfg))?;
    let res = 5.0 * v.residual.unwrap_or(f64::INFINITY);
    let ok = edge.integer == Some(IntPoly::from_i64(&[1, -2, 3]))
        && field.kind == FieldKind::ImaginaryQuadratic(2)
        && v.coefficients == Some(vec![(9, 5), (-4, 15), (1, 5)])
        && res < 1e-8;
    Ok((ok, res, format!("edge {} over {}; {}", edge.text, field.label(), v.text)))
}

fn finale_breakdown(cfg: &RunConfig) -> mahler::error::Result<MeasureBreakdown> {
    let p = parse_poly("(x(x+1)^5 - y(y+1)^5)/(x-y)")?;
    let one = c(1.0, 0.0);
    let sixth: Vec<(C, i32)> = (1..6).map(|k| (root_of_unity::<f64>(k, 6), -1)).collect();
    let mut zeros = sixth.clone();
    zeros.push((c(0.0, 0.0), 5));
    let f = RationalFunction::new(-one, zeros);
    let g = RationalFunction::new(-one, sixth);
    theorem2_with(&p, &f, &g, &opts(cfg))
}

fn finale(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let b = finale_breakdown(cfg)?;
    let want = 35.0 * (d(1, 7) + d(2, 7) + d(3, 7)) - 25.0 * (d(1, 5) + d(2, 5));
    let err = (6.0 * PI * b.total - want).abs();
    Ok((err <= 1e-8, err, "6 pi m = 35(D(xi7)+D(xi7^2)+D(xi7^3)) - 25(D(xi5)+D(xi5^2))".into()))
}

/// `ξ_n^k` label for a root of unity of order 5 or 7.
fn unity_label(t: C) -> String {
    for n in [5u64, 7] {
        for k in 1..n as i64 {
            if (t - root_of_unity::<f64>(k, n)).norm() <= POINT_TOL {
                return format!("xi{n}^{k}");
            }
        }
    }
    format!("{t}")
}

fn finale_initial_points(cfg: &RunConfig) -> Result<(bool, f64, String), mahler::error::Error> {
    let b = finale_breakdown(cfg)?;
    let mut initial: Vec<C> = Vec::new();
    for t in b.dilog_terms.iter().filter(|t| t.endpoint_kind == EndpointKind::Initial) {
        if let Some(u) = b.segments[t.j - 1].u.as_finite() {
            if !initial.iter().any(|v| (v - u).norm() <= POINT_TOL) {
                initial.push(u);
            }
        }
    }
    let listed: Vec<C> = [(1, 5), (2, 5), (-1, 7), (-2, 7), (-3, 7)]
        .iter()
        .map(|&(k, n)| root_of_unity::<f64>(k, n))
        .collect();
    let dist = |a: &[C], b: &[C]| {
        a.iter()
            .map(|p| b.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    let err = dist(&initial, &listed).max(dist(&listed, &initial));
    let names: Vec<String> = initial.iter().map(|&t| unity_label(t)).collect();
    Ok((
        initial.len() == 5 && err <= POINT_TOL,
        err,
        format!("derived {}; listed xi5^1, xi5^2, xi7^6, xi7^5, xi7^4", names.join(", ")),
    ))
}

/// Runs the selected rows concurrently; the table keeps the fixed order.
pub fn run(cfg: &RunConfig, only: &[String]) -> Vec<Row> {
    let selected: Vec<(&'static str, Check)> = ROWS
        .iter()
        .copied()
        .filter(|(name, _)| only.is_empty() || only.iter().any(|o| o == name))
        .collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = selected.iter().map(|&(_, check)| s.spawn(move || check(cfg))).collect();
        selected
            .iter()
            .zip(handles)
            .map(|(&(name, _), h)| match h.join() {
                Ok(Ok((pass, error, detail))) => Row { name, pass, error, detail },
                Ok(Err(e)) => Row { name, pass: false, error: f64::NAN, detail: e.to_string() },
                Err(_) => Row { name, pass: false, error: f64::NAN, detail: "panicked".into() },
            })
            .collect()
    })
}
