use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::polyio::BiPoly;
use crate::roots::CxPoly;
use crate::scalar::{cis, ExtComplex};

type C = Complex<f64>;

/// Coefficients of `ax² + bxy + cy² + dx + ey + f` and the derived
/// discriminants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConicData {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
    /// `b² − 4ac`
    pub delta: i64,
    /// `e² − 4cf`
    pub delta_x: i64,
    /// `d² − 4af`
    pub delta_y: i64,
    /// Root of `cκ² + bκ + a` used to build `g`; zero in the parabolic case.
    pub kappa: C,
}

fn small(p: &BiPoly, l: u32, m: u32) -> Result<i64> {
    p.coeff(l, m)
        .to_i64()
        .ok_or_else(|| Error::Invalid(format!("coefficient of x^{l}y^{m} too large")))
}

impl ConicData {
    pub fn from_poly(p: &BiPoly) -> Result<Self> {
        if p.total_degree() != 2 {
            return Err(Error::Invalid(format!("expected total degree 2, got {}", p.total_degree())));
        }
        let [a, b, c, d, e, f] = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)].map(|(l, m)| small(p, l, m));
        let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
        Ok(ConicData {
            a,
            b,
            c,
            d,
            e,
            f,
            delta: b * b - 4 * a * c,
            delta_x: e * e - 4 * c * f,
            delta_y: d * d - 4 * a * f,
            kappa: C::new(0.0, 0.0),
        })
    }

    /// `ae² + fb² + cd² − bde − 4acf`.
    pub fn k(&self) -> i64 {
        let ConicData { a, b, c, d, e, f, .. } = *self;
        a * e * e + f * b * b + c * d * d - b * d * e - 4 * a * c * f
    }

    /// Determinant of the symmetric matrix of the quadratic form; it vanishes
    /// exactly when the conic splits into lines over ℂ.
    pub fn determinant(&self) -> i64 {
        -2 * self.k()
    }
}

/// Roots of `cκ² + bκ + a`: nonzero first, then the closed upper half
/// plane, then larger real part.
fn choose_kappa(a: i64, b: i64, c: i64) -> C {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    let mut cands: Vec<C> = if c == 0.0 {
        vec![C::new(-a / b, 0.0)]
    } else {
        let s = C::new(b * b - 4.0 * a * c, 0.0).sqrt();
        vec![(-b + s) / (2.0 * c), (-b - s) / (2.0 * c)]
    };
    cands.sort_by(|x, y| {
        let key = |z: &C| (z.norm() == 0.0, z.im < 0.0, -z.re);
        let (kx, ky) = (key(x), key(y));
        kx.0.cmp(&ky.0).then(kx.1.cmp(&ky.1)).then(kx.2.total_cmp(&ky.2))
    });
    cands[0]
}

fn quadratic(c0: C, c1: C, c2: C) -> CxPoly<f64> {
    CxPoly::new(vec![c0, c1, c2])
}

fn over_t(num: CxPoly<f64>, den: C) -> Result<RationalFunction> {
    RationalFunction::from_polys(&num, &CxPoly::new(vec![C::new(0.0, 0.0), den]))
}

/// Rational parametrization `t ↦ (f(t), g(t))` of an irreducible conic.
pub fn parametrize_deg2(p: &BiPoly) -> Result<(RationalFunction, RationalFunction, ConicData)> {
    let mut data = ConicData::from_poly(p)?;
    if data.determinant() == 0 {
        return Err(Error::Reducible(format!("{p} is a product of lines")));
    }
    let ConicData { a, b, c, d, e, f, delta, .. } = data;
    let r = |x: i64| C::new(x as f64, 0.0);
    if a == 0 && c == 0 {
        // bxy + dx + ey + f: solve for y
        let g = RationalFunction::from_polys(&CxPoly::new(vec![r(-f), r(-d)]), &CxPoly::new(vec![r(e), r(b)]))?;
        return Ok((RationalFunction::identity(), g, data));
    }
    if delta != 0 {
        let k = data.k();
        let kappa = choose_kappa(a, b, c);
        data.kappa = kappa;
        let fx = over_t(quadratic(r(c * k), r(2 * c * d - b * e), r(1)), r(delta))?;
        let gy = over_t(
            quadratic(r(a * k), r(2 * a * e - b * d) * kappa, kappa * kappa),
            r(delta) * kappa,
        )?;
        return Ok((fx, gy, data));
    }
    // parabolic case: P = c'(a'x + b'y)² + dx + ey + f
    let cp = {
        let g = a.gcd(&c);
        if a != 0 {
            g * a.signum()
        } else {
            g * c.signum()
        }
    };
    let ap = (a as f64 / cp as f64).sqrt();
    let mut bp = (c as f64 / cp as f64).sqrt();
    if b < 0 {
        bp = -bp;
    }
    let dp = cp as f64 * (ap * e as f64 - bp * d as f64);
    if dp.abs() < 1e-12 {
        return Err(Error::Reducible(format!("{p}: parabolic conic with vanishing Δ'")));
    }
    let (e_, d_, f_, c_) = (e as f64, d as f64, f as f64, cp as f64);
    let one = CxPoly::new(vec![C::new(1.0, 0.0)]);
    let num_f = CxPoly::from_real(&[bp * c_ * f_ / dp, e_ / dp, bp / dp]);
    let num_g = CxPoly::from_real(&[-ap * c_ * f_ / dp, -d_ / dp, -ap / dp]);
    Ok((
        RationalFunction::from_polys(&num_f, &one)?,
        RationalFunction::from_polys(&num_g, &one)?,
        data,
    ))
}

/// `max |P(f(t), g(t))| / Σ|c_lm||f|^l|g|^m` over `trials` pseudo-random
/// points of the annulus `1/2 ≤ |t| ≤ 2`, skipping points near poles.
pub fn validate_parametrization(p: &BiPoly, f: &RationalFunction, g: &RationalFunction, trials: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < trials && attempts < 20 * trials.max(1) {
        attempts += 1;
        let t = cis(rng.gen_range(0.0..std::f64::consts::TAU)) * rng.gen_range(0.5..2.0);
        let near_pole = f.poles().chain(g.poles()).any(|q| (q.root - t).norm() < 1e-3);
        let (ExtComplex::Finite(x), ExtComplex::Finite(y)) = (f.eval(t), g.eval(t)) else {
            continue;
        };
        if near_pole {
            continue;
        }
        let scale = p.abs_scale(x, y);
        if scale > 0.0 {
            worst = worst.max(p.eval(x, y).norm() / scale);
        }
        done += 1;
    }
    worst
}

/// Residual threshold for [`validate_parametrization`].
pub const PARAM_TOL: f64 = 1e-9;

/// Integer conic coefficients as a polynomial, for tests and the CLI.
pub fn conic_poly(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Result<BiPoly> {
    BiPoly::from_terms(
        [((2, 0), a), ((1, 1), b), ((0, 2), c), ((1, 0), d), ((0, 1), e), ((0, 0), f)]
            .into_iter()
            .map(|(k, v)| (k, BigInt::from(v))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyio::parse_poly;
    use crate::scalar::root_of_unity;

    fn param(text: &str) -> (RationalFunction, RationalFunction, ConicData) {
        parametrize_deg2(&parse_poly(text).unwrap()).unwrap()
    }

    fn close(h: &RationalFunction, k: &RationalFunction, t: C) -> bool {
        let (a, b) = (h.eval(t).as_finite().unwrap(), k.eval(t).as_finite().unwrap());
        (a - b).norm() < 1e-12 * (1.0 + a.norm())
    }

    #[test]
    fn parabolic_example() {
        let (f, g, data) = param("x^2-2xy+y^2-4y+4");
        assert_eq!((data.delta, data.kappa), (0, C::new(0.0, 0.0)));
        // (t+2)²/4 and (t²+4)/4; t → 2t gives (t+1)² and t²+1
        let want_f = RationalFunction::new(C::new(1.0, 0.0), [(C::new(-1.0, 0.0), 2)]);
        let want_g = RationalFunction::new(
            C::new(1.0, 0.0),
            [(C::new(0.0, 1.0), 1), (C::new(0.0, -1.0), 1)],
        );
        for t in [C::new(0.3, -0.2), C::new(-1.5, 2.0)] {
            assert!(close(&f.rescale(C::new(2.0, 0.0)), &want_f, t));
            assert!(close(&g.rescale(C::new(2.0, 0.0)), &want_g, t));
        }
    }

    #[test]
    fn hexagonal_example_after_rescaling() {
        let (f, g, data) = param("y^2+y(x+1)+x^2+x+1");
        let w = root_of_unity::<f64>(1, 3);
        assert!((data.kappa - w).norm() < 1e-15);
        assert_eq!((data.delta, data.k()), (-3, -2));
        let c = |re: f64| C::new(re, 0.0);
        let want_f = RationalFunction::new(c(1.0), [(c(-1.0 / 3.0), 1), (c(2.0 / 3.0), 1), (c(0.0), -1)]);
        let wb = w.conj();
        let want_g = RationalFunction::new(w, [(-wb / 3.0, 1), (2.0 * wb / 3.0, 1), (c(0.0), -1)]);
        for t in [C::new(0.7, 0.1), C::new(-0.4, -1.3)] {
            assert!(close(&f.rescale(c(-3.0)), &want_f, t));
            assert!(close(&g.rescale(c(-3.0)), &want_g, t));
        }
    }

    #[test]
    fn reducible_conics() {
        for text in ["x^2+y^2", "x^2-y^2", "(x+y+1)(x-2y+3)", "x^2+2xy+y^2+x+y"] {
            let err = parametrize_deg2(&parse_poly(text).unwrap()).unwrap_err();
            assert!(matches!(err, Error::Reducible(_)), "{text}: {err}");
        }
        assert!(matches!(parametrize_deg2(&parse_poly("x^3+y").unwrap()), Err(Error::Invalid(_))));
    }

    #[test]
    fn hyperbola_without_squares() {
        let p = parse_poly("3xy-x+2y+5").unwrap();
        let (f, g, _) = parametrize_deg2(&p).unwrap();
        assert!(validate_parametrization(&p, &f, &g, 50) < 1e-12);
    }

    #[test]
    fn discriminants_of_numerators() {
        // numerator discriminants are Δ·Δ_x and κ²·Δ·Δ_y (when quadratic)
        for text in ["-2y^2+2xy+6y+2x+1", "y^2+y(x+1)+x^2+x+1", "3x^2+xy-2y^2+5x-y+7"] {
            let (f, g, data) = param(text);
            let disc = |h: &RationalFunction| {
                let n = h.numerator();
                let cf = n.coeffs();
                (cf[1] * cf[1] - 4.0 * cf[0] * cf[2]) / (cf[2] * cf[2])
            };
            let dd = data.delta as f64;
            let want_f = dd * data.delta_x as f64;
            let want_g = data.kappa.powi(2) * dd * data.delta_y as f64 / (data.kappa * data.kappa).powi(2);
            assert!((disc(&f) - want_f).norm() < 1e-8 * (1.0 + want_f.abs()), "{text}");
            if g.numerator().coeffs().len() == 3 {
                assert!((disc(&g) - want_g).norm() < 1e-8 * (1.0 + want_g.norm()), "{text}");
            }
        }
    }

    #[test]
    fn supplied_parametrizations() {
        let i = C::new(0.0, 1.0);
        let one = C::new(1.0, 0.0);
        let boyd = parse_poly("x+y-4xy+x^2y+xy^2").unwrap();
        let f = RationalFunction::new(one, [(one, 1), (i, 1), (-one, -1), (-i, -1)]);
        let g = RationalFunction::new(one, [(one, 1), (-i, 1), (-one, -1), (i, -1)]);
        assert!(validate_parametrization(&boyd, &f, &g, 100) < PARAM_TOL);
        assert!(validate_parametrization(&boyd, &g, &f, 100) < PARAM_TOL);
        assert!(validate_parametrization(&boyd, &f, &f, 100) > 1e-3);
        let line = parse_poly("x-y").unwrap();
        let t = RationalFunction::identity();
        assert!(validate_parametrization(&line, &t, &t, 10) < PARAM_TOL);
    }
}
