use num_complex::Complex;
use serde::Serialize;

use super::cxpoly::CxPoly;
use crate::error::{Error, Result};
use crate::scalar::{ExtComplex, Real};

pub const MAX_SWEEPS: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-12;

/// A root with its multiplicity and relative residual `|p(z)| / Σ|a_k||z|^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root<T> {
    pub value: Complex<T>,
    pub multiplicity: usize,
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet<T> {
    pub roots: Vec<Root<T>>,
}

impl<T: Real> RootSet<T> {
    /// Root values repeated by multiplicity.
    pub fn values(&self) -> Vec<Complex<T>> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_residual(&self) -> T {
        self.roots.iter().fold(T::zero(), |m, r| m.max(r.residual))
    }
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Upper bound on root moduli: the positive root of
/// `|a_n| x^n = Σ_{k<n} |a_k| x^k`.
pub fn cauchy_bound<T: Real>(p: &CxPoly<T>) -> T {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return T::zero();
    }
    let lc = p.leading().norm();
    let a: Vec<T> = p.coeffs()[..n].iter().map(|c| c.norm() / lc).collect();
    // h(x) = x^n - Σ a_k x^k is increasing past its positive root
    let h = |x: T| {
        let mut v = T::one();
        for k in (0..n).rev() {
            v = v * x - a[k];
        }
        v
    };
    let mut hi = T::one() + a.iter().fold(T::zero(), |m, &c| m.max(c));
    if a.iter().all(|c| *c == T::zero()) {
        return T::zero();
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if h(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= T::eps() * hi {
            break;
        }
    }
    hi
}

/// Newton correction `p(z)/p'(z)` and relative residual, evaluated through
/// the reversed polynomial when `|z| > 1` to avoid overflow and cancellation.
fn newton_step<T: Real>(p: &CxPoly<T>, rev: &CxPoly<T>, z: Complex<T>) -> (Complex<T>, T, bool) {
    let n = T::from_usize(p.degree().unwrap()).unwrap();
    let four_n_eps = T::lit(4.0) * n * T::eps();
    if z.norm() <= T::one() {
        let (v, dv) = p.eval_with_derivative(z);
        let scale = p.abs_scale(z.norm());
        let res = if scale > T::zero() { v.norm() / scale } else { T::zero() };
        let small = v.norm() <= four_n_eps * scale;
        (v / dv, res, small)
    } else {
        let w = z.inv();
        let (q, dq) = rev.eval_with_derivative(w);
        let scale = rev.abs_scale(w.norm());
        let res = if scale > T::zero() { q.norm() / scale } else { T::zero() };
        let small = q.norm() <= four_n_eps * scale;
        // p'/p = w (n - w q'/q)
        let ratio = w * (Complex::new(n, T::zero()) - w * dq / q);
        (ratio.inv(), res, small)
    }
}

/// Relative residual of `p` at `z`.
pub fn relative_residual<T: Real>(p: &CxPoly<T>, z: Complex<T>) -> T {
    let rev = p.reversed();
    newton_step(p, &rev, z).1
}

/// Raw Aberth–Ehrlich iteration: all `deg p` roots, no clustering.
///
/// Roots at the origin (trailing zero coefficients) are returned exactly.
pub fn aberth<T: Real>(p: &CxPoly<T>, tol: T) -> Result<Vec<Complex<T>>> {
    let Some(deg) = p.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    let zeros = p.coeffs().iter().take_while(|c| c.norm_sqr() == T::zero()).count();
    let mut out = vec![czero::<T>(); zeros];
    let q = CxPoly::new(p.coeffs()[zeros..].to_vec());
    let n = deg - zeros;
    match n {
        0 => return Ok(out),
        1 => {
            out.push(-q.coeffs()[0] / q.coeffs()[1]);
            return Ok(out);
        }
        _ => {}
    }
    let rev = q.reversed();
    let radius = cauchy_bound(&q);
    let nf = T::from_usize(n).unwrap();
    let offset = T::lit(0.4);
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let kf = T::from_usize(k).unwrap();
            let theta = T::TAU() * kf / nf + offset;
            // slight spiral so no two starting points share a modulus
            let r = radius * (T::one() + T::lit(0.01) * kf / nf);
            Complex::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    let mut done = vec![false; n];
    let mut residuals = vec![T::infinity(); n];
    for _sweep in 0..MAX_SWEEPS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (corr, res, small) = newton_step(&q, &rev, z[i]);
            residuals[i] = res;
            if small || !corr.re.is_finite() || !corr.im.is_finite() {
                done[i] = small;
                if !small {
                    // derivative vanished: nudge off the critical point
                    z[i] = z[i] + Complex::new(tol.sqrt(), tol.sqrt()) * (T::one() + z[i].norm());
                }
                continue;
            }
            let mut s = czero::<T>();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm_sqr() > T::zero() {
                        s = s + d.inv();
                    }
                }
            }
            let w = corr / (Complex::new(T::one(), T::zero()) - corr * s);
            z[i] = z[i] - w;
            if w.norm() <= tol * z[i].norm() || w.norm() <= T::min_positive_value() {
                done[i] = true;
                residuals[i] = newton_step(&q, &rev, z[i]).1;
            }
        }
        if done.iter().all(|&d| d) {
            out.extend(z);
            return Ok(out);
        }
    }
    let max_residual = residuals.iter().fold(T::zero(), |m, &r| m.max(r));
    Err(Error::NoConvergence {
        iterations: MAX_SWEEPS,
        max_residual: max_residual.to_f64().unwrap_or(f64::NAN),
        best: z
            .iter()
            .map(|c| (c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
            .collect(),
    })
}

/// Roots with multiplicities. Approximations are merged into one root of
/// multiplicity `k` when the group diameter is at most
/// `10 · tol^(1/k) · (1 + |centre|)`; the merged value is polished on the
/// `(k-1)`-th derivative.
pub fn find_roots<T: Real>(p: &CxPoly<T>, tol: T) -> Result<RootSet<T>> {
    let raw = aberth(p, tol)?;
    let mut free: Vec<Complex<T>> = raw;
    let mut clusters: Vec<Vec<Complex<T>>> = Vec::new();
    while let Some(seed) = free.first().copied() {
        // seed plus its nearest neighbours, largest admissible group first
        let mut order: Vec<usize> = (0..free.len()).collect();
        order.sort_by(|&i, &j| (free[i] - seed).norm().partial_cmp(&(free[j] - seed).norm()).unwrap_or(std::cmp::Ordering::Equal));
        let mut take = 1;
        for k in (2..=free.len()).rev() {
            let group: Vec<Complex<T>> = order[..k].iter().map(|&i| free[i]).collect();
            let c = centroid(&group);
            let kf = T::from_usize(k).unwrap();
            let radius = T::lit(10.0) * tol.powf(kf.recip()) * (T::one() + c.norm());
            if diameter(&group) <= radius {
                take = k;
                break;
            }
        }
        let mut chosen: Vec<usize> = order[..take].to_vec();
        chosen.sort_unstable_by(|a, b| b.cmp(a));
        clusters.push(chosen.iter().map(|&i| free[i]).collect());
        for i in chosen {
            free.remove(i);
        }
    }
    let rev = p.reversed();
    let mut roots: Vec<Root<T>> = clusters
        .into_iter()
        .map(|c| {
            let value = polish_cluster(p, &c);
            let residual = if p.degree().unwrap() > 0 {
                newton_step(p, &rev, value).1
            } else {
                T::zero()
            };
            Root {
                value,
                multiplicity: c.len(),
                residual,
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(RootSet { roots })
}

/// Cluster centre refined by Newton on `p^(k-1)`, which has a simple root
/// at a `k`-fold root of `p`.
fn polish_cluster<T: Real>(p: &CxPoly<T>, cluster: &[Complex<T>]) -> Complex<T> {
    let c = centroid(cluster);
    let k = cluster.len();
    if k == 1 {
        return c;
    }
    let mut d = p.clone();
    for _ in 1..k {
        d = d.derivative();
    }
    let reach = diameter(cluster) + T::eps() * (T::one() + c.norm());
    let mut z = c;
    for _ in 0..8 {
        let (v, dv) = d.eval_with_derivative(z);
        if dv.norm_sqr() == T::zero() {
            break;
        }
        let step = v / dv;
        z = z - step;
        if step.norm() <= T::eps() * (T::one() + z.norm()) {
            break;
        }
    }
    if (z - c).norm() <= T::lit(2.0) * reach {
        z
    } else {
        c
    }
}

fn centroid<T: Real>(zs: &[Complex<T>]) -> Complex<T> {
    let s = zs.iter().fold(czero::<T>(), |a, &z| a + z);
    s / T::from_usize(zs.len()).unwrap()
}

fn diameter<T: Real>(zs: &[Complex<T>]) -> T {
    let mut d = T::zero();
    for (i, a) in zs.iter().enumerate() {
        for b in &zs[i + 1..] {
            d = d.max((*a - *b).norm());
        }
    }
    d
}

/// Roots on the Riemann sphere. Leading coefficients below
/// `trim · max|a_k|` are treated as zero, each one contributing a root at ∞.
pub fn projective_roots<T: Real>(coeffs: &[Complex<T>], trim: T, tol: T) -> Result<Vec<ExtComplex<T>>> {
    let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    if scale == T::zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut top = coeffs.len();
    while top > 0 && coeffs[top - 1].norm() <= trim * scale {
        top -= 1;
    }
    let at_inf = coeffs.len() - top;
    let p = CxPoly::new(coeffs[..top].to_vec());
    let mut out: Vec<ExtComplex<T>> = aberth(&p, tol)?.into_iter().map(ExtComplex::Finite).collect();
    out.extend(std::iter::repeat(ExtComplex::Infinity).take(at_inf));
    Ok(out)
}

/// Smallest `n ≤ max_order` with `|z^n - 1| < 1e-9`, provided `||z| - 1| < 1e-10`.
pub fn is_root_of_unity<T: Real>(z: Complex<T>, max_order: u64) -> Option<u64> {
    if (z.norm() - T::one()).abs() >= T::lit(1e-10) {
        return None;
    }
    let one = Complex::new(T::one(), T::zero());
    let mut w = one;
    for n in 1..=max_order {
        w = w * z;
        if (w - one).norm() < T::lit(1e-9) {
            return Some(n);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let p = CxPoly::from_real(&[1.0, 0.0, 1.0]);
        let rs = find_roots(&p, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!((rs.roots[0].value - Complex::new(0.0, -1.0)).norm() < 1e-14);
        assert!(rs.max_residual() < 1e-14);
    }

    #[test]
    fn triple_root_is_merged() {
        let p = CxPoly::<f64>::from_real(&[-1.0, 3.0, -3.0, 1.0]);
        let rs = find_roots(&p, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!((rs.roots[0].value.re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_roots_exact() {
        let p = CxPoly::<f64>::from_real(&[0.0, 0.0, 2.0, 1.0]);
        let raw = aberth(&p, 1e-12).unwrap();
        assert_eq!(raw.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(raw.iter().any(|z| (z.re + 2.0).abs() < 1e-14));
    }

    #[test]
    fn single_precision() {
        let p = CxPoly::<f32>::from_real(&[-2.0, 0.0, 1.0]);
        let rs = find_roots(&p, 1e-5).unwrap();
        assert!(rs.roots.iter().any(|r| (r.value.re - 2f32.sqrt()).abs() < 1e-5));
    }

    #[test]
    fn unity_orders() {
        let w = crate::scalar::root_of_unity::<f64>(1, 3);
        assert_eq!(is_root_of_unity(w, 100), Some(3));
        assert_eq!(is_root_of_unity(Complex::new(1.0, 0.0), 10), Some(1));
        let big = (3.0 + 11f64.sqrt()) / 2.0;
        assert_eq!(is_root_of_unity(Complex::new(big, 0.0), 1000), None);
    }

    #[test]
    fn projective_infinity() {
        // (1e-20) z^2 + z - 1 : one finite root near 1, one at infinity
        let c = [Complex::new(-1.0, 0.0), Complex::new(1.0, 0.0), Complex::new(1e-20, 0.0)];
        let r = projective_roots(&c, 1e-14, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|z| z.is_infinite()));
    }
}
