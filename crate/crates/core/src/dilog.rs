//! Dilogarithm `Li₂` and the Bloch–Wigner function `D`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{ExtComplex, Real};

/// `B_{2k} / (2k+1)!` for `k = 1, 2, …`.
const LI2_BERNOULLI: [f64; 22] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
    -1.740845657234001e-27,
    4.1576356446139e-29,
    -9.962148488284622e-31,
    2.3940344248961652e-32,
    -5.76834735536739e-34,
    1.393179479647008e-35,
    -3.3721219654850894e-37,
];

/// `|B_{2k}| / (2k (2k+1)!)` for `k = 1, 2, …`.
const CLAUSEN: [f64; 30] = [
    0.013888888888888888,
    6.944444444444444e-05,
    7.873519778281683e-07,
    1.1482216343327455e-08,
    1.8978869988971e-10,
    3.387301370953521e-12,
    6.372636443183181e-14,
    1.2462059912950672e-15,
    2.5105444608999545e-17,
    5.178258806090623e-19,
    1.0887357368300849e-20,
    2.325744114302087e-22,
    5.03519521314739e-24,
    1.1026499294381215e-25,
    2.4386585509007344e-27,
    5.440142678856253e-29,
    1.2228340131217352e-30,
    2.767263468967951e-32,
    6.3000905918320136e-34,
    1.4420868388418476e-35,
    3.3170939991595428e-37,
    7.663913557920658e-39,
    1.7778714733830659e-40,
    4.1396058982341375e-42,
    9.671557036081102e-44,
    2.2667187016766123e-45,
    5.327956311328254e-47,
    1.2557248389564336e-48,
    2.967000542247094e-50,
    7.026787317600742e-52,
];

/// Values this close to 0, 1 or ∞ (and to the real axis) give `D = 0`.
pub const SNAP: f64 = 1e-14;

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// `Li₂` on the region `|z| ≤ 1, Re z ≤ 1/2` via the series in `u = -log(1-z)`.
fn li2_core<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = c(T::one(), T::zero());
    let u = -(one - z).ln();
    let u2 = u * u;
    let mut sum = u - u2 / T::lit(4.0);
    let mut pow = u; // u^{2k+1}
    for &b in LI2_BERNOULLI.iter() {
        pow = pow * u2;
        let term = pow * T::lit(b);
        sum = sum + term;
        if term.norm() <= T::eps() * T::lit(0.01) * sum.norm() {
            break;
        }
    }
    sum
}

/// Principal branch of the dilogarithm. Fails on the cut `(1, ∞)`.
pub fn li2<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    let zero = c(T::zero(), T::zero());
    let one = c(T::one(), T::zero());
    let zeta2 = T::PI() * T::PI() / T::lit(6.0);
    if z == zero {
        return Ok(zero);
    }
    if z == one {
        return Ok(c(zeta2, T::zero()));
    }
    if z.im == T::zero() && z.re > T::one() {
        return Err(Error::BranchCut(z.re.to_f64().unwrap_or(f64::NAN)));
    }
    if z.norm() > T::one() {
        let l = (-z).ln();
        let inner = li2(z.inv())?;
        return Ok(-inner - c(zeta2, T::zero()) - l * l / T::lit(2.0));
    }
    if z.re > T::lit(0.5) {
        let w = one - z;
        let tail = if w == zero { zero } else { z.ln() * w.ln() };
        return Ok(c(zeta2, T::zero()) - tail - li2_core(w));
    }
    Ok(li2_core(z))
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li₂(z) + log|z| arg(1-z)`, extended
/// to the Riemann sphere with `D = 0` on `ℝ ∪ {∞}`.
pub fn bw_dilog<T: Real>(z: ExtComplex<T>) -> T {
    match z {
        ExtComplex::Infinity => T::zero(),
        ExtComplex::Finite(z) => bw(z),
    }
}

/// [`bw_dilog`] for a finite argument.
pub fn bw<T: Real>(z: Complex<T>) -> T {
    let snap = T::lit(SNAP);
    let one = c(T::one(), T::zero());
    if !z.re.is_finite() || !z.im.is_finite() {
        return T::zero();
    }
    let r = z.norm();
    if z.im.abs() <= snap * r.max(T::one()) || r <= snap || (z - one).norm() <= snap || r >= snap.recip() {
        return T::zero();
    }
    if r > T::one() {
        return -bw(z.inv());
    }
    if z.re > T::lit(0.5) {
        return -bw(one - z);
    }
    li2_core(z).im + r.ln() * (one - z).arg()
}

/// `D(e^{iθ})` computed independently through the Clausen expansion
/// `θ - θ log|θ| + Σ |B_{2k}| θ^{2k+1} / (2k (2k+1)!)` on `(-π, π]`.
pub fn circle_dilog<T: Real>(theta: T) -> T {
    let th = crate::scalar::wrap_angle(theta);
    if th == T::zero() {
        return T::zero();
    }
    let t2 = th * th;
    let mut sum = th - th * th.abs().ln();
    let mut pow = th;
    for &a in CLAUSEN.iter() {
        pow = pow * t2;
        let term = pow * T::lit(a);
        sum = sum + term;
        if term.abs() <= T::eps() * T::lit(0.01) * sum.abs().max(T::eps()) {
            break;
        }
    }
    sum
}

fn ext<T: Real>(z: Complex<T>) -> ExtComplex<T> {
    ExtComplex::from(z)
}

/// Magnitude of the five-term sum
/// `D(a) + D(b) + D((1-b)/a) + D((a+b-1)/(ab)) + D((1-a)/b)`.
pub fn five_term_defect<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let one = c(T::one(), T::zero());
    let args = [a, b, (one - b) / a, (a + b - one) / (a * b), (one - a) / b];
    args.iter().fold(T::zero(), |s, &z| s + bw_dilog(ext(z))).abs()
}

/// Magnitude of `Σ_{k=1}^n D(ξ_n^k z) - D(z^n)/n` with `ξ_n = e^{2πi/n}`.
pub fn kubert_defect<T: Real>(z: Complex<T>, n: u32) -> T {
    let nf = T::from_u32(n).unwrap();
    let lhs = (1..=n).fold(T::zero(), |s, k| {
        let xi = crate::scalar::root_of_unity::<T>(k as i64, n as u64);
        s + bw(xi * z)
    });
    (lhs - bw(z.powu(n)) / nf).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

    #[test]
    fn li2_special_values() {
        let z = li2(Complex::new(0.5, 0.0)).unwrap();
        let want = std::f64::consts::PI.powi(2) / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert!((z.re - want).abs() < 1e-15);
        assert_eq!(li2(Complex::new(0.0, 0.0)).unwrap(), Complex::new(0.0, 0.0));
        assert!(li2(Complex::new(2.0, 0.0)).is_err());
        // Li2(-1) = -π²/12
        let m = li2(Complex::new(-1.0, 0.0)).unwrap();
        assert!((m.re + std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-15);
    }

    #[test]
    fn li2_matches_power_series_inside_disk() {
        for &(re, im) in &[(0.3, 0.4), (-0.7, 0.2), (0.6, -0.7), (0.1, 0.98)] {
            let z = Complex::new(re, im);
            let mut s = Complex::new(0.0, 0.0);
            let mut p = z;
            for k in 1..20000 {
                s += p / (k as f64 * k as f64);
                p *= z;
            }
            let got = li2(z).unwrap();
            assert!((got - s).norm() < 1e-12 * s.norm().max(1.0), "{z}: {got} vs {s}");
        }
    }

    #[test]
    fn catalan_and_infinity() {
        assert!((bw(Complex::new(0.0, 1.0)) - CATALAN).abs() < 1e-15);
        assert_eq!(bw_dilog::<f64>(ExtComplex::Infinity), 0.0);
        assert_eq!(bw(Complex::new(3.5, 0.0)), 0.0);
    }

    #[test]
    fn clausen_agrees_with_bloch_wigner() {
        for k in 0..=1000 {
            let th = -7.0 + 14.0 * k as f64 / 1000.0;
            let a = circle_dilog(th);
            let b = bw(Complex::new(th.cos(), th.sin()));
            assert!((a - b).abs() < 1e-13, "θ = {th}: {a} vs {b}");
        }
        assert!((circle_dilog(std::f64::consts::FRAC_PI_2) - CATALAN).abs() < 1e-15);
    }

    #[test]
    fn single_precision_catalan() {
        assert!((bw(Complex::new(0.0f32, 1.0)) - CATALAN as f32).abs() < 1e-6);
    }

    #[test]
    fn five_term_examples() {
        assert_eq!(five_term_defect(Complex::new(0.5, 0.0), Complex::new(0.5, 0.0)), 0.0);
        let w = crate::scalar::root_of_unity::<f64>(1, 3);
        let i = Complex::new(0.0, 1.0);
        let a = w + i * w.conj();
        let b = Complex::new(1.0, 0.0) - a.conj();
        assert!(five_term_defect(a, b) < 1e-13);
        // 2 D(ω + iω̄) = D(i) + D(iω) + D(1 + ω)
        let lhs = 2.0 * bw(a);
        let rhs = bw(i) + bw(i * w) + bw(Complex::new(1.0, 0.0) + w);
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn kubert_examples() {
        let i = Complex::new(0.0, 1.0);
        assert!(kubert_defect(i, 3) < 1e-14);
        assert!(kubert_defect(Complex::new(-2.5, 0.0), 4) < 1e-15);
        let w = crate::scalar::root_of_unity::<f64>(1, 3);
        assert!((bw(Complex::new(1.0, 0.0) + w) - 1.5 * bw(w)).abs() < 1e-14);
    }
}
