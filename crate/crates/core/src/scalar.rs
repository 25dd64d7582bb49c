//! Scalar abstraction shared by the numeric kernels.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Floating point scalar: `f32` or `f64`.
///
/// The kernels (dilogarithm, root finding, quadrature, winding, PSLQ) are
/// written against this trait. Accuracy figures quoted in the docs are for
/// `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Machine epsilon, as a convenience over `Float::epsilon`.
    fn eps() -> Self {
        Self::epsilon()
    }

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A point of the Riemann sphere: a finite complex value or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> ExtComplex<T> {
    pub fn finite(re: T, im: T) -> Self {
        ExtComplex::Finite(Complex::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex<T>> {
        match *self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    /// Reciprocal on the sphere, with 1/0 = ∞ and 1/∞ = 0.
    pub fn recip(&self) -> Self {
        match *self {
            ExtComplex::Infinity => ExtComplex::Finite(Complex::new(T::zero(), T::zero())),
            ExtComplex::Finite(z) if z.norm_sqr() == T::zero() => ExtComplex::Infinity,
            ExtComplex::Finite(z) => ExtComplex::Finite(z.inv()),
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            ExtComplex::Finite(z) => ExtComplex::Finite(z.conj()),
            ExtComplex::Infinity => ExtComplex::Infinity,
        }
    }

    /// Chordal distance on the Riemann sphere (diameter 2 normalisation).
    pub fn chordal(&self, other: &Self) -> T {
        chordal_ext(*self, *other)
    }
}

impl<T: Real> From<Complex<T>> for ExtComplex<T> {
    fn from(z: Complex<T>) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtComplex::Finite(z)
        } else {
            ExtComplex::Infinity
        }
    }
}

/// Chordal distance between two finite points.
pub fn chordal<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let two = T::lit(2.0);
    let num = two * (a - b).norm();
    let den = ((T::one() + a.norm_sqr()) * (T::one() + b.norm_sqr())).sqrt();
    num / den
}

pub fn chordal_ext<T: Real>(a: ExtComplex<T>, b: ExtComplex<T>) -> T {
    let two = T::lit(2.0);
    match (a, b) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => T::zero(),
        (ExtComplex::Finite(z), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
            two / (T::one() + z.norm_sqr()).sqrt()
        }
        (ExtComplex::Finite(x), ExtComplex::Finite(y)) => chordal(x, y),
    }
}

/// `e^{iθ}`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Primitive-root power `e^{2πik/n}`.
pub fn root_of_unity<T: Real>(k: i64, n: u64) -> Complex<T> {
    let n = n as i64;
    let k = k.rem_euclid(n);
    // exact values on the axes keep downstream zero tests clean
    let (re, im) = if 4 * k == 0 {
        (1.0, 0.0)
    } else if 4 * k == n {
        (0.0, 1.0)
    } else if 2 * k == n {
        (-1.0, 0.0)
    } else if 4 * k == 3 * n {
        (0.0, -1.0)
    } else {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
        (theta.cos(), theta.sin())
    };
    Complex::new(T::lit(re), T::lit(im))
}

/// Wrap an angle to `(-π, π]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut y = x % two_pi;
    if y <= -pi {
        y = y + two_pi;
    } else if y > pi {
        y = y - two_pi;
    }
    y
}
