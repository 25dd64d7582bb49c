use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyio::{BiPoly, IntPoly};

/// Integral domain with exact division, enough for subresultant sequences.
pub trait ExactRing: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / d`, panicking when the division is not exact.
    fn div_exact(&self, d: &Self) -> Self;

    fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl ExactRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = num_integer::Integer::div_rem(self, d);
        assert!(Zero::is_zero(&r), "inexact integer division");
        q
    }
}

impl ExactRing for IntPoly {
    fn zero() -> Self {
        IntPoly::zero()
    }
    fn one() -> Self {
        IntPoly::one()
    }
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Self {
        IntPoly::div_exact(self, d).expect("inexact polynomial division")
    }
}

fn trim<R: ExactRing>(mut p: Vec<R>) -> Vec<R> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deg<R>(p: &[R]) -> usize {
    p.len() - 1
}

/// `lc(b)^(deg a - deg b + 1) · a mod b`, fraction free.
fn pseudo_rem<R: ExactRing>(a: &[R], b: &[R]) -> Vec<R> {
    let (da, db) = (deg(a), deg(b));
    let lc = b[db].clone();
    let mut r = a.to_vec();
    let mut steps = 0;
    while !r.is_empty() && r.len() > db {
        let k = deg(&r) - db;
        let top = r[deg(&r)].clone();
        for c in r.iter_mut() {
            *c = c.mul(&lc);
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&top.mul(bj));
        }
        r = trim(r);
        steps += 1;
    }
    let missing = da - db + 1 - steps;
    let f = lc.pow(missing);
    trim(r.into_iter().map(|c| c.mul(&f)).collect())
}

/// Resultant of two univariate polynomials over `R` (coefficients lowest
/// first) by the subresultant algorithm. Zero when they share a factor.
pub fn resultant<R: ExactRing>(a: &[R], b: &[R]) -> R {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return R::zero();
    }
    let mut s = R::one();
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = s.neg();
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        return s.mul(&b[0].pow(deg(&a)));
    }
    let mut g = R::one();
    let mut h = R::one();
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = s.neg();
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return R::zero();
        }
        a = b;
        let den = g.mul(&h.pow(delta));
        b = r.iter().map(|c| c.div_exact(&den)).collect();
        g = a[deg(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).div_exact(&h.pow(delta - 1))
        };
        if deg(&b) == 0 {
            let da = deg(&a);
            let lb = b[0].pow(da);
            let hh = if da == 0 { lb.mul(&h) } else { lb.div_exact(&h.pow(da - 1)) };
            return s.mul(&hh);
        }
    }
}

/// Outcome of eliminating `y`: a polynomial in `x`, or vanishing when the
/// inputs share a factor involving `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Resultant {
    Poly(IntPoly),
    Vanishing,
}

impl Resultant {
    pub fn poly(&self) -> Option<&IntPoly> {
        match self {
            Resultant::Poly(p) => Some(p),
            Resultant::Vanishing => None,
        }
    }
}

/// `Res_y(p, q)` as an exact polynomial in `x`.
pub fn resultant_y(p: &BiPoly, q: &BiPoly) -> Result<Resultant> {
    if p.deg_y() == 0 || q.deg_y() == 0 {
        return Err(Error::Invalid("resultant needs positive degree in y".into()));
    }
    let r = resultant(&p.as_poly_in_y(), &q.as_poly_in_y());
    Ok(if r.is_zero() {
        Resultant::Vanishing
    } else {
        Resultant::Poly(r)
    })
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return <BigInt as One>::one();
    }
    let mut sign = <BigInt as One>::one();
    let mut prev = <BigInt as One>::one();
    for k in 0..n - 1 {
        if Zero::is_zero(&m[k][k]) {
            let Some(swap) = (k + 1..n).find(|&i| !Zero::is_zero(&m[i][k])) else {
                return <BigInt as Zero>::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of two univariate integer polynomials.
pub fn sylvester(a: &IntPoly, b: &IntPoly) -> Vec<Vec<BigInt>> {
    let (m, n) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![<BigInt as Zero>::zero(); size];
        for k in 0..=m {
            row[i + k] = a.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![<BigInt as Zero>::zero(); size];
        for k in 0..=n {
            row[i + k] = b.coeff(n - k);
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyio::parse_poly;

    #[test]
    fn linear_pair() {
        let r = resultant_y(&parse_poly("y - x").unwrap(), &parse_poly("y + x").unwrap()).unwrap();
        // det [[1, -x], [1, x]] = 2x
        assert_eq!(r, Resultant::Poly(IntPoly::from_i64(&[0, 2])));
        let d = bareiss_det(sylvester(&IntPoly::from_i64(&[-3, 1]), &IntPoly::from_i64(&[3, 1])));
        assert_eq!(d, BigInt::from(6));
    }

    #[test]
    fn integer_resultants_match_sylvester() {
        let cases = [
            (vec![1, 2, 3], vec![-1, 0, 5, 7]),
            (vec![2, 0, 0, 1], vec![3, 1]),
            (vec![-1, 0, 1], vec![1, 1]),
            (vec![5, -4, 3, 1, 2], vec![1, 0, -2, 0, 1, 3]),
        ];
        for (a, b) in cases {
            let (pa, pb) = (IntPoly::from_i64(&a), IntPoly::from_i64(&b));
            let sub = resultant(pa.coeffs(), pb.coeffs());
            assert_eq!(sub, bareiss_det(sylvester(&pa, &pb)), "{a:?} {b:?}");
        }
    }

    #[test]
    fn reciprocal_vanishes() {
        let p = parse_poly("x+y-4xy+x^2y+xy^2").unwrap();
        let q = p.reciprocal();
        assert_eq!(resultant_y(&p, &q).unwrap(), Resultant::Vanishing);
    }
}
