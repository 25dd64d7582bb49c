//! Ferguson–Bailey PSLQ in floating point.

use serde::Serialize;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    /// A relation within the coefficient bound and the residual threshold.
    Detected,
    /// Every relation has norm above `max_coeff·√n` at this precision.
    None,
    /// Precision ran out before either verdict could be reached.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationResult {
    /// Integer coefficients, zeroed unless a relation was detected.
    pub coefficients: Vec<i64>,
    /// `|Σ cᵢxᵢ|` for the reported coefficients.
    pub residual: f64,
    pub max_coeff: i64,
    /// Lower bound on the Euclidean norm of any relation, from the last
    /// iteration.
    pub norm_bound: f64,
    pub confidence: Confidence,
    pub iterations: usize,
}

const MAX_ITER: usize = 10_000;

/// Integer relation search on `values` with `|cᵢ| ≤ max_coeff`. A relation
/// counts as detected when `|Σ cᵢxᵢ| ≤ 10^{-(digits-4)}·max|xᵢ|`.
pub fn pslq<T: Real>(values: &[T], max_coeff: i64, digits: u32) -> RelationResult {
    let n = values.len();
    let empty = |confidence, norm_bound: f64, iterations| RelationResult {
        coefficients: vec![0; n],
        residual: f64::NAN,
        max_coeff,
        norm_bound,
        confidence,
        iterations,
    };
    let xmax = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if n < 2 || xmax == T::zero() || values.iter().any(|v| !v.is_finite()) {
        return empty(Confidence::Inconclusive, 0.0, 0);
    }
    let thresh = T::lit(10f64.powi(-(digits as i32 - 4))) * xmax;
    let residual = |c: &[i64]| -> T { values.iter().zip(c).fold(T::zero(), |s, (x, &k)| s + *x * T::lit(k as f64)).abs() };

    // a zero entry is a relation on its own
    if let Some(k) = values.iter().position(|v| v.abs() <= thresh) {
        let mut c = vec![0; n];
        c[k] = 1;
        return RelationResult {
            residual: residual(&c).to_f64().unwrap(),
            coefficients: c,
            max_coeff,
            norm_bound: 1.0,
            confidence: Confidence::Detected,
            iterations: 0,
        };
    }

    let norm = values.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
    let x: Vec<T> = values.iter().map(|v| *v / norm).collect();
    let mut s = vec![T::zero(); n];
    for k in (0..n).rev() {
        s[k] = (x[k] * x[k] + if k + 1 < n { s[k + 1] * s[k + 1] } else { T::zero() }).sqrt();
    }
    let mut h = vec![vec![T::zero(); n - 1]; n];
    for i in 0..n {
        for j in 0..(n - 1).min(i + 1) {
            h[i][j] = if i == j {
                s[j + 1] / s[j]
            } else {
                -x[i] * x[j] / (s[j] * s[j + 1])
            };
        }
    }
    let mut y = x.clone();
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut b = a.clone();
    let gamma = T::lit((4.0f64 / 3.0).sqrt());
    let limit = i64::MAX / 4;

    let reduce = |h: &mut Vec<Vec<T>>, y: &mut Vec<T>, a: &mut Vec<Vec<i64>>, b: &mut Vec<Vec<i64>>, from: usize| -> bool {
        for i in from..n {
            for j in (0..(i.min(n - 1))).rev() {
                if h[j][j] == T::zero() {
                    continue;
                }
                let t = (h[i][j] / h[j][j]).round();
                if t == T::zero() {
                    continue;
                }
                let Some(ti) = t.to_i64().filter(|v| v.abs() < limit) else {
                    return false;
                };
                y[j] = y[j] + t * y[i];
                for k in 0..=j {
                    h[i][k] = h[i][k] - t * h[j][k];
                }
                for k in 0..n {
                    a[i][k] = a[i][k].saturating_sub(ti.saturating_mul(a[j][k]));
                    b[k][j] = b[k][j].saturating_add(ti.saturating_mul(b[k][i]));
                }
            }
        }
        true
    };
    if !reduce(&mut h, &mut y, &mut a, &mut b, 1) {
        return empty(Confidence::Inconclusive, 0.0, 0);
    }

    let bound_norm = max_coeff as f64 * (n as f64).sqrt();
    let mut norm_bound = 0.0;
    for it in 1..=MAX_ITER {
        // exchange step
        let mut m = 0;
        let mut best = T::neg_infinity();
        let mut g = gamma;
        for i in 0..n - 1 {
            let v = g * h[i][i].abs();
            if v > best {
                best = v;
                m = i;
            }
            g = g * gamma;
        }
        y.swap(m, m + 1);
        h.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m + 1 < n - 1 {
            let (t0, t1) = (h[m][m], h[m][m + 1]);
            let t2 = (t0 * t0 + t1 * t1).sqrt();
            if t2 == T::zero() {
                return empty(Confidence::Inconclusive, norm_bound, it);
            }
            let (c, sn) = (t0 / t2, t1 / t2);
            for row in h.iter_mut().skip(m) {
                let (u, v) = (row[m], row[m + 1]);
                row[m] = c * u + sn * v;
                row[m + 1] = -sn * u + c * v;
            }
        }
        if !reduce(&mut h, &mut y, &mut a, &mut b, m + 1) {
            return empty(Confidence::Inconclusive, norm_bound, it);
        }

        // the column of B at the smallest |y| is the candidate relation
        let (j, _) = y
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |acc, (i, v)| if v.abs() < acc.1 { (i, v.abs()) } else { acc });
        let c: Vec<i64> = (0..n).map(|k| b[k][j]).collect();
        let cmax = c.iter().map(|v| v.abs()).max().unwrap_or(0);
        if cmax > 0 && cmax <= max_coeff {
            let r = residual(&c);
            if r <= thresh {
                let sign = if c.iter().find(|v| **v != 0).is_some_and(|v| *v < 0) { -1 } else { 1 };
                return RelationResult {
                    coefficients: c.iter().map(|v| v * sign).collect(),
                    residual: r.to_f64().unwrap(),
                    max_coeff,
                    norm_bound,
                    confidence: Confidence::Detected,
                    iterations: it,
                };
            }
        }

        let hmax = (0..n - 1).fold(T::zero(), |mx, i| mx.max(h[i][i].abs()));
        if hmax == T::zero() {
            return empty(Confidence::Inconclusive, norm_bound, it);
        }
        norm_bound = (T::one() / hmax).to_f64().unwrap();
        if norm_bound > bound_norm {
            return empty(Confidence::None, norm_bound, it);
        }
        // entries of B at the size of 1/ε mean the working precision is spent
        let bmax = b.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap_or(0) as f64;
        if bmax * T::eps().to_f64().unwrap() * 1e3 > 1.0 {
            return empty(Confidence::Inconclusive, norm_bound, it);
        }
    }
    empty(Confidence::Inconclusive, norm_bound, MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers() {
        let r = pslq(&[1.0, 2.0, 3.0], 10, 15);
        assert_eq!(r.confidence, Confidence::Detected);
        let c = &r.coefficients;
        assert_eq!(c[0] + 2 * c[1] + 3 * c[2], 0);
        assert!(c.iter().map(|v| v.abs()).max().unwrap() <= 2);
    }

    #[test]
    fn logarithms() {
        let r = pslq(&[2f64.ln(), 3f64.ln(), 6f64.ln()], 10, 15);
        assert_eq!(r.confidence, Confidence::Detected);
        assert_eq!(r.coefficients, vec![1, 1, -1]);
    }

    #[test]
    fn unrelated_constants() {
        let r = pslq(&[1.0, std::f64::consts::PI, std::f64::consts::E], 50, 15);
        assert_ne!(r.confidence, Confidence::Detected, "{r:?}");
    }

    #[test]
    fn single_precision() {
        let r = pslq(&[2f32.sqrt(), 8f32.sqrt()], 10, 6);
        assert_eq!(r.confidence, Confidence::Detected);
        assert_eq!(r.coefficients, vec![2, -1]);
    }
}
