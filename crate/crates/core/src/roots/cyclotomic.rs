use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::polyio::IntPoly;

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn cache() -> &'static Mutex<HashMap<u64, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cyclotomic polynomial `Φ_n`, from `z^n - 1 = ∏_{d | n} Φ_d`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = IntPoly::monomial(BigInt::one(), n as usize);
    num = &num - &IntPoly::one();
    for d in divisors(n) {
        if d < n {
            num = num.div_exact(&cyclotomic(d)).expect("cyclotomic divides z^n - 1");
        }
    }
    cache().lock().unwrap().insert(n, num.clone());
    num
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(3), IntPoly::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(5), IntPoly::from_i64(&[1, 1, 1, 1, 1]));
        // first coefficient outside {-1, 0, 1}
        assert!(cyclotomic(105).coeffs().iter().any(|c| c == &BigInt::from(-2)));
    }

    #[test]
    fn degree_is_totient() {
        for n in 1..60 {
            assert_eq!(cyclotomic(n).degree().unwrap() as u64, euler_phi(n));
        }
    }
}
