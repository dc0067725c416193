//! Exact rational scalars and small integer helpers shared across the
//! engine.

use num_bigint::BigInt;

/// The scalar type of the whole engine: arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"n/d"` into a rational. Rejects floats and empty input.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    s.parse::<Rat>().ok()
}

/// Canonical string form: reduced, `n/d` with `d > 1` and plain `n`
/// otherwise. Never produces a decimal point.
pub fn rat_str(r: &Rat) -> String {
    r.to_string()
}

pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

/// Deterministic trial-division primality test; the primes used here are
/// tiny (field characteristics, cover degrees).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact integer square root: `Some(k)` iff `n == k*k` with `k >= 0`.
pub fn perfect_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut k = (n as f64).sqrt() as i64;
    // float sqrt is only a seed; correct it exactly
    while k > 0 && k * k > n {
        k -= 1;
    }
    while (k + 1) * (k + 1) <= n {
        k += 1;
    }
    if k * k == n {
        Some(k)
    } else {
        None
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
